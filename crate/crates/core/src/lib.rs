//! Glue-semantics deduction engine.
//!
//! Meanings of f-structure nodes are assembled by linear-logic deduction over
//! lexically contributed meaning constructors; the meaning language is a
//! typed lambda calculus with intension and extension operators.

pub mod fstructure;
pub mod glue;
pub mod lexicon;
pub mod prover;
pub mod syntax;
pub mod term;
pub mod unify;
