//! Proof search over glue premises.
//!
//! [`derive_readings`] proves `premises |- goal ~> ?G` with `?G` a fresh
//! metavariable of type `t`; each distinct normal form of `?G` is a reading.
//! [`oracle_enumerate`] answers the same question by an independent brute
//! force search.

mod oracle;
mod proof;
mod search;

use std::fmt;

use thiserror::Error;

use crate::fstructure::SemRef;
use crate::glue::{check_wellformed, curry, curry_goal, Formula, GlueError};
use crate::term::Term;

pub use oracle::oracle_enumerate;
pub use proof::{check_proof, Fault, Proof, ProofError, Rule, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum height of a proof tree.
    pub max_depth: usize,
    /// Require a resource's head atom and the goal to carry the same
    /// meaning type before trying to unify them. Turning this off is only
    /// useful for testing.
    pub typed_projections: bool,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_depth: 64,
            typed_projections: true,
        }
    }
}

impl Limits {
    pub fn with_depth(max_depth: usize) -> Self {
        Limits {
            max_depth,
            ..Limits::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub context: Vec<Formula>,
    pub goal: Formula,
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.context.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        if !self.context.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.goal)
    }
}

#[derive(Debug, Clone)]
pub struct Reading {
    /// Closed, normalized meaning of type `t`.
    pub meaning: Term,
    pub proof: Proof,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Resources focused on at an atomic goal.
    pub focus_attempts: usize,
    /// Focus attempts rejected because the head atom's meaning type differs
    /// from the goal's.
    pub type_blocked: usize,
    /// Attempts that reached meaning unification and produced an ill-typed
    /// solution.
    pub ill_typed_attempts: usize,
    /// Unification problems outside the pattern fragment.
    pub non_pattern: usize,
    /// Complete proofs found, before merging equal readings.
    pub proofs: usize,
    /// Proofs whose goal meaning was left with unsolved metavariables.
    pub open_results: usize,
}

#[derive(Debug, Clone)]
pub struct Derivation {
    pub sequent_context: Vec<Formula>,
    /// One entry per distinct reading, sorted by canonical rendering.
    pub readings: Vec<Reading>,
    /// Every proof found, with the meaning it produced.
    pub proofs: Vec<(Term, Proof)>,
    pub stats: SearchStats,
    pub limit_hit: bool,
}

#[derive(Debug, Error)]
pub enum ProverError {
    #[error("depth limit reached on some branch ({found} results found within the limit)")]
    DepthLimitReached { found: usize },
    #[error("no proof within the limits")]
    NotProvable,
    #[error("{count} premises given; the oracle accepts at most {max}")]
    TooManyPremises { count: usize, max: usize },
    #[error("ill-formed input: {0}")]
    IllFormed(#[from] GlueError),
}

fn validate_premise(f: &Formula) -> Result<(), GlueError> {
    check_wellformed(f)?;
    // A premise may be a tensor of resources, but no tensor may be produced
    // by using one.
    let mut parts = vec![f];
    while let Some(p) = parts.pop() {
        match p {
            Formula::Tensor(a, b) => {
                parts.push(a);
                parts.push(b);
            }
            other => {
                curry(other)?;
            }
        }
    }
    Ok(())
}

fn validate_goal(f: &Formula) -> Result<(), GlueError> {
    check_wellformed(f)?;
    curry_goal(f)?;
    Ok(())
}

/// Every proof of `seq` up to permutation of independent steps.
pub fn prove(seq: &Sequent, limits: &Limits) -> Result<Vec<Proof>, ProverError> {
    for p in &seq.context {
        validate_premise(p)?;
    }
    validate_goal(&seq.goal)?;
    let out = search::prove_sequent(&seq.context, &seq.goal, limits);
    if out.limit_hit {
        return Err(ProverError::DepthLimitReached {
            found: out.proofs.len(),
        });
    }
    Ok(out.proofs)
}

/// A proof of a closed formula from no premises.
pub fn prove_theorem(goal: &Formula, limits: &Limits) -> Result<Proof, ProverError> {
    let seq = Sequent {
        context: Vec::new(),
        goal: goal.clone(),
    };
    match prove(&seq, limits) {
        Ok(mut proofs) if !proofs.is_empty() => Ok(proofs.swap_remove(0)),
        Ok(_) | Err(ProverError::DepthLimitReached { .. }) => Err(ProverError::NotProvable),
        Err(e) => Err(e),
    }
}

/// Full search result for `premises |- goal ~> ?G`.
pub fn derive(
    premises: &[Formula],
    goal: &SemRef,
    limits: &Limits,
) -> Result<Derivation, ProverError> {
    for p in premises {
        validate_premise(p)?;
    }
    Ok(search::derive(premises, goal, limits))
}

/// All distinct readings of `goal`.
pub fn derive_readings(
    premises: &[Formula],
    goal: &SemRef,
    limits: &Limits,
) -> Result<Vec<Reading>, ProverError> {
    let d = derive(premises, goal, limits)?;
    if d.limit_hit {
        return Err(ProverError::DepthLimitReached {
            found: d.readings.len(),
        });
    }
    Ok(d.readings)
}

/// Merges proofs with equal meanings and sorts by canonical rendering.
pub(crate) fn collect_readings(found: &[(Term, Proof)]) -> Vec<Reading> {
    let mut out: Vec<(String, Reading)> = Vec::new();
    for (m, p) in found {
        let key = m.canonical();
        if !out.iter().any(|(k, _)| *k == key) {
            out.push((
                key,
                Reading {
                    meaning: m.clone(),
                    proof: p.clone(),
                },
            ));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, r)| r).collect()
}
