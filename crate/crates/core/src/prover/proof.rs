//! Explicit sequent proofs, their independent checker, and trace output.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::{json, Value as Json};
use thiserror::Error;

use super::Sequent;
use crate::glue::{Binder, Formula, Projection};
use crate::term::{Name, Term};

/// What a quantifier was instantiated with, or the fresh name it was
/// opened with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Meaning(Term),
    Projection(Projection),
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Meaning(t) => write!(f, "{t}"),
            Witness::Projection(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Axiom,
    /// Children: the antecedent's proof, then the proof using the consequent.
    ImpLeft {
        principal: usize,
    },
    ImpRight,
    ForallLeft {
        principal: usize,
        witness: Witness,
    },
    ForallRight {
        eigen: Witness,
    },
    TensorLeft {
        principal: usize,
    },
    TensorRight,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::ImpLeft { .. } => "-o L",
            Rule::ImpRight => "-o R",
            Rule::ForallLeft { .. } => "forall L",
            Rule::ForallRight { .. } => "forall R",
            Rule::TensorLeft { .. } => "* L",
            Rule::TensorRight => "* R",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<Proof>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fault {
    /// The conclusion is not the sequent to be proved.
    Conclusion,
    /// The rule does not apply to the formulas it names.
    Shape,
    /// A premise sequent does not follow from the conclusion by the rule.
    Mismatch,
    /// Context formulas are not partitioned exactly among the premises.
    Linearity,
    /// A witness has the wrong type.
    WitnessType,
    /// An eigenvariable is not fresh for the conclusion.
    Eigenvariable,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("invalid step {index} ({fault:?}): {detail}")]
    InvalidStep {
        index: usize,
        fault: Fault,
        detail: String,
    },
}

fn fail<T>(index: usize, fault: Fault, detail: impl Into<String>) -> Result<T, ProofError> {
    Err(ProofError::InvalidStep {
        index,
        fault,
        detail: detail.into(),
    })
}

fn keys(fs: &[Formula]) -> Vec<String> {
    let mut k: Vec<String> = fs.iter().map(Formula::canonical).collect();
    k.sort();
    k
}

/// Multiset difference `whole - part`, or `None` if `part` is not contained.
fn minus(whole: &[String], part: &[String]) -> Option<Vec<String>> {
    let mut rest = whole.to_vec();
    for p in part {
        let i = rest.iter().position(|x| x == p)?;
        rest.remove(i);
    }
    Some(rest)
}

fn same(a: &Formula, b: &Formula) -> bool {
    a.canonical() == b.canonical()
}

impl Proof {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Proof::height).max().unwrap_or(0)
    }

    /// Number of axiom leaves.
    pub fn leaves(&self) -> usize {
        if self.premises.is_empty() {
            1
        } else {
            self.premises.iter().map(Proof::leaves).sum()
        }
    }

    /// Steps in pre-order, paired with their index.
    pub fn steps(&self) -> Vec<&Proof> {
        fn go<'a>(p: &'a Proof, out: &mut Vec<&'a Proof>) {
            out.push(p);
            for c in &p.premises {
                go(c, out);
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Mutable access to the step with pre-order index `index`.
    pub fn step_mut(&mut self, index: usize) -> Option<&mut Proof> {
        if index == 0 {
            return Some(self);
        }
        let mut rest = index - 1;
        for c in &mut self.premises {
            let n = c.size();
            if rest < n {
                return c.step_mut(rest);
            }
            rest -= n;
        }
        None
    }

    /// Indented text, one rule per line, conclusion first.
    pub fn to_text(&self) -> String {
        fn go(p: &Proof, depth: usize, out: &mut String) {
            let _ = write!(
                out,
                "{}[{}] {}",
                "  ".repeat(depth),
                p.rule.name(),
                p.conclusion
            );
            match &p.rule {
                Rule::ForallLeft { witness, .. } => {
                    let _ = write!(out, "    {{{} := {witness}}}", bound_name(p));
                }
                Rule::ForallRight { eigen } => {
                    let _ = write!(out, "    {{fresh {eigen}}}");
                }
                _ => {}
            }
            out.push('\n');
            for c in &p.premises {
                go(c, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }

    pub fn to_json(&self) -> Json {
        let mut substitution = serde_json::Map::new();
        match &self.rule {
            Rule::ForallLeft { witness, .. } => {
                substitution.insert(bound_name(self), Json::String(witness.to_string()));
            }
            Rule::ForallRight { eigen } => {
                substitution.insert(bound_name(self), Json::String(eigen.to_string()));
            }
            _ => {}
        }
        let mut node = json!({
            "rule": self.rule.name(),
            "sequent": self.conclusion.to_string(),
            "substitution": substitution,
            "children": self.premises.iter().map(Proof::to_json).collect::<Vec<_>>(),
        });
        if let Rule::ImpLeft { principal }
        | Rule::ForallLeft { principal, .. }
        | Rule::TensorLeft { principal } = &self.rule
        {
            node["principal"] = json!(principal);
        }
        node
    }
}

/// Name of the variable a quantifier step binds, for traces.
fn bound_name(p: &Proof) -> String {
    let f = match &p.rule {
        Rule::ForallLeft { principal, .. } => p.conclusion.context.get(*principal),
        Rule::ForallRight { .. } => Some(&p.conclusion.goal),
        _ => None,
    };
    match f {
        Some(Formula::Forall(b, _)) => b.name().to_string(),
        _ => "?".into(),
    }
}

/// Re-verifies every step of `p` as a proof of `seq`.
pub fn check_proof(p: &Proof, seq: &Sequent) -> Result<(), ProofError> {
    if keys(&p.conclusion.context) != keys(&seq.context) || !same(&p.conclusion.goal, &seq.goal) {
        return fail(
            0,
            Fault::Conclusion,
            format!("proof concludes {} instead of {seq}", p.conclusion),
        );
    }
    let mut index = 0;
    check_step(p, &mut index)
}

fn check_step(p: &Proof, index: &mut usize) -> Result<(), ProofError> {
    let me = *index;
    *index += 1;
    let ctx = &p.conclusion.context;
    let goal = &p.conclusion.goal;
    let arity = match p.rule {
        Rule::Axiom => 0,
        Rule::ImpLeft { .. } | Rule::TensorRight => 2,
        _ => 1,
    };
    if p.premises.len() != arity {
        return fail(
            me,
            Fault::Shape,
            format!("{} needs {arity} premises", p.rule.name()),
        );
    }
    let principal_formula = |i: usize| -> Result<&Formula, ProofError> {
        ctx.get(i).ok_or_else(|| ProofError::InvalidStep {
            index: me,
            fault: Fault::Shape,
            detail: format!("no context formula {i}"),
        })
    };
    let ctx_keys = keys(ctx);
    match &p.rule {
        Rule::Axiom => {
            if ctx.len() != 1 {
                return fail(
                    me,
                    Fault::Linearity,
                    format!("axiom with {} context formulas", ctx.len()),
                );
            }
            if !same(&ctx[0], goal) {
                return fail(me, Fault::Mismatch, format!("{} is not {}", ctx[0], goal));
            }
        }
        Rule::ImpRight => {
            let Formula::Limp(a, b) = goal else {
                return fail(me, Fault::Shape, "goal is not an implication");
            };
            let c = &p.premises[0].conclusion;
            let mut want = ctx.clone();
            want.push((**a).clone());
            if !same(&c.goal, b) {
                return fail(me, Fault::Mismatch, "premise goal is not the consequent");
            }
            if keys(&c.context) != keys(&want) {
                return fail(
                    me,
                    Fault::Linearity,
                    "premise context is not the context plus the hypothesis",
                );
            }
        }
        Rule::ImpLeft { principal } => {
            let Formula::Limp(a, b) = principal_formula(*principal)? else {
                return fail(me, Fault::Shape, "principal formula is not an implication");
            };
            let (left, right) = (&p.premises[0].conclusion, &p.premises[1].conclusion);
            if !same(&left.goal, a) || !same(&right.goal, goal) {
                return fail(me, Fault::Mismatch, "premise goals do not match");
            }
            let rest = minus(&ctx_keys, &[p.conclusion.context[*principal].canonical()])
                .expect("principal in context");
            let Some(right_rest) = minus(&keys(&right.context), &[b.canonical()]) else {
                return fail(
                    me,
                    Fault::Mismatch,
                    "consequent missing from the right premise",
                );
            };
            let mut used = keys(&left.context);
            used.extend(right_rest);
            used.sort();
            if used != rest {
                return fail(
                    me,
                    Fault::Linearity,
                    "context is not split between the premises",
                );
            }
        }
        Rule::ForallLeft { principal, witness } => {
            let Formula::Forall(binder, body) = principal_formula(*principal)? else {
                return fail(me, Fault::Shape, "principal formula is not universal");
            };
            let inst = instantiate(me, binder, body, witness)?;
            let c = &p.premises[0].conclusion;
            let mut want = ctx.clone();
            want[*principal] = inst;
            if !same(&c.goal, goal) {
                return fail(me, Fault::Mismatch, "goal changed");
            }
            if keys(&c.context) != keys(&want) {
                return fail(
                    me,
                    Fault::Mismatch,
                    "premise context is not the instantiated context",
                );
            }
        }
        Rule::ForallRight { eigen } => {
            let Formula::Forall(binder, body) = goal else {
                return fail(me, Fault::Shape, "goal is not universal");
            };
            let name = match eigen {
                Witness::Meaning(Term::Var(v)) => v.name.clone(),
                Witness::Projection(Projection::Var(n)) => n.clone(),
                _ => return fail(me, Fault::Shape, "eigenvariable is not a variable"),
            };
            let mut free = BTreeSet::new();
            for f in ctx.iter().chain(std::iter::once(goal)) {
                free.extend(free_names(f));
            }
            if free.contains(&name) {
                return fail(
                    me,
                    Fault::Eigenvariable,
                    format!("`{name}` occurs in the conclusion"),
                );
            }
            let inst = instantiate(me, binder, body, eigen)?;
            let c = &p.premises[0].conclusion;
            if !same(&c.goal, &inst) {
                return fail(me, Fault::Mismatch, "premise goal is not the opened body");
            }
            if keys(&c.context) != ctx_keys {
                return fail(me, Fault::Linearity, "context changed");
            }
        }
        Rule::TensorLeft { principal } => {
            let Formula::Tensor(a, b) = principal_formula(*principal)? else {
                return fail(me, Fault::Shape, "principal formula is not a tensor");
            };
            let c = &p.premises[0].conclusion;
            let mut want = ctx.clone();
            want.remove(*principal);
            want.push((**a).clone());
            want.push((**b).clone());
            if !same(&c.goal, goal) {
                return fail(me, Fault::Mismatch, "goal changed");
            }
            if keys(&c.context) != keys(&want) {
                return fail(
                    me,
                    Fault::Linearity,
                    "premise context is not the split context",
                );
            }
        }
        Rule::TensorRight => {
            let Formula::Tensor(a, b) = goal else {
                return fail(me, Fault::Shape, "goal is not a tensor");
            };
            let (left, right) = (&p.premises[0].conclusion, &p.premises[1].conclusion);
            if !same(&left.goal, a) || !same(&right.goal, b) {
                return fail(me, Fault::Mismatch, "premise goals are not the conjuncts");
            }
            let mut used = keys(&left.context);
            used.extend(keys(&right.context));
            used.sort();
            if used != ctx_keys {
                return fail(
                    me,
                    Fault::Linearity,
                    "context is not split between the premises",
                );
            }
        }
    }
    for c in &p.premises {
        check_step(c, index)?;
    }
    Ok(())
}

fn instantiate(
    index: usize,
    binder: &Binder,
    body: &Formula,
    w: &Witness,
) -> Result<Formula, ProofError> {
    match (binder, w) {
        (Binder::Meaning(x), Witness::Meaning(t)) => match t.type_of() {
            Ok(ty) if ty == x.ty => Ok(body.subst_meaning(&x.name, t)),
            Ok(ty) => fail(
                index,
                Fault::WitnessType,
                format!("`{t}` has type {ty}, `{}` needs {}", x.name, x.ty),
            ),
            Err(e) => fail(index, Fault::WitnessType, e.to_string()),
        },
        (Binder::Projection(h), Witness::Projection(p)) => match p {
            Projection::Up { .. } => fail(index, Fault::WitnessType, "unresolved projection path"),
            _ => Ok(body.subst_projection(h, p)),
        },
        _ => fail(
            index,
            Fault::WitnessType,
            "witness kind does not match the quantifier",
        ),
    }
}

fn free_names(f: &Formula) -> BTreeSet<Name> {
    let mut out = f.free_meaning_vars();
    out.extend(f.free_projection_vars());
    out
}
