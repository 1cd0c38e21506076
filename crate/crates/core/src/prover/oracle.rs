//! Brute-force reference prover.
//!
//! Plain sequent calculus with no focusing and no resource threading: every
//! left rule may fire on any formula, and every implication or tensor guesses
//! its context split up front. Exponential, so only small inputs are
//! accepted.

use std::collections::BTreeMap;

use super::ProverError;
use crate::fstructure::SemRef;
use crate::glue::{Atom, Binder, Formula, Projection};
use crate::term::{Name, SimpleType, Term, Var};
use crate::unify::{Fresh, Subst};

pub const MAX_PREMISES: usize = 8;

#[derive(Clone)]
struct Env {
    subst: Subst,
    meaning_eigens: Vec<Var>,
    proj_eigens: Vec<Name>,
}

type Cont<'k> = &'k mut dyn FnMut(&mut Oracle, Env);

struct Oracle {
    fresh: Fresh,
    max_depth: usize,
    limit_hit: bool,
}

fn push_split(ctx: &mut Vec<Formula>, f: Formula) {
    match f {
        Formula::Tensor(a, b) => {
            push_split(ctx, *a);
            push_split(ctx, *b);
        }
        other => ctx.push(other),
    }
}

/// All ways to divide `items` into two sub-multisets, by position.
fn splits<T: Clone>(items: &[T]) -> Vec<(Vec<T>, Vec<T>)> {
    (0u32..1 << items.len())
        .map(|mask| {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (i, x) in items.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    a.push(x.clone());
                } else {
                    b.push(x.clone());
                }
            }
            (a, b)
        })
        .collect()
}

impl Oracle {
    fn prove(&mut self, ctx: Vec<Formula>, goal: &Formula, env: Env, depth: usize, k: Cont) {
        if depth > self.max_depth {
            self.limit_hit = true;
            return;
        }
        match goal {
            Formula::Forall(Binder::Meaning(x), body) => {
                let v = Var::new(self.fresh.eigen(&x.name), x.ty.clone());
                let body = body.subst_meaning(&x.name, &Term::Var(v.clone()));
                let mut env = env;
                env.meaning_eigens.push(v);
                self.prove(ctx, &body, env, depth + 1, &mut |o, mut env| {
                    env.meaning_eigens.pop();
                    k(o, env)
                })
            }
            Formula::Forall(Binder::Projection(h), body) => {
                let e = self.fresh.eigen(h);
                let body = body.subst_projection(h, &Projection::Var(e.clone()));
                let mut env = env;
                env.proj_eigens.push(e);
                self.prove(ctx, &body, env, depth + 1, &mut |o, mut env| {
                    env.proj_eigens.pop();
                    k(o, env)
                })
            }
            Formula::Limp(a, b) => {
                let mut ctx = ctx;
                push_split(&mut ctx, (**a).clone());
                self.prove(ctx, b, env, depth + 1, k)
            }
            Formula::Tensor(a, b) => {
                for (l, r) in splits(&ctx) {
                    self.prove(l, a, env.clone(), depth + 1, &mut |o, env| {
                        o.prove(r.clone(), b, env, depth + 1, k)
                    });
                }
            }
            Formula::Atom(g) => {
                for i in 0..ctx.len() {
                    let mut rest = ctx.clone();
                    let chosen = rest.remove(i);
                    self.left(chosen, rest, g, env.clone(), depth + 1, k);
                }
            }
        }
    }

    /// Applies left rules to `f` until it is an atom or an implication.
    fn left(
        &mut self,
        f: Formula,
        rest: Vec<Formula>,
        goal: &Atom,
        mut env: Env,
        depth: usize,
        k: Cont,
    ) {
        if depth > self.max_depth {
            self.limit_hit = true;
            return;
        }
        match f {
            Formula::Forall(Binder::Meaning(x), body) => {
                let ty = SimpleType::curried(
                    env.meaning_eigens
                        .iter()
                        .map(|v| &v.ty)
                        .collect::<Vec<_>>()
                        .into_iter(),
                    x.ty.clone(),
                );
                let m = env.subst.new_meta(&mut self.fresh, &x.name, ty);
                let w = Term::apps(
                    Term::Var(m),
                    env.meaning_eigens.iter().cloned().map(Term::Var),
                );
                self.left(
                    body.subst_meaning(&x.name, &w),
                    rest,
                    goal,
                    env,
                    depth + 1,
                    k,
                )
            }
            Formula::Forall(Binder::Projection(h), body) => {
                let m = env
                    .subst
                    .new_proj_meta(&mut self.fresh, &h, env.proj_eigens.clone());
                self.left(
                    body.subst_projection(&h, &Projection::Var(m)),
                    rest,
                    goal,
                    env,
                    depth + 1,
                    k,
                )
            }
            Formula::Atom(a) => {
                if !rest.is_empty() || a.ty != goal.ty {
                    return;
                }
                if env.subst.unify_projection(&a.proj, &goal.proj).is_err() {
                    return;
                }
                if env
                    .subst
                    .unify(&mut self.fresh, &a.meaning, &goal.meaning)
                    .is_err()
                {
                    return;
                }
                k(self, env)
            }
            Formula::Limp(a, b) => {
                for (l, r) in splits(&rest) {
                    let goal_f = Formula::Atom(goal.clone());
                    let b = (*b).clone();
                    self.prove(l, &a, env.clone(), depth + 1, &mut |o, env| {
                        let mut r = r.clone();
                        push_split(&mut r, b.clone());
                        o.prove(r, &goal_f, env, depth + 1, k)
                    });
                }
            }
            Formula::Tensor(a, b) => {
                let mut rest = rest;
                push_split(&mut rest, Formula::Tensor(a, b));
                self.prove(rest, &Formula::Atom(goal.clone()), env, depth + 1, k)
            }
        }
    }
}

/// Distinct closed readings of `goal`, sorted by canonical rendering.
pub fn oracle_enumerate(
    premises: &[Formula],
    goal: &SemRef,
    max_depth: usize,
) -> Result<Vec<Term>, ProverError> {
    if premises.len() > MAX_PREMISES {
        return Err(ProverError::TooManyPremises {
            count: premises.len(),
            max: MAX_PREMISES,
        });
    }
    let mut oracle = Oracle {
        fresh: Fresh::new(),
        max_depth,
        limit_hit: false,
    };
    let mut env = Env {
        subst: Subst::new(),
        meaning_eigens: Vec::new(),
        proj_eigens: Vec::new(),
    };
    let g = env.subst.new_meta(&mut oracle.fresh, "G", SimpleType::T);
    let goal = Formula::Atom(Atom {
        proj: Projection::Ref(goal.clone()),
        meaning: Term::Var(g.clone()),
        ty: SimpleType::T,
    });
    let mut ctx = Vec::new();
    for p in premises {
        push_split(&mut ctx, p.clone());
    }
    let mut found = BTreeMap::new();
    oracle.prove(ctx, &goal, env, 0, &mut |_, env| {
        let m = env.subst.apply(&Term::Var(g.clone()));
        if m.free_vars().is_empty() {
            found.entry(m.canonical()).or_insert(m);
        }
    });
    if oracle.limit_hit && found.is_empty() {
        return Err(ProverError::DepthLimitReached { found: 0 });
    }
    Ok(found.into_values().collect())
}
