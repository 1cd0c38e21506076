//! Focused backward proof search with lazy resource splitting.
//!
//! Right rules are applied eagerly. At an atomic goal one unused resource is
//! focused on: its quantifiers become metavariables, its antecedents become
//! subgoals, and its head atom is unified with the goal. Resources are
//! threaded through subgoals and marked used, so no context split is ever
//! guessed. Each success is reported as a [`Sketch`] that is replayed into a
//! full [`Proof`] once the final substitution is known.

use std::collections::BTreeSet;

use super::proof::{Proof, Rule, Witness};
use super::{collect_readings, Derivation, Limits, SearchStats, Sequent};
use crate::fstructure::SemRef;
use crate::glue::{Atom, Binder, Formula, Projection};
use crate::term::{Name, SimpleType, Term, Var};
use crate::unify::{Fresh, Subst, UnifyError};

#[derive(Debug, Clone)]
struct Resource {
    id: usize,
    formula: Formula,
    used: bool,
}

#[derive(Debug, Clone)]
struct State {
    subst: Subst,
    res: Vec<Resource>,
    meaning_eigens: Vec<Var>,
    proj_eigens: Vec<Name>,
}

#[derive(Debug, Clone)]
enum Step {
    Inst(Witness),
    Imp,
}

#[derive(Debug, Clone)]
enum Sketch {
    ForallR {
        eigen: Witness,
        body: Box<Sketch>,
    },
    ImpR {
        hyp: usize,
        body: Box<Sketch>,
    },
    TensorL {
        whole: usize,
        left: usize,
        right: usize,
        body: Box<Sketch>,
    },
    TensorR(Box<Sketch>, Box<Sketch>),
    Focus {
        res: usize,
        steps: Vec<Step>,
        args: Vec<Sketch>,
    },
}

/// Resource ids a sketch consumes from its context.
fn ids(sk: &Sketch, out: &mut BTreeSet<usize>) {
    match sk {
        Sketch::ForallR { body, .. } => ids(body, out),
        Sketch::ImpR { hyp, body } => {
            let mut inner = BTreeSet::new();
            ids(body, &mut inner);
            inner.remove(hyp);
            out.extend(inner);
        }
        Sketch::TensorL {
            whole,
            left,
            right,
            body,
        } => {
            let mut inner = BTreeSet::new();
            ids(body, &mut inner);
            inner.remove(left);
            inner.remove(right);
            inner.insert(*whole);
            out.extend(inner);
        }
        Sketch::TensorR(a, b) => {
            ids(a, out);
            ids(b, out);
        }
        Sketch::Focus { res, args, .. } => {
            out.insert(*res);
            for a in args {
                ids(a, out);
            }
        }
    }
}

type Cont<'k, T> = &'k mut dyn FnMut(&mut Searcher, State, T);

struct Searcher<'l> {
    limits: &'l Limits,
    fresh: Fresh,
    stats: SearchStats,
    limit_hit: bool,
    next_id: usize,
}

/// Tensor decompositions to wrap around a proof body, innermost first.
type Wraps = Vec<(usize, usize, usize)>;

fn wrap(mut body: Sketch, wraps: &Wraps) -> Sketch {
    for &(whole, left, right) in wraps {
        body = Sketch::TensorL {
            whole,
            left,
            right,
            body: Box::new(body),
        };
    }
    body
}

/// The atom a resource finally produces, ignoring quantifiers and antecedents.
fn head(f: &Formula) -> Option<&Atom> {
    match f {
        Formula::Atom(a) => Some(a),
        Formula::Limp(_, b) => head(b),
        Formula::Forall(_, b) => head(b),
        Formula::Tensor(..) => None,
    }
}

impl<'l> Searcher<'l> {
    fn new(limits: &'l Limits) -> Self {
        Searcher {
            limits,
            fresh: Fresh::new(),
            stats: SearchStats::default(),
            limit_hit: false,
            next_id: 0,
        }
    }

    /// Adds `f` to the context, splitting tensors into their components.
    fn intro(&mut self, st: &mut State, f: Formula, wraps: &mut Wraps) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        match f {
            Formula::Tensor(a, b) => {
                let l = self.intro(st, *a, wraps);
                let r = self.intro(st, *b, wraps);
                wraps.push((id, l, r));
            }
            other => st.res.push(Resource {
                id,
                formula: other,
                used: false,
            }),
        }
        id
    }

    fn solve(&mut self, goal: &Formula, st: State, depth: usize, k: Cont<Sketch>) {
        if depth > self.limits.max_depth {
            self.limit_hit = true;
            return;
        }
        match goal {
            Formula::Forall(Binder::Meaning(x), body) => {
                let v = Var::new(self.fresh.eigen(&x.name), x.ty.clone());
                let body = body.subst_meaning(&x.name, &Term::Var(v.clone()));
                let mut st = st;
                st.meaning_eigens.push(v.clone());
                self.solve(&body, st, depth + 1, &mut |s, mut st, sk| {
                    st.meaning_eigens.pop();
                    let eigen = Witness::Meaning(Term::Var(v.clone()));
                    k(
                        s,
                        st,
                        Sketch::ForallR {
                            eigen,
                            body: Box::new(sk),
                        },
                    )
                })
            }
            Formula::Forall(Binder::Projection(h), body) => {
                let e = self.fresh.eigen(h);
                let body = body.subst_projection(h, &Projection::Var(e.clone()));
                let mut st = st;
                st.proj_eigens.push(e.clone());
                self.solve(&body, st, depth + 1, &mut |s, mut st, sk| {
                    st.proj_eigens.pop();
                    let eigen = Witness::Projection(Projection::Var(e.clone()));
                    k(
                        s,
                        st,
                        Sketch::ForallR {
                            eigen,
                            body: Box::new(sk),
                        },
                    )
                })
            }
            Formula::Limp(a, b) => {
                let mut st = st;
                let before = st.res.len();
                let mut wraps = Wraps::new();
                let hyp = self.intro(&mut st, (**a).clone(), &mut wraps);
                let leaves: Vec<usize> = st.res[before..].iter().map(|r| r.id).collect();
                self.solve(b, st, depth + 1, &mut |s, mut st, sk| {
                    let all_used = leaves
                        .iter()
                        .all(|id| st.res.iter().any(|r| r.id == *id && r.used));
                    if !all_used {
                        return;
                    }
                    st.res.retain(|r| !leaves.contains(&r.id));
                    let body = Box::new(wrap(sk, &wraps));
                    k(s, st, Sketch::ImpR { hyp, body })
                })
            }
            Formula::Tensor(a, b) => self.solve(a, st, depth + 1, &mut |s, st, left| {
                s.solve(b, st, depth + 1, &mut |s2, st2, right| {
                    k(
                        s2,
                        st2,
                        Sketch::TensorR(Box::new(left.clone()), Box::new(right)),
                    )
                })
            }),
            Formula::Atom(g) => self.focus(g, st, depth, k),
        }
    }

    fn focus(&mut self, goal: &Atom, st: State, depth: usize, k: Cont<Sketch>) {
        let goal_proj = st.subst.apply_proj(&goal.proj);
        for idx in 0..st.res.len() {
            if st.res[idx].used {
                continue;
            }
            let Some(h) = head(&st.res[idx].formula) else {
                continue;
            };
            self.stats.focus_attempts += 1;
            if self.limits.typed_projections && h.ty != goal.ty {
                self.stats.type_blocked += 1;
                continue;
            }
            if let (Projection::Ref(a), Projection::Ref(b)) = (&h.proj, &goal_proj) {
                if a != b {
                    continue;
                }
            }

            let mut st2 = st.clone();
            st2.res[idx].used = true;
            let id = st2.res[idx].id;
            let mut f = st2.res[idx].formula.clone();
            let mut steps = Vec::new();
            let mut ants = Vec::new();
            let atom = loop {
                match f {
                    Formula::Forall(Binder::Meaning(x), body) => {
                        let w = self.raised_meta(&mut st2, &x);
                        f = body.subst_meaning(&x.name, &w);
                        steps.push(Step::Inst(Witness::Meaning(w)));
                    }
                    Formula::Forall(Binder::Projection(hv), body) => {
                        let m =
                            st2.subst
                                .new_proj_meta(&mut self.fresh, &hv, st2.proj_eigens.clone());
                        let w = Projection::Var(m);
                        f = body.subst_projection(&hv, &w);
                        steps.push(Step::Inst(Witness::Projection(w)));
                    }
                    Formula::Limp(a, b) => {
                        ants.push((*a, depth + steps.len() + 1));
                        steps.push(Step::Imp);
                        f = *b;
                    }
                    Formula::Atom(a) => break a,
                    Formula::Tensor(..) => unreachable!("head() rejects tensors"),
                }
            };

            if st2.subst.unify_projection(&atom.proj, &goal.proj).is_err() {
                continue;
            }
            match st2
                .subst
                .unify(&mut self.fresh, &atom.meaning, &goal.meaning)
            {
                Ok(()) => {}
                Err(UnifyError::IllTyped { .. }) => {
                    self.stats.ill_typed_attempts += 1;
                    continue;
                }
                Err(UnifyError::NonPattern(_)) => {
                    self.stats.non_pattern += 1;
                    continue;
                }
                Err(_) => continue,
            }
            self.solve_args(&ants, 0, st2, Vec::new(), &mut |s, st, args| {
                let sk = Sketch::Focus {
                    res: id,
                    steps: steps.clone(),
                    args,
                };
                k(s, st, sk)
            });
        }
    }

    /// `?X(x1..xn)` over the meaning eigenvariables in scope.
    fn raised_meta(&mut self, st: &mut State, x: &Var) -> Term {
        let ty = SimpleType::curried(
            st.meaning_eigens
                .iter()
                .map(|v| &v.ty)
                .collect::<Vec<_>>()
                .into_iter(),
            x.ty.clone(),
        );
        let m = st.subst.new_meta(&mut self.fresh, &x.name, ty);
        Term::apps(
            Term::Var(m),
            st.meaning_eigens.iter().cloned().map(Term::Var),
        )
    }

    fn solve_args(
        &mut self,
        ants: &[(Formula, usize)],
        i: usize,
        st: State,
        acc: Vec<Sketch>,
        k: Cont<Vec<Sketch>>,
    ) {
        if i == ants.len() {
            k(self, st, acc);
            return;
        }
        let (goal, depth) = &ants[i];
        self.solve(goal, st, *depth, &mut |s, st, sk| {
            let mut acc = acc.clone();
            acc.push(sk);
            s.solve_args(ants, i + 1, st, acc, k)
        });
    }
}

/// Replays a sketch into a proof whose formulas are instantiated by `subst`.
struct Builder<'s> {
    subst: &'s Subst,
}

type Ctx = Vec<(usize, Formula)>;

impl Builder<'_> {
    fn sequent(&self, ctx: &Ctx, goal: &Formula) -> Sequent {
        Sequent {
            context: ctx
                .iter()
                .map(|(_, f)| self.subst.apply_formula(f))
                .collect(),
            goal: self.subst.apply_formula(goal),
        }
    }

    fn witness(&self, w: &Witness) -> Witness {
        match w {
            Witness::Meaning(t) => Witness::Meaning(self.subst.apply(t)),
            Witness::Projection(p) => Witness::Projection(self.subst.apply_proj(p)),
        }
    }

    fn node(&self, rule: Rule, ctx: &Ctx, goal: &Formula, premises: Vec<Proof>) -> Proof {
        Proof {
            rule,
            conclusion: self.sequent(ctx, goal),
            premises,
        }
    }

    fn build(&self, sk: &Sketch, ctx: Ctx, goal: &Formula) -> Proof {
        match sk {
            Sketch::ForallR { eigen, body } => {
                let Formula::Forall(b, inner) = goal else {
                    unreachable!("forall R on {goal}")
                };
                let opened = match (b, eigen) {
                    (Binder::Meaning(x), Witness::Meaning(t)) => inner.subst_meaning(&x.name, t),
                    (Binder::Projection(h), Witness::Projection(p)) => inner.subst_projection(h, p),
                    _ => unreachable!("binder kind"),
                };
                let child = self.build(body, ctx.clone(), &opened);
                self.node(
                    Rule::ForallRight {
                        eigen: eigen.clone(),
                    },
                    &ctx,
                    goal,
                    vec![child],
                )
            }
            Sketch::ImpR { hyp, body } => {
                let Formula::Limp(a, b) = goal else {
                    unreachable!("-o R on {goal}")
                };
                let mut inner = ctx.clone();
                inner.push((*hyp, (**a).clone()));
                let child = self.build(body, inner, b);
                self.node(Rule::ImpRight, &ctx, goal, vec![child])
            }
            Sketch::TensorL {
                whole,
                left,
                right,
                body,
            } => {
                let pos = ctx
                    .iter()
                    .position(|(i, _)| i == whole)
                    .expect("tensor in context");
                let Formula::Tensor(a, b) = &ctx[pos].1 else {
                    unreachable!("* L on a non-tensor")
                };
                let mut inner = ctx.clone();
                inner.remove(pos);
                inner.push((*left, (**a).clone()));
                inner.push((*right, (**b).clone()));
                let child = self.build(body, inner, goal);
                self.node(Rule::TensorLeft { principal: pos }, &ctx, goal, vec![child])
            }
            Sketch::TensorR(l, r) => {
                let Formula::Tensor(a, b) = goal else {
                    unreachable!("* R on {goal}")
                };
                let mut used = BTreeSet::new();
                ids(l, &mut used);
                let (lc, rc): (Ctx, Ctx) = ctx.iter().cloned().partition(|(i, _)| used.contains(i));
                let left = self.build(l, lc, a);
                let right = self.build(r, rc, b);
                self.node(Rule::TensorRight, &ctx, goal, vec![left, right])
            }
            Sketch::Focus { res, steps, args } => self.chain(*res, steps, args, ctx, goal),
        }
    }

    fn chain(
        &self,
        res: usize,
        steps: &[Step],
        args: &[Sketch],
        ctx: Ctx,
        goal: &Formula,
    ) -> Proof {
        let pos = ctx
            .iter()
            .position(|(i, _)| *i == res)
            .expect("focused resource in context");
        let f = &ctx[pos].1;
        match (steps.first(), f) {
            (None, _) => self.node(Rule::Axiom, &ctx, goal, vec![]),
            (Some(Step::Inst(w)), Formula::Forall(b, body)) => {
                let inst = match (b, w) {
                    (Binder::Meaning(x), Witness::Meaning(t)) => body.subst_meaning(&x.name, t),
                    (Binder::Projection(h), Witness::Projection(p)) => body.subst_projection(h, p),
                    _ => unreachable!("binder kind"),
                };
                let mut inner = ctx.clone();
                inner[pos].1 = inst;
                let child = self.chain(res, &steps[1..], args, inner, goal);
                let rule = Rule::ForallLeft {
                    principal: pos,
                    witness: self.witness(w),
                };
                self.node(rule, &ctx, goal, vec![child])
            }
            (Some(Step::Imp), Formula::Limp(a, b)) => {
                let mut used = BTreeSet::new();
                ids(&args[0], &mut used);
                let mut lc = Ctx::new();
                let mut rc = Ctx::new();
                for (i, g) in &ctx {
                    if *i == res {
                        rc.push((*i, (**b).clone()));
                    } else if used.contains(i) {
                        lc.push((*i, g.clone()));
                    } else {
                        rc.push((*i, g.clone()));
                    }
                }
                let left = self.build(&args[0], lc, a);
                let right = self.chain(res, &steps[1..], &args[1..], rc, goal);
                self.node(
                    Rule::ImpLeft { principal: pos },
                    &ctx,
                    goal,
                    vec![left, right],
                )
            }
            _ => unreachable!("focus step does not match {f}"),
        }
    }
}

pub(super) struct Proved {
    pub proofs: Vec<Proof>,
    pub limit_hit: bool,
}

fn run(
    context: &[Formula],
    goal: &Formula,
    searcher: &mut Searcher,
    mut st: State,
    on_proof: &mut dyn FnMut(&Subst, Proof),
) {
    let mut wraps = Wraps::new();
    let mut ctx = Ctx::new();
    for f in context {
        let id = searcher.intro(&mut st, f.clone(), &mut wraps);
        ctx.push((id, f.clone()));
    }
    let mut found: Vec<(Subst, Sketch)> = Vec::new();
    searcher.solve(goal, st, 0, &mut |_, st, sk| {
        if st.res.iter().all(|r| r.used) {
            found.push((st.subst, wrap(sk, &wraps)));
        }
    });
    for (subst, sk) in found {
        let proof = Builder { subst: &subst }.build(&sk, ctx.clone(), goal);
        on_proof(&subst, proof);
    }
}

fn empty_state() -> State {
    State {
        subst: Subst::new(),
        res: Vec::new(),
        meaning_eigens: Vec::new(),
        proj_eigens: Vec::new(),
    }
}

pub(super) fn prove_sequent(context: &[Formula], goal: &Formula, limits: &Limits) -> Proved {
    let mut searcher = Searcher::new(limits);
    let mut proofs = Vec::new();
    run(context, goal, &mut searcher, empty_state(), &mut |_, p| {
        proofs.push(p)
    });
    Proved {
        proofs,
        limit_hit: searcher.limit_hit,
    }
}

pub(super) fn derive(premises: &[Formula], goal: &SemRef, limits: &Limits) -> Derivation {
    let mut searcher = Searcher::new(limits);
    let mut st = empty_state();
    let g = st.subst.new_meta(&mut searcher.fresh, "G", SimpleType::T);
    let goal_formula = Formula::Atom(Atom {
        proj: Projection::Ref(goal.clone()),
        meaning: Term::Var(g.clone()),
        ty: SimpleType::T,
    });
    let mut results = Vec::new();
    let mut open = 0;
    run(
        premises,
        &goal_formula,
        &mut searcher,
        st,
        &mut |subst, p| {
            let meaning = subst.apply(&Term::Var(g.clone()));
            if meaning.free_vars().is_empty() {
                results.push((meaning, p));
            } else {
                open += 1;
            }
        },
    );
    let mut stats = searcher.stats;
    stats.proofs = results.len() + open;
    stats.open_results = open;
    Derivation {
        sequent_context: premises.to_vec(),
        readings: collect_readings(&results),
        proofs: results,
        stats,
        limit_hit: searcher.limit_hit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn focus(res: usize, args: Vec<Sketch>) -> Sketch {
        Sketch::Focus {
            res,
            steps: vec![],
            args,
        }
    }

    #[test]
    fn ids_hide_discharged_hypotheses() {
        let sk = Sketch::ImpR {
            hyp: 9,
            body: Box::new(focus(1, vec![focus(9, vec![]), focus(2, vec![])])),
        };
        let mut out = BTreeSet::new();
        ids(&sk, &mut out);
        assert_eq!(out, BTreeSet::from([1, 2]));
    }

    #[test]
    fn ids_replace_tensor_parts_by_the_whole() {
        let sk = wrap(
            Sketch::TensorR(Box::new(focus(4, vec![])), Box::new(focus(5, vec![]))),
            &vec![(3, 4, 5)],
        );
        let mut out = BTreeSet::new();
        ids(&sk, &mut out);
        assert_eq!(out, BTreeSet::from([3]));
    }
}
