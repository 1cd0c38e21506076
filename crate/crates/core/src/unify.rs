//! Higher-order pattern unification over meaning terms, plus first-order
//! unification of projections.
//!
//! Metavariables are closed: a metavariable created under eigenvariables
//! `x1..xn` is applied to them explicitly, so its value never mentions a
//! rigid variable directly. A flexible term `?F(a1..an)` is a pattern when
//! each `ai` is a distinct rigid variable `v` or its intension `^v`.

use std::collections::HashMap;

use thiserror::Error;

use crate::glue::{Atom, Formula, Projection};
use crate::term::{normalize, Name, SimpleType, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("`{0}` and `{1}` do not match")]
    Clash(String, String),
    #[error("metavariable `{0}` occurs in its own solution")]
    Occurs(Name),
    #[error("`{0}` would escape its scope")]
    Scope(Name),
    #[error("not a higher-order pattern: `{0}`")]
    NonPattern(String),
    #[error("solution for `{meta}` has type {found}, expected {expected}")]
    IllTyped {
        meta: Name,
        expected: SimpleType,
        found: String,
    },
}

/// Monotone supply of fresh names.
#[derive(Debug, Default, Clone)]
pub struct Fresh {
    next: usize,
}

impl Fresh {
    pub fn new() -> Self {
        Fresh::default()
    }

    pub fn tick(&mut self) -> usize {
        self.next += 1;
        self.next
    }

    /// An eigenvariable name such as `x#4`.
    pub fn eigen(&mut self, base: &str) -> Name {
        format!("{}#{}", base.trim_end_matches('\''), self.tick()).into()
    }
}

#[derive(Debug, Clone)]
struct MetaInfo {
    ty: SimpleType,
    value: Option<Term>,
}

#[derive(Debug, Clone)]
struct ProjMeta {
    allowed: Vec<Name>,
    value: Option<Projection>,
}

/// Metavariables and their current values.
#[derive(Debug, Clone, Default)]
pub struct Subst {
    metas: HashMap<Name, MetaInfo>,
    projs: HashMap<Name, ProjMeta>,
}

impl Subst {
    pub fn new() -> Self {
        Subst::default()
    }

    pub fn new_meta(&mut self, fresh: &mut Fresh, base: &str, ty: SimpleType) -> Var {
        let name: Name = format!("?{}_{}", base.trim_end_matches('\''), fresh.tick()).into();
        self.metas.insert(
            name.clone(),
            MetaInfo {
                ty: ty.clone(),
                value: None,
            },
        );
        Var::new(name, ty)
    }

    /// A projection metavariable that may only be bound to concrete
    /// projections or to the projection eigenvariables in `allowed`.
    pub fn new_proj_meta(&mut self, fresh: &mut Fresh, base: &str, allowed: Vec<Name>) -> Name {
        let name: Name = format!("?{}_{}", base.trim_end_matches('\''), fresh.tick()).into();
        self.projs.insert(
            name.clone(),
            ProjMeta {
                allowed,
                value: None,
            },
        );
        name
    }

    pub fn is_meta(&self, name: &str) -> bool {
        self.metas.contains_key(name)
    }

    pub fn is_proj_meta(&self, name: &str) -> bool {
        self.projs.contains_key(name)
    }

    pub fn meta_type(&self, name: &str) -> Option<&SimpleType> {
        Some(&self.metas.get(name)?.ty)
    }

    pub fn meta_value(&self, name: &str) -> Option<&Term> {
        self.metas.get(name)?.value.as_ref()
    }

    fn assign(&mut self, name: &Name, value: Term) {
        if let Some(m) = self.metas.get_mut(name) {
            m.value = Some(value);
        }
    }

    fn unassigned(&self, t: &Term) -> Option<Var> {
        match t {
            Term::Var(v) => match self.metas.get(&v.name) {
                Some(m) if m.value.is_none() => Some(v.clone()),
                _ => None,
            },
            _ => None,
        }
    }

    /// Replaces assigned metavariables by their values and normalizes.
    pub fn apply(&self, t: &Term) -> Term {
        normalize(&self.instantiate(t))
    }

    fn instantiate(&self, t: &Term) -> Term {
        match t {
            Term::Const { .. } => t.clone(),
            Term::Var(v) => match self.metas.get(&v.name).and_then(|m| m.value.as_ref()) {
                Some(value) => self.instantiate(value),
                None => t.clone(),
            },
            Term::Lam(x, b) => Term::lam(x.clone(), self.instantiate(b)),
            Term::App(f, a) => Term::app(self.instantiate(f), self.instantiate(a)),
            Term::Int(m) => Term::int(self.instantiate(m)),
            Term::Ext(m) => Term::ext(self.instantiate(m)),
        }
    }

    pub fn apply_proj(&self, p: &Projection) -> Projection {
        match p {
            Projection::Var(n) => match self.projs.get(n).and_then(|m| m.value.as_ref()) {
                Some(v) => self.apply_proj(v),
                None => p.clone(),
            },
            _ => p.clone(),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            proj: self.apply_proj(&a.proj),
            meaning: self.apply(&a.meaning),
            ty: a.ty.clone(),
        }
    }

    pub fn apply_formula(&self, f: &Formula) -> Formula {
        f.map_atoms(&mut |a| self.apply_atom(a))
    }

    /// Unifies two projections.
    pub fn unify_projection(&mut self, a: &Projection, b: &Projection) -> Result<(), UnifyError> {
        let a = self.apply_proj(a);
        let b = self.apply_proj(b);
        if a == b {
            return Ok(());
        }
        let meta_of = |s: &Subst, p: &Projection| match p {
            Projection::Var(n) if s.projs.contains_key(n) => Some(n.clone()),
            _ => None,
        };
        match (meta_of(self, &a), meta_of(self, &b)) {
            (Some(m), Some(n)) => {
                let keep: Vec<Name> = self.projs[&m]
                    .allowed
                    .iter()
                    .filter(|x| self.projs[&n].allowed.contains(x))
                    .cloned()
                    .collect();
                self.projs.get_mut(&n).expect("meta").allowed = keep;
                self.projs.get_mut(&m).expect("meta").value = Some(b);
                Ok(())
            }
            (Some(m), None) => self.bind_proj(&m, b),
            (None, Some(n)) => self.bind_proj(&n, a),
            (None, None) => Err(UnifyError::Clash(a.to_string(), b.to_string())),
        }
    }

    fn bind_proj(&mut self, m: &Name, value: Projection) -> Result<(), UnifyError> {
        if let Projection::Var(e) = &value {
            if !self.projs[m].allowed.contains(e) {
                return Err(UnifyError::Scope(e.clone()));
            }
        }
        self.projs.get_mut(m).expect("meta").value = Some(value);
        Ok(())
    }

    /// Unifies two meaning terms, extending the substitution.
    pub fn unify(&mut self, fresh: &mut Fresh, a: &Term, b: &Term) -> Result<(), UnifyError> {
        let a = self.apply(a);
        let b = self.apply(b);
        if a == b || a.alpha_equal(&b) {
            return Ok(());
        }
        match (&a, &b) {
            (Term::Lam(x, ba), Term::Lam(y, bb)) => {
                let c = local(fresh, &x.ty);
                return self.unify(fresh, &ba.subst(&x.name, &c), &bb.subst(&y.name, &c));
            }
            (Term::Lam(x, ba), _) => {
                let c = local(fresh, &x.ty);
                let lhs = ba.subst(&x.name, &c);
                return self.unify(fresh, &lhs, &Term::app(b.clone(), c));
            }
            (_, Term::Lam(y, bb)) => {
                let c = local(fresh, &y.ty);
                let rhs = bb.subst(&y.name, &c);
                return self.unify(fresh, &Term::app(a.clone(), c), &rhs);
            }
            _ => {}
        }
        let (ha, args_a) = a.spine();
        let (hb, args_b) = b.spine();
        match (self.unassigned(ha), self.unassigned(hb)) {
            (Some(f), Some(g)) if f.name == g.name => {
                self.flex_flex_same(fresh, &f, &args_a, &args_b)
            }
            (Some(f), g) => match self.solve(fresh, &f, &args_a, &b) {
                Err(UnifyError::NonPattern(_)) if g.is_some() => {
                    self.solve(fresh, &g.expect("flex"), &args_b, &a)
                }
                r => r,
            },
            (None, Some(g)) => self.solve(fresh, &g, &args_b, &a),
            (None, None) => self.rigid_rigid(fresh, &a, &b, ha, &args_a, hb, &args_b),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn rigid_rigid(
        &mut self,
        fresh: &mut Fresh,
        a: &Term,
        b: &Term,
        ha: &Term,
        args_a: &[&Term],
        hb: &Term,
        args_b: &[&Term],
    ) -> Result<(), UnifyError> {
        let clash = || UnifyError::Clash(a.to_string(), b.to_string());
        if args_a.len() != args_b.len() {
            return Err(clash());
        }
        match (ha, hb) {
            (Term::Const { name: m, .. }, Term::Const { name: n, .. }) if m == n => {}
            (Term::Var(v), Term::Var(w)) if v.name == w.name => {}
            (Term::Int(m), Term::Int(n)) | (Term::Ext(m), Term::Ext(n)) => {
                self.unify(fresh, m, n)?
            }
            (Term::Ext(m), _) | (_, Term::Ext(m)) if self.is_flex(m) => {
                return Err(UnifyError::NonPattern(format!("{a} = {b}")))
            }
            _ => return Err(clash()),
        }
        for (x, y) in args_a.iter().zip(args_b) {
            self.unify(fresh, x, y)?;
        }
        Ok(())
    }

    fn is_flex(&self, t: &Term) -> bool {
        self.unassigned(t.spine().0).is_some()
    }

    /// Classifies pattern arguments as `(underlying variable, is_intension)`.
    fn pattern_args(&self, args: &[&Term]) -> Option<Vec<(Var, bool)>> {
        let mut out: Vec<(Var, bool)> = Vec::new();
        for arg in args {
            let entry = match arg {
                Term::Var(v) if !self.is_meta(&v.name) => (v.clone(), false),
                Term::Int(inner) => match &**inner {
                    Term::Var(v) if !self.is_meta(&v.name) => (v.clone(), true),
                    _ => return None,
                },
                _ => return None,
            };
            if out.iter().any(|(v, _)| v.name == entry.0.name) {
                return None;
            }
            out.push(entry);
        }
        Some(out)
    }

    fn flex_flex_same(
        &mut self,
        fresh: &mut Fresh,
        f: &Var,
        xs: &[&Term],
        ys: &[&Term],
    ) -> Result<(), UnifyError> {
        let (Some(px), Some(_)) = (self.pattern_args(xs), self.pattern_args(ys)) else {
            return Err(UnifyError::NonPattern(format!(
                "{} applied to non-pattern arguments",
                f.name
            )));
        };
        if xs.len() != ys.len() {
            return Err(UnifyError::Clash(f.name.to_string(), f.name.to_string()));
        }
        let params: Vec<Var> = px.iter().map(|(v, int)| param(fresh, v, *int)).collect();
        let kept: Vec<&Var> = params
            .iter()
            .zip(xs.iter().zip(ys))
            .filter(|(_, (x, y))| x.alpha_equal(y))
            .map(|(p, _)| p)
            .collect();
        let result = result_type(&f.ty, params.len());
        let h = self.new_meta(
            fresh,
            "H",
            SimpleType::curried(kept.iter().map(|v| &v.ty), result),
        );
        let body = Term::apps(Term::Var(h), kept.iter().map(|v| Term::Var((*v).clone())));
        let value = params
            .iter()
            .rev()
            .fold(body, |acc, p| Term::lam(p.clone(), acc));
        self.assign(&f.name, value);
        Ok(())
    }

    /// Solves `?F(args) = rhs` by inverting the pattern substitution.
    fn solve(
        &mut self,
        fresh: &mut Fresh,
        f: &Var,
        args: &[&Term],
        rhs: &Term,
    ) -> Result<(), UnifyError> {
        let pattern = self.pattern_args(args).ok_or_else(|| {
            UnifyError::NonPattern(format!(
                "{}",
                Term::apps(Term::Var(f.clone()), args.iter().map(|a| (*a).clone()))
            ))
        })?;
        let params: Vec<Var> = pattern
            .iter()
            .map(|(v, int)| param(fresh, v, *int))
            .collect();
        let map: Vec<(Name, bool, Var)> = pattern
            .iter()
            .zip(&params)
            .map(|((v, int), p)| (v.name.clone(), *int, p.clone()))
            .collect();
        let body = self.invert(fresh, &f.name, &map, rhs, &mut Vec::new())?;
        let value = params
            .iter()
            .rev()
            .fold(body, |acc, p| Term::lam(p.clone(), acc));
        match value.type_of() {
            Ok(ty) if ty == f.ty => {}
            Ok(ty) => {
                return Err(UnifyError::IllTyped {
                    meta: f.name.clone(),
                    expected: f.ty.clone(),
                    found: ty.to_string(),
                })
            }
            Err(e) => {
                return Err(UnifyError::IllTyped {
                    meta: f.name.clone(),
                    expected: f.ty.clone(),
                    found: e.to_string(),
                })
            }
        }
        self.assign(&f.name, value);
        Ok(())
    }

    /// Rewrites `t` over the solution's parameters. `map` pairs each rigid
    /// argument variable with whether it was passed as an intension.
    fn invert(
        &mut self,
        fresh: &mut Fresh,
        meta: &Name,
        map: &[(Name, bool, Var)],
        t: &Term,
        bound: &mut Vec<Name>,
    ) -> Result<Term, UnifyError> {
        if let Term::Int(inner) = t {
            if let Term::Var(v) = &**inner {
                if !bound.contains(&v.name) {
                    if let Some((_, _, p)) = map.iter().find(|(n, int, _)| *int && *n == v.name) {
                        return Ok(Term::Var(p.clone()));
                    }
                }
            }
        }
        match t {
            Term::Const { .. } => Ok(t.clone()),
            Term::Var(v) => {
                if bound.contains(&v.name) {
                    return Ok(t.clone());
                }
                if self.is_meta(&v.name) {
                    return if v.name == *meta {
                        Err(UnifyError::Occurs(meta.clone()))
                    } else {
                        Ok(t.clone())
                    };
                }
                match map.iter().find(|(n, _, _)| *n == v.name) {
                    Some((_, false, p)) => Ok(Term::Var(p.clone())),
                    Some((_, true, p)) => Ok(Term::ext(Term::Var(p.clone()))),
                    None => Err(UnifyError::Scope(v.name.clone())),
                }
            }
            Term::Lam(x, b) => {
                bound.push(x.name.clone());
                let body = self.invert(fresh, meta, map, b, bound);
                bound.pop();
                Ok(Term::lam(x.clone(), body?))
            }
            Term::Int(m) => Ok(Term::int(self.invert(fresh, meta, map, m, bound)?)),
            Term::Ext(m) => Ok(Term::ext(self.invert(fresh, meta, map, m, bound)?)),
            Term::App(..) => {
                let (head, args) = t.spine();
                match self.unassigned(head) {
                    Some(g) if g.name == *meta => Err(UnifyError::Occurs(meta.clone())),
                    Some(g) => self.invert_flex(fresh, meta, map, &g, &args, bound),
                    None => {
                        let h = self.invert(fresh, meta, map, head, bound)?;
                        let mut out = Vec::with_capacity(args.len());
                        for a in args {
                            out.push(self.invert(fresh, meta, map, a, bound)?);
                        }
                        Ok(Term::apps(h, out))
                    }
                }
            }
        }
    }

    /// Inverts `?G(args)` inside a solution, pruning arguments that mention
    /// variables the solution cannot see.
    fn invert_flex(
        &mut self,
        fresh: &mut Fresh,
        meta: &Name,
        map: &[(Name, bool, Var)],
        g: &Var,
        args: &[&Term],
        bound: &mut Vec<Name>,
    ) -> Result<Term, UnifyError> {
        let mut kept = Vec::new();
        let mut prune = false;
        let mut keep_mask = Vec::new();
        for a in args {
            match self.invert(fresh, meta, map, a, bound) {
                Ok(x) => {
                    kept.push(x);
                    keep_mask.push(true);
                }
                Err(UnifyError::Scope(n)) => {
                    if !prunable(a) {
                        return Err(UnifyError::Scope(n));
                    }
                    prune = true;
                    keep_mask.push(false);
                }
                Err(e) => return Err(e),
            }
        }
        if !prune {
            return Ok(Term::apps(Term::Var(g.clone()), kept));
        }
        let arg_types: Vec<SimpleType> = args
            .iter()
            .map(|a| {
                a.type_of()
                    .map_err(|e| UnifyError::NonPattern(e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let result = result_type(&g.ty, args.len());
        let kept_types: Vec<&SimpleType> = arg_types
            .iter()
            .zip(&keep_mask)
            .filter(|(_, k)| **k)
            .map(|(t, _)| t)
            .collect();
        let g2 = self.new_meta(
            fresh,
            "P",
            SimpleType::curried(kept_types.into_iter(), result),
        );
        let params: Vec<Var> = arg_types
            .iter()
            .map(|ty| Var::new(format!("_a{}", fresh.tick()), ty.clone()))
            .collect();
        let body = Term::apps(
            Term::Var(g2.clone()),
            params
                .iter()
                .zip(&keep_mask)
                .filter(|(_, k)| **k)
                .map(|(p, _)| Term::Var(p.clone())),
        );
        let value = params
            .iter()
            .rev()
            .fold(body, |acc, p| Term::lam(p.clone(), acc));
        self.assign(&g.name, value);
        Ok(Term::apps(Term::Var(g2), kept))
    }
}

fn prunable(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Int(m) | Term::Ext(m) => matches!(**m, Term::Var(_)),
        _ => false,
    }
}

fn local(fresh: &mut Fresh, ty: &SimpleType) -> Term {
    Term::var(format!("_c{}", fresh.tick()), ty.clone())
}

fn param(fresh: &mut Fresh, v: &Var, intension: bool) -> Var {
    let ty = if intension {
        v.ty.clone().intension()
    } else {
        v.ty.clone()
    };
    Var::new(format!("_y{}", fresh.tick()), ty)
}

fn result_type(ty: &SimpleType, arity: usize) -> SimpleType {
    let mut t = ty;
    for _ in 0..arity {
        t = t.split_arrow().map(|(_, r)| r).unwrap_or(t);
    }
    t.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_term, parse_term_in, Signature};

    fn e() -> SimpleType {
        SimpleType::E
    }
    fn t() -> SimpleType {
        SimpleType::T
    }
    fn et() -> SimpleType {
        SimpleType::arrow(e(), t())
    }

    fn sig() -> Signature {
        let q = SimpleType::arrow(et(), SimpleType::arrow(et(), t()));
        let mut s = Signature::new();
        s.declare("Bill", e());
        s.declare("leave", et());
        s.declare("unicorn", et());
        s.declare("a", q);
        s.declare(
            "seek",
            SimpleType::arrow(
                e(),
                SimpleType::arrow(
                    SimpleType::arrow(
                        SimpleType::S,
                        SimpleType::arrow(SimpleType::arrow(SimpleType::S, et()), t()),
                    ),
                    t(),
                ),
            ),
        );
        s
    }

    #[test]
    fn first_order_solution() {
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let x = s.new_meta(&mut fr, "X", e());
        let lhs = Term::app(Term::constant("leave", et()), Term::Var(x.clone()));
        s.unify(&mut fr, &lhs, &parse_term("leave(Bill)", &sig()).unwrap())
            .unwrap();
        assert_eq!(s.apply(&Term::Var(x)), parse_term("Bill", &sig()).unwrap());
    }

    #[test]
    fn scope_solution_abstracts_eigenvariable() {
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let f = s.new_meta(&mut fr, "S", et());
        let x = Term::var("x#1", e());
        let lhs = Term::app(Term::Var(f.clone()), x.clone());
        let rhs = Term::app(Term::constant("leave", et()), x);
        s.unify(&mut fr, &lhs, &rhs).unwrap();
        assert_eq!(s.apply(&Term::Var(f)), Term::constant("leave", et()));
    }

    #[test]
    fn eigenvariable_cannot_escape() {
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let z = s.new_meta(&mut fr, "Z", e());
        let err = s
            .unify(&mut fr, &Term::Var(z), &Term::var("x#1", e()))
            .unwrap_err();
        assert!(matches!(err, UnifyError::Scope(_)));
    }

    #[test]
    fn occurs_check() {
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let f = s.new_meta(&mut fr, "F", SimpleType::arrow(t(), t()));
        let p = s.new_meta(&mut fr, "P", t());
        let lhs = Term::Var(p.clone());
        let rhs = Term::app(Term::Var(f), Term::Var(p));
        assert!(matches!(
            s.unify(&mut fr, &lhs, &rhs),
            Err(UnifyError::Occurs(_))
        ));
    }

    #[test]
    fn intension_argument_inverts_to_extension() {
        // ?Y(^p) = a(unicorn, p)  gives  ?Y = \P. a(unicorn, !P)
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let pty = SimpleType::arrow(SimpleType::S, et());
        let y = s.new_meta(&mut fr, "Y", SimpleType::arrow(pty.clone(), t()));
        let p = Term::var("p#1", et());
        let lhs = Term::app(Term::Var(y.clone()), Term::int(p.clone()));
        let rhs = Term::apps(
            Term::constant("a", sig().get("a").unwrap().clone()),
            [Term::constant("unicorn", et()), p],
        );
        s.unify(&mut fr, &lhs, &rhs).unwrap();
        let env: Vec<(Name, SimpleType)> = vec![];
        let expected = parse_term_in("\\P:s->e->t. a(z, unicorn(z), !P(z))", &sig(), &env).unwrap();
        assert!(s.apply(&Term::Var(y)).alpha_equal(&normalize(&expected)));
    }

    #[test]
    fn pruning_removes_unreachable_argument() {
        // ?F = ?G(x#1)  forces ?G to ignore its argument.
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let f = s.new_meta(&mut fr, "F", t());
        let g = s.new_meta(&mut fr, "G", et());
        let rhs = Term::app(Term::Var(g.clone()), Term::var("x#1", e()));
        s.unify(&mut fr, &Term::Var(f.clone()), &rhs).unwrap();
        let gv = s.apply(&Term::Var(g));
        assert!(matches!(gv, Term::Lam(..)));
        assert!(!s.apply(&Term::Var(f)).occurs_free("x#1"));
    }

    #[test]
    fn type_mismatch_is_reported() {
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let x = s.new_meta(&mut fr, "X", e());
        let err = s
            .unify(
                &mut fr,
                &Term::Var(x),
                &parse_term("leave(Bill)", &sig()).unwrap(),
            )
            .unwrap_err();
        assert!(matches!(err, UnifyError::IllTyped { .. }));
    }

    #[test]
    fn non_pattern_is_an_error() {
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let f = s.new_meta(&mut fr, "F", SimpleType::arrow(e(), t()));
        let lhs = Term::app(Term::Var(f), Term::constant("Bill", e()));
        let err = s
            .unify(&mut fr, &lhs, &parse_term("leave(Bill)", &sig()).unwrap())
            .unwrap_err();
        assert!(matches!(err, UnifyError::NonPattern(_)));
    }

    #[test]
    fn flex_flex_same_meta_keeps_agreeing_arguments() {
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let f = s.new_meta(
            &mut fr,
            "F",
            SimpleType::arrow(e(), SimpleType::arrow(e(), t())),
        );
        let (x, y) = (Term::var("x#1", e()), Term::var("y#2", e()));
        let lhs = Term::apps(Term::Var(f.clone()), [x.clone(), y.clone()]);
        let rhs = Term::apps(Term::Var(f.clone()), [x, Term::var("z#3", e())]);
        s.unify(&mut fr, &lhs, &rhs).unwrap();
        let Term::Lam(a, body) = s.apply(&Term::Var(f)) else {
            panic!()
        };
        let Term::Lam(_, inner) = *body else { panic!() };
        let (_, args) = inner.spine();
        assert_eq!(args.len(), 1);
        assert!(matches!(args[0], Term::Var(v) if v.name == a.name));
    }

    #[test]
    fn projections() {
        let mut s = Subst::new();
        let mut fr = Fresh::new();
        let h = s.new_proj_meta(&mut fr, "H", vec!["s#1".into()]);
        let fsig = Projection::Ref(crate::fstructure::SemRef::main("f"));
        s.unify_projection(&Projection::Var(h.clone()), &fsig)
            .unwrap();
        assert_eq!(s.apply_proj(&Projection::Var(h)), fsig);
        let k = s.new_proj_meta(&mut fr, "H", vec![]);
        assert!(s
            .unify_projection(&Projection::Var(k), &Projection::Var("s#1".into()))
            .is_err());
        let g = Projection::Ref(crate::fstructure::SemRef::main("g"));
        assert!(matches!(
            s.unify_projection(&fsig, &g),
            Err(UnifyError::Clash(..))
        ));
    }
}
