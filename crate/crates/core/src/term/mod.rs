//! Typed lambda terms of the meaning language: constants, variables,
//! abstraction, application, intension (`^`) and extension (`!`).

mod normalize;
mod parse;
mod print;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

pub use normalize::normalize;
pub use parse::{parse_term, parse_term_in, parse_type};
pub(crate) use parse::{parse_term_at, parse_type_at};

pub type Name = Arc<str>;

/// Simple types over entities `e`, propositions `t` and indices `s`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum SimpleType {
    E,
    T,
    S,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(dom: SimpleType, cod: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(dom), Box::new(cod))
    }

    /// The type of intensions of `self`, `s -> self`.
    pub fn intension(self) -> SimpleType {
        SimpleType::arrow(SimpleType::S, self)
    }

    /// Curried function type `args[0] -> ... -> result`.
    pub fn curried<'a>(
        args: impl DoubleEndedIterator<Item = &'a SimpleType>,
        result: SimpleType,
    ) -> SimpleType {
        args.rev()
            .fold(result, |acc, a| SimpleType::arrow(a.clone(), acc))
    }

    pub fn split_arrow(&self) -> Option<(&SimpleType, &SimpleType)> {
        match self {
            SimpleType::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// For a generalized-quantifier type `(a -> t) -> (a -> t) -> t`, returns `a`.
    pub fn quantifier_domain(&self) -> Option<&SimpleType> {
        let (restr, rest) = self.split_arrow()?;
        let (scope, result) = rest.split_arrow()?;
        let (dom, t1) = restr.split_arrow()?;
        if restr == scope && *t1 == SimpleType::T && *result == SimpleType::T {
            Some(dom)
        } else {
            None
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::E => f.write_str("e"),
            SimpleType::T => f.write_str("t"),
            SimpleType::S => f.write_str("s"),
            SimpleType::Arrow(a, b) => {
                if a.split_arrow().is_some() {
                    write!(f, "({a})->{b}")
                } else {
                    write!(f, "{a}->{b}")
                }
            }
        }
    }
}

/// A typed variable. Identity is by name; the type travels with it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Var {
    pub name: Name,
    pub ty: SimpleType,
}

impl Var {
    pub fn new(name: impl Into<Name>, ty: SimpleType) -> Var {
        Var {
            name: name.into(),
            ty,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Const {
        name: Name,
        ty: SimpleType,
    },
    Var(Var),
    Lam(Var, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// Intension, `^M`.
    Int(Box<Term>),
    /// Extension, `!M`.
    Ext(Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("type mismatch in `{term}`: expected {expected}, found {found}")]
    TypeMismatch {
        term: String,
        expected: SimpleType,
        found: SimpleType,
    },
    #[error("`{term}` of type {ty} is applied but is not a function")]
    NotAFunction { term: String, ty: SimpleType },
    #[error("extension of `{term}`, which has non-intensional type {ty}")]
    ExtensionOfNonIntension { term: String, ty: SimpleType },
}

/// Types of the meaning constants in play.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    consts: IndexMap<String, SimpleType>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(&mut self, name: impl Into<String>, ty: SimpleType) -> Option<SimpleType> {
        self.consts.insert(name.into(), ty)
    }

    pub fn get(&self, name: &str) -> Option<&SimpleType> {
        self.consts.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SimpleType)> {
        self.consts.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.consts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.consts.is_empty()
    }

    pub fn constant(&self, name: &str) -> Option<Term> {
        self.get(name).map(|ty| Term::constant(name, ty.clone()))
    }
}

impl Term {
    pub fn constant(name: impl Into<Name>, ty: SimpleType) -> Term {
        Term::Const {
            name: name.into(),
            ty,
        }
    }

    pub fn var(name: impl Into<Name>, ty: SimpleType) -> Term {
        Term::Var(Var::new(name, ty))
    }

    pub fn lam(v: Var, body: Term) -> Term {
        Term::Lam(v, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn int(m: Term) -> Term {
        Term::Int(Box::new(m))
    }

    pub fn ext(m: Term) -> Term {
        Term::Ext(Box::new(m))
    }

    /// `Q(x, R, S)`: the quantifier constant applied to `λx.R` and `λx.S`.
    pub fn quantified(q: Term, x: Var, restriction: Term, scope: Term) -> Term {
        Term::apps(q, [Term::lam(x.clone(), restriction), Term::lam(x, scope)])
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Type of the term, trusting the annotations on free variables.
    pub fn type_of(&self) -> Result<SimpleType, TermError> {
        self.infer(&mut Vec::new(), &|v: &Var| Ok(v.ty.clone()))
    }

    /// Checks the term against `env`, which must type every free variable.
    pub fn typecheck(&self, env: &HashMap<Name, SimpleType>) -> Result<SimpleType, TermError> {
        self.infer(&mut Vec::new(), &|v: &Var| match env.get(&v.name) {
            None => Err(TermError::UnboundVariable(v.name.clone())),
            Some(ty) if *ty != v.ty => Err(TermError::TypeMismatch {
                term: v.name.to_string(),
                expected: ty.clone(),
                found: v.ty.clone(),
            }),
            Some(ty) => Ok(ty.clone()),
        })
    }

    fn infer<F>(&self, bound: &mut Vec<Name>, free: &F) -> Result<SimpleType, TermError>
    where
        F: Fn(&Var) -> Result<SimpleType, TermError>,
    {
        match self {
            Term::Const { ty, .. } => Ok(ty.clone()),
            Term::Var(v) => {
                if bound.contains(&v.name) {
                    Ok(v.ty.clone())
                } else {
                    free(v)
                }
            }
            Term::Lam(x, body) => {
                bound.push(x.name.clone());
                let res = body.infer(bound, free);
                bound.pop();
                Ok(SimpleType::arrow(x.ty.clone(), res?))
            }
            Term::App(f, a) => {
                let fty = f.infer(bound, free)?;
                let aty = a.infer(bound, free)?;
                match fty {
                    SimpleType::Arrow(dom, cod) => {
                        if *dom == aty {
                            Ok(*cod)
                        } else {
                            Err(TermError::TypeMismatch {
                                term: self.to_string(),
                                expected: *dom,
                                found: aty,
                            })
                        }
                    }
                    other => Err(TermError::NotAFunction {
                        term: f.to_string(),
                        ty: other,
                    }),
                }
            }
            Term::Int(m) => Ok(m.infer(bound, free)?.intension()),
            Term::Ext(m) => match m.infer(bound, free)? {
                SimpleType::Arrow(dom, cod) if *dom == SimpleType::S => Ok(*cod),
                other => Err(TermError::ExtensionOfNonIntension {
                    term: m.to_string(),
                    ty: other,
                }),
            },
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Const { .. } => {}
            Term::Var(v) => {
                if !bound.contains(&v.name) {
                    out.insert(v.name.clone());
                }
            }
            Term::Lam(x, b) => {
                bound.push(x.name.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Int(m) | Term::Ext(m) => m.collect_free(bound, out),
        }
    }

    /// Free variables together with their annotated types.
    pub fn free_var_types(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        fn go(t: &Term, bound: &mut Vec<Name>, out: &mut Vec<Var>) {
            match t {
                Term::Const { .. } => {}
                Term::Var(v) => {
                    if !bound.contains(&v.name) && !out.iter().any(|o| o.name == v.name) {
                        out.push(v.clone());
                    }
                }
                Term::Lam(x, b) => {
                    bound.push(x.name.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
                Term::Int(m) | Term::Ext(m) => go(m, bound, out),
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn occurs_free(&self, name: &str) -> bool {
        match self {
            Term::Const { .. } => false,
            Term::Var(v) => &*v.name == name,
            Term::Lam(x, b) => &*x.name != name && b.occurs_free(name),
            Term::App(f, a) => f.occurs_free(name) || a.occurs_free(name),
            Term::Int(m) | Term::Ext(m) => m.occurs_free(name),
        }
    }

    /// Capture-avoiding substitution of `value` for free occurrences of `name`.
    /// No type check; see [`Term::substitute`].
    pub fn subst(&self, name: &str, value: &Term) -> Term {
        if !self.occurs_free(name) {
            return self.clone();
        }
        let value_fv = value.free_vars();
        self.subst_with(name, value, &value_fv)
    }

    fn subst_with(&self, name: &str, value: &Term, value_fv: &BTreeSet<Name>) -> Term {
        match self {
            Term::Const { .. } => self.clone(),
            Term::Var(v) => {
                if &*v.name == name {
                    value.clone()
                } else {
                    self.clone()
                }
            }
            Term::Lam(x, body) => {
                if &*x.name == name || !body.occurs_free(name) {
                    return self.clone();
                }
                if value_fv.contains(&x.name) {
                    let mut avoid = body.free_vars();
                    avoid.extend(value_fv.iter().cloned());
                    let fresh = prime_until_fresh(&x.name, &avoid);
                    let x2 = Var::new(fresh, x.ty.clone());
                    let body2 = body.subst(&x.name, &Term::Var(x2.clone()));
                    Term::lam(x2, body2.subst_with(name, value, value_fv))
                } else {
                    Term::lam(x.clone(), body.subst_with(name, value, value_fv))
                }
            }
            Term::App(f, a) => Term::app(
                f.subst_with(name, value, value_fv),
                a.subst_with(name, value, value_fv),
            ),
            Term::Int(m) => Term::int(m.subst_with(name, value, value_fv)),
            Term::Ext(m) => Term::ext(m.subst_with(name, value, value_fv)),
        }
    }

    /// Type-checked capture-avoiding substitution.
    pub fn substitute(&self, var: &Var, value: &Term) -> Result<Term, TermError> {
        let vty = value.type_of()?;
        if vty != var.ty {
            return Err(TermError::TypeMismatch {
                term: value.to_string(),
                expected: var.ty.clone(),
                found: vty,
            });
        }
        Ok(self.subst(&var.name, value))
    }

    /// Nameless rendering: bound variables become de Bruijn indices.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        self.write_canonical(&mut s, &mut Vec::new());
        s
    }

    pub(crate) fn write_canonical(&self, out: &mut String, binders: &mut Vec<Name>) {
        match self {
            Term::Const { name, .. } => {
                out.push_str(name);
            }
            Term::Var(v) => match binders.iter().rposition(|b| *b == v.name) {
                Some(pos) => {
                    out.push('#');
                    out.push_str(&(binders.len() - 1 - pos).to_string());
                }
                None => {
                    out.push('$');
                    out.push_str(&v.name);
                }
            },
            Term::Lam(x, b) => {
                out.push_str("(\\");
                out.push_str(&x.ty.to_string());
                out.push('.');
                binders.push(x.name.clone());
                b.write_canonical(out, binders);
                binders.pop();
                out.push(')');
            }
            Term::App(f, a) => {
                out.push('(');
                f.write_canonical(out, binders);
                out.push(' ');
                a.write_canonical(out, binders);
                out.push(')');
            }
            Term::Int(m) => {
                out.push_str("^(");
                m.write_canonical(out, binders);
                out.push(')');
            }
            Term::Ext(m) => {
                out.push_str("!(");
                m.write_canonical(out, binders);
                out.push(')');
            }
        }
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_equal(&self, other: &Term) -> bool {
        self.canonical() == other.canonical()
    }

    /// True if no subterm has the shape `!(^M)`.
    pub fn has_no_ext_int_redex(&self) -> bool {
        match self {
            Term::Const { .. } | Term::Var(_) => true,
            Term::Lam(_, b) => b.has_no_ext_int_redex(),
            Term::App(f, a) => f.has_no_ext_int_redex() && a.has_no_ext_int_redex(),
            Term::Int(m) => m.has_no_ext_int_redex(),
            Term::Ext(m) => !matches!(**m, Term::Int(_)) && m.has_no_ext_int_redex(),
        }
    }
}

pub(crate) fn prime_until_fresh(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = format!("{base}'");
    while avoid.iter().any(|n| **n == *candidate) {
        candidate.push('\'');
    }
    candidate.into()
}

pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    a.alpha_equal(b)
}
