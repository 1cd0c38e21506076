//! Glue formulas: meaning atoms `proj ~> M` combined with linear
//! implication, tensor and universal quantification.
//!
//! ```text
//! formula := 'forall' binder (',' binder)* '.' formula | tensor ('-o' formula)?
//! tensor  := unit ('*' unit)*
//! unit    := '(' formula ')' | proj '~>' term | 'forall' ...
//! proj    := ident '.sig' facet? | 'up.sig' facet? | '(' 'up' ATTR* ')' '.sig' facet? | ident
//! binder  := ident ':' type      (meaning variable)
//!          | ident               (projection variable)
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::fstructure::{Facet, SemRef};
use crate::syntax::{Cursor, ParseError, Tok};
use crate::term::{
    normalize, parse_term_at, parse_type_at, Name, Signature, SimpleType, Term, TermError, Var,
};

#[derive(Debug, Error)]
pub enum GlueError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error("variable `{0}` is not bound by any quantifier")]
    OpenVariable(Name),
    #[error("atom `{atom}`: {reason}")]
    AtomTypeMismatch { atom: String, reason: String },
    #[error("tensor in conclusion position: `{0}`")]
    TensorInConclusion(String),
}

/// Where a meaning lives: a concrete semantic projection, a projection
/// variable, or (in lexical templates only) a path from `up`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Projection {
    Ref(SemRef),
    Var(Name),
    Up { path: Vec<String>, facet: Facet },
}

/// `proj ~> meaning`, where `ty` indexes the relation by meaning type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub proj: Projection,
    pub meaning: Term,
    pub ty: SimpleType,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Binder {
    Meaning(Var),
    Projection(Name),
}

impl Binder {
    pub fn name(&self) -> &Name {
        match self {
            Binder::Meaning(v) => &v.name,
            Binder::Projection(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Limp(Box<Formula>, Box<Formula>),
    Tensor(Box<Formula>, Box<Formula>),
    Forall(Binder, Box<Formula>),
}

/// Whether a quantified variable is filled in by the prover or stands for
/// an arbitrary fixed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Existential,
    Eigen,
}

impl Atom {
    /// Builds an atom whose index type is the meaning's own type.
    pub fn new(proj: Projection, meaning: Term) -> Result<Atom, TermError> {
        let ty = meaning.type_of()?;
        Ok(Atom { proj, meaning, ty })
    }
}

impl Formula {
    pub fn atom(proj: Projection, meaning: Term) -> Result<Formula, TermError> {
        Ok(Formula::Atom(Atom::new(proj, meaning)?))
    }

    pub fn limp(a: Formula, b: Formula) -> Formula {
        Formula::Limp(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn forall(b: Binder, body: Formula) -> Formula {
        Formula::Forall(b, Box::new(body))
    }

    pub fn foralls(binders: Vec<Binder>, body: Formula) -> Formula {
        binders
            .into_iter()
            .rev()
            .fold(body, |acc, b| Formula::forall(b, acc))
    }

    /// Applies `f` to every atom.
    pub fn map_atoms(&self, f: &mut dyn FnMut(&Atom) -> Atom) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Limp(a, b) => Formula::limp(a.map_atoms(f), b.map_atoms(f)),
            Formula::Tensor(a, b) => Formula::tensor(a.map_atoms(f), b.map_atoms(f)),
            Formula::Forall(x, body) => Formula::forall(x.clone(), body.map_atoms(f)),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Atom>) {
            match f {
                Formula::Atom(a) => out.push(a),
                Formula::Limp(a, b) | Formula::Tensor(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::Forall(_, body) => go(body, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Normalizes every atom's meaning.
    pub fn normalized(&self) -> Formula {
        self.map_atoms(&mut |a| Atom {
            proj: a.proj.clone(),
            meaning: normalize(&a.meaning),
            ty: a.ty.clone(),
        })
    }

    /// Free meaning variables, paired with their annotated types.
    pub fn free_meaning_vars(&self) -> BTreeSet<Name> {
        fn go(f: &Formula, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match f {
                Formula::Atom(a) => {
                    for v in a.meaning.free_vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
                Formula::Limp(a, b) | Formula::Tensor(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(Binder::Meaning(x), body) => {
                    bound.push(x.name.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Formula::Forall(Binder::Projection(_), body) => go(body, bound, out),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn free_projection_vars(&self) -> BTreeSet<Name> {
        fn go(f: &Formula, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match f {
                Formula::Atom(a) => {
                    if let Projection::Var(n) = &a.proj {
                        if !bound.contains(n) {
                            out.insert(n.clone());
                        }
                    }
                }
                Formula::Limp(a, b) | Formula::Tensor(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(Binder::Projection(h), body) => {
                    bound.push(h.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                Formula::Forall(Binder::Meaning(_), body) => go(body, bound, out),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Capture-avoiding substitution for a free meaning variable.
    pub fn subst_meaning(&self, name: &str, value: &Term) -> Formula {
        let fv = value.free_vars();
        self.subst_meaning_with(name, value, &fv)
    }

    fn subst_meaning_with(&self, name: &str, value: &Term, fv: &BTreeSet<Name>) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(Atom {
                proj: a.proj.clone(),
                meaning: a.meaning.subst(name, value),
                ty: a.ty.clone(),
            }),
            Formula::Limp(a, b) => Formula::limp(
                a.subst_meaning_with(name, value, fv),
                b.subst_meaning_with(name, value, fv),
            ),
            Formula::Tensor(a, b) => Formula::tensor(
                a.subst_meaning_with(name, value, fv),
                b.subst_meaning_with(name, value, fv),
            ),
            Formula::Forall(Binder::Meaning(x), body) => {
                if &*x.name == name {
                    return self.clone();
                }
                if fv.contains(&x.name) {
                    let mut avoid = body.free_meaning_vars();
                    avoid.extend(fv.iter().cloned());
                    let fresh = crate::term::prime_until_fresh(&x.name, &avoid);
                    let x2 = Var::new(fresh, x.ty.clone());
                    let body2 = body.subst_meaning(&x.name, &Term::Var(x2.clone()));
                    Formula::forall(
                        Binder::Meaning(x2),
                        body2.subst_meaning_with(name, value, fv),
                    )
                } else {
                    Formula::forall(
                        Binder::Meaning(x.clone()),
                        body.subst_meaning_with(name, value, fv),
                    )
                }
            }
            Formula::Forall(b @ Binder::Projection(_), body) => {
                Formula::forall(b.clone(), body.subst_meaning_with(name, value, fv))
            }
        }
    }

    /// Substitution for a free projection variable.
    pub fn subst_projection(&self, name: &str, value: &Projection) -> Formula {
        match self {
            Formula::Atom(a) => {
                let proj = match &a.proj {
                    Projection::Var(n) if &**n == name => value.clone(),
                    p => p.clone(),
                };
                Formula::Atom(Atom {
                    proj,
                    meaning: a.meaning.clone(),
                    ty: a.ty.clone(),
                })
            }
            Formula::Limp(a, b) => Formula::limp(
                a.subst_projection(name, value),
                b.subst_projection(name, value),
            ),
            Formula::Tensor(a, b) => Formula::tensor(
                a.subst_projection(name, value),
                b.subst_projection(name, value),
            ),
            Formula::Forall(Binder::Projection(h), body) => {
                if &**h == name {
                    return self.clone();
                }
                if matches!(value, Projection::Var(v) if v == h) {
                    let mut avoid = body.free_projection_vars();
                    avoid.insert(h.clone());
                    let fresh = crate::term::prime_until_fresh(h, &avoid);
                    let body2 = body.subst_projection(h, &Projection::Var(fresh.clone()));
                    Formula::forall(
                        Binder::Projection(fresh),
                        body2.subst_projection(name, value),
                    )
                } else {
                    Formula::forall(
                        Binder::Projection(h.clone()),
                        body.subst_projection(name, value),
                    )
                }
            }
            Formula::Forall(b @ Binder::Meaning(_), body) => {
                Formula::forall(b.clone(), body.subst_projection(name, value))
            }
        }
    }

    /// Nameless rendering, with meanings normalized, so that formulas equal up
    /// to renaming of bound variables and meaning conversion get equal keys.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        self.write_canonical(&mut out, &mut Vec::new());
        out
    }

    fn write_canonical(&self, out: &mut String, binders: &mut Vec<Name>) {
        match self {
            Formula::Atom(a) => {
                out.push('[');
                match &a.proj {
                    Projection::Ref(r) => out.push_str(&r.to_string()),
                    Projection::Var(n) => match binders.iter().rposition(|b| b == n) {
                        Some(pos) => out.push_str(&format!("#{}", binders.len() - 1 - pos)),
                        None => out.push_str(&format!("${n}")),
                    },
                    Projection::Up { path, facet } => {
                        out.push_str(&format!("up{path:?}{facet:?}"));
                    }
                }
                out.push_str(" ~>");
                out.push_str(&a.ty.to_string());
                out.push(' ');
                normalize(&a.meaning).write_canonical(out, binders);
                out.push(']');
            }
            Formula::Limp(a, b) | Formula::Tensor(a, b) => {
                out.push('(');
                a.write_canonical(out, binders);
                out.push_str(if matches!(self, Formula::Limp(..)) {
                    " -o "
                } else {
                    " * "
                });
                b.write_canonical(out, binders);
                out.push(')');
            }
            Formula::Forall(x, body) => {
                match x {
                    Binder::Meaning(v) => out.push_str(&format!("(A{}.", v.ty)),
                    Binder::Projection(_) => out.push_str("(AP."),
                }
                binders.push(x.name().clone());
                body.write_canonical(out, binders);
                binders.pop();
                out.push(')');
            }
        }
    }

    pub fn alpha_equal(&self, other: &Formula) -> bool {
        self.canonical() == other.canonical()
    }
}

/// Checks closure and the typing of every atom.
pub fn check_wellformed(f: &Formula) -> Result<(), GlueError> {
    fn go(
        f: &Formula,
        env: &mut HashMap<Name, SimpleType>,
        projs: &mut Vec<Name>,
    ) -> Result<(), GlueError> {
        match f {
            Formula::Atom(a) => {
                if let Projection::Var(n) = &a.proj {
                    if !projs.contains(n) {
                        return Err(GlueError::OpenVariable(n.clone()));
                    }
                }
                let ty = a.meaning.typecheck(env).map_err(|e| match e {
                    TermError::UnboundVariable(n) => GlueError::OpenVariable(n),
                    other => GlueError::AtomTypeMismatch {
                        atom: Formula::Atom(a.clone()).to_string(),
                        reason: other.to_string(),
                    },
                })?;
                if ty != a.ty {
                    return Err(GlueError::AtomTypeMismatch {
                        atom: Formula::Atom(a.clone()).to_string(),
                        reason: format!(
                            "meaning has type {ty} but the atom is indexed by {}",
                            a.ty
                        ),
                    });
                }
                Ok(())
            }
            Formula::Limp(a, b) | Formula::Tensor(a, b) => {
                go(a, env, projs)?;
                go(b, env, projs)
            }
            Formula::Forall(Binder::Meaning(x), body) => {
                let prev = env.insert(x.name.clone(), x.ty.clone());
                let r = go(body, env, projs);
                match prev {
                    Some(p) => env.insert(x.name.clone(), p),
                    None => env.remove(&x.name),
                };
                r
            }
            Formula::Forall(Binder::Projection(h), body) => {
                projs.push(h.clone());
                let r = go(body, env, projs);
                projs.pop();
                r
            }
        }
    }
    go(f, &mut HashMap::new(), &mut Vec::new())
}

/// Rewrites `(A * B) -o C` to `A -o B -o C` throughout a resource formula.
/// A tensor anywhere a resource would have to produce it is rejected.
pub fn curry(f: &Formula) -> Result<Formula, GlueError> {
    curry_at(f, false)
}

/// As [`curry`], for a formula to be proved: tensors in its conclusion are
/// kept and proved piecewise.
pub fn curry_goal(f: &Formula) -> Result<Formula, GlueError> {
    curry_at(f, true)
}

fn curry_at(f: &Formula, positive: bool) -> Result<Formula, GlueError> {
    match f {
        Formula::Atom(_) => Ok(f.clone()),
        Formula::Limp(a, c) => match &**a {
            Formula::Tensor(a1, a2) => curry_at(
                &Formula::limp((**a1).clone(), Formula::limp((**a2).clone(), (**c).clone())),
                positive,
            ),
            _ => Ok(Formula::limp(
                curry_at(a, !positive)?,
                curry_at(c, positive)?,
            )),
        },
        Formula::Tensor(a, b) => {
            if positive {
                Ok(Formula::tensor(curry_at(a, true)?, curry_at(b, true)?))
            } else {
                Err(GlueError::TensorInConclusion(f.to_string()))
            }
        }
        Formula::Forall(x, body) => Ok(Formula::forall(x.clone(), curry_at(body, positive)?)),
    }
}

/// Role of each quantified variable of a premise, in binding order.
pub fn polarity_roles(f: &Formula) -> Vec<(Name, Role)> {
    fn go(f: &Formula, positive: bool, out: &mut Vec<(Name, Role)>) {
        match f {
            Formula::Atom(_) => {}
            Formula::Limp(a, b) => {
                go(a, !positive, out);
                go(b, positive, out);
            }
            Formula::Tensor(a, b) => {
                go(a, positive, out);
                go(b, positive, out);
            }
            Formula::Forall(x, body) => {
                let role = if positive {
                    Role::Eigen
                } else {
                    Role::Existential
                };
                out.push((x.name().clone(), role));
                go(body, positive, out);
            }
        }
    }
    let mut out = Vec::new();
    go(f, false, &mut out);
    out
}

/// Parses a closed or open formula over the constants of `sig`.
pub fn parse_formula(src: &str, sig: &Signature) -> Result<Formula, GlueError> {
    let mut cur = Cursor::new(src)?;
    let f = parse_formula_at(&mut cur, sig)?;
    cur.finish()?;
    Ok(f)
}

pub(crate) fn parse_formula_at(cur: &mut Cursor, sig: &Signature) -> Result<Formula, ParseError> {
    FormulaReader {
        sig,
        meanings: Vec::new(),
    }
    .formula(cur)
}

struct FormulaReader<'a> {
    sig: &'a Signature,
    meanings: Vec<(String, SimpleType)>,
}

impl FormulaReader<'_> {
    fn formula(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        if matches!(cur.peek(), Tok::Forall) {
            return self.quantified(cur);
        }
        let lhs = self.tensor(cur)?;
        if cur.eat(&Tok::Lolli) {
            let rhs = self.formula(cur)?;
            Ok(Formula::limp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn quantified(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        cur.expect(&Tok::Forall)?;
        let mut binders = Vec::new();
        loop {
            let name = cur.ident()?;
            if cur.eat(&Tok::Colon) {
                let ty = parse_type_at(cur)?;
                binders.push(Binder::Meaning(Var::new(name, ty)));
            } else {
                binders.push(Binder::Projection(name.into()));
            }
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
        cur.expect(&Tok::Dot)?;
        let pushed = binders
            .iter()
            .filter_map(|b| match b {
                Binder::Meaning(v) => Some((v.name.to_string(), v.ty.clone())),
                Binder::Projection(_) => None,
            })
            .collect::<Vec<_>>();
        let n = pushed.len();
        self.meanings.extend(pushed);
        let body = self.formula(cur);
        self.meanings.truncate(self.meanings.len() - n);
        Ok(Formula::foralls(binders, body?))
    }

    fn tensor(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        let mut acc = self.unit(cur)?;
        while cur.eat(&Tok::Star) {
            let rhs = self.unit(cur)?;
            acc = Formula::tensor(acc, rhs);
        }
        Ok(acc)
    }

    fn unit(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        match cur.peek() {
            Tok::Forall => self.quantified(cur),
            Tok::LParen if !matches!(cur.peek_at(1), Tok::Up) => {
                cur.bump();
                let f = self.formula(cur)?;
                cur.expect(&Tok::RParen)?;
                Ok(f)
            }
            _ => self.atom(cur),
        }
    }

    fn atom(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        let proj = self.projection(cur)?;
        cur.expect(&Tok::LeadsTo)?;
        let start = cur.offset();
        let meaning = parse_term_at(cur, self.sig, &mut self.meanings)?;
        let ty = meaning
            .type_of()
            .map_err(|e| ParseError::at(cur.src, start, e.to_string()))?;
        Ok(Formula::Atom(Atom { proj, meaning, ty }))
    }

    fn projection(&mut self, cur: &mut Cursor) -> Result<Projection, ParseError> {
        match cur.peek().clone() {
            Tok::Up => {
                cur.bump();
                let facet = sig_suffix(cur)?;
                Ok(Projection::Up {
                    path: Vec::new(),
                    facet,
                })
            }
            Tok::LParen => {
                cur.bump();
                cur.expect(&Tok::Up)?;
                let mut path = Vec::new();
                while let Tok::Ident(a) = cur.peek().clone() {
                    cur.bump();
                    path.push(a);
                }
                cur.expect(&Tok::RParen)?;
                let facet = sig_suffix(cur)?;
                Ok(Projection::Up { path, facet })
            }
            Tok::Ident(name) => {
                cur.bump();
                if matches!(cur.peek(), Tok::Dot) {
                    let facet = sig_suffix(cur)?;
                    Ok(Projection::Ref(SemRef::with_facet(name, facet)))
                } else {
                    Ok(Projection::Var(name.into()))
                }
            }
            other => Err(cur.error(format!("expected a projection, found {other}"))),
        }
    }
}

/// Reads `.sig` and an optional `.VAR` / `.RESTR`.
pub(crate) fn sig_suffix(cur: &mut Cursor) -> Result<Facet, ParseError> {
    cur.expect(&Tok::Dot)?;
    let offset = cur.offset();
    let s = cur.ident()?;
    if s != "sig" {
        return Err(ParseError::at(
            cur.src,
            offset,
            format!("expected `sig`, found `{s}`"),
        ));
    }
    if matches!(cur.peek(), Tok::Dot) {
        cur.bump();
        let offset = cur.offset();
        let f = cur.ident()?;
        return Facet::from_name(&f)
            .ok_or_else(|| ParseError::at(cur.src, offset, format!("unknown facet `{f}`")));
    }
    Ok(Facet::Main)
}

/// Parses `f.sig`, `h.sig.VAR` and the like.
pub fn parse_sem_ref(src: &str) -> Result<SemRef, ParseError> {
    let mut cur = Cursor::new(src)?;
    let node = cur.ident()?;
    let facet = sig_suffix(&mut cur)?;
    cur.finish()?;
    Ok(SemRef::with_facet(node, facet))
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Projection::Ref(r) => write!(f, "{r}"),
            Projection::Var(n) => f.write_str(n),
            Projection::Up { path, facet } => {
                if path.is_empty() {
                    f.write_str("up.sig")?;
                } else {
                    write!(f, "(up {}).sig", path.join(" "))?;
                }
                match facet {
                    Facet::Main => Ok(()),
                    Facet::Var => f.write_str(".VAR"),
                    Facet::Restr => f.write_str(".RESTR"),
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, 0)
    }
}

/// Precedence levels: 0 quantifier, 1 implication, 2 tensor, 3 atom.
fn write_formula(x: &Formula, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
    let level = match x {
        Formula::Forall(..) => 0,
        Formula::Limp(..) => 1,
        Formula::Tensor(..) => 2,
        Formula::Atom(_) => 3,
    };
    let paren = level < ctx;
    if paren {
        f.write_str("(")?;
    }
    match x {
        Formula::Atom(a) => write!(f, "{} ~> {}", a.proj, a.meaning)?,
        Formula::Limp(a, b) => {
            write_formula(a, f, 2)?;
            f.write_str(" -o ")?;
            write_formula(b, f, 0)?;
        }
        Formula::Tensor(a, b) => {
            write_formula(a, f, 2)?;
            f.write_str(" * ")?;
            write_formula(b, f, 3)?;
        }
        Formula::Forall(..) => {
            f.write_str("forall ")?;
            let mut cur = x;
            let mut first = true;
            while let Formula::Forall(b, body) = cur {
                if !first {
                    f.write_str(", ")?;
                }
                first = false;
                match b {
                    Binder::Meaning(v) => write!(f, "{}:{}", v.name, v.ty)?,
                    Binder::Projection(h) => f.write_str(h)?,
                }
                cur = body;
            }
            f.write_str(". ")?;
            write_formula(cur, f, 0)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}
