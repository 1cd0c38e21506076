//! Readable rendering of terms.
//!
//! Bound variables are renamed deterministically in traversal order from a
//! small pool chosen by type (`x, y, z, ...` for entities, `P, Q, R, ...`
//! for higher types), so equal terms always print identically. A quantifier
//! constant applied to a restriction and a scope prints as `Q(x, R, S)`.

use std::collections::BTreeSet;
use std::fmt;

use super::{Name, SimpleType, Term, Var};

const ENTITY_NAMES: &[&str] = &["x", "y", "z", "u", "v", "w"];
const PROP_NAMES: &[&str] = &["p", "q", "r"];
const INDEX_NAMES: &[&str] = &["i", "j", "k"];
const HIGHER_NAMES: &[&str] = &["P", "Q", "R", "T", "U", "V", "W"];

pub(crate) fn fresh_display_name(ty: &SimpleType, taken: &dyn Fn(&str) -> bool) -> String {
    let pool = match ty {
        SimpleType::E => ENTITY_NAMES,
        SimpleType::T => PROP_NAMES,
        SimpleType::S => INDEX_NAMES,
        SimpleType::Arrow(..) => HIGHER_NAMES,
    };
    if let Some(n) = pool.iter().find(|n| !taken(n)) {
        return n.to_string();
    }
    (1..)
        .map(|i| format!("{}{i}", pool[0]))
        .find(|n| !taken(n))
        .expect("unbounded name supply")
}

struct Printer {
    /// Names that occur free (constants and free variables) anywhere in the term.
    global: BTreeSet<String>,
    /// Bound variables in scope: original name and display name.
    scope: Vec<(Name, String)>,
    synth: usize,
}

impl Printer {
    fn bind(&mut self, v: &Var) -> String {
        let display = fresh_display_name(&v.ty, &|n: &str| {
            self.global.contains(n) || self.scope.iter().any(|(_, d)| d == n)
        });
        self.scope.push((v.name.clone(), display.clone()));
        display
    }

    fn lookup(&self, name: &str) -> Option<&str> {
        self.scope
            .iter()
            .rev()
            .find(|(orig, _)| &**orig == name)
            .map(|(_, d)| d.as_str())
    }

    /// `tail` is true when nothing follows that a lambda body could swallow.
    fn term(&mut self, t: &Term, out: &mut String, tail: bool) {
        match t {
            Term::Const { name, .. } => out.push_str(name),
            Term::Var(v) => match self.lookup(&v.name) {
                Some(d) => out.push_str(d),
                None => out.push_str(&v.name),
            },
            Term::Lam(x, body) => {
                if !tail {
                    out.push('(');
                }
                let d = self.bind(x);
                out.push('\\');
                out.push_str(&d);
                out.push(':');
                out.push_str(&x.ty.to_string());
                out.push_str(". ");
                self.term(body, out, true);
                self.scope.pop();
                if !tail {
                    out.push(')');
                }
            }
            Term::Int(m) => {
                out.push('^');
                self.operand(m, out, tail);
            }
            Term::Ext(m) => {
                out.push('!');
                self.operand(m, out, tail);
            }
            Term::App(..) => self.application(t, out),
        }
    }

    fn operand(&mut self, m: &Term, out: &mut String, tail: bool) {
        match m {
            Term::App(..) => {
                out.push('(');
                self.term(m, out, true);
                out.push(')');
            }
            _ => self.term(m, out, tail),
        }
    }

    fn application(&mut self, t: &Term, out: &mut String) {
        let (head, args) = t.spine();
        if let Term::Const { ty, .. } = head {
            if let (Some(dom), 2) = (ty.quantifier_domain(), args.len()) {
                self.head(head, out);
                out.push('(');
                let bound = Var::new(format!("\u{2}{}", self.synth), dom.clone());
                self.synth += 1;
                let d = self.bind(&bound);
                out.push_str(&d);
                for arg in args {
                    out.push_str(", ");
                    self.opened(arg, &bound, out);
                }
                self.scope.pop();
                out.push(')');
                return;
            }
        }
        self.head(head, out);
        out.push('(');
        for (i, arg) in args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.term(arg, out, true);
        }
        out.push(')');
    }

    /// Prints the body of `arg` applied to the sugar-bound variable.
    fn opened(&mut self, arg: &Term, bound: &Var, out: &mut String) {
        match arg {
            Term::Lam(x, body) => {
                let d = self.lookup(&bound.name).unwrap_or_default().to_string();
                self.scope.push((x.name.clone(), d));
                self.term(body, out, true);
                self.scope.pop();
            }
            other => {
                let applied = Term::app(other.clone(), Term::Var(bound.clone()));
                self.term(&applied, out, true);
            }
        }
    }

    fn head(&mut self, head: &Term, out: &mut String) {
        match head {
            Term::Const { .. } | Term::Var(_) => self.term(head, out, false),
            Term::Int(_) | Term::Ext(_) => self.term(head, out, false),
            _ => {
                out.push('(');
                self.term(head, out, true);
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut global = BTreeSet::new();
        for v in self.free_vars() {
            global.insert(v.to_string());
        }
        collect_consts(self, &mut global);
        let mut p = Printer {
            global,
            scope: Vec::new(),
            synth: 0,
        };
        let mut out = String::new();
        p.term(self, &mut out, true);
        f.write_str(&out)
    }
}

fn collect_consts(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Const { name, .. } => {
            out.insert(name.to_string());
        }
        Term::Var(_) => {}
        Term::Lam(_, b) | Term::Int(b) | Term::Ext(b) => collect_consts(b, out),
        Term::App(f, a) => {
            collect_consts(f, out);
            collect_consts(a, out);
        }
    }
}
