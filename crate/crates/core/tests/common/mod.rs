#![allow(dead_code)]

use std::path::{Path, PathBuf};

use glue_core::fstructure::SemRef;
use glue_core::glue::{parse_formula, Formula, Projection};
use glue_core::lexicon::{find_lexicon, load_expected, premises, Lexicon, Scenario};
use glue_core::prover::Sequent;
use glue_core::term::{Signature, SimpleType, Term, Var};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/paper")
}

pub struct Case {
    pub name: String,
    pub lexicon: Lexicon,
    pub scenario: Scenario,
    pub premises: Vec<Formula>,
    pub expected: Vec<Term>,
}

pub fn load_case(dir: &Path) -> Case {
    let lexicon = Lexicon::load(&find_lexicon(dir).expect("lexicon")).unwrap();
    let scenario = Scenario::load(&dir.join("scenario.scn")).unwrap();
    let premises = premises(&scenario, &lexicon)
        .unwrap()
        .into_iter()
        .map(|p| p.formula)
        .collect();
    let expected = load_expected(&dir.join("expected"), &lexicon.signature).unwrap();
    Case {
        name: scenario.name.clone(),
        lexicon,
        scenario,
        premises,
        expected,
    }
}

pub fn case(name: &str) -> Case {
    load_case(&corpus_root().join(name))
}

pub fn corpus() -> Vec<Case> {
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(corpus_root())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.join("scenario.scn").is_file())
        .collect();
    dirs.sort();
    dirs.iter().map(|d| load_case(d)).collect()
}

/// Canonical keys, sorted.
pub fn keys(ts: &[Term]) -> Vec<String> {
    let mut k: Vec<String> = ts.iter().map(Term::canonical).collect();
    k.sort();
    k
}

pub fn reading_sequent(premises: &[Formula], goal: &SemRef, meaning: &Term) -> Sequent {
    Sequent {
        context: premises.to_vec(),
        goal: Formula::atom(Projection::Ref(goal.clone()), meaning.clone()).unwrap(),
    }
}

/// All orderings of `items`.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

fn e() -> SimpleType {
    SimpleType::E
}
fn t() -> SimpleType {
    SimpleType::T
}
fn et() -> SimpleType {
    SimpleType::arrow(e(), t())
}

pub fn signature() -> Signature {
    let q = SimpleType::arrow(et(), SimpleType::arrow(et(), t()));
    let pty = SimpleType::arrow(SimpleType::S, et());
    let obj = SimpleType::arrow(SimpleType::S, SimpleType::arrow(pty, t()));
    let mut s = Signature::new();
    s.declare("Bill", e());
    s.declare("Al", e());
    s.declare("rain", t());
    s.declare("leave", et());
    s.declare("man", et());
    s.declare("unicorn", et());
    s.declare("find", SimpleType::arrow(e(), et()));
    s.declare("every", q.clone());
    s.declare("a", q);
    s.declare("seek", SimpleType::arrow(e(), SimpleType::arrow(obj, t())));
    s
}

/// Random well-typed terms with plenty of beta, eta and `!^` redexes.
pub struct TermGen<'a, R: Rng> {
    pub rng: &'a mut R,
    pub sig: Signature,
    counter: usize,
}

impl<'a, R: Rng> TermGen<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        TermGen {
            rng,
            sig: signature(),
            counter: 0,
        }
    }

    fn arg_types() -> Vec<SimpleType> {
        vec![
            e(),
            t(),
            et(),
            SimpleType::arrow(SimpleType::S, et()),
            SimpleType::arrow(SimpleType::S, e()),
        ]
    }

    pub fn random_type(&mut self) -> SimpleType {
        let mut all = Self::arg_types();
        all.push(SimpleType::arrow(et(), t()));
        all.choose(self.rng).unwrap().clone()
    }

    fn fresh(&mut self, ty: &SimpleType) -> Var {
        self.counter += 1;
        let base = ["x", "y", "z", "P", "Q"][self.counter % 5];
        // Names repeat deliberately so shadowing and capture are exercised.
        Var::new(format!("{base}{}", self.counter % 3), ty.clone())
    }

    pub fn term(&mut self, ty: &SimpleType, env: &mut Vec<Var>, depth: usize) -> Term {
        let mut options: Vec<u8> = Vec::new();
        if env.iter().any(|v| v.ty == *ty) {
            options.extend([0, 0]);
        }
        if self.sig.iter().any(|(_, t)| t == ty) {
            options.push(1);
        }
        if ty.split_arrow().is_some() {
            options.push(2);
        }
        if depth > 0 {
            options.extend([3, 3, 4]);
            if matches!(ty, SimpleType::Arrow(d, _) if **d == SimpleType::S) {
                options.push(5);
            }
        }
        if options.is_empty() {
            // Base type without a matching variable or constant at depth 0.
            options.push(3);
        }
        match *options.choose(self.rng).unwrap() {
            0 => {
                let vs: Vec<&Var> = env.iter().rev().filter(|v| v.ty == *ty).collect();
                Term::Var((*vs.choose(self.rng).unwrap()).clone())
            }
            1 => {
                let cs: Vec<(&str, &SimpleType)> =
                    self.sig.iter().filter(|(_, t)| *t == ty).collect();
                let (n, t) = cs.choose(self.rng).unwrap();
                Term::constant(*n, (*t).clone())
            }
            2 => {
                let (dom, cod) = ty.split_arrow().unwrap();
                let (dom, cod) = (dom.clone(), cod.clone());
                let v = self.fresh(&dom);
                env.push(v.clone());
                let body = self.term(&cod, env, depth.saturating_sub(1));
                env.pop();
                Term::lam(v, body)
            }
            3 => {
                // Application, often of a lambda, so a beta redex.
                if depth == 0 {
                    return self.base_app(ty, env);
                }
                let a = Self::arg_types().choose(self.rng).unwrap().clone();
                let fty = SimpleType::arrow(a.clone(), ty.clone());
                let f = self.term(&fty, env, depth - 1);
                let x = self.term(&a, env, depth - 1);
                Term::app(f, x)
            }
            4 => {
                // `!M` with M of type s -> ty, frequently `^N`.
                let m = self.term(
                    &SimpleType::arrow(SimpleType::S, ty.clone()),
                    env,
                    depth - 1,
                );
                Term::ext(m)
            }
            _ => {
                let (_, cod) = ty.split_arrow().unwrap();
                let cod = cod.clone();
                Term::int(self.term(&cod, env, depth - 1))
            }
        }
    }

    fn base_app(&mut self, ty: &SimpleType, env: &mut Vec<Var>) -> Term {
        match ty {
            SimpleType::T => {
                let x = self.term(&e(), env, 0);
                Term::app(Term::constant("leave", et()), x)
            }
            SimpleType::E => Term::constant("Bill", e()),
            _ => unreachable!("no base application of type {ty}"),
        }
    }
}

/// A random multiset of glue premises over nodes f, g, h with goal f.sig.
/// Most are underivable; some have several readings.
pub fn random_premises<R: Rng>(rng: &mut R) -> Vec<Formula> {
    let nodes = ["f", "g", "h"];
    let sig = signature();
    let n = rng.gen_range(1..=5);
    let mut out = Vec::new();
    for _ in 0..n {
        let a = *nodes.choose(rng).unwrap();
        let b = *nodes.choose(rng).unwrap();
        let c = *nodes.choose(rng).unwrap();
        let src = match rng.gen_range(0..7) {
            0 => format!("{a}.sig ~> {}", ["Bill", "Al"].choose(rng).unwrap()),
            1 => format!("forall X:e. {a}.sig ~> X -o {b}.sig ~> leave(X)"),
            2 => format!("forall X:e, Y:e. {a}.sig ~> X * {b}.sig ~> Y -o {c}.sig ~> find(X, Y)"),
            3 => format!("forall X:e, Y:e. {a}.sig ~> X -o {b}.sig ~> Y -o {c}.sig ~> find(X, Y)"),
            4 => format!(
                "forall H, S:e->t. (forall x:e. {a}.sig ~> x -o H ~> S(x)) -o H ~> {}(z, {}(z), S(z))",
                ["every", "a"].choose(rng).unwrap(),
                ["man", "unicorn"].choose(rng).unwrap()
            ),
            5 => format!(
                "forall Z:e, Y:(s->e->t)->t. {a}.sig ~> Z * (forall s, p:e->t. (forall X:e. {b}.sig ~> X -o s ~> p(X)) -o s ~> Y(^p)) -o {c}.sig ~> seek(Z, ^Y)"
            ),
            _ => format!("{a}.sig ~> rain"),
        };
        out.push(parse_formula(&src, &sig).unwrap());
    }
    out
}
