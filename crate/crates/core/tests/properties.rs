mod common;

use common::{keys, random_premises, reading_sequent, TermGen};
use glue_core::fstructure::{parse_fstructure, parse_fstructure_json, SemRef};
use glue_core::prover::{check_proof, derive, oracle_enumerate, Limits};
use glue_core::term::{normalize, parse_term, Term};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_term(seed: u64) -> (Term, glue_core::term::SimpleType) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = TermGen::new(&mut rng);
    let ty = g.random_type();
    let t = g.term(&ty, &mut Vec::new(), 4);
    (t, ty)
}

/// Contracts the leftmost-outermost beta redex, if any.
fn beta_step(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => {
            if let Term::Lam(x, b) = &**f {
                return Some(b.subst(&x.name, a));
            }
            if let Some(f2) = beta_step(f) {
                return Some(Term::app(f2, (**a).clone()));
            }
            beta_step(a).map(|a2| Term::app((**f).clone(), a2))
        }
        Term::Lam(x, b) => beta_step(b).map(|b2| Term::lam(x.clone(), b2)),
        Term::Int(m) => beta_step(m).map(Term::int),
        Term::Ext(m) => beta_step(m).map(Term::ext),
        _ => None,
    }
}

fn has_beta_redex(t: &Term) -> bool {
    match t {
        Term::App(f, a) => matches!(**f, Term::Lam(..)) || has_beta_redex(f) || has_beta_redex(a),
        Term::Lam(_, b) | Term::Int(b) | Term::Ext(b) => has_beta_redex(b),
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn normalization_is_idempotent_and_removes_redexes(seed in any::<u64>()) {
        let (t, ty) = random_term(seed);
        prop_assert_eq!(t.type_of().unwrap(), ty.clone());
        let n = normalize(&t);
        prop_assert_eq!(n.type_of().unwrap(), ty);
        prop_assert!(n.has_no_ext_int_redex(), "{}", n);
        prop_assert!(!has_beta_redex(&n), "{}", n);
        let nn = normalize(&n);
        prop_assert!(nn.alpha_equal(&n), "{} vs {}", nn, n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn reduction_order_does_not_matter(seed in any::<u64>()) {
        let (t, _) = random_term(seed);
        let n = normalize(&t);
        if let Some(stepped) = beta_step(&t) {
            prop_assert!(normalize(&stepped).alpha_equal(&n));
        }
    }

    #[test]
    fn printing_round_trips_up_to_normal_form(seed in any::<u64>()) {
        // Quantifier sugar prints `every(x, R, S)` for any restriction and
        // scope, so reparsing may eta-expand them.
        let (t, _) = random_term(seed);
        let sig = common::signature();
        let back = parse_term(&t.to_string(), &sig).unwrap();
        prop_assert!(normalize(&back).alpha_equal(&normalize(&t)), "{} vs {}", back, t);
        let n = normalize(&t);
        let back = parse_term(&n.to_string(), &sig).unwrap();
        prop_assert!(normalize(&back).alpha_equal(&n), "{} vs {}", back, n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn random_scenarios_yield_linear_proofs(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ps = random_premises(&mut rng);
        let goal = SemRef::main("f");
        let d = derive(&ps, &goal, &Limits::default()).unwrap();
        prop_assert!(!d.limit_hit);
        for (m, p) in &d.proofs {
            prop_assert!(m.free_vars().is_empty());
            check_proof(p, &reading_sequent(&ps, &goal, m)).map_err(|e| TestCaseError::fail(e.to_string()))?;
        }
        let found: Vec<Term> = d.readings.iter().map(|r| r.meaning.clone()).collect();
        let mut reversed = ps.clone();
        reversed.reverse();
        let other: Vec<Term> = derive(&reversed, &goal, &Limits::default()).unwrap().readings.into_iter().map(|r| r.meaning).collect();
        prop_assert_eq!(keys(&found), keys(&other));
        let oracle = oracle_enumerate(&ps, &goal, 64).unwrap();
        prop_assert_eq!(keys(&found), keys(&oracle));
    }
}

fn random_fstructure(seed: u64) -> String {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attrs = ["SUBJ", "OBJ", "OBL-WITH", "COMP"];
    let mut n = 0;
    fn node(rng: &mut ChaCha8Rng, n: &mut usize, depth: usize, attrs: &[&str]) -> String {
        *n += 1;
        let label = format!("n{n}");
        let mut parts = vec![format!(
            "PRED '{}'",
            ["leave", "seek", "Bill", "unicorn"].choose(rng).unwrap()
        )];
        if rng.gen_bool(0.5) {
            parts.push(format!("SPEC '{}'", ["a", "every"].choose(rng).unwrap()));
        }
        if depth > 0 {
            let k = rng.gen_range(0..3);
            for a in attrs.choose_multiple(rng, k) {
                parts.push(format!("{a} {}", node(rng, n, depth - 1, attrs)));
            }
        }
        format!("{label}:[{}]", parts.join(", "))
    }
    node(&mut rng, &mut n, 3, &attrs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn fstructure_print_parse_round_trip(seed in any::<u64>()) {
        let src = random_fstructure(seed);
        let fs = parse_fstructure(&src).unwrap();
        prop_assert_eq!(fs.to_string(), src.clone());
        let again = parse_fstructure(&fs.to_string()).unwrap();
        prop_assert_eq!(again.to_string(), fs.to_string());
        let via_json = parse_fstructure_json(&fs.to_json().to_string()).unwrap();
        prop_assert_eq!(via_json.to_json(), fs.to_json());
    }

    #[test]
    fn path_resolution_composes(seed in any::<u64>()) {
        let fs = parse_fstructure(&random_fstructure(seed)).unwrap();
        // Every path a.b from the root resolves to b from the node at a.
        let root = fs.root().clone();
        for (attr, v) in &fs.node(&root).unwrap().attrs {
            if let glue_core::fstructure::Value::Node(mid) = v {
                for (attr2, v2) in &fs.node(mid).unwrap().attrs {
                    if let glue_core::fstructure::Value::Node(_) = v2 {
                        let direct = fs.resolve_path(&root, &[attr.as_str(), attr2.as_str()]).unwrap();
                        let stepwise = fs.resolve_path(&fs.resolve_path(&root, &[attr.as_str()]).unwrap(), &[attr2.as_str()]).unwrap();
                        prop_assert_eq!(direct, stepwise);
                    }
                }
            }
        }
    }
}
