//! One line per acceptance criterion: `PASS`/`FAIL`, the measured time and
//! the time limit. Exits non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{case, corpus, keys, permutations, random_premises, reading_sequent, Case, TermGen};
use glue_core::fstructure::SemRef;
use glue_core::glue::{parse_formula, Binder, Formula, Projection};
use glue_core::prover::{
    check_proof, derive, derive_readings, oracle_enumerate, prove, prove_theorem, Limits, Proof,
    Rule, Sequent, Witness,
};
use glue_core::term::{normalize, parse_term, Term};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LIMIT_BILL_LEFT: Duration = Duration::from_millis(100);
const LIMIT_EVERY_MAN: Duration = Duration::from_millis(100);
const LIMIT_SEEKS_AL: Duration = Duration::from_millis(500);
const LIMIT_SEEKS_UNICORN: Duration = Duration::from_secs(1);
const LIMIT_CONVERSATION: Duration = Duration::from_secs(5);
const LIMIT_THEOREM: Duration = Duration::from_secs(1);
const LIMIT_PROPERTIES: Duration = Duration::from_secs(60);

const RANDOM_SCENARIOS: u64 = 1_000;
const RANDOM_TERMS: u64 = 10_000;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn term(c: &Case, src: &str) -> Term {
    normalize(&parse_term(src, &c.lexicon.signature).unwrap())
}

/// Derives the case's readings, checks every proof, and compares the
/// reading set with `want` by alpha-equality of normal forms.
fn exact_readings(c: &Case, want: &[&str]) -> Outcome {
    let d = derive(&c.premises, &c.scenario.goal, &Limits::default()).map_err(|e| e.to_string())?;
    ensure(!d.limit_hit, || "depth limit hit".into())?;
    for (m, p) in &d.proofs {
        check_proof(p, &reading_sequent(&c.premises, &c.scenario.goal, m))
            .map_err(|e| e.to_string())?;
    }
    let got: Vec<Term> = d.readings.iter().map(|r| r.meaning.clone()).collect();
    let want: Vec<Term> = want.iter().map(|s| term(c, s)).collect();
    ensure(keys(&got) == keys(&want), || {
        let shown: Vec<String> = got.iter().map(Term::to_string).collect();
        format!(
            "expected {} readings, got {}: {:?}",
            want.len(),
            got.len(),
            shown
        )
    })
}

fn scope_witnesses(p: &Proof, out: &mut Vec<Projection>) {
    if let Rule::ForallLeft {
        principal,
        witness: Witness::Projection(w),
    } = &p.rule
    {
        if let Formula::Forall(Binder::Projection(_), _) = &p.conclusion.context[*principal] {
            out.push(w.clone());
        }
    }
    for c in &p.premises {
        scope_witnesses(c, out);
    }
}

fn criterion_1() -> Outcome {
    exact_readings(&case("bill-left"), &["leave(Bill)"])
}

fn criterion_2() -> Outcome {
    let c = case("every-man-left");
    exact_readings(&c, &["every(z, man(z), leave(z))"])?;
    let d = derive(&c.premises, &c.scenario.goal, &Limits::default()).map_err(|e| e.to_string())?;
    let mut ws = Vec::new();
    for (_, p) in &d.proofs {
        scope_witnesses(p, &mut ws);
    }
    let subject = Projection::Ref(SemRef::main("g"));
    ensure(!ws.contains(&subject), || {
        "a derivation scopes at g.sig".into()
    })
}

fn criterion_3() -> Outcome {
    let c = case("bill-seeks-al");
    exact_readings(&c, &[r"seek(Bill, ^\P:s->e->t. !P(Al))"])?;
    let al: Vec<Formula> = c
        .premises
        .iter()
        .filter(|p| p.to_string() == "h.sig ~> Al")
        .cloned()
        .collect();
    ensure(al.len() == 1, || "no premise h.sig ~> Al".into())?;
    let raised = parse_formula(
        "forall S, P:e->t. (forall x:e. h.sig ~> x -o S ~> P(x)) -o S ~> P(Al)",
        &c.lexicon.signature,
    )
    .map_err(|e| e.to_string())?;
    let seq = Sequent {
        context: al,
        goal: raised,
    };
    let proofs = prove(&seq, &Limits::default()).map_err(|e| e.to_string())?;
    ensure(!proofs.is_empty(), || {
        "type-raised Al is not provable from Al".into()
    })?;
    for p in &proofs {
        check_proof(p, &seq).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    exact_readings(
        &case("bill-seeks-a-unicorn"),
        &[
            r"seek(Bill, ^\Q:s->e->t. a(x, unicorn(x), !Q(x)))",
            r"a(x, unicorn(x), seek(Bill, ^\Q:s->e->t. !Q(x)))",
        ],
    )
}

fn criterion_5() -> Outcome {
    exact_readings(
        &case("conversation"),
        &[
            r"seek(Bill, ^\P:s->e->t. every(u, unicorn(u), a(z, conv-with(z, u), !P(z))))",
            r"seek(Bill, ^\P:s->e->t. a(z, every(u, unicorn(u), conv-with(z, u)), !P(z)))",
            r"every(u, unicorn(u), seek(Bill, ^\P:s->e->t. a(z, conv-with(z, u), !P(z))))",
            r"every(u, unicorn(u), a(z, conv-with(z, u), seek(Bill, ^\P:s->e->t. !P(z))))",
            r"a(z, every(u, unicorn(u), conv-with(z, u)), seek(Bill, ^\P:s->e->t. !P(z)))",
        ],
    )
}

fn criterion_6a() -> Outcome {
    let c = case("bill-left");
    let thm = parse_formula(
        "forall I, Z:e. I ~> Z -o (forall S, P:e->t. (forall x:e. I ~> x -o S ~> P(x)) -o S ~> P(Z))",
        &c.lexicon.signature,
    )
    .map_err(|e| e.to_string())?;
    let p = prove_theorem(&thm, &Limits::default()).map_err(|e| e.to_string())?;
    check_proof(
        &p,
        &Sequent {
            context: vec![],
            goal: thm,
        },
    )
    .map_err(|e| e.to_string())
}

fn criterion_6b() -> Outcome {
    let c = case("bill-seeks-al");
    let context: Vec<Formula> = c
        .premises
        .iter()
        .filter(|p| p.to_string() != "h.sig ~> Al")
        .cloned()
        .collect();
    let goal = parse_formula(
        r"forall Z:e. h.sig ~> Z -o f.sig ~> seek(Bill, ^\R:s->e->t. !R(Z))",
        &c.lexicon.signature,
    )
    .map_err(|e| e.to_string())?;
    let seq = Sequent { context, goal };
    let proofs = prove(&seq, &Limits::default()).map_err(|e| e.to_string())?;
    ensure(!proofs.is_empty(), || "Bill-seeks' is not provable".into())?;
    for p in &proofs {
        check_proof(p, &seq).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let cases = corpus();
    // (i) linearity over the corpus and random scenarios
    let mut checked = 0usize;
    for c in &cases {
        let d =
            derive(&c.premises, &c.scenario.goal, &Limits::default()).map_err(|e| e.to_string())?;
        for (m, p) in &d.proofs {
            check_proof(p, &reading_sequent(&c.premises, &c.scenario.goal, m))
                .map_err(|e| format!("{}: {e}", c.name))?;
            checked += 1;
        }
    }
    let goal = SemRef::main("f");
    for seed in 0..RANDOM_SCENARIOS {
        let ps = random_premises(&mut ChaCha8Rng::seed_from_u64(seed));
        let d = derive(&ps, &goal, &Limits::default()).map_err(|e| e.to_string())?;
        for (m, p) in &d.proofs {
            check_proof(p, &reading_sequent(&ps, &goal, m))
                .map_err(|e| format!("random scenario {seed}: {e}"))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no proofs checked".into())?;
    // (ii) permutation invariance
    for c in &cases {
        let base = derive_readings(&c.premises, &c.scenario.goal, &Limits::default())
            .map_err(|e| e.to_string())?;
        let base: Vec<Term> = base.into_iter().map(|r| r.meaning).collect();
        for perm in permutations(&c.premises) {
            let other = derive_readings(&perm, &c.scenario.goal, &Limits::default())
                .map_err(|e| e.to_string())?;
            let other: Vec<Term> = other.into_iter().map(|r| r.meaning).collect();
            ensure(keys(&other) == keys(&base), || {
                format!("{}: order changes the readings", c.name)
            })?;
        }
    }
    // (iii) normalization
    for seed in 0..RANDOM_TERMS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = TermGen::new(&mut rng);
        let ty = g.random_type();
        let t = g.term(&ty, &mut Vec::new(), 4);
        let n = normalize(&t);
        ensure(n.has_no_ext_int_redex(), || {
            format!("`{n}` keeps a !^ redex")
        })?;
        ensure(normalize(&n).alpha_equal(&n), || {
            format!("normalizing `{n}` again changes it")
        })?;
        ensure(n.type_of().ok() == Some(ty.clone()), || {
            format!("`{n}` changed type")
        })?;
    }
    // (iv) oracle equivalence
    for c in &cases {
        let main = derive_readings(&c.premises, &c.scenario.goal, &Limits::default())
            .map_err(|e| e.to_string())?;
        let main: Vec<Term> = main.into_iter().map(|r| r.meaning).collect();
        let oracle =
            oracle_enumerate(&c.premises, &c.scenario.goal, 64).map_err(|e| e.to_string())?;
        ensure(keys(&main) == keys(&oracle), || {
            format!("{}: oracle disagrees", c.name)
        })?;
    }
    Ok(())
}

type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "1",
            "Bill left: 1 reading leave(Bill)",
            LIMIT_BILL_LEFT,
            criterion_1,
        ),
        (
            "2",
            "Every man left: 1 reading, no scope at g.sig",
            LIMIT_EVERY_MAN,
            criterion_2,
        ),
        (
            "3",
            "Bill seeks Al: 1 reading; type-raised Al provable",
            LIMIT_SEEKS_AL,
            criterion_3,
        ),
        (
            "4",
            "Bill seeks a unicorn: de dicto and de re",
            LIMIT_SEEKS_UNICORN,
            criterion_4,
        ),
        (
            "5",
            "conversation with every unicorn: readings (a)-(e)",
            LIMIT_CONVERSATION,
            criterion_5,
        ),
        (
            "6a",
            "type-raising theorem from empty context",
            LIMIT_THEOREM,
            criterion_6a,
        ),
        (
            "6b",
            "Bill-seeks' from {Bill, seeks}",
            LIMIT_THEOREM,
            criterion_6b,
        ),
        (
            "7",
            "linearity, permutation, normalization, oracle",
            LIMIT_PROPERTIES,
            criterion_7,
        ),
    ];
    let mut failed = 0;
    for (id, what, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(took <= limit, || {
                format!("took {took:.3?}, limit {limit:?}")
            })
        });
        match outcome {
            Ok(()) => println!("PASS [{id}] {what} ({took:.3?} <= {limit:?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL [{id}] {what} ({took:.3?}): {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
