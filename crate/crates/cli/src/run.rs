use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use glue_core::glue::Formula;
use glue_core::lexicon::{find_lexicon, premises, Lexicon, Scenario};
use glue_core::prover::{derive, oracle_enumerate, Limits};
use glue_core::term::Term;
use serde::Serialize;
use serde_json::Value as Json;

use crate::{SearchOpts, EXIT_ERROR, EXIT_NO_READINGS, EXIT_OK};

pub struct Loaded {
    pub lexicon: Lexicon,
    pub scenario: Scenario,
    pub premises: Vec<Formula>,
}

pub fn scenario_file(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join("scenario.scn")
    } else {
        path.to_path_buf()
    }
}

pub fn load(path: &Path, lexicon: Option<&Path>) -> Result<Loaded> {
    let file = scenario_file(path);
    let scenario = Scenario::load(&file).with_context(|| format!("loading {}", file.display()))?;
    let lex_path = match lexicon {
        Some(p) => p.to_path_buf(),
        None => {
            let dir = file.parent().unwrap_or(Path::new("."));
            find_lexicon(dir).ok_or_else(|| {
                anyhow!(
                    "no lexicon.lex next to {}; pass one explicitly",
                    file.display()
                )
            })?
        }
    };
    let lexicon =
        Lexicon::load(&lex_path).with_context(|| format!("loading {}", lex_path.display()))?;
    let premises = premises(&scenario, &lexicon)
        .with_context(|| format!("instantiating {}", scenario.name))?
        .into_iter()
        .map(|p| p.formula)
        .collect();
    Ok(Loaded {
        lexicon,
        scenario,
        premises,
    })
}

#[derive(Serialize)]
pub struct OracleCheck {
    pub agrees: bool,
    /// Readings the oracle found and the prover did not.
    pub missing: Vec<String>,
    /// Readings the prover found and the oracle did not.
    pub extra: Vec<String>,
}

#[derive(Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub readings: Vec<String>,
    pub count: usize,
    #[serde(skip)]
    pub meanings: Vec<Term>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traces: Option<Vec<Json>>,
    #[serde(skip)]
    pub text_traces: Vec<String>,
    pub elapsed_ms: f64,
    pub limit_hit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

/// Terms in `a` with no alpha-equal counterpart in `b`.
pub fn difference(a: &[Term], b: &[Term]) -> Vec<String> {
    let keys: Vec<String> = b.iter().map(Term::canonical).collect();
    a.iter()
        .filter(|t| !keys.contains(&t.canonical()))
        .map(Term::to_string)
        .collect()
}

pub fn report(loaded: &Loaded, trace: bool, opts: SearchOpts) -> Result<RunReport> {
    let limits = Limits::with_depth(opts.max_depth);
    let start = Instant::now();
    let d = derive(&loaded.premises, &loaded.scenario.goal, &limits)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let meanings: Vec<Term> = d.readings.iter().map(|r| r.meaning.clone()).collect();
    let oracle = if opts.oracle {
        let found = oracle_enumerate(&loaded.premises, &loaded.scenario.goal, opts.max_depth)?;
        let missing = difference(&found, &meanings);
        let extra = difference(&meanings, &found);
        Some(OracleCheck {
            agrees: missing.is_empty() && extra.is_empty(),
            missing,
            extra,
        })
    } else {
        None
    };
    Ok(RunReport {
        scenario: loaded.scenario.name.clone(),
        readings: meanings.iter().map(Term::to_string).collect(),
        count: meanings.len(),
        meanings,
        traces: trace.then(|| d.readings.iter().map(|r| r.proof.to_json()).collect()),
        text_traces: if trace {
            d.readings.iter().map(|r| r.proof.to_text()).collect()
        } else {
            Vec::new()
        },
        elapsed_ms,
        limit_hit: d.limit_hit,
        oracle,
    })
}

pub fn render_text(r: &RunReport) -> String {
    let mut out = format!("scenario: {}\nreadings: {}\n", r.scenario, r.count);
    for (i, reading) in r.readings.iter().enumerate() {
        out.push_str(&format!("  {reading}\n"));
        if let Some(t) = r.text_traces.get(i) {
            for line in t.lines() {
                out.push_str(&format!("      {line}\n"));
            }
        }
    }
    if let Some(o) = &r.oracle {
        if o.agrees {
            out.push_str("oracle: agrees\n");
        } else {
            out.push_str("oracle: DISAGREES\n");
            for m in &o.missing {
                out.push_str(&format!("  - {m}\n"));
            }
            for e in &o.extra {
                out.push_str(&format!("  + {e}\n"));
            }
        }
    }
    out
}

pub fn main(
    path: &Path,
    lexicon: Option<&Path>,
    trace: bool,
    json: bool,
    count_only: bool,
    opts: SearchOpts,
) -> u8 {
    let r = match load(path, lexicon).and_then(|l| report(&l, trace, opts)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_ERROR;
        }
    };
    if r.limit_hit {
        eprintln!(
            "warning: depth limit {} reached on some branch; readings may be incomplete",
            opts.max_depth
        );
    }
    if count_only {
        crate::emit(&format!("{}\n", r.count));
    } else if json {
        crate::emit(&format!(
            "{}\n",
            serde_json::to_string_pretty(&r).expect("report serializes")
        ));
    } else {
        crate::emit(&render_text(&r));
    }
    match &r.oracle {
        Some(o) if !o.agrees => {
            eprintln!("error: the oracle disagrees with the prover");
            EXIT_ERROR
        }
        _ if r.count == 0 => EXIT_NO_READINGS,
        _ => EXIT_OK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use glue_core::term::SimpleType;

    fn c(name: &str) -> Term {
        Term::constant(name, SimpleType::T)
    }

    #[test]
    fn difference_is_by_alpha_equality() {
        assert_eq!(
            difference(&[c("p"), c("q")], &[c("q")]),
            vec!["p".to_string()]
        );
        assert!(difference(&[], &[c("q")]).is_empty());
    }

    #[test]
    fn text_rendering() {
        let r = RunReport {
            scenario: "s".into(),
            readings: vec!["p".into()],
            count: 1,
            meanings: vec![c("p")],
            traces: None,
            text_traces: vec!["[axiom] a\n".into()],
            elapsed_ms: 0.0,
            limit_hit: false,
            oracle: Some(OracleCheck {
                agrees: false,
                missing: vec!["q".into()],
                extra: vec![],
            }),
        };
        assert_eq!(
            render_text(&r),
            "scenario: s\nreadings: 1\n  p\n      [axiom] a\noracle: DISAGREES\n  - q\n"
        );
    }
}
