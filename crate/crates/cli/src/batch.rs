use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use glue_core::lexicon::load_expected;
use rayon::prelude::*;
use serde::Serialize;

use crate::run::{difference, load, report};
use crate::{SearchOpts, EXIT_ERROR, EXIT_OK};

#[derive(Serialize)]
struct Outcome {
    scenario: String,
    passed: bool,
    /// Expected readings that were not derived.
    missing: Vec<String>,
    /// Derived readings that were not expected.
    unexpected: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// Scenario directories directly under `dir`, plus `dir` itself if it is
/// one, in path order.
fn scenario_dirs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    if dir.join("scenario.scn").is_file() {
        out.push(dir.to_path_buf());
    }
    for entry in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let p = entry?.path();
        if p.join("scenario.scn").is_file() {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn check(dir: &Path, opts: SearchOpts) -> Outcome {
    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let failed = |error: String| Outcome {
        scenario: name.clone(),
        passed: false,
        missing: vec![],
        unexpected: vec![],
        error: Some(error),
    };
    let loaded = match load(dir, None) {
        Ok(l) => l,
        Err(e) => return failed(format!("{e:#}")),
    };
    let expected_path = dir.join("expected");
    let expected = match load_expected(&expected_path, &loaded.lexicon.signature) {
        Ok(t) => t,
        Err(e) => return failed(format!("cannot parse {}: {e}", expected_path.display())),
    };
    let r = match report(&loaded, false, opts) {
        Ok(r) => r,
        Err(e) => return failed(format!("{e:#}")),
    };
    if let Some(o) = r.oracle.as_ref().filter(|o| !o.agrees) {
        return failed(format!(
            "oracle disagrees: missing {:?}, extra {:?}",
            o.missing, o.extra
        ));
    }
    let derived = &r.meanings;
    let missing = difference(&expected, derived);
    let unexpected = difference(derived, &expected);
    let passed = missing.is_empty() && unexpected.is_empty() && expected.len() == derived.len();
    Outcome {
        scenario: name,
        passed,
        missing,
        unexpected,
        error: r.limit_hit.then(|| "depth limit reached".to_string()),
    }
}

fn render(o: &Outcome) -> String {
    let mut out = format!(
        "{} {}\n",
        if o.passed { "PASS" } else { "FAIL" },
        o.scenario
    );
    if let Some(e) = &o.error {
        out.push_str(&format!("  error: {e}\n"));
    }
    for m in &o.missing {
        out.push_str(&format!("  - {m}\n"));
    }
    for u in &o.unexpected {
        out.push_str(&format!("  + {u}\n"));
    }
    out
}

pub fn main(dir: &Path, json: bool, opts: SearchOpts) -> u8 {
    let dirs = match scenario_dirs(dir) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_ERROR;
        }
    };
    let outcomes: Vec<Outcome> = dirs.par_iter().map(|d| check(d, opts)).collect();
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    if json {
        crate::emit(&format!(
            "{}\n",
            serde_json::to_string_pretty(&outcomes).expect("outcomes serialize")
        ));
    } else {
        let mut out = String::new();
        for o in &outcomes {
            out.push_str(&render(o));
        }
        out.push_str(&format!(
            "{} scenarios, {} passed, {} failed\n",
            outcomes.len(),
            outcomes.len() - failed,
            failed
        ));
        crate::emit(&out);
    }
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_ERROR
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_scenario_directories_in_order() {
        let tmp = tempfile::tempdir().unwrap();
        for d in ["b", "a", "not-a-scenario"] {
            std::fs::create_dir(tmp.path().join(d)).unwrap();
        }
        for d in ["b", "a"] {
            std::fs::write(tmp.path().join(d).join("scenario.scn"), "").unwrap();
        }
        let found = scenario_dirs(tmp.path()).unwrap();
        assert_eq!(found, vec![tmp.path().join("a"), tmp.path().join("b")]);
        assert!(scenario_dirs(&tmp.path().join("missing")).is_err());
    }

    #[test]
    fn render_marks_failures() {
        let o = Outcome {
            scenario: "x".into(),
            passed: false,
            missing: vec!["p".into()],
            unexpected: vec!["q".into()],
            error: None,
        };
        assert_eq!(render(&o), "FAIL x\n  - p\n  + q\n");
    }
}
