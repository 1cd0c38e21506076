//! Lexical entries, scenarios, and instantiation of templates against an
//! f-structure.
//!
//! Lexicon files hold constant declarations and entries:
//!
//! ```text
//! const leave : e -> t
//!
//! entry left
//!   PRED = leave
//!   glue = forall X:e. (up SUBJ).sig ~> X -o up.sig ~> leave(X)
//! ```
//!
//! Scenario files attach entries to nodes and name the goal:
//!
//! ```text
//! fstructure = f:[PRED 'leave', SUBJ g:[PRED 'Bill']]
//! attach = Bill@g, left@f
//! goal = f.sig
//! ```
//!
//! A value may continue on following lines until the next `key =` line.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::fstructure::{
    load_fstructure, parse_fstructure, FStructure, FsError, Label, SemRef, Value,
};
use crate::glue::{check_wellformed, parse_formula, parse_sem_ref, Formula, GlueError, Projection};
use crate::syntax::ParseError;
use crate::term::{normalize, parse_term, parse_type, Signature, SimpleType, Term};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Glue { line: usize, source: GlueError },
    #[error("entry `{0}` is defined more than once")]
    DuplicateEntry(String),
    #[error("no lexical entry `{0}`")]
    UnknownEntry(String),
    #[error("entry `{entry}` needs {attr} = '{expected}' at node `{node}`, found {found}")]
    PredMismatch {
        entry: String,
        node: Label,
        attr: String,
        expected: String,
        found: String,
    },
    #[error("entry `{entry}` at node `{node}`: {source}")]
    Path {
        entry: String,
        node: Label,
        source: FsError,
    },
    #[error("f-structure: {0}")]
    FStructure(#[from] FsError),
    #[error("instantiated entry `{entry}` is ill formed: {source}")]
    IllFormed { entry: String, source: GlueError },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexicalEntry {
    pub headword: String,
    /// Required atomic attribute values at the attachment node, `PRED` first.
    pub constraints: Vec<(String, String)>,
    pub template: Formula,
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    pub signature: Signature,
    pub entries: Vec<LexicalEntry>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub fs: FStructure,
    pub attachments: Vec<(String, Label)>,
    pub goal: SemRef,
}

/// An instantiated meaning constructor, named after its entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Premise {
    pub name: String,
    pub formula: Formula,
}

/// `key = value` records with continuation lines, paired with the line on
/// which each starts.
fn records(text: &str) -> Result<Vec<(usize, String, String)>, LexiconError> {
    let mut out: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line
            .strip_prefix("const ")
            .or_else(|| line.strip_prefix("entry "))
        {
            let key = &line[..5];
            out.push((i + 1, key.to_string(), rest.trim().to_string()));
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) if is_key(k.trim()) => {
                out.push((i + 1, k.trim().to_string(), v.trim().to_string()))
            }
            _ => match out.last_mut() {
                Some(last) if last.1 != "const" && last.1 != "entry" => {
                    last.2.push('\n');
                    last.2.push_str(line);
                }
                _ => {
                    return Err(LexiconError::Syntax {
                        line: i + 1,
                        message: format!("expected `key = value`, found `{line}`"),
                    })
                }
            },
        }
    }
    Ok(out)
}

fn is_key(k: &str) -> bool {
    !k.is_empty()
        && k.chars()
            .all(|c| c.is_alphanumeric() || c == '-' || c == '_')
}

fn unquote(s: &str) -> &str {
    s.strip_prefix('\'')
        .and_then(|s| s.strip_suffix('\''))
        .unwrap_or(s)
}

fn relocate(line: usize, e: ParseError) -> LexiconError {
    LexiconError::Syntax {
        line: line + e.line - 1,
        message: e.message,
    }
}

/// An entry being read: line, headword, constraints, template.
type Pending = (usize, String, Vec<(String, String)>, Option<Formula>);

impl Lexicon {
    pub fn parse(text: &str) -> Result<Lexicon, LexiconError> {
        let recs = records(text)?;
        let mut signature = Signature::new();
        for (line, key, value) in &recs {
            if key == "const" {
                let (name, ty) = value.split_once(':').ok_or_else(|| LexiconError::Syntax {
                    line: *line,
                    message: "expected `const name : type`".into(),
                })?;
                let ty: SimpleType = parse_type(ty.trim()).map_err(|e| relocate(*line, e))?;
                signature.declare(name.trim(), ty);
            }
        }
        let mut entries: Vec<LexicalEntry> = Vec::new();
        let mut current: Option<Pending> = None;
        let close =
            |cur: Option<Pending>, entries: &mut Vec<LexicalEntry>| -> Result<(), LexiconError> {
                if let Some((line, headword, constraints, template)) = cur {
                    let template = template.ok_or_else(|| LexiconError::Syntax {
                        line,
                        message: format!("entry `{headword}` has no glue template"),
                    })?;
                    if entries.iter().any(|e| e.headword == headword) {
                        return Err(LexiconError::DuplicateEntry(headword));
                    }
                    entries.push(LexicalEntry {
                        headword,
                        constraints,
                        template,
                    });
                }
                Ok(())
            };
        for (line, key, value) in recs {
            match key.as_str() {
                "const" => {}
                "entry" => {
                    close(current.take(), &mut entries)?;
                    current = Some((line, value, Vec::new(), None));
                }
                _ => {
                    let Some(cur) = current.as_mut() else {
                        return Err(LexiconError::Syntax {
                            line,
                            message: format!("`{key}` outside an entry"),
                        });
                    };
                    if key == "glue" {
                        let f =
                            parse_formula(&value, &signature).map_err(|source| match source {
                                GlueError::Syntax(e) => relocate(line, e),
                                source => LexiconError::Glue { line, source },
                            })?;
                        check_wellformed(&f)
                            .map_err(|source| LexiconError::Glue { line, source })?;
                        cur.3 = Some(f);
                    } else {
                        cur.2.push((key, unquote(&value).to_string()));
                    }
                }
            }
        }
        close(current.take(), &mut entries)?;
        Ok(Lexicon { signature, entries })
    }

    pub fn load(path: &Path) -> Result<Lexicon, LexiconError> {
        Lexicon::parse(&read(path)?)
    }

    pub fn entry(&self, headword: &str) -> Option<&LexicalEntry> {
        self.entries.iter().find(|e| e.headword == headword)
    }
}

fn read(path: &Path) -> Result<String, LexiconError> {
    std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl Scenario {
    /// Parses a scenario; `base` resolves an `fstructure-file` key.
    pub fn parse(text: &str, name: &str, base: Option<&Path>) -> Result<Scenario, LexiconError> {
        let mut name = name.to_string();
        let mut fs = None;
        let mut attachments = Vec::new();
        let mut goal = None;
        for (line, key, value) in records(text)? {
            match key.as_str() {
                "name" => name = value,
                "fstructure" => {
                    fs = Some(parse_fstructure(&value).map_err(|e| match e {
                        FsError::Syntax(p) => relocate(line, p),
                        other => LexiconError::FStructure(other),
                    })?)
                }
                "fstructure-file" => {
                    let p: PathBuf = base
                        .map(|b| b.join(&value))
                        .unwrap_or_else(|| PathBuf::from(&value));
                    fs = Some(load_fstructure(&p)?);
                }
                "attach" => {
                    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (word, node) =
                            item.rsplit_once('@').ok_or_else(|| LexiconError::Syntax {
                                line,
                                message: format!("attachment `{item}` is not `entry@node`"),
                            })?;
                        attachments.push((word.trim().to_string(), Label::from(node.trim())));
                    }
                }
                "goal" => goal = Some(parse_sem_ref(&value).map_err(|e| relocate(line, e))?),
                other => {
                    return Err(LexiconError::Syntax {
                        line,
                        message: format!("unknown scenario key `{other}`"),
                    })
                }
            }
        }
        let fs = fs.ok_or_else(|| LexiconError::Syntax {
            line: 0,
            message: "scenario has no f-structure".into(),
        })?;
        let goal = goal.unwrap_or_else(|| SemRef::main(fs.root().clone()));
        Ok(Scenario {
            name,
            fs,
            attachments,
            goal,
        })
    }

    pub fn load(path: &Path) -> Result<Scenario, LexiconError> {
        let text = read(path)?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Scenario::parse(&text, &stem, path.parent())
    }
}

/// Resolves the template's `up` paths at `node`, after checking the entry's
/// attribute constraints.
pub fn instantiate(
    entry: &LexicalEntry,
    node: &str,
    fs: &FStructure,
) -> Result<Formula, LexiconError> {
    let label: Label = node.into();
    if fs.node(node).is_none() {
        return Err(LexiconError::Path {
            entry: entry.headword.clone(),
            node: label,
            source: FsError::UnknownLabel(node.into()),
        });
    }
    for (attr, expected) in &entry.constraints {
        let found = match fs.get(node, attr) {
            Some(Value::Atom(a)) if a == expected => continue,
            Some(Value::Atom(a)) => format!("'{a}'"),
            Some(Value::Node(l)) => format!("node `{l}`"),
            None => "nothing".to_string(),
        };
        return Err(LexiconError::PredMismatch {
            entry: entry.headword.clone(),
            node: label,
            attr: attr.clone(),
            expected: expected.clone(),
            found,
        });
    }
    let mut failure = None;
    let out = entry.template.map_atoms(&mut |a| {
        let mut a = a.clone();
        if let Projection::Up { path, facet } = &a.proj {
            match fs.resolve_path(node, path) {
                Ok(target) => a.proj = Projection::Ref(SemRef::with_facet(target, *facet)),
                Err(e) => {
                    failure.get_or_insert(e);
                }
            }
        }
        a
    });
    if let Some(source) = failure {
        return Err(LexiconError::Path {
            entry: entry.headword.clone(),
            node: label,
            source,
        });
    }
    check_wellformed(&out).map_err(|source| LexiconError::IllFormed {
        entry: entry.headword.clone(),
        source,
    })?;
    Ok(out)
}

/// The premise multiset of a scenario. Top-level tensors of a template are
/// split into separate premises.
pub fn premises(scenario: &Scenario, lexicon: &Lexicon) -> Result<Vec<Premise>, LexiconError> {
    let mut out = Vec::new();
    for (word, node) in &scenario.attachments {
        let entry = lexicon
            .entry(word)
            .ok_or_else(|| LexiconError::UnknownEntry(word.clone()))?;
        let f = instantiate(entry, node, &scenario.fs)?;
        let mut parts = Vec::new();
        split_tensor(f, &mut parts);
        out.extend(parts.into_iter().map(|formula| Premise {
            name: word.clone(),
            formula,
        }));
    }
    Ok(out)
}

fn split_tensor(f: Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Tensor(a, b) => {
            split_tensor(*a, out);
            split_tensor(*b, out);
        }
        f => out.push(f),
    }
}

/// Reads a golden readings file: one term per line, `#` comments and blank
/// lines ignored. Terms come back normalized.
pub fn parse_expected(text: &str, sig: &Signature) -> Result<Vec<Term>, LexiconError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let t = parse_term(line, sig).map_err(|e| relocate(i + 1, e))?;
        let ty = t.type_of().map_err(|e| LexiconError::Syntax {
            line: i + 1,
            message: e.to_string(),
        })?;
        if ty != SimpleType::T {
            return Err(LexiconError::Syntax {
                line: i + 1,
                message: format!("reading has type {ty}, expected t"),
            });
        }
        out.push(normalize(&t));
    }
    Ok(out)
}

pub fn load_expected(path: &Path, sig: &Signature) -> Result<Vec<Term>, LexiconError> {
    parse_expected(&read(path)?, sig)
}

/// The lexicon a scenario directory uses: `lexicon.lex` in the directory
/// itself or in its parent.
pub fn find_lexicon(dir: &Path) -> Option<PathBuf> {
    [Some(dir), dir.parent()]
        .into_iter()
        .flatten()
        .map(|d| d.join("lexicon.lex"))
        .find(|p| p.is_file())
}
