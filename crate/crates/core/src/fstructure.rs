//! F-structures: labeled attribute-value matrices, and references to their
//! semantic projections.
//!
//! The bracketed format mirrors the usual AVM notation:
//!
//! ```text
//! f:[PRED 'seek', SUBJ g:[PRED 'Bill'], OBJ h:[SPEC 'a', PRED 'unicorn']]
//! ```
//!
//! Quoted values are atomic symbols, `label:[...]` introduces a node and a
//! bare label refers back to a node defined elsewhere (re-entrancy). Commas
//! between features are optional.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use serde_json::{json, Map, Value as Json};
use thiserror::Error;

use crate::syntax::{Cursor, ParseError, Tok};

pub type Label = Arc<str>;

#[derive(Debug, Error)]
pub enum FsError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error("label `{0}` is defined more than once")]
    DuplicateLabel(Label),
    #[error("attribute `{attr}` appears twice in node `{label}`")]
    DuplicateAttribute { label: Label, attr: String },
    #[error("f-structure is cyclic through node `{0}`")]
    CyclicStructure(Label),
    #[error("reference to undefined label `{0}`")]
    UnknownLabel(Label),
    #[error("node `{label}` has no attribute `{attr}`")]
    MissingAttribute { label: Label, attr: String },
    #[error("attribute `{attr}` of node `{label}` is atomic, so the path cannot continue")]
    AtomicValueOnPath { label: Label, attr: String },
    #[error("malformed JSON f-structure: {0}")]
    Json(String),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Atom(String),
    Node(Label),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub label: Label,
    pub attrs: IndexMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FStructure {
    root: Label,
    nodes: IndexMap<Label, Node>,
}

/// Which facet of a node's semantic projection is addressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Facet {
    Main,
    Var,
    Restr,
}

/// A reference `f.sig`, `h.sig.VAR` or `h.sig.RESTR`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemRef {
    pub node: Label,
    pub facet: Facet,
}

impl SemRef {
    pub fn main(node: impl Into<Label>) -> Self {
        SemRef {
            node: node.into(),
            facet: Facet::Main,
        }
    }

    pub fn with_facet(node: impl Into<Label>, facet: Facet) -> Self {
        SemRef {
            node: node.into(),
            facet,
        }
    }
}

impl fmt::Display for SemRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.facet {
            Facet::Main => write!(f, "{}.sig", self.node),
            Facet::Var => write!(f, "{}.sig.VAR", self.node),
            Facet::Restr => write!(f, "{}.sig.RESTR", self.node),
        }
    }
}

impl Facet {
    pub fn from_name(name: &str) -> Option<Facet> {
        match name.to_ascii_uppercase().as_str() {
            "VAR" => Some(Facet::Var),
            "RESTR" => Some(Facet::Restr),
            _ => None,
        }
    }
}

impl FStructure {
    pub fn root(&self) -> &Label {
        &self.root
    }

    pub fn node(&self, label: &str) -> Option<&Node> {
        self.nodes.get(label)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, label: &str, attr: &str) -> Option<&Value> {
        self.nodes.get(label)?.attrs.get(attr)
    }

    /// Follows `path` from `start`, one attribute per step.
    pub fn resolve_path<S: AsRef<str>>(&self, start: &str, path: &[S]) -> Result<Label, FsError> {
        let mut here = self
            .nodes
            .get_key_value(start)
            .map(|(k, _)| k.clone())
            .ok_or_else(|| FsError::UnknownLabel(start.into()))?;
        for attr in path {
            let attr = attr.as_ref();
            match self.get(&here, attr) {
                None => {
                    return Err(FsError::MissingAttribute {
                        label: here,
                        attr: attr.to_string(),
                    })
                }
                Some(Value::Atom(_)) => {
                    return Err(FsError::AtomicValueOnPath {
                        label: here,
                        attr: attr.to_string(),
                    })
                }
                Some(Value::Node(next)) => here = next.clone(),
            }
        }
        Ok(here)
    }

    fn from_parts(root: Label, nodes: IndexMap<Label, Node>) -> Result<Self, FsError> {
        for node in nodes.values() {
            for v in node.attrs.values() {
                if let Value::Node(l) = v {
                    if !nodes.contains_key(l) {
                        return Err(FsError::UnknownLabel(l.clone()));
                    }
                }
            }
        }
        let fs = FStructure { root, nodes };
        fs.check_acyclic()?;
        Ok(fs)
    }

    fn check_acyclic(&self) -> Result<(), FsError> {
        fn visit(
            fs: &FStructure,
            label: &Label,
            on_path: &mut Vec<Label>,
            done: &mut HashSet<Label>,
        ) -> Result<(), FsError> {
            if done.contains(label) {
                return Ok(());
            }
            if on_path.contains(label) {
                return Err(FsError::CyclicStructure(label.clone()));
            }
            on_path.push(label.clone());
            for v in fs.nodes[label].attrs.values() {
                if let Value::Node(next) = v {
                    visit(fs, next, on_path, done)?;
                }
            }
            on_path.pop();
            done.insert(label.clone());
            Ok(())
        }
        let mut done = HashSet::new();
        for label in self.nodes.keys() {
            visit(self, label, &mut Vec::new(), &mut done)?;
        }
        Ok(())
    }

    /// JSON mirror: `{"label": .., "attrs": {..}}`, with `{"ref": ..}` for
    /// re-entrant nodes.
    pub fn to_json(&self) -> Json {
        fn node_json(fs: &FStructure, label: &Label, seen: &mut HashSet<Label>) -> Json {
            if !seen.insert(label.clone()) {
                return json!({ "ref": &**label });
            }
            let mut attrs = Map::new();
            for (k, v) in &fs.nodes[label].attrs {
                let jv = match v {
                    Value::Atom(a) => Json::String(a.clone()),
                    Value::Node(l) => node_json(fs, l, seen),
                };
                attrs.insert(k.clone(), jv);
            }
            json!({ "label": &**label, "attrs": attrs })
        }
        node_json(self, &self.root, &mut HashSet::new())
    }
}

impl fmt::Display for FStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write_node(
            fs: &FStructure,
            label: &Label,
            seen: &mut HashSet<Label>,
            f: &mut fmt::Formatter<'_>,
        ) -> fmt::Result {
            if !seen.insert(label.clone()) {
                return f.write_str(label);
            }
            write!(f, "{label}:[")?;
            for (i, (k, v)) in fs.nodes[label].attrs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{k} ")?;
                match v {
                    Value::Atom(a) => write!(f, "'{a}'")?,
                    Value::Node(l) => write_node(fs, l, seen, f)?,
                }
            }
            f.write_str("]")
        }
        write_node(self, &self.root, &mut HashSet::new(), f)
    }
}

/// Parses the bracketed AVM format.
pub fn parse_fstructure(src: &str) -> Result<FStructure, FsError> {
    let mut cur = Cursor::new(src)?;
    let mut reader = AvmReader {
        nodes: IndexMap::new(),
        anon: 0,
    };
    let root = reader.node(&mut cur, None)?;
    cur.finish()?;
    FStructure::from_parts(root, reader.nodes)
}

struct AvmReader {
    nodes: IndexMap<Label, Node>,
    anon: usize,
}

impl AvmReader {
    fn node(&mut self, cur: &mut Cursor, label: Option<Label>) -> Result<Label, FsError> {
        let label = match label {
            Some(l) => l,
            None => {
                if let Tok::Ident(name) = cur.peek().clone() {
                    cur.bump();
                    cur.expect(&Tok::Colon)?;
                    Label::from(name)
                } else {
                    self.anon += 1;
                    Label::from(format!("_{}", self.anon))
                }
            }
        };
        if self.nodes.contains_key(&label) {
            return Err(FsError::DuplicateLabel(label));
        }
        // Reserve the slot so nested duplicates of this label are caught.
        self.nodes.insert(
            label.clone(),
            Node {
                label: label.clone(),
                attrs: IndexMap::new(),
            },
        );
        cur.expect(&Tok::LBrack)?;
        let mut attrs = IndexMap::new();
        while !matches!(cur.peek(), Tok::RBrack) {
            let attr = cur.ident()?;
            let value = match cur.peek().clone() {
                Tok::Quoted(s) => {
                    cur.bump();
                    Value::Atom(s)
                }
                Tok::LBrack => Value::Node(self.node(cur, None)?),
                Tok::Ident(name) => {
                    cur.bump();
                    if cur.eat(&Tok::Colon) {
                        Value::Node(self.node(cur, Some(name.into()))?)
                    } else {
                        Value::Node(name.into())
                    }
                }
                other => return Err(cur.error(format!("expected a value, found {other}")).into()),
            };
            if attrs.contains_key(&attr) {
                return Err(FsError::DuplicateAttribute { label, attr });
            }
            attrs.insert(attr, value);
            cur.eat(&Tok::Comma);
        }
        cur.expect(&Tok::RBrack)?;
        self.nodes.get_mut(&label).expect("reserved above").attrs = attrs;
        Ok(label)
    }
}

/// Parses the JSON mirror format.
pub fn parse_fstructure_json(src: &str) -> Result<FStructure, FsError> {
    let doc: Json = serde_json::from_str(src).map_err(|e| FsError::Json(e.to_string()))?;
    let mut nodes = IndexMap::new();
    let root = json_node(&doc, &mut nodes)?;
    FStructure::from_parts(root, nodes)
}

fn json_node(doc: &Json, nodes: &mut IndexMap<Label, Node>) -> Result<Label, FsError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| FsError::Json("expected an object".into()))?;
    if let Some(r) = obj.get("ref") {
        let r = r
            .as_str()
            .ok_or_else(|| FsError::Json("`ref` must be a string".into()))?;
        return Ok(r.into());
    }
    let label: Label = obj
        .get("label")
        .and_then(Json::as_str)
        .ok_or_else(|| FsError::Json("node without a string `label`".into()))?
        .into();
    if nodes.contains_key(&label) {
        return Err(FsError::DuplicateLabel(label));
    }
    nodes.insert(
        label.clone(),
        Node {
            label: label.clone(),
            attrs: IndexMap::new(),
        },
    );
    let mut attrs = IndexMap::new();
    if let Some(a) = obj.get("attrs") {
        let a = a
            .as_object()
            .ok_or_else(|| FsError::Json("`attrs` must be an object".into()))?;
        for (k, v) in a {
            let value = match v {
                Json::String(s) => Value::Atom(s.clone()),
                Json::Object(_) => Value::Node(json_node(v, nodes)?),
                _ => return Err(FsError::Json(format!("bad value for attribute `{k}`"))),
            };
            attrs.insert(k.clone(), value);
        }
    }
    nodes.get_mut(&label).expect("reserved above").attrs = attrs;
    Ok(label)
}

/// Reads an f-structure file, choosing the format by extension (`.json`
/// for the JSON mirror, anything else for AVM text).
pub fn load_fstructure(path: &Path) -> Result<FStructure, FsError> {
    let text = std::fs::read_to_string(path).map_err(|source| FsError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if path.extension().is_some_and(|e| e == "json") {
        parse_fstructure_json(&text)
    } else {
        parse_fstructure(&text)
    }
}
