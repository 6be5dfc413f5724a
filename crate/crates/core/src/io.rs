//! Graph files: `{"vertices": [..], "edges": [{"src", "dst", "mult"}]}` with
//! `mult` either `"inf"` or a positive integer. Absent pairs have no edges.
//!
//! Emission is canonical (declared vertex order, edges row-major, two-space
//! indentation, trailing newline), so canonical files round-trip exactly.

use std::num::NonZeroU32;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AmpGraph, GraphError, Multiplicity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("cannot read {path}: {reason}")]
    Read { path: String, reason: String },
    #[error("invalid graph JSON: {0}")]
    Json(String),
    #[error("edge {index} refers to undeclared vertex {vertex}")]
    DanglingEdge { index: usize, vertex: String },
    #[error("edge {index} repeats the family {src} -> {dst}")]
    DuplicateFamily { index: usize, src: String, dst: String },
    #[error("edge {index} has invalid multiplicity {value}; expected \"inf\" or a positive integer")]
    InvalidMultiplicity { index: usize, value: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum MultField {
    Count(u64),
    Text(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    src: String,
    dst: String,
    mult: MultField,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRecord {
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeRecord>,
}

fn to_record(g: &AmpGraph) -> GraphRecord {
    let edges = g
        .families()
        .map(|(a, b, m)| EdgeRecord {
            src: g.vertex(a).to_string(),
            dst: g.vertex(b).to_string(),
            mult: match m {
                Multiplicity::Finite(n) => MultField::Count(n.get() as u64),
                _ => MultField::Text("inf".to_string()),
            },
        })
        .collect();
    GraphRecord { vertices: g.vertices().iter().map(|v| v.to_string()).collect(), edges }
}

impl Serialize for AmpGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_record(self).serialize(s)
    }
}

pub fn parse_graph(text: &str) -> Result<AmpGraph, IoError> {
    let rec: GraphRecord = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
    let mut g = AmpGraph::new(&rec.vertices)?;
    for (index, e) in rec.edges.iter().enumerate() {
        for v in [&e.src, &e.dst] {
            if g.index_of(v).is_none() {
                return Err(IoError::DanglingEdge { index, vertex: v.clone() });
            }
        }
        let m = match &e.mult {
            MultField::Text(t) if t == "inf" => Multiplicity::Omega,
            MultField::Count(n) => u32::try_from(*n)
                .ok()
                .and_then(NonZeroU32::new)
                .map(Multiplicity::Finite)
                .ok_or_else(|| IoError::InvalidMultiplicity { index, value: n.to_string() })?,
            MultField::Text(t) => return Err(IoError::InvalidMultiplicity { index, value: format!("{:?}", t) }),
        };
        if !g.mult_by_label(&e.src, &e.dst)?.is_zero() {
            return Err(IoError::DuplicateFamily { index, src: e.src.clone(), dst: e.dst.clone() });
        }
        g.set_mult(&e.src, &e.dst, m)?;
    }
    Ok(g)
}

pub fn read_graph_file(path: &Path) -> Result<AmpGraph, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError::Read { path: path.display().to_string(), reason: e.to_string() })?;
    parse_graph(&text)
}

/// Canonical pretty JSON with a trailing newline.
pub fn emit_graph(g: &AmpGraph) -> String {
    to_pretty(g)
}

/// Pretty JSON plus newline; the one formatting used for every report.
pub fn to_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}
