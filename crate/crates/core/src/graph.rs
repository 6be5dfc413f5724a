//! Finite directed graphs with amplified edge multiplicities.
//!
//! An [`AmpGraph`] stores one [`Multiplicity`] per ordered vertex pair rather
//! than individual edges, since every construction here only ever looks at
//! edge *families*. Vertex order is insertion order and every operation that
//! returns a graph or a vertex set keeps it.

use std::borrow::Borrow;
use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroU32;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Default bound on the vertex count accepted by [`AmpGraph::enumerate_hereditary`].
pub const DEFAULT_ENUMERATION_BOUND: usize = 20;

/// Hard ceiling for hereditary enumeration; subsets are tracked as `u64` masks.
pub const MAX_ENUMERATION_BOUND: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex label must be nonempty")]
    EmptyLabel,
    #[error("duplicate vertex label `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex set {0:?} is not hereditary")]
    NotHereditary(Vec<String>),
    #[error("graph is not amplified")]
    NotAmplified,
    #[error("edges {0} -> {1} already exist")]
    DirectEdgeExists(String, String),
    #[error("no path of length at least 2 from {0} to {1}")]
    NoLongPath(String, String),
    #[error("graph has {count} vertices, enumeration bound is {bound}")]
    BoundExceeded { count: usize, bound: usize },
}

/// A vertex label, unique within its graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(Arc<str>);

impl VertexId {
    pub fn new(label: &str) -> Result<Self, GraphError> {
        if label.is_empty() {
            return Err(GraphError::EmptyLabel);
        }
        Ok(VertexId(Arc::from(label)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for VertexId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        VertexId::new(&s).map_err(serde::de::Error::custom)
    }
}

/// Number of parallel edges from one vertex to another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Multiplicity {
    #[default]
    Zero,
    Finite(NonZeroU32),
    /// Countably infinitely many parallel edges.
    Omega,
}

impl Multiplicity {
    pub fn finite(n: u32) -> Self {
        NonZeroU32::new(n).map_or(Multiplicity::Zero, Multiplicity::Finite)
    }

    pub fn is_zero(self) -> bool {
        self == Multiplicity::Zero
    }
}

/// Result of [`AmpGraph::classify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub amplified: bool,
    pub acyclic: bool,
    pub sinks: VertexSet,
    pub sources: VertexSet,
}

/// A set of vertices of one graph, kept in that graph's vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<VertexId>);

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &str) -> bool {
        self.0.iter().any(|x| x.as_str() == v)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, VertexId> {
        self.0.iter()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.0.iter().map(VertexId::as_str).collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a VertexId;
    type IntoIter = std::slice::Iter<'a, VertexId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Square boolean matrix of path existence (length >= 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    n: usize,
    reach: Vec<bool>,
}

impl Reachability {
    pub fn has_path(&self, from: usize, to: usize) -> bool {
        self.reach[from * self.n + to]
    }
}

/// A finite directed graph whose edges are grouped into families by
/// (source, range) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmpGraph {
    vertices: Vec<VertexId>,
    index: BTreeMap<VertexId, usize>,
    mult: Vec<Multiplicity>,
}

impl AmpGraph {
    /// Edgeless graph on the given labels.
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self, GraphError> {
        let mut vertices = Vec::with_capacity(labels.len());
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            let v = VertexId::new(l.as_ref())?;
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(l.as_ref().to_string()));
            }
            vertices.push(v);
        }
        let n = vertices.len();
        Ok(AmpGraph { vertices, index, mult: vec![Multiplicity::Zero; n * n] })
    }

    /// Amplified graph with an Omega family for every listed pair.
    pub fn amplified<S: AsRef<str>>(labels: &[S], families: &[(&str, &str)]) -> Result<Self, GraphError> {
        let mut g = AmpGraph::new(labels)?;
        for (s, d) in families {
            g.set_mult(s, d, Multiplicity::Omega)?;
        }
        Ok(g)
    }

    pub fn set_mult(&mut self, src: &str, dst: &str, m: Multiplicity) -> Result<(), GraphError> {
        let (i, j) = (self.require(src)?, self.require(dst)?);
        let n = self.n();
        self.mult[i * n + j] = m;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &VertexId {
        &self.vertices[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize, GraphError> {
        self.index_of(label).ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub fn mult(&self, src: usize, dst: usize) -> Multiplicity {
        self.mult[src * self.n() + dst]
    }

    pub fn mult_by_label(&self, src: &str, dst: &str) -> Result<Multiplicity, GraphError> {
        Ok(self.mult(self.require(src)?, self.require(dst)?))
    }

    /// Nonzero families in row-major (source, range) vertex order.
    pub fn families(&self) -> impl Iterator<Item = (usize, usize, Multiplicity)> + '_ {
        let n = self.n();
        (0..n * n).filter_map(move |k| {
            let m = self.mult[k];
            (!m.is_zero()).then_some((k / n, k % n, m))
        })
    }

    pub fn family_count(&self) -> usize {
        self.families().count()
    }

    pub fn is_amplified(&self) -> bool {
        self.mult.iter().all(|m| matches!(m, Multiplicity::Zero | Multiplicity::Omega))
    }

    pub fn is_sink(&self, i: usize) -> bool {
        (0..self.n()).all(|j| self.mult(i, j).is_zero())
    }

    pub fn is_source(&self, i: usize) -> bool {
        (0..self.n()).all(|j| self.mult(j, i).is_zero())
    }

    /// Transitive closure by Warshall's algorithm over the edge relation.
    pub fn reachability(&self) -> Reachability {
        let n = self.n();
        let mut reach: Vec<bool> = self.mult.iter().map(|m| !m.is_zero()).collect();
        for k in 0..n {
            for i in 0..n {
                if !reach[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if reach[k * n + j] {
                        reach[i * n + j] = true;
                    }
                }
            }
        }
        Reachability { n, reach }
    }

    pub fn is_acyclic(&self) -> bool {
        let r = self.reachability();
        (0..self.n()).all(|i| !r.has_path(i, i))
    }

    pub fn classify(&self) -> Classification {
        let n = self.n();
        Classification {
            amplified: self.is_amplified(),
            acyclic: self.is_acyclic(),
            sinks: self.set_from_indices((0..n).filter(|&i| self.is_sink(i))),
            sources: self.set_from_indices((0..n).filter(|&i| self.is_source(i))),
        }
    }

    /// Vertex set from labels, reordered into vertex order.
    pub fn vertex_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<VertexSet, GraphError> {
        let mut idx = Vec::with_capacity(labels.len());
        for l in labels {
            idx.push(self.require(l.as_ref())?);
        }
        Ok(self.set_from_indices(idx))
    }

    pub fn set_from_indices<I: IntoIterator<Item = usize>>(&self, idx: I) -> VertexSet {
        let mut idx: Vec<usize> = idx.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        VertexSet(idx.into_iter().map(|i| self.vertices[i].clone()).collect())
    }

    fn indices_of(&self, set: &VertexSet) -> Result<Vec<usize>, GraphError> {
        set.iter().map(|v| self.require(v.as_str())).collect()
    }

    /// Every vertex reachable from `v` by a path of length >= 1.
    pub fn reachable_set(&self, v: &str) -> Result<VertexSet, GraphError> {
        let i = self.require(v)?;
        let r = self.reachability();
        Ok(self.set_from_indices((0..self.n()).filter(|&j| r.has_path(i, j))))
    }

    pub fn hereditary_closure(&self, set: &VertexSet) -> Result<VertexSet, GraphError> {
        let idx = self.indices_of(set)?;
        let r = self.reachability();
        let n = self.n();
        Ok(self.set_from_indices(
            (0..n).filter(|&j| idx.contains(&j) || idx.iter().any(|&i| r.has_path(i, j))),
        ))
    }

    pub fn is_hereditary(&self, set: &VertexSet) -> Result<bool, GraphError> {
        let idx = self.indices_of(set)?;
        let n = self.n();
        Ok(idx.iter().all(|&i| (0..n).all(|j| self.mult(i, j).is_zero() || idx.contains(&j))))
    }

    /// All hereditary subsets, sorted by size and then lexicographically by
    /// vertex position.
    pub fn enumerate_hereditary(&self, bound: usize) -> Result<Vec<VertexSet>, GraphError> {
        let n = self.n();
        let bound = bound.min(MAX_ENUMERATION_BOUND);
        if n > bound {
            return Err(GraphError::BoundExceeded { count: n, bound });
        }
        let r = self.reachability();
        let down: Vec<u64> = (0..n)
            .map(|i| (0..n).filter(|&j| r.has_path(i, j)).fold(1u64 << i, |m, j| m | 1 << j))
            .collect();
        let up: Vec<u64> = (0..n)
            .map(|j| (0..n).filter(|&i| r.has_path(i, j)).fold(1u64 << j, |m, i| m | 1 << i))
            .collect();

        let mut masks = Vec::new();
        // Decide each vertex in order; including v forces everything below it
        // in, excluding v forces everything above it out.
        fn walk(v: usize, n: usize, inc: u64, exc: u64, down: &[u64], up: &[u64], out: &mut Vec<u64>) {
            if v == n {
                out.push(inc);
                return;
            }
            let bit = 1u64 << v;
            if inc & bit != 0 || exc & bit != 0 {
                walk(v + 1, n, inc, exc, down, up, out);
                return;
            }
            if down[v] & exc == 0 {
                walk(v + 1, n, inc | down[v], exc, down, up, out);
            }
            if up[v] & inc == 0 {
                walk(v + 1, n, inc, exc | up[v], down, up, out);
            }
        }
        walk(0, n, 0, 0, &down, &up, &mut masks);

        let mut sets: Vec<Vec<usize>> =
            masks.into_iter().map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(sets.into_iter().map(|s| self.set_from_indices(s)).collect())
    }

    /// The graph with `remove` deleted, together with every family touching it.
    pub fn quotient(&self, remove: &VertexSet) -> Result<AmpGraph, GraphError> {
        if !self.is_hereditary(remove)? {
            return Err(GraphError::NotHereditary(remove.labels().iter().map(|s| s.to_string()).collect()));
        }
        let keep: Vec<usize> = (0..self.n()).filter(|&i| !remove.contains(self.vertices[i].as_str())).collect();
        Ok(self.induced(&keep))
    }

    /// Full subgraph on the given vertex indices (in the given order).
    pub(crate) fn induced(&self, keep: &[usize]) -> AmpGraph {
        let vertices: Vec<VertexId> = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        let index = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let m = keep.len();
        let mut mult = vec![Multiplicity::Zero; m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                mult[a * m + b] = self.mult(i, j);
            }
        }
        AmpGraph { vertices, index, mult }
    }

    /// Adds an Omega family `v -> w` where a path of length >= 2 already
    /// exists and no direct edges do. Path structure is unchanged.
    pub fn amplify_transitive_edges(&self, v: &str, w: &str) -> Result<AmpGraph, GraphError> {
        if !self.is_amplified() {
            return Err(GraphError::NotAmplified);
        }
        let (i, j) = (self.require(v)?, self.require(w)?);
        if !self.mult(i, j).is_zero() {
            return Err(GraphError::DirectEdgeExists(v.to_string(), w.to_string()));
        }
        // With no direct edge, a path of length >= 1 has length >= 2.
        if !self.reachability().has_path(i, j) {
            return Err(GraphError::NoLongPath(v.to_string(), w.to_string()));
        }
        let mut out = self.clone();
        let n = self.n();
        out.mult[i * n + j] = Multiplicity::Omega;
        Ok(out)
    }

    /// Relabels vertex `i` as position `perm[i]`, permuting the matrix to match.
    pub fn permuted(&self, perm: &[usize]) -> AmpGraph {
        let n = self.n();
        assert_eq!(perm.len(), n, "permutation length must equal vertex count");
        let mut vertices = vec![self.vertices[0].clone(); n];
        for i in 0..n {
            vertices[perm[i]] = self.vertices[i].clone();
        }
        let mut mult = vec![Multiplicity::Zero; n * n];
        for i in 0..n {
            for j in 0..n {
                mult[perm[i] * n + perm[j]] = self.mult(i, j);
            }
        }
        let index = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        AmpGraph { vertices, index, mult }
    }
}
