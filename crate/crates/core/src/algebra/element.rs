use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::AlgebraError;
use crate::graph::{AmpGraph, Multiplicity};

/// One edge of an Omega family, identified by its index within the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub src: usize,
    pub dst: usize,
    pub index: u32,
}

/// A path: its base vertex and a (possibly empty) edge sequence.
///
/// For a nonempty path the base is the source of the first edge, so prefix
/// tests reduce to comparing bases and edge slices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    base: usize,
    edges: Vec<EdgeRef>,
}

impl Path {
    pub fn empty(v: usize) -> Self {
        Path { base: v, edges: Vec::new() }
    }

    /// Returns `None` when consecutive edges do not compose.
    pub fn from_edges(edges: Vec<EdgeRef>) -> Option<Self> {
        let base = edges.first()?.src;
        if edges.windows(2).any(|w| w[0].dst != w[1].src) {
            return None;
        }
        Some(Path { base, edges })
    }

    pub fn source(&self) -> usize {
        self.base
    }

    pub fn range(&self) -> usize {
        self.edges.last().map_or(self.base, |e| e.dst)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    fn is_prefix_of(&self, other: &Path) -> bool {
        self.base == other.base && other.edges.starts_with(&self.edges)
    }

    /// `self` followed by `tail`, where `tail` starts at `self.range()`.
    fn extended(&self, tail: &[EdgeRef]) -> Path {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(tail);
        Path { base: self.base, edges }
    }
}

/// The word `s_alpha s_beta^*`; `(empty_v, empty_v)` is the projection `p_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CKWord {
    alpha: Path,
    beta: Path,
}

impl CKWord {
    /// `None` when the ranges differ: such a product is zero in the algebra.
    pub fn new(alpha: Path, beta: Path) -> Option<Self> {
        (alpha.range() == beta.range()).then_some(CKWord { alpha, beta })
    }

    pub fn vertex(v: usize) -> Self {
        CKWord { alpha: Path::empty(v), beta: Path::empty(v) }
    }

    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    pub fn is_vertex(&self) -> bool {
        self.alpha.is_empty() && self.beta.is_empty()
    }

    pub fn adjoint(&self) -> CKWord {
        CKWord { alpha: self.beta.clone(), beta: self.alpha.clone() }
    }

    pub fn gauge_degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    /// Product of two normal-form words; `None` is zero.
    pub fn mul(&self, other: &CKWord) -> Option<CKWord> {
        if self.beta.is_prefix_of(&other.alpha) {
            let tail = &other.alpha.edges[self.beta.len()..];
            Some(CKWord { alpha: self.alpha.extended(tail), beta: other.beta.clone() })
        } else if other.alpha.is_prefix_of(&self.beta) {
            let tail = &self.beta.edges[other.alpha.len()..];
            Some(CKWord { alpha: self.alpha.clone(), beta: other.beta.extended(tail) })
        } else {
            None
        }
    }

    pub fn render(&self, g: &AmpGraph) -> String {
        if self.is_vertex() {
            return format!("p[{}]", g.vertex(self.alpha.base));
        }
        let edge = |e: &EdgeRef| format!("s[{}>{}#{}]", g.vertex(e.src), g.vertex(e.dst), e.index);
        let mut parts: Vec<String> = self.alpha.edges.iter().map(edge).collect();
        parts.extend(self.beta.edges.iter().rev().map(|e| format!("{}*", edge(e))));
        parts.join(" ")
    }
}

/// Integer combination of normal-form words over one graph.
#[derive(Clone)]
pub struct CKElement {
    graph: Arc<AmpGraph>,
    terms: BTreeMap<CKWord, i64>,
}

impl PartialEq for CKElement {
    fn eq(&self, other: &Self) -> bool {
        same_graph(&self.graph, &other.graph) && self.terms == other.terms
    }
}

impl Eq for CKElement {}

impl fmt::Debug for CKElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CKElement({})", self)
    }
}

impl fmt::Display for CKElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for CKElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

pub(crate) fn same_graph(a: &Arc<AmpGraph>, b: &Arc<AmpGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl CKElement {
    pub fn zero(graph: &Arc<AmpGraph>) -> Self {
        CKElement { graph: graph.clone(), terms: BTreeMap::new() }
    }

    pub fn vertex(graph: &Arc<AmpGraph>, v: &str) -> Result<Self, AlgebraError> {
        let i = graph.require(v)?;
        Ok(Self::from_word(graph, CKWord::vertex(i), 1))
    }

    /// The partial isometry `s^index_{src,dst}`.
    pub fn edge(graph: &Arc<AmpGraph>, src: &str, dst: &str, index: u32) -> Result<Self, AlgebraError> {
        let (s, d) = (graph.require(src)?, graph.require(dst)?);
        Self::edge_at(graph, EdgeRef { src: s, dst: d, index })
    }

    pub fn edge_at(graph: &Arc<AmpGraph>, e: EdgeRef) -> Result<Self, AlgebraError> {
        check_family(graph, e.src, e.dst)?;
        let alpha = Path { base: e.src, edges: vec![e] };
        Ok(Self::from_word(graph, CKWord { alpha, beta: Path::empty(e.dst) }, 1))
    }

    /// `s_alpha s_beta^*`; zero when the ranges differ.
    pub fn word(graph: &Arc<AmpGraph>, alpha: Path, beta: Path) -> Result<Self, AlgebraError> {
        for e in alpha.edges.iter().chain(&beta.edges) {
            check_family(graph, e.src, e.dst)?;
        }
        for v in [alpha.base, beta.base] {
            if v >= graph.n() {
                return Err(AlgebraError::VertexOutOfRange(v));
            }
        }
        Ok(match CKWord::new(alpha, beta) {
            Some(w) => Self::from_word(graph, w, 1),
            None => Self::zero(graph),
        })
    }

    pub(crate) fn from_word(graph: &Arc<AmpGraph>, w: CKWord, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(w, c);
        }
        CKElement { graph: graph.clone(), terms }
    }

    /// Sum of all vertex projections.
    pub fn unit(graph: &Arc<AmpGraph>) -> Self {
        let terms = (0..graph.n()).map(|v| (CKWord::vertex(v), 1)).collect();
        CKElement { graph: graph.clone(), terms }
    }

    pub fn graph(&self) -> &Arc<AmpGraph> {
        &self.graph
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CKWord, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_graph(&self, other: &CKElement) -> Result<(), AlgebraError> {
        if same_graph(&self.graph, &other.graph) {
            Ok(())
        } else {
            Err(AlgebraError::GraphMismatch)
        }
    }

    fn accumulate(terms: &mut BTreeMap<CKWord, i64>, w: CKWord, c: i64) -> Result<(), AlgebraError> {
        if c == 0 {
            return Ok(());
        }
        match terms.entry(w) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().checked_add(c).ok_or(AlgebraError::Overflow)?;
                if sum == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &CKElement) -> Result<CKElement, AlgebraError> {
        self.check_graph(other)?;
        let mut terms = self.terms.clone();
        for (w, &c) in &other.terms {
            Self::accumulate(&mut terms, w.clone(), c)?;
        }
        Ok(CKElement { graph: self.graph.clone(), terms })
    }

    pub fn scale(&self, k: i64) -> Result<CKElement, AlgebraError> {
        if k == 0 {
            return Ok(Self::zero(&self.graph));
        }
        let mut terms = BTreeMap::new();
        for (w, &c) in &self.terms {
            terms.insert(w.clone(), c.checked_mul(k).ok_or(AlgebraError::Overflow)?);
        }
        Ok(CKElement { graph: self.graph.clone(), terms })
    }

    pub fn sub(&self, other: &CKElement) -> Result<CKElement, AlgebraError> {
        self.add(&other.scale(-1)?)
    }

    pub fn mul(&self, other: &CKElement) -> Result<CKElement, AlgebraError> {
        self.check_graph(other)?;
        let mut terms = BTreeMap::new();
        for (x, &a) in &self.terms {
            for (y, &b) in &other.terms {
                if let Some(w) = x.mul(y) {
                    Self::accumulate(&mut terms, w, a.checked_mul(b).ok_or(AlgebraError::Overflow)?)?;
                }
            }
        }
        Ok(CKElement { graph: self.graph.clone(), terms })
    }

    pub fn adjoint(&self) -> CKElement {
        let terms = self.terms.iter().map(|(w, &c)| (w.adjoint(), c)).collect();
        CKElement { graph: self.graph.clone(), terms }
    }

    pub fn is_projection(&self) -> Result<bool, AlgebraError> {
        Ok(self.adjoint() == *self && self.mul(self)? == *self)
    }

    /// `q <= p` for projections `q` and `p`, tested as `p q = q`.
    pub fn is_subprojection(&self, p: &CKElement) -> Result<bool, AlgebraError> {
        self.check_graph(p)?;
        if !self.is_projection()? || !p.is_projection()? {
            return Err(AlgebraError::NotProjection);
        }
        Ok(p.mul(self)? == *self)
    }

    /// Common gauge degree of all words, `Ok(None)` if they disagree.
    pub fn gauge_degree(&self) -> Result<Option<i64>, AlgebraError> {
        let mut degrees = self.terms.keys().map(CKWord::gauge_degree);
        let first = degrees.next().ok_or(AlgebraError::ZeroElement)?;
        Ok(degrees.all(|d| d == first).then_some(first))
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (w, &c)) in self.terms.iter().enumerate() {
            let word = w.render(&self.graph);
            let (sign, mag) = if c < 0 { ("-", c.unsigned_abs()) } else { ("+", c as u64) };
            match (k, sign) {
                (0, "+") => {}
                (0, _) => out.push_str("- "),
                _ => {
                    out.push(' ');
                    out.push_str(sign);
                    out.push(' ');
                }
            }
            if mag != 1 {
                out.push_str(&format!("{} ", mag));
            }
            out.push_str(&word);
        }
        out
    }
}

pub(crate) fn check_family(graph: &AmpGraph, src: usize, dst: usize) -> Result<(), AlgebraError> {
    if src >= graph.n() || dst >= graph.n() {
        return Err(AlgebraError::VertexOutOfRange(src.max(dst)));
    }
    match graph.mult(src, dst) {
        Multiplicity::Omega => Ok(()),
        _ => Err(AlgebraError::MissingFamily(
            graph.vertex(src).to_string(),
            graph.vertex(dst).to_string(),
        )),
    }
}
