//! Skeleton filtrations of flag graphs and the KK chain running down them.
//!
//! A coset representative of length k labels a 2k-cell. The level-k
//! skeleton keeps the vertices of length at most k; it is the quotient of
//! the full graph by the (hereditary) set of longer vertices. Levels are
//! indexed by word length, not by real dimension.

use serde::Serialize;
use thiserror::Error;

use crate::coxeter::{flag_graph, minimal_coset_reps, CoxeterError, DynkinSpec};
use crate::graph::{AmpGraph, GraphError, VertexId};
use crate::ktheory::{chain_k0, k_groups, ChainK0Report, KError, KGroups};
use crate::splitting::{kk_chain, SplitError, StarPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CwError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    K(#[from] KError),
    #[error("vertices longer than {level} do not form a hereditary set")]
    NotHereditary { level: usize },
    #[error("chain does not pass through the level-{0} skeleton")]
    SkeletonMismatch(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skeleton {
    pub level: usize,
    pub graph: AmpGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Filtration {
    /// Levels `0..=max length`, the last being the full flag graph.
    pub levels: Vec<Skeleton>,
    /// Word length of each vertex of the full graph, in vertex order.
    pub lengths: Vec<usize>,
}

impl Filtration {
    pub fn full(&self) -> &AmpGraph {
        &self.levels.last().expect("a filtration has at least one level").graph
    }

    pub fn level(&self, k: usize) -> Option<&AmpGraph> {
        self.levels.get(k).map(|s| &s.graph)
    }
}

pub fn skeleton_filtration(spec: &DynkinSpec) -> Result<Filtration, CwError> {
    let full = flag_graph(spec)?;
    let lengths: Vec<usize> = minimal_coset_reps(spec).iter().map(|r| r.length).collect();
    let top = lengths.iter().copied().max().unwrap_or(0);
    let mut levels = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let longer = full.set_from_indices((0..full.n()).filter(|&v| lengths[v] > k));
        if !full.is_hereditary(&longer)? {
            return Err(CwError::NotHereditary { level: k });
        }
        levels.push(Skeleton { level: k, graph: full.quotient(&longer)? });
    }
    Ok(Filtration { levels, lengths })
}

/// Removes sinks in a fixed order, taking the first valid star each time.
struct FixedOrder(Vec<VertexId>);

impl StarPolicy for FixedOrder {
    fn choose_sink(&self, step: usize, _: &AmpGraph, _: &[VertexId]) -> Result<VertexId, SplitError> {
        self.0.get(step).cloned().ok_or(SplitError::PolicyExhausted(step))
    }

    fn choose_star(&self, _: usize, _: &AmpGraph, _: &VertexId, stars: &[VertexId]) -> Result<Option<VertexId>, SplitError> {
        Ok(stars.first().cloned())
    }
}

/// One line of the chain display.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CwRecord {
    /// Skeleton level reached, or `None` for the terminal `ℂ^N`.
    pub level: Option<usize>,
    /// Copies of 𝕂 split off so far.
    pub compact_summands: usize,
    pub vertices: usize,
    pub text: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CwSummary {
    pub records: Vec<CwRecord>,
    /// Sinks in removal order: longest first, lexicographic within a level.
    pub removal_order: Vec<VertexId>,
    pub stars: Vec<Option<VertexId>>,
    pub k_groups: KGroups,
    pub k0: ChainK0Report,
}

impl CwSummary {
    pub fn texts(&self) -> Vec<&str> {
        self.records.iter().map(|r| r.text.as_str()).collect()
    }
}

fn record(level: usize, m: usize, skeleton: &AmpGraph) -> CwRecord {
    let text = if skeleton.n() == 1 {
        format!("𝕂^{} ⊕ ℂ", m)
    } else {
        format!("𝕂^{} ⊕ C*(skel_{})", m, level)
    };
    CwRecord { level: Some(level), compact_summands: m, vertices: skeleton.n(), text }
}

pub fn cw_kk_summary(spec: &DynkinSpec) -> Result<CwSummary, CwError> {
    let filt = skeleton_filtration(spec)?;
    let full = filt.full();
    let n = full.n();
    let top = filt.levels.len() - 1;

    let mut order: Vec<VertexId> = Vec::with_capacity(n.saturating_sub(1));
    for k in (1..=top).rev() {
        let mut at_level: Vec<VertexId> =
            (0..n).filter(|&v| filt.lengths[v] == k).map(|v| full.vertex(v).clone()).collect();
        at_level.sort();
        order.extend(at_level);
    }
    let chain = kk_chain(full, &FixedOrder(order.clone()))?;

    // The chain must pass through every skeleton, up to the added families.
    let mut records = Vec::with_capacity(top + 1);
    for k in (0..top).rev() {
        let skel = filt.level(k).expect("level below top");
        let removed = n - skel.n();
        let reached = if removed == 0 { full } else { chain.steps()[removed - 1].quotient().as_ref() };
        let labels: Vec<&str> = reached.vertices().iter().map(VertexId::as_str).collect();
        let expected: Vec<&str> = skel.vertices().iter().map(VertexId::as_str).collect();
        if labels != expected || reached.reachability() != skel.reachability() {
            return Err(CwError::SkeletonMismatch(k));
        }
        records.push(record(k, removed, skel));
    }
    records.push(CwRecord { level: None, compact_summands: 0, vertices: n, text: format!("ℂ^{}", n) });

    let stars = chain.steps().iter().map(|s| s.star().cloned()).collect();
    let k0 = chain_k0(chain.steps())?;
    Ok(CwSummary { records, removal_order: order, stars, k_groups: k_groups(full)?, k0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(f: &Filtration) -> Vec<usize> {
        f.levels.iter().map(|s| s.graph.n()).collect()
    }

    #[test]
    fn grassmannian_levels() {
        let f = skeleton_filtration(&DynkinSpec::new(3, &[2]).unwrap()).unwrap();
        assert_eq!(counts(&f), [1, 2, 4, 5, 6]);
        assert_eq!(f.level(3).unwrap().family_count(), 5);
        assert_eq!(f.level(2).unwrap().family_count(), 3);
    }

    #[test]
    fn projective_levels() {
        let f = skeleton_filtration(&DynkinSpec::new(3, &[1]).unwrap()).unwrap();
        assert_eq!(counts(&f), [1, 2, 3, 4]);
        let f = skeleton_filtration(&DynkinSpec::new(1, &[1]).unwrap()).unwrap();
        assert_eq!(counts(&f), [1, 2]);
    }

    #[test]
    fn grassmannian_chain() {
        let s = cw_kk_summary(&DynkinSpec::new(3, &[2]).unwrap()).unwrap();
        assert_eq!(
            s.texts(),
            ["𝕂^1 ⊕ C*(skel_3)", "𝕂^2 ⊕ C*(skel_2)", "𝕂^4 ⊕ C*(skel_1)", "𝕂^5 ⊕ ℂ", "ℂ^6"]
        );
        let order: Vec<&str> = s.removal_order.iter().map(VertexId::as_str).collect();
        assert_eq!(order, ["s2s1s3s2", "s1s3s2", "s1s2", "s3s2", "s2"]);
        assert!(s.k0.checks.all_passed());
        assert!(s.k0.pi.mul(&s.k0.i).unwrap().is_identity());
    }

    #[test]
    fn sphere_chain() {
        let s = cw_kk_summary(&DynkinSpec::new(1, &[1]).unwrap()).unwrap();
        assert_eq!(s.texts(), ["𝕂^1 ⊕ ℂ", "ℂ^2"]);
    }
}
