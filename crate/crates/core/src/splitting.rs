//! Explicit unital splittings for the extension obtained by removing a sink,
//! their iteration over several sinks, and the resulting KK-chains.
//!
//! For a sink `v_s` of an amplified graph `Γ` the quotient map
//! `q: C*(Γ) -> C*(Γ \ {v_s})` has kernel the ideal generated by `p_{v_s}`.
//! A *star* vertex `v_*` is admissible when it is a source, or when every
//! vertex with edges into `v_*` has a path to `v_s`. The section then sends
//! `p_{v_*}` to `p_{v_*} + p_{v_s}` and each `s^i_{v,v_*}` to
//! `s^i_{v,v_*} + s^i_{v,v_s}`, fixing everything else. Families `v -> v_s`
//! needed by that formula are added first; this leaves the path structure,
//! hence the algebra, unchanged.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{verify_ck_family, verify_identity, AlgebraError, CKElement, GeneratorMap, VerificationReport};
use crate::graph::{AmpGraph, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("graph is not amplified")]
    NotAmplified,
    #[error("graph has a directed cycle")]
    NotAcyclic,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("{0} is not a sink")]
    NotSink(String),
    #[error("{star} is not a valid choice of star for sink {sink}: {reason}")]
    InvalidStar { star: String, sink: String, reason: String },
    #[error("{sinks} sinks but {stars} star choices")]
    LengthMismatch { sinks: usize, stars: usize },
    #[error("star policy has no choice for step {0}")]
    PolicyExhausted(usize),
    #[error("splitting failed verification: {0}")]
    VerificationFailed(String),
}

/// The ideal generated by the removed sink's projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IdealKind {
    /// Compact operators: the sink receives edges.
    #[serde(rename = "K")]
    Compact,
    /// The sink is isolated, so the ideal is a copy of the scalars.
    #[serde(rename = "C")]
    Scalars,
}

/// A verified split extension `0 -> I -> C*(Γ) -> C*(Γ \ {v_s}) -> 0`.
#[derive(Debug, Clone)]
pub struct SplitData {
    original: Arc<AmpGraph>,
    working: Arc<AmpGraph>,
    quotient: Arc<AmpGraph>,
    augmentations: Vec<(VertexId, VertexId)>,
    sink: VertexId,
    star: Option<VertexId>,
    sigma: GeneratorMap,
    q: GeneratorMap,
    ideal: IdealKind,
}

impl SplitData {
    /// Graph as given.
    pub fn original(&self) -> &Arc<AmpGraph> {
        &self.original
    }

    /// Graph after adding the families `v -> v_s` the section needs.
    pub fn working(&self) -> &Arc<AmpGraph> {
        &self.working
    }

    pub fn quotient(&self) -> &Arc<AmpGraph> {
        &self.quotient
    }

    pub fn augmentations(&self) -> &[(VertexId, VertexId)] {
        &self.augmentations
    }

    pub fn sink(&self) -> &VertexId {
        &self.sink
    }

    /// `None` for the natural (non-unital) embedding.
    pub fn star(&self) -> Option<&VertexId> {
        self.star.as_ref()
    }

    pub fn sigma(&self) -> &GeneratorMap {
        &self.sigma
    }

    pub fn q(&self) -> &GeneratorMap {
        &self.q
    }

    pub fn ideal(&self) -> IdealKind {
        self.ideal
    }

    pub fn is_unital(&self) -> bool {
        self.star.is_some()
    }
}

fn require_sink(g: &AmpGraph, sink: &str) -> Result<usize, SplitError> {
    let s = g.require(sink)?;
    if !g.is_sink(s) {
        return Err(SplitError::NotSink(sink.to_string()));
    }
    Ok(s)
}

/// Why `star` is not admissible for `sink`, or `None` if it is.
fn star_obstruction(g: &AmpGraph, reach: &crate::graph::Reachability, sink: usize, star: usize) -> Option<String> {
    if star == sink {
        return Some("the star must differ from the sink".to_string());
    }
    if g.is_source(star) {
        return None;
    }
    (0..g.n()).find(|&w| !g.mult(w, star).is_zero() && !reach.has_path(w, sink)).map(|w| {
        format!("{} has edges into {} but no path to {}", g.vertex(w), g.vertex(star), g.vertex(sink))
    })
}

/// All admissible star vertices for `sink`, in vertex order.
pub fn valid_stars(g: &AmpGraph, sink: &str) -> Result<Vec<VertexId>, SplitError> {
    if !g.is_amplified() {
        return Err(SplitError::NotAmplified);
    }
    let s = require_sink(g, sink)?;
    let reach = g.reachability();
    Ok((0..g.n())
        .filter(|&v| star_obstruction(g, &reach, s, v).is_none())
        .map(|v| g.vertex(v).clone())
        .collect())
}

/// Builds and verifies the splitting for `sink`, with the given star or, for
/// `None`, the natural embedding of the quotient.
pub fn build_splitting(g: &AmpGraph, sink: &str, star: Option<&str>) -> Result<SplitData, SplitError> {
    build_from(&Arc::new(g.clone()), sink, star)
}

fn build_from(original: &Arc<AmpGraph>, sink: &str, star: Option<&str>) -> Result<SplitData, SplitError> {
    let g = original.as_ref();
    if !g.is_amplified() {
        return Err(SplitError::NotAmplified);
    }
    let s = require_sink(g, sink)?;
    let star_idx = match star {
        Some(label) => {
            let v = g.require(label)?;
            if let Some(reason) = star_obstruction(g, &g.reachability(), s, v) {
                return Err(SplitError::InvalidStar { star: label.to_string(), sink: sink.to_string(), reason });
            }
            Some(v)
        }
        None => None,
    };

    let mut working = g.clone();
    let mut augmentations = Vec::new();
    if let Some(v_star) = star_idx {
        for v in 0..g.n() {
            if !g.mult(v, v_star).is_zero() && g.mult(v, s).is_zero() {
                working = working.amplify_transitive_edges(g.vertex(v).as_str(), sink)?;
                augmentations.push((g.vertex(v).clone(), g.vertex(s).clone()));
            }
        }
    }
    let working = if augmentations.is_empty() { original.clone() } else { Arc::new(working) };
    let removed = working.vertex_set(&[sink])?;
    let quotient = Arc::new(working.quotient(&removed)?);

    let mut sigma = GeneratorMap::natural(&quotient, &working)?;
    if let Some(v_star) = star_idx {
        let star_label = working.vertex(v_star).as_str();
        let lifted = CKElement::vertex(&working, star_label)?.add(&CKElement::vertex(&working, sink)?)?;
        sigma.set_vertex_image(star_label, lifted)?;
        let star_in_quotient = quotient.require(star_label)?;
        let into_star: Vec<VertexId> = (0..quotient.n())
            .filter(|&v| !quotient.mult(v, star_in_quotient).is_zero())
            .map(|v| quotient.vertex(v).clone())
            .collect();
        for v in &into_star {
            sigma.set_family_image(v.as_str(), star_label, &[(v.as_str(), star_label, 1), (v.as_str(), sink, 1)])?;
        }
    }
    let q = GeneratorMap::natural(&working, &quotient)?;
    let ideal = if working.is_source(s) { IdealKind::Scalars } else { IdealKind::Compact };

    let sd = SplitData {
        original: original.clone(),
        working,
        quotient,
        augmentations,
        sink: g.vertex(s).clone(),
        star: star_idx.map(|v| g.vertex(v).clone()),
        sigma,
        q,
        ideal,
    };
    let report = verify_split_exact(&sd)?;
    if !report.ok() {
        return Err(SplitError::VerificationFailed(report.failed().join(", ")));
    }
    Ok(sd)
}

/// Symbolic split-exactness: both maps are *-homomorphisms of the right
/// kind, `q ∘ σ` is the identity, and `σ` is unital exactly when a star was
/// chosen.
pub fn verify_split_exact(sd: &SplitData) -> Result<VerificationReport, SplitError> {
    let mut report = VerificationReport::default();
    report.extend_prefixed("sigma.", verify_ck_family(&sd.sigma, sd.is_unital())?);
    report.extend_prefixed("q.", verify_ck_family(&sd.q, true)?);
    let qs = sd.q.compose(&sd.sigma)?;
    report.push("q_sigma_identity", true, verify_identity(&qs)?);
    Ok(report)
}

/// Several sinks removed one after another, with the composite section.
#[derive(Debug, Clone)]
pub struct MultiSinkSplitting {
    original: Arc<AmpGraph>,
    augmented: Arc<AmpGraph>,
    augmentations: Vec<(VertexId, VertexId)>,
    steps: Vec<SplitData>,
    composite_sigma: GeneratorMap,
    composite_q: GeneratorMap,
    report: VerificationReport,
}

impl MultiSinkSplitting {
    pub fn original(&self) -> &Arc<AmpGraph> {
        &self.original
    }

    /// Input graph with every family the sections need added up front.
    pub fn augmented(&self) -> &Arc<AmpGraph> {
        &self.augmented
    }

    pub fn augmentations(&self) -> &[(VertexId, VertexId)] {
        &self.augmentations
    }

    pub fn steps(&self) -> &[SplitData] {
        &self.steps
    }

    /// `σ_1 ∘ … ∘ σ_k`.
    pub fn composite_sigma(&self) -> &GeneratorMap {
        &self.composite_sigma
    }

    /// `q_k ∘ … ∘ q_1`.
    pub fn composite_q(&self) -> &GeneratorMap {
        &self.composite_q
    }

    /// Verification of the composite maps.
    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    pub fn final_graph(&self) -> &Arc<AmpGraph> {
        self.steps.last().map_or(&self.augmented, |s| &s.quotient)
    }
}

type Choice = (VertexId, Option<VertexId>);

/// Adds, to the whole graph, every family some step's section will need.
///
/// A section built at step k may need a family `v -> v_k` that only exists
/// after augmenting; the earlier sections must then be defined on that
/// family too, so all additions are made once, on the original graph, and
/// repeated until no step asks for more.
fn augment_for_plan(g: &AmpGraph, choices: &[Choice]) -> Result<(AmpGraph, Vec<(VertexId, VertexId)>), SplitError> {
    let mut aug = g.clone();
    let mut added = Vec::new();
    loop {
        let mut changed = false;
        let mut removed: Vec<VertexId> = Vec::new();
        for (sink, star) in choices {
            if let Some(star) = star {
                let mut cur = aug.quotient(&aug.vertex_set(&removed)?)?;
                let (s, t) = (cur.require(sink.as_str())?, cur.require(star.as_str())?);
                for v in 0..cur.n() {
                    if !cur.mult(v, t).is_zero() && cur.mult(v, s).is_zero() {
                        let label = cur.vertex(v).clone();
                        aug = aug.amplify_transitive_edges(label.as_str(), sink.as_str())?;
                        added.push((label, sink.clone()));
                        changed = true;
                        cur = aug.quotient(&aug.vertex_set(&removed)?)?;
                    }
                }
            }
            removed.push(sink.clone());
        }
        if !changed {
            return Ok((aug, added));
        }
    }
}

fn run_plan(g: &AmpGraph, choices: &[Choice]) -> Result<MultiSinkSplitting, SplitError> {
    if !g.is_amplified() {
        return Err(SplitError::NotAmplified);
    }
    // Validate on the graph as given so errors refer to the user's input.
    let mut cur = g.clone();
    for (sink, star) in choices {
        require_sink(&cur, sink.as_str())?;
        if let Some(star) = star {
            let s = cur.require(sink.as_str())?;
            let t = cur.require(star.as_str())?;
            if let Some(reason) = star_obstruction(&cur, &cur.reachability(), s, t) {
                return Err(SplitError::InvalidStar { star: star.to_string(), sink: sink.to_string(), reason });
            }
        }
        cur = cur.quotient(&cur.vertex_set(&[sink.as_str()])?)?;
    }

    let (aug, augmentations) = augment_for_plan(g, choices)?;
    let augmented = Arc::new(aug);
    let mut steps: Vec<SplitData> = Vec::with_capacity(choices.len());
    let mut current = augmented.clone();
    for (sink, star) in choices {
        let sd = build_from(&current, sink.as_str(), star.as_ref().map(VertexId::as_str))?;
        if !sd.augmentations.is_empty() {
            return Err(SplitError::VerificationFailed(format!(
                "step removing {} still needed families after global augmentation",
                sink
            )));
        }
        current = sd.quotient.clone();
        steps.push(sd);
    }

    let mut composite_sigma = GeneratorMap::identity(&current)?;
    let mut composite_q = GeneratorMap::identity(&augmented)?;
    for sd in steps.iter().rev() {
        composite_sigma = sd.sigma.compose(&composite_sigma)?;
    }
    for sd in &steps {
        composite_q = sd.q.compose(&composite_q)?;
    }
    let unital = steps.iter().all(SplitData::is_unital);
    let mut report = VerificationReport::default();
    report.extend_prefixed("sigma.", verify_ck_family(&composite_sigma, unital)?);
    report.extend_prefixed("q.", verify_ck_family(&composite_q, true)?);
    report.push("q_sigma_identity", true, verify_identity(&composite_q.compose(&composite_sigma)?)?);
    if !report.ok() {
        return Err(SplitError::VerificationFailed(report.failed().join(", ")));
    }

    Ok(MultiSinkSplitting {
        original: Arc::new(g.clone()),
        augmented,
        augmentations,
        steps,
        composite_sigma,
        composite_q,
        report,
    })
}

/// Removes `sinks` in order, each with the matching star choice.
pub fn multi_sink_splitting(
    g: &AmpGraph,
    sinks: &[&str],
    stars: &[Option<&str>],
) -> Result<MultiSinkSplitting, SplitError> {
    if sinks.len() != stars.len() {
        return Err(SplitError::LengthMismatch { sinks: sinks.len(), stars: stars.len() });
    }
    let mut choices = Vec::with_capacity(sinks.len());
    for (s, t) in sinks.iter().zip(stars) {
        choices.push((VertexId::new(s)?, t.map(VertexId::new).transpose()?));
    }
    run_plan(g, &choices)
}

/// Decides which sink to remove and which star to use at each chain step.
pub trait StarPolicy {
    fn choose_sink(&self, step: usize, g: &AmpGraph, sinks: &[VertexId]) -> Result<VertexId, SplitError>;
    fn choose_star(&self, step: usize, g: &AmpGraph, sink: &VertexId, stars: &[VertexId])
        -> Result<Option<VertexId>, SplitError>;
}

/// First sink in vertex order, first valid star.
#[derive(Debug, Clone, Copy, Default)]
pub struct FirstChoice;

impl StarPolicy for FirstChoice {
    fn choose_sink(&self, step: usize, _: &AmpGraph, sinks: &[VertexId]) -> Result<VertexId, SplitError> {
        sinks.first().cloned().ok_or(SplitError::PolicyExhausted(step))
    }

    fn choose_star(&self, _: usize, _: &AmpGraph, _: &VertexId, stars: &[VertexId]) -> Result<Option<VertexId>, SplitError> {
        Ok(stars.first().cloned())
    }
}

/// Last sink in vertex order, last valid star.
#[derive(Debug, Clone, Copy, Default)]
pub struct LastChoice;

impl StarPolicy for LastChoice {
    fn choose_sink(&self, step: usize, _: &AmpGraph, sinks: &[VertexId]) -> Result<VertexId, SplitError> {
        sinks.last().cloned().ok_or(SplitError::PolicyExhausted(step))
    }

    fn choose_star(&self, _: usize, _: &AmpGraph, _: &VertexId, stars: &[VertexId]) -> Result<Option<VertexId>, SplitError> {
        Ok(stars.last().cloned())
    }
}

/// First sink, and a source as star whenever one is valid.
#[derive(Debug, Clone, Copy, Default)]
pub struct PreferSource;

impl StarPolicy for PreferSource {
    fn choose_sink(&self, step: usize, g: &AmpGraph, sinks: &[VertexId]) -> Result<VertexId, SplitError> {
        FirstChoice.choose_sink(step, g, sinks)
    }

    fn choose_star(&self, _: usize, g: &AmpGraph, _: &VertexId, stars: &[VertexId]) -> Result<Option<VertexId>, SplitError> {
        let source = stars.iter().find(|v| g.index_of(v.as_str()).is_some_and(|i| g.is_source(i)));
        Ok(source.or(stars.first()).cloned())
    }
}

/// First sink, natural embedding at every step.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmbeddingOnly;

impl StarPolicy for EmbeddingOnly {
    fn choose_sink(&self, step: usize, g: &AmpGraph, sinks: &[VertexId]) -> Result<VertexId, SplitError> {
        FirstChoice.choose_sink(step, g, sinks)
    }

    fn choose_star(&self, _: usize, _: &AmpGraph, _: &VertexId, _: &[VertexId]) -> Result<Option<VertexId>, SplitError> {
        Ok(None)
    }
}

/// Explicit per-step choices.
#[derive(Debug, Clone, Default)]
pub struct Scripted(pub Vec<(String, Option<String>)>);

impl StarPolicy for Scripted {
    fn choose_sink(&self, step: usize, _: &AmpGraph, _: &[VertexId]) -> Result<VertexId, SplitError> {
        let (s, _) = self.0.get(step).ok_or(SplitError::PolicyExhausted(step))?;
        Ok(VertexId::new(s)?)
    }

    fn choose_star(&self, step: usize, _: &AmpGraph, _: &VertexId, _: &[VertexId]) -> Result<Option<VertexId>, SplitError> {
        let (_, t) = self.0.get(step).ok_or(SplitError::PolicyExhausted(step))?;
        Ok(t.as_deref().map(VertexId::new).transpose()?)
    }
}

/// Named policies accepted on the command line.
pub fn policy_by_name(name: &str) -> Option<Box<dyn StarPolicy>> {
    match name {
        "first" => Some(Box::new(FirstChoice)),
        "last" => Some(Box::new(LastChoice)),
        "source" => Some(Box::new(PreferSource)),
        "embed" => Some(Box::new(EmbeddingOnly)),
        _ => None,
    }
}

/// One link `C*(Γ_{k-1}) ≈ 𝕂 ⊕ C*(Γ_k)` of a chain.
#[derive(Debug, Clone, Serialize)]
pub struct ChainLabels {
    pub iota: String,
    pub q: String,
    pub sigma: String,
}

/// The chain `C*(Γ) ≈ 𝕂 ⊕ C*(Γ_1) ≈ … ≈ 𝕂^{N-1} ⊕ ℂ`.
#[derive(Debug, Clone)]
pub struct KKChain {
    splitting: MultiSinkSplitting,
    labels: Vec<ChainLabels>,
    terminal: VertexId,
    pi_terms: Vec<String>,
    i_terms: Vec<String>,
}

impl KKChain {
    pub fn steps(&self) -> &[SplitData] {
        self.splitting.steps()
    }

    pub fn splitting(&self) -> &MultiSinkSplitting {
        &self.splitting
    }

    pub fn labels(&self) -> &[ChainLabels] {
        &self.labels
    }

    pub fn terminal(&self) -> &VertexId {
        &self.terminal
    }

    /// Summands of the class `Π_Γ`, joined by `⊕`.
    pub fn pi_terms(&self) -> &[String] {
        &self.pi_terms
    }

    /// Summands of the class `I_Γ`, joined by `⊕`.
    pub fn i_terms(&self) -> &[String] {
        &self.i_terms
    }
}

fn composition(prefix: &str, range: impl Iterator<Item = usize>) -> String {
    range.map(|k| format!("{}_{}", prefix, k)).collect::<Vec<_>>().join("∘")
}

fn formal_terms(steps: usize) -> (Vec<String>, Vec<String>) {
    if steps == 0 {
        return (vec!["[id]".to_string()], vec!["[id]".to_string()]);
    }
    let mut pi = vec!["[π_1]".to_string()];
    let mut iota = vec!["[ι_1]".to_string()];
    for k in 2..=steps {
        pi.push(format!("[{}]•[π_{}]", composition("q", (1..k).rev()), k));
        iota.push(format!("[{}∘ι_{}]", composition("s", 1..k), k));
    }
    pi.push(format!("[{}]", composition("q", (1..=steps).rev())));
    iota.push(format!("[{}]", composition("s", 1..=steps)));
    (pi, iota)
}

/// Removes sinks one at a time until a single vertex remains.
pub fn kk_chain(g: &AmpGraph, policy: &dyn StarPolicy) -> Result<KKChain, SplitError> {
    if !g.is_amplified() {
        return Err(SplitError::NotAmplified);
    }
    if g.n() == 0 {
        return Err(SplitError::EmptyGraph);
    }
    if !g.is_acyclic() {
        return Err(SplitError::NotAcyclic);
    }
    let mut choices: Vec<Choice> = Vec::new();
    let mut cur = g.clone();
    while cur.n() > 1 {
        let step = choices.len();
        let sinks: Vec<VertexId> = cur.classify().sinks.iter().cloned().collect();
        let sink = policy.choose_sink(step, &cur, &sinks)?;
        let stars = valid_stars(&cur, sink.as_str())?;
        let star = policy.choose_star(step, &cur, &sink, &stars)?;
        cur = cur.quotient(&cur.vertex_set(&[sink.as_str()])?)?;
        choices.push((sink, star));
    }
    let splitting = run_plan(g, &choices)?;
    let terminal = cur.vertex(0).clone();
    let labels = (1..=choices.len())
        .map(|k| ChainLabels { iota: format!("[ι_{}]", k), q: format!("[q_{}]", k), sigma: format!("[s_{}]", k) })
        .collect();
    let (pi_terms, i_terms) = formal_terms(choices.len());
    Ok(KKChain { splitting, labels, terminal, pi_terms, i_terms })
}
