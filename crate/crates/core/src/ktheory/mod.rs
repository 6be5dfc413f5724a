//! Exact integer linear algebra and K₀-level checks.
//!
//! Matrices act on column vectors of K₀ classes written in the vertex order
//! of the respective graph: the induced matrix of a map `C*(A) -> C*(B)` has
//! one column per vertex of `A` and one row per vertex of `B`.
//!
//! Only acyclic amplified graphs are handled. For them K₀ is free on the
//! vertex projections and K₁ vanishes; more generally any amplified graph
//! has no regular vertices and the same free K₀, but that case is outside
//! what the chain constructions here certify.

mod matrix;
mod snf;

use serde::Serialize;
use thiserror::Error;

pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, Snf};

use crate::algebra::{AlgebraError, GeneratorMap, VerificationReport};
use crate::graph::{AmpGraph, VertexId};
use crate::splitting::SplitData;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KError {
    #[error("integer overflow")]
    Overflow,
    #[error("shape mismatch: {left:?} times {right:?}")]
    Shape { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error("graph is not amplified")]
    NotAmplified,
    #[error("graph has a directed cycle")]
    NotAcyclic,
    #[error("image of p[{vertex}] is not an orthogonal sum of range projections: {image}")]
    UnsupportedImage { vertex: String, image: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KGroups {
    pub k0_rank: usize,
    /// Classes `[p_v]` forming a basis of K₀, in vertex order.
    pub k0_generators: Vec<VertexId>,
    pub k1_rank: usize,
}

pub fn k_groups(g: &AmpGraph) -> Result<KGroups, KError> {
    if !g.is_amplified() {
        return Err(KError::NotAmplified);
    }
    if !g.is_acyclic() {
        return Err(KError::NotAcyclic);
    }
    Ok(KGroups { k0_rank: g.n(), k0_generators: g.vertices().to_vec(), k1_rank: 0 })
}

/// Matrix of the map induced on K₀, using `[s_α s_α^*] = [p_{r(α)}]`.
pub fn induced_k0(m: &GeneratorMap) -> Result<IntMatrix, KError> {
    let (src, tgt) = (m.source(), m.target());
    let mut out = IntMatrix::zeros(tgt.n(), src.n());
    for v in 0..src.n() {
        let image = m.vertex_image(v);
        let unsupported =
            || KError::UnsupportedImage { vertex: src.vertex(v).to_string(), image: image.render() };
        let words: Vec<_> = image.terms().collect();
        if words.iter().any(|(w, c)| *c != 1 || w.alpha() != w.beta()) {
            return Err(unsupported());
        }
        for (a, (x, _)) in words.iter().enumerate() {
            for (y, _) in &words[a + 1..] {
                if x.mul(y).is_some() {
                    return Err(unsupported());
                }
            }
        }
        for (w, _) in &words {
            let r = w.alpha().range();
            out.set(r, v, out.get(r, v) + 1);
        }
    }
    Ok(out)
}

/// K₀ matrices of one split extension and the checks on them.
#[derive(Debug, Clone, Serialize)]
pub struct K0SplitReport {
    pub q: IntMatrix,
    pub s: IntMatrix,
    /// Inclusion of the ideal's K₀ (generated by `[p_{v_s}]`).
    pub i: IntMatrix,
    pub checks: VerificationReport,
}

/// Kernel of `q` equals the image of `i`: `q i = 0`, equal ranks, and `i`
/// spans a saturated sublattice (all invariant factors 1). The kernel of an
/// integer matrix is always saturated, so these force equality.
fn kernel_equals_image(q: &IntMatrix, i: &IntMatrix) -> Result<Option<String>, KError> {
    if !q.mul(i)?.is_zero() {
        return Ok(Some("Q·I ≠ 0".to_string()));
    }
    let kernel_rank = smith_normal_form(q)?.kernel_basis().cols();
    let inc = smith_normal_form(i)?;
    let image_rank = inc.rank();
    if kernel_rank != image_rank {
        return Ok(Some(format!("rank ker Q = {}, rank im I = {}", kernel_rank, image_rank)));
    }
    if inc.invariant_factors().iter().any(|&d| d != 1) {
        return Ok(Some(format!("im I is not saturated: invariant factors {:?}", inc.invariant_factors())));
    }
    Ok(None)
}

pub fn check_split_exact_k0(sd: &SplitData) -> Result<K0SplitReport, KError> {
    let q = induced_k0(sd.q())?;
    let s = induced_k0(sd.sigma())?;
    let n = sd.working().n();
    let sink = sd.working().index_of(sd.sink().as_str()).expect("sink belongs to its working graph");
    let i = IntMatrix::unit_column(n, sink);

    let mut checks = VerificationReport::default();
    let qs = q.mul(&s)?;
    checks.push("q_s_identity", true, (!qs.is_identity()).then(|| format!("Q·S = {}", qs)));
    let qi = q.mul(&i)?;
    checks.push("q_i_zero", true, (!qi.is_zero()).then(|| format!("Q·I = {}", qi)));
    checks.push("kernel_is_ideal", true, kernel_equals_image(&q, &i)?);
    Ok(K0SplitReport { q, s, i, checks })
}

/// K₀ matrices of the whole chain `C*(Γ) ≈ 𝕂^{N-1} ⊕ ℂ`.
///
/// Coordinates on `𝕂^{N-1} ⊕ ℂ` are one per removed sink, in removal order,
/// then the terminal vertex; `𝕂 ≈ ℂ` is rank-preserving on K₀ and is taken
/// as the identity on ℤ.
#[derive(Debug, Clone, Serialize)]
pub struct ChainK0Report {
    /// `Π_Γ`: K₀(C*(Γ)) -> ℤ^N.
    pub pi: IntMatrix,
    /// `I_Γ`: ℤ^N -> K₀(C*(Γ)).
    pub i: IntMatrix,
    pub steps: Vec<K0SplitReport>,
    pub checks: VerificationReport,
}

/// Builds `Π_Γ` and `I_Γ` from the per-step matrices. Step k contributes
/// `π_k = e_{v_k}ᵀ (1 - S_k Q_k)`, the K₀ shadow of the inverse to
/// `[ι_k] ⊕ [s_k]`.
pub fn chain_k0(steps: &[SplitData]) -> Result<ChainK0Report, KError> {
    let Some(first) = steps.first() else {
        let mut checks = VerificationReport::default();
        checks.push("pi_i_identity", true, None);
        checks.push("i_pi_identity", true, None);
        let id = IntMatrix::identity(1);
        return Ok(ChainK0Report { pi: id.clone(), i: id, steps: Vec::new(), checks });
    };
    let n = first.working().n();
    let reports = steps.iter().map(check_split_exact_k0).collect::<Result<Vec<_>, _>>()?;

    // Running products Q_k ⋯ Q_1 and S_1 ⋯ S_k.
    let mut q_prefix = IntMatrix::identity(n);
    let mut s_prefix = IntMatrix::identity(n);
    let mut pi_rows: Vec<IntMatrix> = Vec::with_capacity(n);
    let mut i_cols: Vec<IntMatrix> = Vec::with_capacity(n);
    for r in &reports {
        let size = r.q.cols();
        let sq = r.s.mul(&r.q)?;
        let proj = r.i.transpose().mul(&IntMatrix::identity(size).sub(&sq)?)?;
        pi_rows.push(proj.mul(&q_prefix)?);
        i_cols.push(s_prefix.mul(&r.i)?);
        q_prefix = r.q.mul(&q_prefix)?;
        s_prefix = s_prefix.mul(&r.s)?;
    }
    pi_rows.push(q_prefix);
    i_cols.push(s_prefix);

    let pi = pi_rows.iter().skip(1).fold(pi_rows[0].clone(), |acc, r| acc.vconcat(r));
    let i = i_cols.iter().skip(1).fold(i_cols[0].clone(), |acc, c| acc.hconcat(c));

    let mut checks = VerificationReport::default();
    for (k, r) in reports.iter().enumerate() {
        if !r.checks.ok() {
            checks.push(&format!("step_{}", k + 1), true, Some(r.checks.failed().join(", ")));
        }
    }
    let pi_i = pi.mul(&i)?;
    checks.push("pi_i_identity", true, (!pi_i.is_identity()).then(|| format!("Π·I = {}", pi_i)));
    let i_pi = i.mul(&pi)?;
    checks.push("i_pi_identity", true, (!i_pi.is_identity()).then(|| format!("I·Π = {}", i_pi)));
    Ok(ChainK0Report { pi, i, steps: reports, checks })
}
