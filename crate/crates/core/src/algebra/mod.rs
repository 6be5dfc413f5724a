//! Normal-form arithmetic in the dense *-subalgebra of an amplified graph
//! C*-algebra.
//!
//! Elements are integer combinations of words `s_alpha s_beta^*` with
//! `r(alpha) = r(beta)`. For amplified graphs these words are linearly
//! independent (no vertex is a finite emitter, so the third Cuntz-Krieger
//! relation never fires), which makes the stored form canonical and lets
//! equality be structural.

mod element;
mod map;
mod verify;

use thiserror::Error;

use crate::graph::GraphError;

pub use element::{CKElement, CKWord, EdgeRef, Path};
pub use map::{GeneratorMap, Template};
pub use verify::{verify_ck_family, verify_identity, Check, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("elements live over different graphs")]
    GraphMismatch,
    #[error("no infinite edge family {0} -> {1}")]
    MissingFamily(String, String),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("graph is not amplified")]
    NotAmplified,
    #[error("argument is not a projection")]
    NotProjection,
    #[error("gauge degree of the zero element is undefined")]
    ZeroElement,
    #[error("coefficient overflow")]
    Overflow,
}
