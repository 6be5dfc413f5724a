//! Symbolic construction and verification of unital splittings for graph
//! C*-algebras of amplified graphs, the KK-chains they assemble into, and
//! the flag-manifold graphs built from tagged type-A Dynkin diagrams.
//!
//! Elements of the algebra are exact integer combinations of normal-form
//! words `s_α s_β^*`; maps are given on generators and checked against the
//! Cuntz-Krieger relations; K₀-level statements are checked with exact
//! integer matrices.

pub mod algebra;
pub mod cli;
pub mod coxeter;
pub mod cw;
pub mod graph;
pub mod io;
pub mod ktheory;
pub mod splitting;

use thiserror::Error;

pub use algebra::{CKElement, CKWord, GeneratorMap, VerificationReport};
pub use graph::{AmpGraph, Multiplicity, VertexId, VertexSet};

/// Any error raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] graph::GraphError),
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Split(#[from] splitting::SplitError),
    #[error(transparent)]
    K(#[from] ktheory::KError),
    #[error(transparent)]
    Coxeter(#[from] coxeter::CoxeterError),
    #[error(transparent)]
    Cw(#[from] cw::CwError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}

impl Error {
    /// Whether the error reports a failed mathematical check rather than bad input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::Split(splitting::SplitError::VerificationFailed(_))
                | Error::Cw(cw::CwError::Split(splitting::SplitError::VerificationFailed(_)))
                | Error::Cw(cw::CwError::SkeletonMismatch(_))
                | Error::Cw(cw::CwError::NotHereditary { .. })
                | Error::Coxeter(coxeter::CoxeterError::CrossCheck(_))
        )
    }
}
