//! Typed probabilistic circuits: wires, transforms, composition, traces and
//! readout to probability tables.

mod quantum;
pub mod random;
mod readout;
mod system;
mod transform;

pub use quantum::{basis_ket, check_isometry, devectorize, vectorize};
pub use readout::{eval_to_dist, ProbTable};
pub use system::{SystemType, Wire};
pub use transform::Transform;

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("type mismatch at wire {index}: {detail}")]
    TypeMismatch { index: usize, detail: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("matrix is not an isometry (deviation {deviation:e})")]
    NotIsometry { deviation: f64 },
    #[error("output wire {index} is not classical")]
    NotClassicalOutput { index: usize },
    #[error("not a probability distribution at entry {index} (value {value}): {detail}")]
    NotADistribution {
        index: usize,
        value: f64,
        detail: String,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
