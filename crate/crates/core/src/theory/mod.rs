//! Perspectival theories: probability extractors, memory updates, the
//! pairing between them, and information-preservation witnesses.

mod extractor;
mod influence;
mod registry;
mod updates;

pub use extractor::{basis_extractor, povm_extractor, povm_extractor_on, Extractor, MemoryUpdate};
pub use influence::no_influence;
pub use registry::{ip_witness, witness_from_recovery, Pair, PerspectivalRegistry, TheoryKind};
pub use updates::{
    classical_copy_recovery, classical_copy_update, coherent_copy_update, collapse_update,
    collapse_update_on, is_collapse, naimark_update, naimark_update_on, recovery_for_isometry,
};

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TheoryError {
    #[error("POVM element {index} is not positive semidefinite: {source}")]
    NotPsd { index: usize, source: LinalgError },
    #[error("POVM elements do not sum to the identity (deviation {deviation:e})")]
    NotResolution { deviation: f64 },
    #[error("transform is not causal (deviation {deviation:e})")]
    NotCausal { deviation: f64 },
    #[error("extractor output wire {index} is not classical")]
    NotClassicalOutput { index: usize },
    #[error("update output must be memory ⊗ input: {0}")]
    BadUpdateShape(String),
    #[error("extractor is already registered as pair {index}")]
    DuplicateExtractor { index: usize },
    #[error("update is already registered as pair {index}")]
    DuplicateUpdate { index: usize },
    #[error("recovery does not invert the update (deviation {deviation:e})")]
    BadRecovery { deviation: f64 },
    #[error("{0} is not registered")]
    NotRegistered(&'static str),
    #[error("update has no recovery; the theory is not information preserving here")]
    NoRecovery,
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
