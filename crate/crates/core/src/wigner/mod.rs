//! The layered Wigner-friend construction: from a Bell scenario and a
//! perspectival theory, build per-party chains of memory updates, read every
//! context off the circuit, and ask whether one global outcome distribution
//! explains them all.

mod construct;
mod context;
mod model;
mod preset;

pub use construct::{
    construct, construct_with_explicit_layers, ConstructedScenario, ExplicitLayer, Layer,
};
pub use context::{
    aoe_audit, aoe_audit_capped, context_marginal, context_marginal_ordered, context_report,
    joint_readout, verify_context_match, ContextEntry, ContextMatch, ContextReport, JointReadout,
};
pub use model::{predicted_dist, BellScenarioModel};
pub use preset::{
    classical_hardy_model, hardy_ket, hardy_model, hardy_preset, pm_basis, random_projective_model,
    z_basis, HardyPreset,
};

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::nonlocality::NonlocalityError;
use crate::theory::TheoryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WignerError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("party {party}, layer {layer}: {detail}")]
    TypeMismatch {
        party: usize,
        layer: usize,
        detail: String,
    },
    #[error("setting tuple {0:?} out of range")]
    SettingOutOfRange(Vec<usize>),
    #[error("party {party}, layer {layer} does not keep a classical record")]
    NotRecordKeeping { party: usize, layer: usize },
    #[error("joint readout disagrees with context {context:?} by {deviation:e}")]
    ContextMismatch { context: Vec<usize>, deviation: f64 },
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Nonlocality(#[from] NonlocalityError),
}
