//! Dense complex linear algebra and a small exact-certificate LP solver.

mod eigen;
mod matrix;
mod partial;
mod simplex;

pub use eigen::{
    check_psd, hermitian_eigenvalues, hermitian_function, mat_sqrt_hermitian, symmetric_eigen,
};
pub use matrix::{ComplexMatrix, RealMatrix};
pub use partial::partial_trace;
pub use simplex::{
    lp_feasibility, lp_minimize, LinearProgram, LpFeasibilityProblem, LpOutcome, LpSolution,
    DEFAULT_LP_ITERATIONS,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("iteration limit {iterations} reached: {detail}")]
    IterationLimit { iterations: usize, detail: String },
    #[error("numerical failure: {0}")]
    Numerical(String),
}
