use perspectiva::circuit::CircuitError;
use perspectiva::linalg::LinalgError;
use perspectiva::nonlocality::NonlocalityError;
use perspectiva::theory::TheoryError;
use perspectiva::wigner::WignerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {origin}: {detail}")]
    Parse { origin: String, detail: String },
    #[error("invalid input in {origin}: {detail}")]
    Validation { origin: String, detail: String },
    #[error("limit reached: {0}")]
    Limit(String),
}

impl CliError {
    /// 1 for anything wrong with the input, 2 when a computation hit a limit.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Limit(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn parse(origin: &str, detail: impl Into<String>) -> Self {
        CliError::Parse {
            origin: origin.to_string(),
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(origin: &str, detail: impl Into<String>) -> Self {
        CliError::Validation {
            origin: origin.to_string(),
            detail: detail.into(),
        }
    }

    /// Wraps a library error, sorting limits from input problems.
    pub(crate) fn from_core<E: HitsLimit + std::fmt::Display>(origin: &str, e: E) -> Self {
        if e.hits_limit() {
            CliError::Limit(e.to_string())
        } else {
            CliError::invalid(origin, e.to_string())
        }
    }
}

/// Whether an error comes from a size cap or an iteration limit.
pub(crate) trait HitsLimit {
    fn hits_limit(&self) -> bool;
}

impl HitsLimit for LinalgError {
    fn hits_limit(&self) -> bool {
        matches!(self, LinalgError::IterationLimit { .. })
    }
}

impl HitsLimit for CircuitError {
    fn hits_limit(&self) -> bool {
        matches!(self, CircuitError::Linalg(e) if e.hits_limit())
    }
}

impl HitsLimit for TheoryError {
    fn hits_limit(&self) -> bool {
        match self {
            TheoryError::NotPsd { source, .. } => source.hits_limit(),
            TheoryError::Circuit(e) => e.hits_limit(),
            TheoryError::Linalg(e) => e.hits_limit(),
            _ => false,
        }
    }
}

impl HitsLimit for NonlocalityError {
    fn hits_limit(&self) -> bool {
        match self {
            NonlocalityError::TooLarge { .. } => true,
            NonlocalityError::Linalg(e) => e.hits_limit(),
            _ => false,
        }
    }
}

impl HitsLimit for WignerError {
    fn hits_limit(&self) -> bool {
        match self {
            WignerError::Theory(e) => e.hits_limit(),
            WignerError::Circuit(e) => e.hits_limit(),
            WignerError::Nonlocality(e) => e.hits_limit(),
            _ => false,
        }
    }
}
