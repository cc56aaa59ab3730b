//! Local-hidden-variable and marginal-problem certifiers, the possibilistic
//! (Hardy-style) check, and CHSH utilities.

mod chsh;
mod dist;
pub mod fixtures;
mod marginal;
mod possibilistic;

pub use chsh::{chsh_value, no_signalling_check};
pub use dist::CondDist;
pub use marginal::{
    lhv_feasibility, lhv_feasibility_capped, lhv_problem, marginal_problem_feasibility,
    marginal_problem_feasibility_capped, AoeVerdict, BellFunctional, Context, MarginalProblem,
    Variable,
};
pub use possibilistic::{possibilistic_check, possibilistic_check_capped, Cell, PossibilisticReport};

use thiserror::Error;

use crate::linalg::LinalgError;

/// Largest number of global assignments enumerated unless the caller says otherwise.
pub const DEFAULT_MAX_ASSIGNMENTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NonlocalityError {
    #[error("{assignments} global assignments exceed the cap of {cap}")]
    TooLarge { assignments: String, cap: usize },
    #[error("inconsistent declaration: {0}")]
    InconsistentDeclaration(String),
    #[error("context {context} sums to {total}")]
    NotNormalized { context: usize, total: f64 },
    #[error("negative probability {value} in context {context}")]
    Negative { context: usize, value: f64 },
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Mixed-radix decoding, first digit most significant.
pub fn digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

/// Inverse of [`digits`].
pub fn flat(values: &[usize], radices: &[usize]) -> usize {
    values.iter().zip(radices).fold(0, |acc, (&v, &r)| acc * r + v)
}

/// Product of `radices`, or `TooLarge` when it exceeds `cap`.
pub(crate) fn checked_count(radices: &[usize], cap: usize) -> Result<usize, NonlocalityError> {
    let mut total: u128 = 1;
    for &r in radices {
        total = total.saturating_mul(r as u128);
    }
    if total > cap as u128 {
        return Err(NonlocalityError::TooLarge {
            assignments: total.to_string(),
            cap,
        });
    }
    Ok(total as usize)
}
