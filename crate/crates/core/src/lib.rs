//! Perspectival probabilistic circuits.
//!
//! Typed circuits whose measurements have two faces: a probability extractor
//! (the observer's own view) and a memory update (the view of someone who
//! later measures the observer). On top of that sit certifiers for
//! local-hidden-variable models and the layered Wigner-friend construction
//! that turns Bell nonlocality plus information preservation into a failure
//! of any global outcome distribution.
//!
//! The numeric core ([`linalg`], [`circuit`]) is generic over [`Scalar`];
//! the aliases below fix the double-precision instantiation used by the
//! higher layers.

pub mod circuit;
pub mod linalg;
pub mod nonlocality;
mod scalar;
pub mod theory;
pub mod wigner;

pub use scalar::Scalar;

pub use num_complex::Complex;

/// Double-precision complex matrix.
pub type Matrix = linalg::ComplexMatrix<f64>;
/// Single-precision complex matrix.
pub type Matrix32 = linalg::ComplexMatrix<f32>;
/// Double-precision transform.
pub type Transform = circuit::Transform<f64>;
/// Single-precision transform.
pub type Transform32 = circuit::Transform<f32>;
/// Double-precision complex scalar.
pub type C64 = Complex<f64>;

/// Tolerance used throughout when the caller does not pick one.
pub const DEFAULT_TOL: f64 = 1e-9;
