//! Hermitian spectral calculus through cyclic Jacobi rotations.
//!
//! A complex Hermitian `A = X + iY` is handled through its real symmetric
//! embedding `[[X, -Y], [Y, X]]`. The embedding is a *-homomorphism, so any
//! spectral function commutes with it: `f(embed(A)) = embed(f(A))`, and every
//! eigenvalue of `A` shows up twice in the embedding.

use num_complex::Complex;

use super::{ComplexMatrix, LinalgError};
use crate::Scalar;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix (row-major, `n×n`).
///
/// Returns eigenvalues and a row-major matrix whose columns are the
/// matching orthonormal eigenvectors.
pub fn symmetric_eigen<T: Scalar>(a: &[T], n: usize) -> Result<(Vec<T>, Vec<T>), LinalgError> {
    if a.len() != n * n {
        return Err(LinalgError::DimensionMismatch(format!(
            "symmetric_eigen: expected {} entries, got {}",
            n * n,
            a.len()
        )));
    }
    let mut m = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let scale = m.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
    if scale == T::zero() {
        return Ok((vec![T::zero(); n], v));
    }
    let threshold = T::epsilon() * scale * T::lit(n as f64);

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[p * n + q].abs());
            }
        }
        if off <= threshold {
            let values = (0..n).map(|i| m[i * n + i]).collect();
            return Ok((values, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(LinalgError::IterationLimit {
        iterations: MAX_SWEEPS,
        detail: "Jacobi sweeps did not converge".into(),
    })
}

fn check_hermitian<T: Scalar>(a: &ComplexMatrix<T>, tol: T) -> Result<(), LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let dev = a.hermitian_deviation();
    if dev > tol {
        return Err(LinalgError::NotHermitian {
            deviation: dev.to_f64_lossy(),
        });
    }
    Ok(())
}

fn embed<T: Scalar>(a: &ComplexMatrix<T>) -> Vec<T> {
    let n = a.rows();
    let m = 2 * n;
    let mut out = vec![T::zero(); m * m];
    for r in 0..n {
        for c in 0..n {
            let z = a[(r, c)];
            out[r * m + c] = z.re;
            out[r * m + (c + n)] = -z.im;
            out[(r + n) * m + c] = z.im;
            out[(r + n) * m + (c + n)] = z.re;
        }
    }
    out
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues<T: Scalar>(a: &ComplexMatrix<T>, tol: T) -> Result<Vec<T>, LinalgError> {
    check_hermitian(a, tol)?;
    let n = a.rows();
    let (mut values, _) = symmetric_eigen(&embed(&a.hermitian_part()), 2 * n)?;
    values.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    // each eigenvalue appears twice in the embedding
    Ok(values.into_iter().step_by(2).collect())
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function<T: Scalar>(
    a: &ComplexMatrix<T>,
    tol: T,
    f: impl Fn(T) -> T,
) -> Result<ComplexMatrix<T>, LinalgError> {
    check_hermitian(a, tol)?;
    let n = a.rows();
    let m = 2 * n;
    let (values, vectors) = symmetric_eigen(&embed(&a.hermitian_part()), m)?;
    let fv: Vec<T> = values.iter().map(|&x| f(x)).collect();
    // B = Q diag(f) Qᵀ, only the left half of the blocks is needed
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut re = T::zero();
            let mut im = T::zero();
            for (k, &w) in fv.iter().enumerate() {
                if w == T::zero() {
                    continue;
                }
                let qc = vectors[c * m + k];
                re += vectors[r * m + k] * w * qc;
                im += vectors[(r + n) * m + k] * w * qc;
            }
            out[(r, c)] = Complex::new(re, im);
        }
    }
    Ok(out.hermitian_part())
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-tol, 0)`, and positive ones at rounding level, are
/// clamped to zero; anything below `-tol` is rejected as
/// [`LinalgError::NotPsd`].
pub fn mat_sqrt_hermitian<T: Scalar>(
    a: &ComplexMatrix<T>,
    tol: T,
) -> Result<ComplexMatrix<T>, LinalgError> {
    check_hermitian(a, tol)?;
    let n = a.rows();
    let (values, _) = symmetric_eigen(&embed(&a.hermitian_part()), 2 * n)?;
    if let Some(&min) = values.iter().min_by(|x, y| x.partial_cmp(y).unwrap()) {
        if min < -tol {
            return Err(LinalgError::NotPsd {
                eigenvalue: min.to_f64_lossy(),
            });
        }
    }
    // eigenvalues at rounding level are zero; their square roots would not be
    let floor = T::epsilon() * a.max_abs() * T::lit(8.0 * n as f64);
    hermitian_function(a, tol, |x| if x <= floor { T::zero() } else { x.sqrt() })
}

/// Checks `A ⪰ 0` within `tol` (Hermitian within `tol`, eigenvalues `≥ -tol`).
pub fn check_psd<T: Scalar>(a: &ComplexMatrix<T>, tol: T) -> Result<(), LinalgError> {
    let values = hermitian_eigenvalues(a, tol)?;
    match values.first() {
        Some(&min) if min < -tol => Err(LinalgError::NotPsd {
            eigenvalue: min.to_f64_lossy(),
        }),
        _ => Ok(()),
    }
}
