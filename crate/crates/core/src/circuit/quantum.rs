//! Quantum constructions on top of the vectorized representation.
//!
//! A quantum wire of dimension `d` stores `ρ` row-major (`|i⟩⟨j|` at `i·d + j`),
//! and a multi-wire system is the Kronecker product of its wires. That wire
//! layout differs from row-major vectorization of the joint operator
//! (`(i₁i₂)(j₁j₂)` vs `(i₁j₁)(i₂j₂)`), so everything here converts between the two.

use num_complex::Complex;

use super::{CircuitError, SystemType, Transform, Wire};
use crate::linalg::ComplexMatrix;
use crate::Scalar;

fn quantum_dims(sys: &SystemType) -> Result<Vec<usize>, CircuitError> {
    sys.wires()
        .iter()
        .enumerate()
        .map(|(i, w)| match *w {
            Wire::Quantum(d) => Ok(d),
            Wire::Classical(_) => Err(CircuitError::TypeMismatch {
                index: i,
                detail: format!("expected a quantum wire in {sys}"),
            }),
        })
        .collect()
}

/// Maps joint operator indices `(row, col)` of an all-quantum system to the
/// position of `|row⟩⟨col|` in the wire layout.
struct Layout {
    dims: Vec<usize>,
}

impl Layout {
    fn new(sys: &SystemType) -> Result<Self, CircuitError> {
        Ok(Self {
            dims: quantum_dims(sys)?,
        })
    }

    fn hilbert_dim(&self) -> usize {
        self.dims.iter().product()
    }

    fn index(&self, mut row: usize, mut col: usize) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for &d in self.dims.iter().rev() {
            let i = row % d;
            let j = col % d;
            row /= d;
            col /= d;
            idx += (i * d + j) * stride;
            stride *= d * d;
        }
        idx
    }
}

/// Vectorizes an operator on an all-quantum system into the wire layout.
pub fn vectorize<T: Scalar>(
    rho: &ComplexMatrix<T>,
    sys: &SystemType,
) -> Result<Vec<Complex<T>>, CircuitError> {
    let layout = Layout::new(sys)?;
    let d = layout.hilbert_dim();
    if rho.rows() != d || rho.cols() != d {
        return Err(CircuitError::DimensionMismatch(format!(
            "operator is {}x{} but {sys} has dimension {d}",
            rho.rows(),
            rho.cols()
        )));
    }
    let mut v = vec![Complex::new(T::zero(), T::zero()); d * d];
    for r in 0..d {
        for c in 0..d {
            v[layout.index(r, c)] = rho[(r, c)];
        }
    }
    Ok(v)
}

/// Inverse of [`vectorize`].
pub fn devectorize<T: Scalar>(
    v: &[Complex<T>],
    sys: &SystemType,
) -> Result<ComplexMatrix<T>, CircuitError> {
    let layout = Layout::new(sys)?;
    let d = layout.hilbert_dim();
    if v.len() != d * d {
        return Err(CircuitError::DimensionMismatch(format!(
            "vector of length {} does not match {sys}",
            v.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(d, d, |r, c| v[layout.index(r, c)]))
}

impl<T: Scalar> Transform<T> {
    /// Pure state `|ψ⟩⟨ψ|` on an all-quantum system.
    pub fn state_from_ket(amplitudes: &[Complex<T>], sys: &SystemType, tol: T) -> Result<Self, CircuitError> {
        let d = Layout::new(sys)?.hilbert_dim();
        if amplitudes.len() != d {
            return Err(CircuitError::DimensionMismatch(format!(
                "ket of length {} for {sys} (dimension {d})",
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if (norm - T::one()).abs() > tol {
            return Err(CircuitError::NotNormalized {
                norm: norm.to_f64_lossy(),
            });
        }
        Self::state_from_density(&ComplexMatrix::outer(amplitudes), sys)
    }

    /// State with the given density operator (not validated beyond shape).
    pub fn state_from_density(rho: &ComplexMatrix<T>, sys: &SystemType) -> Result<Self, CircuitError> {
        let v = vectorize(rho, sys)?;
        Self::new(SystemType::trivial(), sys.clone(), ComplexMatrix::column(&v))
    }

    /// Density operator of a state on an all-quantum system.
    pub fn density(&self) -> Result<ComplexMatrix<T>, CircuitError> {
        if !self.is_state() {
            return Err(CircuitError::TypeMismatch {
                index: 0,
                detail: format!("expected a state, input is {}", self.input()),
            });
        }
        devectorize(&self.transfer().col_vec(0), self.output())
    }

    /// Builds the transform of a linear map given on operators of all-quantum
    /// systems, by evaluating it on every `|a⟩⟨b|`.
    pub fn from_operator_map(
        input: &SystemType,
        output: &SystemType,
        map: impl Fn(&ComplexMatrix<T>) -> ComplexMatrix<T>,
    ) -> Result<Self, CircuitError> {
        let in_layout = Layout::new(input)?;
        let out_layout = Layout::new(output)?;
        let din = in_layout.hilbert_dim();
        let dout = out_layout.hilbert_dim();
        let mut transfer = ComplexMatrix::zeros(dout * dout, din * din);
        let one = Complex::new(T::one(), T::zero());
        for a in 0..din {
            for b in 0..din {
                let mut unit = ComplexMatrix::zeros(din, din);
                unit[(a, b)] = one;
                let image = map(&unit);
                if image.rows() != dout || image.cols() != dout {
                    return Err(CircuitError::DimensionMismatch(format!(
                        "operator map returned {}x{}, expected {dout}x{dout}",
                        image.rows(),
                        image.cols()
                    )));
                }
                let col = in_layout.index(a, b);
                for i in 0..dout {
                    for j in 0..dout {
                        transfer[(out_layout.index(i, j), col)] = image[(i, j)];
                    }
                }
            }
        }
        Self::new(input.clone(), output.clone(), transfer)
    }

    /// `ρ ↦ Σₖ Kₖ ρ Kₖ†`.
    pub fn channel_from_kraus(
        kraus: &[ComplexMatrix<T>],
        input: &SystemType,
        output: &SystemType,
    ) -> Result<Self, CircuitError> {
        let in_layout = Layout::new(input)?;
        let out_layout = Layout::new(output)?;
        let din = in_layout.hilbert_dim();
        let dout = out_layout.hilbert_dim();
        if let Some(k) = kraus.iter().find(|k| k.rows() != dout || k.cols() != din) {
            return Err(CircuitError::DimensionMismatch(format!(
                "Kraus operator is {}x{}, expected {dout}x{din}",
                k.rows(),
                k.cols()
            )));
        }
        let mut transfer = ComplexMatrix::zeros(dout * dout, din * din);
        for k in kraus {
            for i in 0..dout {
                for j in 0..dout {
                    let row = out_layout.index(i, j);
                    for a in 0..din {
                        let kia = k[(i, a)];
                        if kia.re == T::zero() && kia.im == T::zero() {
                            continue;
                        }
                        for b in 0..din {
                            let col = in_layout.index(a, b);
                            transfer[(row, col)] += kia * k[(j, b)].conj();
                        }
                    }
                }
            }
        }
        Self::new(input.clone(), output.clone(), transfer)
    }

    /// `ρ ↦ VρV†` for an isometry `V` (`V†V = I` within `tol`).
    pub fn channel_from_isometry(
        v: &ComplexMatrix<T>,
        input: &SystemType,
        output: &SystemType,
        tol: T,
    ) -> Result<Self, CircuitError> {
        check_isometry(v, tol)?;
        Self::channel_from_kraus(std::slice::from_ref(v), input, output)
    }

    /// Complete dephasing in the computational basis of a quantum wire.
    pub fn dephase(d: usize) -> Self {
        let mut transfer = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            transfer[(i * d + i, i * d + i)] = Complex::new(T::one(), T::zero());
        }
        let sys = SystemType::quantum(d);
        Self::new(sys.clone(), sys, transfer).expect("square")
    }
}

/// Checks `V†V = I` within `tol`.
pub fn check_isometry<T: Scalar>(v: &ComplexMatrix<T>, tol: T) -> Result<(), CircuitError> {
    let gram = v.adjoint().matmul(v)?;
    let deviation = gram.max_abs_diff(&ComplexMatrix::identity(v.cols()));
    if deviation > tol {
        return Err(CircuitError::NotIsometry {
            deviation: deviation.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Computational basis ket `|index⟩` in dimension `d`.
pub fn basis_ket<T: Scalar>(d: usize, index: usize) -> Vec<Complex<T>> {
    let mut v = vec![Complex::new(T::zero(), T::zero()); d];
    v[index] = Complex::new(T::one(), T::zero());
    v
}
