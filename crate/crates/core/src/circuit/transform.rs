use num_complex::Complex;

use super::{CircuitError, SystemType, Wire};
use crate::linalg::ComplexMatrix;
use crate::Scalar;

/// A linear map between the vectorized state spaces of two systems.
///
/// States (trivial input), effects and extractors (classical output),
/// channels and memory updates are all transforms; `∘` is the matrix product
/// of transfers and `⊗` their Kronecker product.
#[derive(Clone, Debug, PartialEq)]
pub struct Transform<T: Scalar = f64> {
    input: SystemType,
    output: SystemType,
    transfer: ComplexMatrix<T>,
    label: Option<String>,
}

impl<T: Scalar> Transform<T> {
    pub fn new(
        input: SystemType,
        output: SystemType,
        transfer: ComplexMatrix<T>,
    ) -> Result<Self, CircuitError> {
        if transfer.rows() != output.dim() || transfer.cols() != input.dim() {
            return Err(CircuitError::DimensionMismatch(format!(
                "transfer is {}x{} but {} -> {} needs {}x{}",
                transfer.rows(),
                transfer.cols(),
                input,
                output,
                output.dim(),
                input.dim()
            )));
        }
        if !transfer.is_finite() {
            return Err(CircuitError::DimensionMismatch(
                "transfer has non-finite entries".into(),
            ));
        }
        Ok(Self {
            input,
            output,
            transfer,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn input(&self) -> &SystemType {
        &self.input
    }

    pub fn output(&self) -> &SystemType {
        &self.output
    }

    pub fn transfer(&self) -> &ComplexMatrix<T> {
        &self.transfer
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn is_state(&self) -> bool {
        self.input.is_empty()
    }

    pub fn identity(sys: &SystemType) -> Self {
        Self {
            input: sys.clone(),
            output: sys.clone(),
            transfer: ComplexMatrix::identity(sys.dim()),
            label: None,
        }
    }

    pub fn zero(input: &SystemType, output: &SystemType) -> Self {
        Self {
            input: input.clone(),
            output: output.clone(),
            transfer: ComplexMatrix::zeros(output.dim(), input.dim()),
            label: None,
        }
    }

    /// Sequential composition `second ∘ first`.
    pub fn compose(second: &Self, first: &Self) -> Result<Self, CircuitError> {
        if let Some(index) = first.output.first_mismatch(&second.input) {
            return Err(CircuitError::TypeMismatch {
                index,
                detail: format!(
                    "cannot plug output {} into input {}",
                    first.output, second.input
                ),
            });
        }
        Ok(Self {
            input: first.input.clone(),
            output: second.output.clone(),
            transfer: second.transfer.matmul(&first.transfer)?,
            label: None,
        })
    }

    /// `self` after `first`; shorthand for `compose(self, first)`.
    pub fn after(&self, first: &Self) -> Result<Self, CircuitError> {
        Self::compose(self, first)
    }

    /// Parallel composition `left ⊗ right`.
    pub fn tensor(left: &Self, right: &Self) -> Self {
        Self {
            input: left.input.concat(&right.input),
            output: left.output.concat(&right.output),
            transfer: left.transfer.kron(&right.transfer),
            label: None,
        }
    }

    /// Tensor product of a list, left to right; the empty list is `1_I`.
    pub fn tensor_all<'a>(parts: impl IntoIterator<Item = &'a Self>) -> Self
    where
        T: 'a,
    {
        parts
            .into_iter()
            .fold(Self::identity(&SystemType::trivial()), |acc, t| {
                Self::tensor(&acc, t)
            })
    }

    pub fn add(a: &Self, b: &Self) -> Result<Self, CircuitError> {
        Self::check_same_type(a, b)?;
        Ok(Self {
            input: a.input.clone(),
            output: a.output.clone(),
            transfer: a.transfer.add(&b.transfer)?,
            label: None,
        })
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            input: self.input.clone(),
            output: self.output.clone(),
            transfer: self.transfer.scale_real(factor),
            label: self.label.clone(),
        }
    }

    fn check_same_type(a: &Self, b: &Self) -> Result<(), CircuitError> {
        if let Some(index) = a.input.first_mismatch(&b.input) {
            return Err(CircuitError::TypeMismatch {
                index,
                detail: format!("inputs {} and {} differ", a.input, b.input),
            });
        }
        if let Some(index) = a.output.first_mismatch(&b.output) {
            return Err(CircuitError::TypeMismatch {
                index,
                detail: format!("outputs {} and {} differ", a.output, b.output),
            });
        }
        Ok(())
    }

    /// The trace / discarding effect on `sys`.
    pub fn discard(sys: &SystemType) -> Self {
        let mut row = ComplexMatrix::from_real(1, 1, &[T::one()]).expect("1x1");
        for &w in sys.wires() {
            let factor = match w {
                Wire::Classical(n) => ComplexMatrix::from_real(1, n, &vec![T::one(); n]),
                Wire::Quantum(d) => {
                    let mut v = vec![T::zero(); d * d];
                    for i in 0..d {
                        v[i * d + i] = T::one();
                    }
                    ComplexMatrix::from_real(1, d * d, &v)
                }
            }
            .expect("shape is consistent");
            row = row.kron(&factor);
        }
        Self {
            input: sys.clone(),
            output: SystemType::trivial(),
            transfer: row,
            label: Some("discard".into()),
        }
    }

    /// `discard(output) ∘ self == discard(input)` within `tol`.
    pub fn is_causal(&self, tol: T) -> bool {
        let lhs = Self::discard(&self.output)
            .transfer
            .matmul(&self.transfer)
            .expect("discard matches output");
        lhs.max_abs_diff(&Self::discard(&self.input).transfer) <= tol
    }

    /// Equal types and transfers within `tol` (entrywise).
    pub fn operationally_eq(&self, other: &Self, tol: T) -> bool {
        self.input == other.input
            && self.output == other.output
            && self.transfer.max_abs_diff(&other.transfer) <= tol
    }

    /// Reorders wires: output wire `k` is input wire `order[k]`.
    pub fn permute(sys: &SystemType, order: &[usize]) -> Result<Self, CircuitError> {
        let n = sys.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
            return Err(CircuitError::DimensionMismatch(format!(
                "{order:?} is not a permutation of {n} wires"
            )));
        }
        let sizes: Vec<usize> = sys.wires().iter().map(|w| w.size()).collect();
        let out_wires: Vec<Wire> = order.iter().map(|&k| sys.wires()[k]).collect();
        let out_sys = SystemType::new(out_wires);
        let out_sizes: Vec<usize> = order.iter().map(|&k| sizes[k]).collect();
        let dim = sys.dim();
        let mut transfer = ComplexMatrix::zeros(dim, dim);
        let mut digits = vec![0usize; n];
        for col in 0..dim {
            let mut rest = col;
            for w in (0..n).rev() {
                digits[w] = rest % sizes[w];
                rest /= sizes[w];
            }
            let row = order
                .iter()
                .zip(&out_sizes)
                .fold(0, |acc, (&k, &s)| acc * s + digits[k]);
            transfer[(row, col)] = Complex::new(T::one(), T::zero());
        }
        Ok(Self {
            input: sys.clone(),
            output: out_sys,
            transfer,
            label: Some("permute".into()),
        })
    }

    /// `A ⊗ B → B ⊗ A`.
    pub fn swap(a: &SystemType, b: &SystemType) -> Self {
        let order: Vec<usize> = (a.len()..a.len() + b.len()).chain(0..a.len()).collect();
        Self::permute(&a.concat(b), &order).expect("valid permutation")
    }

    /// Classical state with the given probability vector on one wire.
    pub fn classical_state(probs: &[T]) -> Self {
        let transfer = ComplexMatrix::from_real(probs.len(), 1, probs).expect("column");
        Self {
            input: SystemType::trivial(),
            output: SystemType::classical(probs.len()),
            transfer,
            label: None,
        }
    }

    /// Classical state on an arbitrary all-classical system (joint vector, row-major).
    pub fn classical_joint_state(sys: &SystemType, probs: &[T]) -> Result<Self, CircuitError> {
        if !sys.is_all_classical() {
            return Err(CircuitError::TypeMismatch {
                index: sys.wires().iter().position(|w| w.is_quantum()).unwrap_or(0),
                detail: "classical state on a quantum wire".into(),
            });
        }
        let transfer = ComplexMatrix::from_real(probs.len(), 1, probs)?;
        Self::new(SystemType::trivial(), sys.clone(), transfer)
    }

    /// Classical map from a real matrix (`matrix[out][in]`); a causal map is
    /// column-stochastic.
    pub fn stochastic(input: &SystemType, output: &SystemType, matrix: &[Vec<T>]) -> Result<Self, CircuitError> {
        if !input.is_all_classical() || !output.is_all_classical() {
            return Err(CircuitError::TypeMismatch {
                index: 0,
                detail: "stochastic maps act on classical wires only".into(),
            });
        }
        if matrix.len() != output.dim() || matrix.iter().any(|r| r.len() != input.dim()) {
            return Err(CircuitError::DimensionMismatch(format!(
                "stochastic matrix must be {}x{}",
                output.dim(),
                input.dim()
            )));
        }
        let transfer = ComplexMatrix::from_real(output.dim(), input.dim(), &matrix.concat())?;
        Self::new(input.clone(), output.clone(), transfer)
    }
}
