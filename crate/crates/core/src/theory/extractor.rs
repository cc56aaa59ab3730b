use num_complex::Complex;

use super::TheoryError;
use crate::circuit::{devectorize, vectorize, SystemType, Transform, Wire};
use crate::linalg::{check_psd, ComplexMatrix};

fn causal_deviation(t: &Transform) -> f64 {
    let lhs = Transform::discard(t.output())
        .transfer()
        .matmul(t.transfer())
        .expect("discard matches output");
    lhs.max_abs_diff(Transform::discard(t.input()).transfer())
}

/// A causal transform with all-classical output: the inside view of a
/// measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct Extractor {
    inner: Transform,
}

impl Extractor {
    pub fn new(inner: Transform, tol: f64) -> Result<Self, TheoryError> {
        if let Some(index) = inner.output().wires().iter().position(|w| w.is_quantum()) {
            return Err(TheoryError::NotClassicalOutput { index });
        }
        let deviation = causal_deviation(&inner);
        if deviation > tol {
            return Err(TheoryError::NotCausal { deviation });
        }
        Ok(Self { inner })
    }

    pub fn inner(&self) -> &Transform {
        &self.inner
    }

    pub fn into_inner(self) -> Transform {
        self.inner
    }

    pub fn input(&self) -> &SystemType {
        self.inner.input()
    }

    pub fn output(&self) -> &SystemType {
        self.inner.output()
    }

    /// Number of joint outcomes.
    pub fn outcomes(&self) -> usize {
        self.output().levels()
    }

    pub fn operationally_eq(&self, other: &Self, tol: f64) -> bool {
        self.inner.operationally_eq(&other.inner, tol)
    }

    /// `self ∘ first`, which is again an extractor when `first` is causal.
    pub fn after(&self, first: &Transform, tol: f64) -> Result<Self, TheoryError> {
        Self::new(self.inner.after(first)?, tol)
    }

    /// The effects `σᵢ` with `pᵢ = Tr(σᵢ ρ)`, for an all-quantum input.
    pub fn povm_elements(&self) -> Result<Vec<ComplexMatrix>, TheoryError> {
        let t = self.inner.transfer();
        (0..t.rows())
            .map(|i| Ok(devectorize(t.row(i), self.input())?.transpose()))
            .collect()
    }

    /// Memory system used when this measurement is recorded quantumly: one
    /// quantum wire per output wire, same level counts.
    pub fn quantum_memory(&self) -> SystemType {
        SystemType::new(
            self.output()
                .wires()
                .iter()
                .map(|w| Wire::Quantum(w.levels()))
                .collect(),
        )
    }
}

/// A causal transform `S → M ⊗ S`: the outside view of a measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MemoryUpdate {
    inner: Transform,
    memory: SystemType,
}

impl MemoryUpdate {
    pub fn new(inner: Transform, memory: SystemType, tol: f64) -> Result<Self, TheoryError> {
        let expected = memory.concat(inner.input());
        if expected != *inner.output() {
            return Err(TheoryError::BadUpdateShape(format!(
                "output {} but memory {} and input {}",
                inner.output(),
                memory,
                inner.input()
            )));
        }
        let deviation = causal_deviation(&inner);
        if deviation > tol {
            return Err(TheoryError::NotCausal { deviation });
        }
        Ok(Self { inner, memory })
    }

    pub fn inner(&self) -> &Transform {
        &self.inner
    }

    pub fn input(&self) -> &SystemType {
        self.inner.input()
    }

    pub fn output(&self) -> &SystemType {
        self.inner.output()
    }

    pub fn memory(&self) -> &SystemType {
        &self.memory
    }

    pub fn operationally_eq(&self, other: &Self, tol: f64) -> bool {
        self.memory == other.memory && self.inner.operationally_eq(&other.inner, tol)
    }
}

fn validate_povm(elements: &[ComplexMatrix], dim: usize, tol: f64) -> Result<(), TheoryError> {
    let mut total = ComplexMatrix::zeros(dim, dim);
    for (index, e) in elements.iter().enumerate() {
        if e.rows() != dim || e.cols() != dim {
            return Err(TheoryError::Circuit(crate::circuit::CircuitError::DimensionMismatch(
                format!("POVM element {index} is {}x{}, expected {dim}x{dim}", e.rows(), e.cols()),
            )));
        }
        check_psd(e, tol).map_err(|source| TheoryError::NotPsd { index, source })?;
        total = total.add(e)?;
    }
    let deviation = total.max_abs_diff(&ComplexMatrix::identity(dim));
    if deviation > tol {
        return Err(TheoryError::NotResolution { deviation });
    }
    Ok(())
}

pub(crate) fn check_povm(elements: &[ComplexMatrix], input: &SystemType, tol: f64) -> Result<(), TheoryError> {
    if !input.is_all_quantum() || input.is_empty() {
        return Err(TheoryError::Unsupported(format!(
            "POVMs act on quantum systems, got {input}"
        )));
    }
    validate_povm(elements, input.levels(), tol)
}

/// Extractor `ρ ↦ (Tr(σᵢρ))ᵢ` on a single quantum wire.
pub fn povm_extractor(elements: &[ComplexMatrix], tol: f64) -> Result<Extractor, TheoryError> {
    let d = elements.first().map_or(0, |e| e.rows());
    povm_extractor_on(
        elements,
        &SystemType::quantum(d),
        &SystemType::classical(elements.len()),
        tol,
    )
}

/// POVM extractor on an all-quantum `input`; outcomes are laid out over the
/// classical `output` row-major.
pub fn povm_extractor_on(
    elements: &[ComplexMatrix],
    input: &SystemType,
    output: &SystemType,
    tol: f64,
) -> Result<Extractor, TheoryError> {
    check_povm(elements, input, tol)?;
    if !output.is_all_classical() || output.levels() != elements.len() {
        return Err(TheoryError::Unsupported(format!(
            "{} outcomes do not fit classical output {output}",
            elements.len()
        )));
    }
    let rows: Vec<Vec<Complex<f64>>> = elements
        .iter()
        .map(|e| vectorize(&e.transpose(), input))
        .collect::<Result<_, _>>()?;
    let transfer = ComplexMatrix::new(rows.len(), input.dim(), rows.concat())?;
    Extractor::new(Transform::new(input.clone(), output.clone(), transfer)?, tol)
}

/// Projective measurement in an orthonormal basis given by kets.
pub fn basis_extractor(kets: &[Vec<Complex<f64>>], tol: f64) -> Result<Extractor, TheoryError> {
    let elements: Vec<ComplexMatrix> = kets.iter().map(|k| ComplexMatrix::outer(k)).collect();
    povm_extractor(&elements, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::eval_to_dist;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn z_basis() -> Vec<Vec<Complex<f64>>> {
        vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]]
    }

    #[test]
    fn z_on_plus_is_fair() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Transform::state_from_ket(&[c(h), c(h)], &SystemType::quantum(2), 1e-9).unwrap();
        let e = basis_extractor(&z_basis(), 1e-9).unwrap();
        let dist = eval_to_dist(&e.inner().after(&plus).unwrap(), 1e-9).unwrap();
        assert!((dist.probs()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trivial_povm() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let e = povm_extractor(&[half.clone(), half], 1e-9).unwrap();
        let zero = Transform::state_from_ket(&[c(1.0), c(0.0)], &SystemType::quantum(2), 1e-9).unwrap();
        let dist = eval_to_dist(&e.inner().after(&zero).unwrap(), 1e-9).unwrap();
        assert_eq!(dist.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn povm_validation() {
        let p0 = ComplexMatrix::outer(&[c(1.0), c(0.0)]);
        assert!(matches!(
            povm_extractor(std::slice::from_ref(&p0), 1e-9),
            Err(TheoryError::NotResolution { .. })
        ));
        let neg = ComplexMatrix::from_real(2, 2, &[-0.5, 0.0, 0.0, 0.0]).unwrap();
        let rest = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            povm_extractor(&[neg, rest], 1e-9),
            Err(TheoryError::NotPsd { index: 0, .. })
        ));
    }

    #[test]
    fn povm_elements_round_trip() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let y = vec![
            vec![c(h), Complex::new(0.0, h)],
            vec![c(h), Complex::new(0.0, -h)],
        ];
        let e = basis_extractor(&y, 1e-9).unwrap();
        let els = e.povm_elements().unwrap();
        assert!(els[0].max_abs_diff(&ComplexMatrix::outer(&y[0])) < 1e-15);
        assert!(els[1].max_abs_diff(&ComplexMatrix::outer(&y[1])) < 1e-15);
    }

    #[test]
    fn update_shape_is_checked() {
        let q2 = SystemType::quantum(2);
        let id = Transform::identity(&q2);
        assert!(matches!(
            MemoryUpdate::new(id, SystemType::quantum(2), 1e-9),
            Err(TheoryError::BadUpdateShape(_))
        ));
    }
}
