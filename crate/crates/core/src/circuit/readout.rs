use num_complex::Complex;

use super::{CircuitError, SystemType, Transform, Wire};
use crate::linalg::ComplexMatrix;
use crate::Scalar;

/// Joint distribution over classical wires, flattened row-major (first wire
/// most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct ProbTable<T: Scalar = f64> {
    cards: Vec<usize>,
    probs: Vec<T>,
}

impl<T: Scalar> ProbTable<T> {
    pub fn new(cards: Vec<usize>, probs: Vec<T>) -> Result<Self, CircuitError> {
        let n: usize = cards.iter().product();
        if n != probs.len() {
            return Err(CircuitError::DimensionMismatch(format!(
                "{} probabilities for cardinalities {cards:?}",
                probs.len()
            )));
        }
        Ok(Self { cards, probs })
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<T> {
        self.probs
    }

    pub fn get(&self, outcome: &[usize]) -> T {
        self.probs[self.flat_index(outcome)]
    }

    pub fn flat_index(&self, outcome: &[usize]) -> usize {
        assert_eq!(outcome.len(), self.cards.len(), "outcome arity");
        outcome
            .iter()
            .zip(&self.cards)
            .fold(0, |acc, (&o, &c)| {
                assert!(o < c, "outcome {o} out of range {c}");
                acc * c + o
            })
    }

    /// Outcome tuple of a flat index.
    pub fn outcome_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.cards.len()];
        for (slot, &c) in out.iter_mut().zip(&self.cards).rev() {
            *slot = index % c;
            index /= c;
        }
        out
    }

    /// Marginal on the listed wires, in the order given.
    pub fn marginal(&self, wires: &[usize]) -> ProbTable<T> {
        let cards: Vec<usize> = wires.iter().map(|&w| self.cards[w]).collect();
        let mut probs = vec![T::zero(); cards.iter().product()];
        for (i, &p) in self.probs.iter().enumerate() {
            let full = self.outcome_of(i);
            let idx = wires
                .iter()
                .zip(&cards)
                .fold(0, |acc, (&w, &c)| acc * c + full[w]);
            probs[idx] += p;
        }
        ProbTable { cards, probs }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.cards != other.cards {
            return T::infinity();
        }
        self.probs
            .iter()
            .zip(&other.probs)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }
}

/// Reads a normalized classical state off as a probability table.
///
/// Entries in `[-tol, 0)` are clamped to zero and the table renormalized.
pub fn eval_to_dist<T: Scalar>(state: &Transform<T>, tol: T) -> Result<ProbTable<T>, CircuitError> {
    if !state.is_state() {
        return Err(CircuitError::TypeMismatch {
            index: 0,
            detail: format!("expected a state, input is {}", state.input()),
        });
    }
    if let Some(index) = state.output().wires().iter().position(|w| w.is_quantum()) {
        return Err(CircuitError::NotClassicalOutput { index });
    }
    let column = state.transfer().col_vec(0);
    let mut worst: Option<(usize, T, &str)> = None;
    let mut note = |i: usize, v: T, why: &'static str| {
        if worst.is_none_or(|(_, w, _)| v.abs() > w.abs()) {
            worst = Some((i, v, why));
        }
    };
    let mut probs = Vec::with_capacity(column.len());
    for (i, z) in column.iter().enumerate() {
        if z.im.abs() > tol {
            note(i, z.im, "imaginary part");
        }
        if z.re < -tol {
            note(i, z.re, "negative probability");
        }
        probs.push(z.re.max(T::zero()));
    }
    if let Some((index, value, why)) = worst {
        return Err(CircuitError::NotADistribution {
            index,
            value: value.to_f64_lossy(),
            detail: why.into(),
        });
    }
    let total: T = probs.iter().copied().sum();
    if (total - T::one()).abs() > tol {
        return Err(CircuitError::NotADistribution {
            index: 0,
            value: total.to_f64_lossy(),
            detail: "total probability differs from 1".into(),
        });
    }
    for p in &mut probs {
        *p /= total;
    }
    let cards = state.output().wires().iter().map(|w| w.levels()).collect();
    ProbTable::new(cards, probs)
}

impl<T: Scalar> Transform<T> {
    /// Reads every wire in its computational basis: quantum wires become
    /// classical wires of the same level count, classical wires pass through.
    pub fn computational_readout(sys: &SystemType) -> Self {
        let one = Complex::new(T::one(), T::zero());
        let mut transfer = ComplexMatrix::from_fn(1, 1, |_, _| one);
        let mut out = Vec::with_capacity(sys.len());
        for &w in sys.wires() {
            let factor = match w {
                Wire::Classical(n) => ComplexMatrix::identity(n),
                Wire::Quantum(d) => ComplexMatrix::from_fn(d, d * d, |r, c| {
                    if c == r * d + r {
                        one
                    } else {
                        Complex::new(T::zero(), T::zero())
                    }
                }),
            };
            transfer = transfer.kron(&factor);
            out.push(Wire::Classical(w.levels()));
        }
        Self::new(sys.clone(), SystemType::new(out), transfer)
            .expect("shape is consistent")
            .with_label("readout")
    }
}
