use super::{digits, flat, NonlocalityError};

/// Conditional distribution `p(a₁…aₙ | x₁…xₙ)`.
///
/// Stored as one block per setting tuple (row-major over settings), each
/// block row-major over outcome tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct CondDist {
    settings: Vec<usize>,
    outcomes: Vec<usize>,
    probs: Vec<f64>,
}

impl CondDist {
    pub fn new(settings: Vec<usize>, outcomes: Vec<usize>, probs: Vec<f64>, tol: f64) -> Result<Self, NonlocalityError> {
        if settings.len() != outcomes.len() || settings.is_empty() {
            return Err(NonlocalityError::WrongShape(format!(
                "{} setting counts and {} outcome counts",
                settings.len(),
                outcomes.len()
            )));
        }
        if settings.iter().chain(&outcomes).any(|&c| c == 0) {
            return Err(NonlocalityError::WrongShape("zero cardinality".into()));
        }
        let contexts: usize = settings.iter().product();
        let per: usize = outcomes.iter().product();
        if probs.len() != contexts * per {
            return Err(NonlocalityError::WrongShape(format!(
                "expected {} probabilities, got {}",
                contexts * per,
                probs.len()
            )));
        }
        for (context, block) in probs.chunks(per).enumerate() {
            if let Some(&value) = block.iter().find(|&&v| !(v >= -tol)) {
                return Err(NonlocalityError::Negative { context, value });
            }
            let total: f64 = block.iter().sum();
            if (total - 1.0).abs() > tol {
                return Err(NonlocalityError::NotNormalized { context, total });
            }
        }
        Ok(Self {
            settings,
            outcomes,
            probs,
        })
    }

    pub fn from_fn(
        settings: Vec<usize>,
        outcomes: Vec<usize>,
        tol: f64,
        f: impl Fn(&[usize], &[usize]) -> f64,
    ) -> Result<Self, NonlocalityError> {
        let contexts: usize = settings.iter().product();
        let per: usize = outcomes.iter().product();
        let mut probs = Vec::with_capacity(contexts * per);
        for xi in 0..contexts {
            let x = digits(xi, &settings);
            for ai in 0..per {
                probs.push(f(&x, &digits(ai, &outcomes)));
            }
        }
        Self::new(settings, outcomes, probs, tol)
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_contexts(&self) -> usize {
        self.settings.iter().product()
    }

    pub fn outcomes_per_context(&self) -> usize {
        self.outcomes.iter().product()
    }

    /// Setting tuple of context `index`.
    pub fn setting_tuple(&self, index: usize) -> Vec<usize> {
        digits(index, &self.settings)
    }

    pub fn outcome_tuple(&self, index: usize) -> Vec<usize> {
        digits(index, &self.outcomes)
    }

    pub fn context_index(&self, x: &[usize]) -> usize {
        flat(x, &self.settings)
    }

    pub fn outcome_index(&self, a: &[usize]) -> usize {
        flat(a, &self.outcomes)
    }

    /// The distribution over outcome tuples for setting tuple `x`.
    pub fn context(&self, x: &[usize]) -> &[f64] {
        let per = self.outcomes_per_context();
        let c = self.context_index(x);
        &self.probs[c * per..(c + 1) * per]
    }

    pub fn get(&self, x: &[usize], a: &[usize]) -> f64 {
        self.context(x)[self.outcome_index(a)]
    }

    /// Largest entrywise difference; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.settings != other.settings || self.outcomes != other.outcomes {
            return f64::INFINITY;
        }
        self.probs
            .iter()
            .zip(&other.probs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_access() {
        let p = CondDist::from_fn(vec![2, 3], vec![2, 2], 1e-9, |x, a| {
            if a[0] == x[0] % 2 && a[1] == x[1] % 2 {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        assert_eq!(p.num_contexts(), 6);
        assert_eq!(p.get(&[1, 2], &[1, 0]), 1.0);
        assert_eq!(p.setting_tuple(5), vec![1, 2]);
        assert_eq!(p.context(&[0, 1]), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            CondDist::new(vec![1], vec![2], vec![0.5, 0.48], 1e-9),
            Err(NonlocalityError::NotNormalized { context: 0, .. })
        ));
        assert!(matches!(
            CondDist::new(vec![1], vec![2], vec![1.5, -0.5], 1e-9),
            Err(NonlocalityError::Negative { .. })
        ));
        assert!(CondDist::new(vec![1], vec![2], vec![1.0], 1e-9).is_err());
        assert!(CondDist::new(vec![1], vec![2], vec![f64::NAN, 1.0], 1e-9).is_err());
    }
}
