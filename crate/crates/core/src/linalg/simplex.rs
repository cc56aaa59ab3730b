//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Problems are in equality standard form `A·x = b, x ≥ 0`. Phase one adds one
//! artificial column per row (rows with negative right-hand side are negated
//! first) and minimises their sum. The artificial block of the tableau always
//! holds `B⁻¹`, so dual prices, and hence Farkas certificates, are read straight
//! off the reduced-cost row.

use super::{LinalgError, RealMatrix};
use crate::Scalar;

pub const DEFAULT_LP_ITERATIONS: usize = 50_000;

/// Find `x ≥ 0` with `A·x = b` (to within `tolerance`).
#[derive(Clone, Debug, PartialEq)]
pub struct LpFeasibilityProblem<T: Scalar = f64> {
    pub constraints: RealMatrix<T>,
    pub rhs: Vec<T>,
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Scalar> LpFeasibilityProblem<T> {
    pub fn new(constraints: RealMatrix<T>, rhs: Vec<T>, tolerance: T) -> Self {
        Self {
            constraints,
            rhs,
            tolerance,
            max_iterations: DEFAULT_LP_ITERATIONS,
        }
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T: Scalar = f64> {
    /// `‖A·x − b‖∞ ≤ tol` and `x ≥ 0`.
    Feasible { weights: Vec<T> },
    /// `yᵀA ≤ tol` componentwise and `yᵀb > tol`.
    Infeasible { farkas: Vec<T> },
}

impl<T: Scalar> LpOutcome<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }

    pub fn weights(&self) -> Option<&[T]> {
        match self {
            LpOutcome::Feasible { weights } => Some(weights),
            LpOutcome::Infeasible { .. } => None,
        }
    }

    pub fn farkas(&self) -> Option<&[T]> {
        match self {
            LpOutcome::Infeasible { farkas } => Some(farkas),
            LpOutcome::Feasible { .. } => None,
        }
    }
}

/// `minimize cᵀx  s.t.  A·x = b, x ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram<T: Scalar = f64> {
    pub constraints: RealMatrix<T>,
    pub rhs: Vec<T>,
    pub objective: Vec<T>,
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(constraints: RealMatrix<T>, rhs: Vec<T>, objective: Vec<T>, tolerance: T) -> Self {
        Self {
            constraints,
            rhs,
            objective,
            tolerance,
            max_iterations: DEFAULT_LP_ITERATIONS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpSolution<T: Scalar = f64> {
    /// Optimal primal point, its objective and dual prices `y` with
    /// `c − Aᵀy ≥ 0` and `bᵀy = cᵀx`.
    Optimal {
        x: Vec<T>,
        objective: T,
        duals: Vec<T>,
    },
    Infeasible {
        farkas: Vec<T>,
    },
    Unbounded,
}

struct Tableau<T: Scalar> {
    m: usize,
    n: usize,
    width: usize,
    cells: Vec<T>,
    reduced: Vec<T>,
    basis: Vec<usize>,
    sign: Vec<T>,
    iterations: usize,
    max_iterations: usize,
    eps: T,
}

enum Termination {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn new(a: &RealMatrix<T>, b: &[T], max_iterations: usize) -> Self {
        let m = a.rows();
        let n = a.cols();
        let width = n + m + 1;
        let mut cells = vec![T::zero(); m * width];
        let mut sign = vec![T::one(); m];
        for i in 0..m {
            if b[i] < T::zero() {
                sign[i] = -T::one();
            }
            let row = &mut cells[i * width..(i + 1) * width];
            for (dst, &src) in row[..n].iter_mut().zip(a.row(i)) {
                *dst = sign[i] * src;
            }
            row[n + i] = T::one();
            row[width - 1] = sign[i] * b[i];
        }
        Self {
            m,
            n,
            width,
            cells,
            reduced: vec![T::zero(); width],
            basis: (n..n + m).collect(),
            sign,
            iterations: 0,
            max_iterations,
            eps: T::pivot_tol(),
        }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> T {
        self.cells[r * self.width + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> T {
        self.at(r, self.width - 1)
    }

    /// Sets the reduced-cost row for column costs `cost` (length `n + m`).
    fn price(&mut self, cost: &[T]) {
        let mut reduced: Vec<T> = cost.iter().copied().chain(std::iter::once(T::zero())).collect();
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb == T::zero() {
                continue;
            }
            let row = &self.cells[i * self.width..(i + 1) * self.width];
            for (z, &t) in reduced.iter_mut().zip(row) {
                *z -= cb * t;
            }
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.at(r, c);
        for v in &mut self.cells[r * w..(r + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<T> = self.cells[r * w..(r + 1) * w].to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.at(i, c);
            if f == T::zero() {
                continue;
            }
            for (v, &pr) in self.cells[i * w..(i + 1) * w].iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            self.cells[i * w + c] = T::zero();
        }
        let f = self.reduced[c];
        if f != T::zero() {
            for (z, &pr) in self.reduced.iter_mut().zip(&pivot_row) {
                *z -= f * pr;
            }
            self.reduced[c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule pivots; only original columns may enter.
    fn iterate(&mut self) -> Result<Termination, LinalgError> {
        loop {
            let entering = (0..self.n).find(|&j| self.reduced[j] < -self.eps);
            let Some(col) = entering else {
                return Ok(Termination::Optimal);
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.m {
                let a = self.at(i, col);
                if a <= self.eps {
                    continue;
                }
                let ratio = self.rhs(i).max(T::zero()) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - self.eps
                            || ((ratio - br).abs() <= self.eps && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((row, _)) = leave else {
                return Ok(Termination::Unbounded);
            };
            self.pivot(row, col);
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(LinalgError::IterationLimit {
                    iterations: self.max_iterations,
                    detail: format!(
                        "simplex on {} rows x {} columns did not terminate",
                        self.m, self.n
                    ),
                });
            }
        }
    }

    fn artificial_mass(&self) -> T {
        (0..self.m)
            .filter(|&i| self.basis[i] >= self.n)
            .map(|i| self.rhs(i).abs())
            .sum()
    }

    fn primal(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.n];
        for i in 0..self.m {
            if self.basis[i] < self.n {
                x[self.basis[i]] = self.rhs(i);
            }
        }
        x
    }

    /// Dual prices `y` for costs `cost` on the original (unflipped) rows.
    fn duals(&self, cost: &[T]) -> Vec<T> {
        (0..self.m)
            .map(|i| self.sign[i] * (cost[self.n + i] - self.reduced[self.n + i]))
            .collect()
    }

    fn phase_one(&mut self) -> Result<(), LinalgError> {
        let cost: Vec<T> = (0..self.n + self.m)
            .map(|j| if j < self.n { T::zero() } else { T::one() })
            .collect();
        self.price(&cost);
        match self.iterate()? {
            Termination::Optimal => Ok(()),
            // phase one is bounded below by zero
            Termination::Unbounded => Err(LinalgError::Numerical(
                "phase one reported an unbounded ray".into(),
            )),
        }
    }

    fn phase_one_farkas(&self) -> Vec<T> {
        let cost: Vec<T> = (0..self.n + self.m)
            .map(|j| if j < self.n { T::zero() } else { T::one() })
            .collect();
        self.duals(&cost)
    }

    /// Pivots zero-level artificials out of the basis where an original column allows it.
    fn drive_out_artificials(&mut self) {
        for i in 0..self.m {
            if self.basis[i] < self.n {
                continue;
            }
            if let Some(j) = (0..self.n).find(|&j| self.at(i, j).abs() > self.eps) {
                self.pivot(i, j);
            }
        }
    }
}

fn check_dims<T: Scalar>(a: &RealMatrix<T>, b: &[T]) -> Result<(), LinalgError> {
    if a.rows() != b.len() {
        return Err(LinalgError::DimensionMismatch(format!(
            "constraint matrix has {} rows but rhs has {} entries",
            a.rows(),
            b.len()
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(LinalgError::NonFinite { row: 0, col: a.cols() });
    }
    Ok(())
}

fn residual<T: Scalar>(a: &RealMatrix<T>, x: &[T], b: &[T]) -> T {
    a.apply(x)
        .iter()
        .zip(b)
        .map(|(&ax, &bi)| (ax - bi).abs())
        .fold(T::zero(), T::max)
}

fn farkas_holds<T: Scalar>(a: &RealMatrix<T>, y: &[T], b: &[T], tol: T) -> bool {
    let ya = a.apply_transpose(y);
    let yb: T = y.iter().zip(b).map(|(&yi, &bi)| yi * bi).sum();
    ya.iter().all(|&v| v <= tol) && yb > tol
}

/// Decides `∃ x ≥ 0 : A·x = b` and returns either the weights or a Farkas
/// vector `y` with `yᵀA ≤ tol`, `yᵀb > tol`.
pub fn lp_feasibility<T: Scalar>(prob: &LpFeasibilityProblem<T>) -> Result<LpOutcome<T>, LinalgError> {
    let a = &prob.constraints;
    let b = &prob.rhs;
    check_dims(a, b)?;
    if !(prob.tolerance > T::zero()) {
        return Err(LinalgError::DimensionMismatch(
            "tolerance must be positive".into(),
        ));
    }
    let tol = prob.tolerance;
    let mut tab = Tableau::new(a, b, prob.max_iterations);
    tab.phase_one()?;

    if tab.artificial_mass() <= tol {
        let weights: Vec<T> = tab
            .primal()
            .into_iter()
            .map(|v| if v < T::zero() && v >= -tol { T::zero() } else { v })
            .collect();
        let res = residual(a, &weights, b);
        if res <= tol && weights.iter().all(|&v| v >= -tol) {
            return Ok(LpOutcome::Feasible { weights });
        }
        return Err(LinalgError::Numerical(format!(
            "phase one converged but residual {} exceeds tolerance",
            res.to_f64_lossy()
        )));
    }

    let farkas = tab.phase_one_farkas();
    if farkas_holds(a, &farkas, b, tol) {
        Ok(LpOutcome::Infeasible { farkas })
    } else {
        Err(LinalgError::Numerical(
            "phase one certificate failed verification".into(),
        ))
    }
}

/// Solves a standard-form LP with the two-phase method.
pub fn lp_minimize<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LinalgError> {
    let a = &lp.constraints;
    let b = &lp.rhs;
    check_dims(a, b)?;
    if lp.objective.len() != a.cols() {
        return Err(LinalgError::DimensionMismatch(format!(
            "objective has {} entries for {} columns",
            lp.objective.len(),
            a.cols()
        )));
    }
    let tol = lp.tolerance;
    let mut tab = Tableau::new(a, b, lp.max_iterations);
    tab.phase_one()?;
    if tab.artificial_mass() > tol {
        let farkas = tab.phase_one_farkas();
        if farkas_holds(a, &farkas, b, tol) {
            return Ok(LpSolution::Infeasible { farkas });
        }
        return Err(LinalgError::Numerical(
            "phase one certificate failed verification".into(),
        ));
    }

    tab.drive_out_artificials();
    let cost: Vec<T> = lp
        .objective
        .iter()
        .copied()
        .chain(std::iter::repeat_n(T::zero(), tab.m))
        .collect();
    tab.price(&cost);
    match tab.iterate()? {
        Termination::Unbounded => Ok(LpSolution::Unbounded),
        Termination::Optimal => {
            let x: Vec<T> = tab.primal().into_iter().map(|v| v.max(T::zero())).collect();
            let objective = x.iter().zip(&lp.objective).map(|(&xi, &ci)| xi * ci).sum();
            let duals = tab.duals(&cost);
            Ok(LpSolution::Optimal {
                x,
                objective,
                duals,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn feas(rows: &[Vec<f64>], b: &[f64]) -> LpOutcome<f64> {
        let a = RealMatrix::from_rows(rows).unwrap();
        lp_feasibility(&LpFeasibilityProblem::new(a, b.to_vec(), 1e-9)).unwrap()
    }

    #[test]
    fn identity_system_returns_rhs() {
        let out = feas(
            &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            &[0.2, 0.3, 0.5],
        );
        let w = out.weights().unwrap();
        for (got, want) in w.iter().zip([0.2, 0.3, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn negative_rhs_single_column() {
        let out = feas(&[vec![1.0]], &[-1.0]);
        assert_eq!(out, LpOutcome::Infeasible { farkas: vec![-1.0] });
    }

    #[test]
    fn iteration_limit_is_reported() {
        let a = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let prob = LpFeasibilityProblem::new(a, vec![1.0, 0.0], 1e-9).with_max_iterations(0);
        assert!(matches!(
            lp_feasibility(&prob),
            Err(LinalgError::IterationLimit { .. })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let a = RealMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let prob = LpFeasibilityProblem::new(a, vec![1.0, 0.0], 1e-9);
        assert!(matches!(
            lp_feasibility(&prob),
            Err(LinalgError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn redundant_rows_are_handled() {
        // x0 + x1 = 1 stated twice, plus x0 = 0.25
        let out = feas(
            &[vec![1.0, 1.0], vec![1.0, 1.0], vec![1.0, 0.0]],
            &[1.0, 1.0, 0.25],
        );
        let w = out.weights().unwrap();
        assert!((w[0] - 0.25).abs() < 1e-12 && (w[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn minimize_small_program() {
        // min -x0 - 2 x1 s.t. x0 + x1 + s0 = 4, x1 + s1 = 3
        let a = RealMatrix::<f64>::from_rows(&[vec![1.0, 1.0, 1.0, 0.0], vec![0.0, 1.0, 0.0, 1.0]]).unwrap();
        let lp = LinearProgram::new(a.clone(), vec![4.0, 3.0], vec![-1.0, -2.0, 0.0, 0.0], 1e-9);
        match lp_minimize(&lp).unwrap() {
            LpSolution::Optimal { x, objective, duals } => {
                assert!((objective + 7.0).abs() < 1e-12);
                assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
                // strong duality and dual feasibility
                let by: f64 = duals.iter().zip([4.0, 3.0]).map(|(y, b)| y * b).sum();
                assert!((by - objective).abs() < 1e-12);
                let aty = a.apply_transpose(&duals);
                for (c, v) in [-1.0, -2.0, 0.0, 0.0].iter().zip(aty) {
                    assert!(c - v >= -1e-12);
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn minimize_detects_unbounded_and_infeasible() {
        let a = RealMatrix::from_rows(&[vec![1.0, -1.0]]).unwrap();
        let lp = LinearProgram::new(a, vec![1.0], vec![0.0, -1.0], 1e-9);
        assert_eq!(lp_minimize(&lp).unwrap(), LpSolution::Unbounded);
        let a = RealMatrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let lp = LinearProgram::new(a, vec![-1.0], vec![1.0, 1.0], 1e-9);
        assert!(matches!(lp_minimize(&lp).unwrap(), LpSolution::Infeasible { .. }));
    }

    #[test]
    fn single_precision_feasibility() {
        let a = RealMatrix::<f32>::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let out = lp_feasibility(&LpFeasibilityProblem::new(a, vec![1.0, 0.5], 1e-5)).unwrap();
        assert!(out.is_feasible());
    }

    proptest! {
        #[test]
        fn outcome_invariants_hold(
            m in 1usize..6,
            n in 1usize..8,
            entries in prop::collection::vec(-3i32..4, 48),
            rhs in prop::collection::vec(-3i32..4, 6),
        ) {
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|i| (0..n).map(|j| entries[i * 8 + j] as f64).collect())
                .collect();
            let b: Vec<f64> = rhs[..m].iter().map(|&v| v as f64).collect();
            let a = RealMatrix::from_rows(&rows).unwrap();
            let prob = LpFeasibilityProblem::new(a.clone(), b.clone(), 1e-9);
            let first = lp_feasibility(&prob).unwrap();
            match &first {
                LpOutcome::Feasible { weights } => {
                    prop_assert!(residual(&a, weights, &b) <= 1e-9);
                    prop_assert!(weights.iter().all(|&w| w >= -1e-9));
                }
                LpOutcome::Infeasible { farkas } => {
                    let ya = a.apply_transpose(farkas);
                    prop_assert!(ya.iter().all(|&v| v <= 1e-9));
                    let yb: f64 = farkas.iter().zip(&b).map(|(y, b)| y * b).sum();
                    prop_assert!(yb > 1e-9);
                }
            }
            // bitwise determinism
            prop_assert_eq!(first, lp_feasibility(&prob).unwrap());
        }
    }
}
