use perspectiva::circuit::random;
use perspectiva::linalg::{lp_feasibility, mat_sqrt_hermitian, partial_trace, LpFeasibilityProblem, LpOutcome, RealMatrix};
use perspectiva::{Complex, Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn re(x: f64) -> Complex<f64> {
    Complex::new(x, 0.0)
}

#[test]
fn square_root_examples() {
    let id = Matrix::identity(2);
    assert!(mat_sqrt_hermitian(&id, 1e-9).unwrap().max_abs_diff(&id) < 1e-12);
    let d = Matrix::from_real(2, 2, &[4.0, 0.0, 0.0, 9.0]).unwrap();
    let r = Matrix::from_real(2, 2, &[2.0, 0.0, 0.0, 3.0]).unwrap();
    assert!(mat_sqrt_hermitian(&d, 1e-9).unwrap().max_abs_diff(&r) < 1e-12);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = Matrix::outer(&[re(h), re(h)]);
    let b = mat_sqrt_hermitian(&plus, 1e-9).unwrap();
    assert!(b.matmul(&b).unwrap().max_abs_diff(&plus) < 1e-9);
    assert!(b.max_abs_diff(&plus) < 1e-9);
}

/// Rows: for each (x, y) context and outcome pair, which of the 16
/// deterministic strategies `(a₀, a₁, b₀, b₁)` produce it.
fn pr_membership() -> (RealMatrix, Vec<f64>) {
    let mut a = vec![0.0; 16 * 16];
    let mut b = vec![0.0; 16];
    for x in 0..2 {
        for y in 0..2 {
            for oa in 0..2 {
                for ob in 0..2 {
                    let row = ((x * 2 + y) * 2 + oa) * 2 + ob;
                    b[row] = if (oa ^ ob) == (x & y) { 0.5 } else { 0.0 };
                    for s in 0..16usize {
                        let strat = [s >> 3 & 1, s >> 2 & 1, s >> 1 & 1, s & 1];
                        if strat[x] == oa && strat[2 + y] == ob {
                            a[row * 16 + s] = 1.0;
                        }
                    }
                }
            }
        }
    }
    (RealMatrix::new(16, 16, a).unwrap(), b)
}

#[test]
fn pr_box_membership_is_infeasible() {
    let (a, b) = pr_membership();
    // oracle: every deterministic strategy violates one parity constraint
    for s in 0..16usize {
        let strat = [s >> 3 & 1, s >> 2 & 1, s >> 1 & 1, s & 1];
        let ok = (0..2).all(|x| (0..2).all(|y| (strat[x] ^ strat[2 + y]) == (x & y)));
        assert!(!ok);
    }
    match lp_feasibility(&LpFeasibilityProblem::new(a.clone(), b.clone(), 1e-9)).unwrap() {
        LpOutcome::Infeasible { farkas } => {
            assert!(a.apply_transpose(&farkas).iter().all(|&v| v <= 1e-9));
            let yb: f64 = farkas.iter().zip(&b).map(|(y, b)| y * b).sum();
            assert!(yb > 1e-9);
        }
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn simple_systems() {
    let id = RealMatrix::identity(3);
    let out = lp_feasibility(&LpFeasibilityProblem::new(id, vec![0.2, 0.3, 0.5], 1e-9)).unwrap();
    let w = out.weights().unwrap();
    for (x, e) in w.iter().zip([0.2f64, 0.3, 0.5]) {
        assert!((x - e).abs() < 1e-12);
    }
    let one = RealMatrix::from_rows(&[vec![1.0]]).unwrap();
    let out = lp_feasibility(&LpFeasibilityProblem::new(one, vec![-1.0], 1e-9)).unwrap();
    let y = out.farkas().unwrap();
    assert!(y[0] < 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sqrt_of_random_psd(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::from_fn(d, d, |_, _| random::complex_gaussian(&mut rng));
        let a = m.matmul(&m.adjoint()).unwrap().hermitian_part();
        let tol = 1e-9;
        let b = mat_sqrt_hermitian(&a, tol).unwrap();
        prop_assert!(b.hermitian_deviation() <= tol);
        prop_assert!(b.matmul(&b).unwrap().max_abs_diff(&a) <= 10.0 * tol * a.max_abs().max(1.0));
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), dims in proptest::collection::vec(1usize..4, 1..4), mask in any::<u8>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n: usize = dims.iter().product();
        let a = random::density(&mut rng, n);
        let keep: Vec<usize> = (0..dims.len()).filter(|i| mask >> i & 1 == 1).collect();
        let r = partial_trace(&a, &dims, &keep).unwrap();
        prop_assert!((r.trace() - a.trace()).norm() <= 1e-12);
        let all = partial_trace(&a, &dims, &[]).unwrap();
        prop_assert_eq!((all.rows(), all.cols()), (1, 1));
        prop_assert!((all[(0, 0)] - a.trace()).norm() <= 1e-12);
    }

    #[test]
    fn lp_outcomes_are_certified_and_deterministic(seed in any::<u64>(), m in 1usize..6, k in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<f64> = (0..m * k).map(|_| random::gaussian(&mut rng).round()).collect();
        let b: Vec<f64> = (0..m).map(|_| random::gaussian(&mut rng).round()).collect();
        let a = RealMatrix::new(m, k, data).unwrap();
        let prob = LpFeasibilityProblem::new(a.clone(), b.clone(), 1e-9);
        let first = lp_feasibility(&prob).unwrap();
        match &first {
            LpOutcome::Feasible { weights } => {
                let ax = a.apply(weights);
                prop_assert!(ax.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-9));
                prop_assert!(weights.iter().all(|&w| w >= -1e-9));
            }
            LpOutcome::Infeasible { farkas } => {
                prop_assert!(a.apply_transpose(farkas).iter().all(|&v| v <= 1e-9));
                let yb: f64 = farkas.iter().zip(&b).map(|(y, b)| y * b).sum();
                prop_assert!(yb > 1e-9);
            }
        }
        let second = lp_feasibility(&prob).unwrap();
        prop_assert_eq!(format!("{first:?}"), format!("{second:?}"));
    }
}
