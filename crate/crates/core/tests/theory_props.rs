use perspectiva::circuit::{eval_to_dist, random, SystemType};
use perspectiva::linalg::ComplexMatrix;
use perspectiva::theory::{
    basis_extractor, coherent_copy_update, collapse_update, ip_witness, is_collapse, naimark_update,
    no_influence, povm_extractor, recovery_for_isometry, PerspectivalRegistry, TheoryKind,
};
use perspectiva::{Complex, Transform};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn born(povm: &[ComplexMatrix], rho: &ComplexMatrix) -> Vec<f64> {
    povm.iter().map(|s| s.matmul(rho).unwrap().trace().re).collect()
}

/// Outcome statistics of the memory record left by `update` on `rho`.
fn memory_stats(update: &Transform, memory: &SystemType, input: &SystemType, rho: &ComplexMatrix) -> Vec<f64> {
    let state = Transform::state_from_density(rho, input).unwrap();
    let read = Transform::tensor(&Transform::computational_readout(memory), &Transform::discard(input));
    eval_to_dist(&read.after(update).unwrap().after(&state).unwrap(), TOL)
        .unwrap()
        .into_probs()
}

fn trine() -> Vec<ComplexMatrix> {
    (0..3)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let ket = [Complex::new((t / 2.0).cos(), 0.0), Complex::new((t / 2.0).sin(), 0.0)];
            ComplexMatrix::outer(&ket).scale_real(2.0 / 3.0)
        })
        .collect()
}

#[test]
fn trine_measurement() {
    let povm = trine();
    let q = SystemType::quantum(2);
    let u = naimark_update(&povm, TOL).unwrap();
    assert_eq!(u.memory(), &SystemType::quantum(3));
    let zero = ComplexMatrix::outer(&[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
    let got = memory_stats(u.inner(), u.memory(), &q, &zero);
    for (g, e) in got.iter().zip([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]) {
        assert!((g - e).abs() < TOL);
    }
    let reg = PerspectivalRegistry::builtin(TheoryKind::QuantumIsometric, TOL);
    let e = povm_extractor(&povm, TOL).unwrap();
    let (reg, i) = reg.with_extractor(&e).unwrap();
    assert!(reg.pairs()[i].recovery.is_some());
    assert!(!is_collapse(&u, TOL));
    assert!(is_collapse(&collapse_update(&povm, TOL).unwrap(), TOL));
}

#[test]
fn z_basis_partner_is_coherent_copy() {
    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    let z = basis_extractor(&[vec![one, zero], vec![zero, one]], TOL).unwrap();
    let reg = PerspectivalRegistry::builtin(TheoryKind::QuantumIsometric, TOL);
    let (reg, _) = reg.with_extractor(&z).unwrap();
    assert!(reg.f_map(&z).unwrap().operationally_eq(&coherent_copy_update(2), TOL));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn naimark_reproduces_born_rule(seed in any::<u64>(), d in 2usize..4, k in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let povm = random::povm(&mut rng, d, k);
        let u = naimark_update(&povm, TOL).unwrap();
        let e = povm_extractor(&povm, TOL).unwrap();
        let q = SystemType::quantum(d);
        prop_assert!(u.inner().is_causal(TOL));
        for _ in 0..20 {
            let rho = random::density(&mut rng, d);
            let want = born(&povm, &rho);
            let got = memory_stats(u.inner(), u.memory(), &q, &rho);
            let direct = eval_to_dist(&e.inner().after(&Transform::state_from_density(&rho, &q).unwrap()).unwrap(), TOL).unwrap();
            for i in 0..k {
                prop_assert!((got[i] - want[i]).abs() <= TOL);
                prop_assert!((direct.probs()[i] - want[i]).abs() <= TOL);
            }
            prop_assert!((want.iter().sum::<f64>() - 1.0).abs() <= TOL);
        }
    }

    #[test]
    fn information_preservation_composes(seed in any::<u64>(), d in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reg = PerspectivalRegistry::builtin(TheoryKind::QuantumIsometric, TOL);
        let e1 = povm_extractor(&random::povm(&mut rng, d, 2), TOL).unwrap();
        let e2 = povm_extractor(&random::povm(&mut rng, d, 3), TOL).unwrap();
        let (reg, i1) = reg.with_extractor(&e1).unwrap();
        let (reg, i2) = reg.with_extractor(&e2).unwrap();
        let (u1, r1) = (&reg.pairs()[i1].update, reg.pairs()[i1].recovery.as_ref().unwrap());
        let (u2, r2) = (&reg.pairs()[i2].update, reg.pairs()[i2].recovery.as_ref().unwrap());
        let m1 = Transform::identity(u1.memory());
        let w = Transform::tensor(&m1, u2.inner()).after(u1.inner()).unwrap();
        let r = r1.after(&Transform::tensor(&m1, r2)).unwrap();
        let back = r.after(&w).unwrap();
        prop_assert!(back.operationally_eq(&Transform::identity(&SystemType::quantum(d)), TOL));
    }

    #[test]
    fn pairing_round_trips(seed in any::<u64>(), d in 2usize..4, k in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for kind in [TheoryKind::QuantumIsometric, TheoryKind::QuantumCollapse] {
            let reg = PerspectivalRegistry::builtin(kind, TOL);
            let e = povm_extractor(&random::povm(&mut rng, d, k), TOL).unwrap();
            let (reg, _) = reg.with_extractor(&e).unwrap();
            let u = reg.f_map(&e).unwrap();
            prop_assert!(reg.f_inverse(u).unwrap().operationally_eq(&e, TOL));
            prop_assert!(reg.f_map(reg.f_inverse(u).unwrap()).unwrap().operationally_eq(u, TOL));
            prop_assert!(u.inner().is_causal(TOL));
            prop_assert_eq!(is_collapse(u, TOL), kind == TheoryKind::QuantumCollapse);
            prop_assert_eq!(reg.recovery(u).unwrap().is_some(), kind == TheoryKind::QuantumIsometric);
        }
    }

    #[test]
    fn ip_witness_recovers_any_extractor(seed in any::<u64>(), d in 2usize..4, k in 2usize..4, kout in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reg = PerspectivalRegistry::builtin(TheoryKind::QuantumIsometric, TOL);
        let kets: Vec<Vec<Complex<f64>>> = (0..d).map(|i| perspectiva::circuit::basis_ket(d, i)).collect();
        let z = basis_extractor(&kets, TOL).unwrap();
        let e = povm_extractor(&random::povm(&mut rng, d, k), TOL).unwrap();
        let target = povm_extractor(&random::povm(&mut rng, d, kout), TOL).unwrap();
        for first in [z, e] {
            let (reg, i) = reg.with_extractor(&first).unwrap();
            let u = reg.pairs()[i].update.clone();
            let witness = ip_witness(&reg, &u, &target).unwrap();
            let replay = witness.inner().after(u.inner()).unwrap();
            prop_assert!(replay.transfer().max_abs_diff(target.inner().transfer()) <= TOL);
        }
    }

    #[test]
    fn recovery_inverts_random_isometries(seed in any::<u64>(), d in 1usize..4, extra in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let big = d * extra + rng.gen_range(0..2);
        let v = random::isometry(&mut rng, big.max(d), d);
        let sin = SystemType::quantum(d);
        let sout = SystemType::quantum(big.max(d));
        let channel = Transform::channel_from_isometry(&v, &sin, &sout, TOL).unwrap();
        let r = recovery_for_isometry(&v, &sin, &sout, TOL).unwrap();
        prop_assert!(r.is_causal(TOL));
        for _ in 0..20 {
            let rho = Transform::state_from_density(&random::density(&mut rng, d), &sin).unwrap();
            let back = r.after(&channel).unwrap().after(&rho).unwrap();
            prop_assert!(back.operationally_eq(&rho, TOL));
        }
    }

    #[test]
    fn product_unitaries_do_not_influence(seed in any::<u64>(), d1 in 2usize..4, d2 in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (SystemType::quantum(d1), SystemType::quantum(d2));
        let ua = Transform::channel_from_isometry(&random::unitary(&mut rng, d1), &a, &a, TOL).unwrap();
        let ub = Transform::channel_from_isometry(&random::unitary(&mut rng, d2), &b, &b, TOL).unwrap();
        let v = Transform::tensor(&ua, &ub);
        prop_assert!(no_influence(&v, 0, 1, TOL));
        prop_assert!(no_influence(&v, 1, 0, TOL));
        prop_assert!(!no_influence(&v, 0, 0, TOL));
        let swapped = Transform::swap(&a, &b).after(&v).unwrap();
        prop_assert!(!no_influence(&swapped, 0, 1, TOL));
        prop_assert!(no_influence(&swapped, 0, 0, TOL));
    }
}
