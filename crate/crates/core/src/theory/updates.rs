use num_complex::Complex;

use super::extractor::check_povm;
use super::{Extractor, MemoryUpdate, TheoryError};
use crate::circuit::{check_isometry, SystemType, Transform, Wire};
use crate::linalg::{mat_sqrt_hermitian, ComplexMatrix};

/// `V = Σᵢ |i⟩_M ⊗ |i⟩⟨i|_S` on a `d`-level system.
pub fn coherent_copy_update(d: usize) -> MemoryUpdate {
    let v = ComplexMatrix::from_fn(d * d, d, |r, c| {
        if r == c * d + c {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    });
    let s = SystemType::quantum(d);
    let m = SystemType::quantum(d);
    let inner = Transform::channel_from_isometry(&v, &s, &m.concat(&s), 1e-12)
        .expect("copy map is an isometry")
        .with_label(format!("coherent-copy({d})"));
    MemoryUpdate::new(inner, m, 1e-12).expect("isometric channels are causal")
}

/// The Naimark isometry `V = Σᵢ |i⟩_M ⊗ √σᵢ` for a POVM on one quantum wire.
pub fn naimark_update(povm: &[ComplexMatrix], tol: f64) -> Result<MemoryUpdate, TheoryError> {
    let d = povm.first().map_or(0, |e| e.rows());
    naimark_update_on(
        povm,
        &SystemType::quantum(d),
        &SystemType::quantum(povm.len()),
        tol,
    )
}

/// Naimark update on an all-quantum `input`, with the outcome index laid
/// out over the quantum `memory` wires.
pub fn naimark_update_on(
    povm: &[ComplexMatrix],
    input: &SystemType,
    memory: &SystemType,
    tol: f64,
) -> Result<MemoryUpdate, TheoryError> {
    check_povm(povm, input, tol)?;
    check_memory(memory, povm.len())?;
    let v = naimark_isometry(povm, tol)?;
    let inner = Transform::channel_from_isometry(&v, input, &memory.concat(input), 10.0 * tol)?
        .with_label("naimark");
    MemoryUpdate::new(inner, memory.clone(), 10.0 * tol)
}

fn check_memory(memory: &SystemType, outcomes: usize) -> Result<(), TheoryError> {
    if !memory.is_all_quantum() || memory.levels() != outcomes {
        return Err(TheoryError::Unsupported(format!(
            "memory {memory} cannot hold {outcomes} outcomes"
        )));
    }
    Ok(())
}

pub(crate) fn naimark_isometry(povm: &[ComplexMatrix], tol: f64) -> Result<ComplexMatrix, TheoryError> {
    let d = povm[0].rows();
    let roots: Vec<ComplexMatrix> = povm
        .iter()
        .enumerate()
        .map(|(index, e)| mat_sqrt_hermitian(e, tol).map_err(|source| TheoryError::NotPsd { index, source }))
        .collect::<Result<_, _>>()?;
    Ok(ComplexMatrix::from_fn(povm.len() * d, d, |r, c| roots[r / d][(r % d, c)]))
}

/// Records the outcome classically and re-prepares `σᵢ / Tr σᵢ`:
/// `ρ ↦ Σᵢ Tr(σᵢρ) |i⟩⟨i|_M ⊗ σᵢ/Tr(σᵢ)`.
pub fn collapse_update(povm: &[ComplexMatrix], tol: f64) -> Result<MemoryUpdate, TheoryError> {
    let d = povm.first().map_or(0, |e| e.rows());
    collapse_update_on(
        povm,
        &SystemType::quantum(d),
        &SystemType::quantum(povm.len()),
        tol,
    )
}

/// Collapse update on an all-quantum `input`; elements with `Tr σᵢ ≤ tol`
/// never fire and are dropped.
pub fn collapse_update_on(
    povm: &[ComplexMatrix],
    input: &SystemType,
    memory: &SystemType,
    tol: f64,
) -> Result<MemoryUpdate, TheoryError> {
    check_povm(povm, input, tol)?;
    check_memory(memory, povm.len())?;
    let k = povm.len();
    let branches: Vec<(usize, ComplexMatrix)> = povm
        .iter()
        .enumerate()
        .filter_map(|(i, e)| {
            let tr = e.trace().re;
            (tr > tol).then(|| (i, e.scale_real(1.0 / tr)))
        })
        .collect();
    let out = memory.concat(input);
    let inner = Transform::from_operator_map(input, &out, |rho| {
        let mut acc = ComplexMatrix::zeros(k * rho.rows(), k * rho.rows());
        for (i, prep) in &branches {
            let weight = povm[*i].matmul(rho).expect("square").trace();
            let mut record = ComplexMatrix::zeros(k, k);
            record[(*i, *i)] = weight;
            acc = acc.add(&record.kron(prep)).expect("same shape");
        }
        acc
    })?
    .with_label("collapse");
    MemoryUpdate::new(inner, memory.clone(), 10.0 * tol)
}

/// `U = (S ⊗ 1) ∘ COPY` for an extractor `S` on classical wires; the memory
/// is `S`'s output.
pub fn classical_copy_update(s: &Extractor) -> Result<MemoryUpdate, TheoryError> {
    let input = s.input();
    if let Some(index) = input.wires().iter().position(|w| w.is_quantum()) {
        return Err(crate::circuit::CircuitError::TypeMismatch {
            index,
            detail: "classical copy needs classical input wires".into(),
        }
        .into());
    }
    let n = input.dim();
    let both = input.concat(input);
    let copy = Transform::new(
        input.clone(),
        both,
        ComplexMatrix::from_fn(n * n, n, |r, c| {
            if r == c * n + c {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        }),
    )?;
    let apply = Transform::tensor(s.inner(), &Transform::identity(input));
    let inner = apply.after(&copy)?.with_label("classical-copy");
    MemoryUpdate::new(inner, s.output().clone(), 1e-9)
}

/// The recovery `discard(M) ⊗ 1_S` of a classical copy update.
pub fn classical_copy_recovery(u: &MemoryUpdate) -> Transform {
    Transform::tensor(&Transform::discard(u.memory()), &Transform::identity(u.input()))
}

/// `σ ↦ V†σV + Tr((I − VV†)σ)·I/d`, a left inverse of `ρ ↦ VρV†`.
pub fn recovery_for_isometry(
    v: &ComplexMatrix,
    input: &SystemType,
    output: &SystemType,
    tol: f64,
) -> Result<Transform, TheoryError> {
    check_isometry(v, tol)?;
    let d = v.cols();
    let vd = v.adjoint();
    let leak = ComplexMatrix::identity(v.rows()).sub(&v.matmul(&vd)?)?;
    let mixed = ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    Ok(Transform::from_operator_map(output, input, |sigma| {
        let back = vd.matmul(sigma).and_then(|m| m.matmul(v)).expect("shapes");
        let lost = leak.matmul(sigma).expect("shapes").trace();
        back.add(&mixed.scale(lost)).expect("same shape")
    })?
    .with_label("recovery"))
}

/// True when dephasing the quantum memory wires leaves `u` unchanged.
pub fn is_collapse(u: &MemoryUpdate, tol: f64) -> bool {
    let dephase = u.memory().wires().iter().fold(
        Transform::identity(&SystemType::trivial()),
        |acc, &w| {
            let part = match w {
                Wire::Quantum(d) => Transform::dephase(d),
                Wire::Classical(_) => Transform::identity(&SystemType::new(vec![w])),
            };
            Transform::tensor(&acc, &part)
        },
    );
    let full = Transform::tensor(&dephase, &Transform::identity(u.input()));
    full.after(u.inner())
        .map(|t| t.operationally_eq(u.inner(), tol))
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::eval_to_dist;
    use crate::theory::{basis_extractor, povm_extractor};

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    fn ket(v: &[f64]) -> Transform {
        let amps: Vec<_> = v.iter().map(|&x| c(x)).collect();
        let q = SystemType::new(vec![Wire::Quantum(2); (v.len() as f64).log2() as usize]);
        Transform::state_from_ket(&amps, &q, 1e-9).unwrap()
    }

    fn z() -> Vec<ComplexMatrix> {
        vec![
            ComplexMatrix::outer(&[c(1.0), c(0.0)]),
            ComplexMatrix::outer(&[c(0.0), c(1.0)]),
        ]
    }

    fn trine() -> Vec<ComplexMatrix> {
        (0..3)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
                ComplexMatrix::outer(&[c((th / 2.0).cos()), c((th / 2.0).sin())]).scale_real(2.0 / 3.0)
            })
            .collect()
    }

    #[test]
    fn coherent_copy_examples() {
        let u = coherent_copy_update(2);
        let out = u.inner().after(&ket(&[1.0, 0.0])).unwrap();
        assert!(out.operationally_eq(&ket(&[1.0, 0.0, 0.0, 0.0]), 1e-15));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let out = u.inner().after(&ket(&[h, h])).unwrap();
        assert!(out.operationally_eq(&ket(&[h, 0.0, 0.0, h]), 1e-15));
        for d in [2, 3, 5] {
            assert!(coherent_copy_update(d).inner().is_causal(1e-12));
        }
    }

    #[test]
    fn naimark_of_z_is_coherent_copy() {
        let u = naimark_update(&z(), 1e-9).unwrap();
        assert!(u.operationally_eq(&coherent_copy_update(2), 1e-12));
    }

    #[test]
    fn trine_statistics_on_zero() {
        let u = naimark_update(&trine(), 1e-9).unwrap();
        let read = Transform::tensor(
            &Transform::computational_readout(&SystemType::quantum(3)),
            &Transform::discard(&SystemType::quantum(2)),
        );
        let dist = eval_to_dist(&read.after(u.inner()).unwrap().after(&ket(&[1.0, 0.0])).unwrap(), 1e-9).unwrap();
        // Tr(σₖ|0⟩⟨0|) = ⅔cos²(θₖ/2)
        let expected = [2.0 / 3.0, 2.0 / 3.0 * 0.25, 2.0 / 3.0 * 0.25];
        for (p, e) in dist.probs().iter().zip(expected) {
            assert!((p - e).abs() < 1e-12, "{p} vs {e}");
        }
        let e = povm_extractor(&trine(), 1e-9).unwrap();
        let direct = eval_to_dist(&e.inner().after(&ket(&[1.0, 0.0])).unwrap(), 1e-9).unwrap();
        assert!(direct.max_abs_diff(&dist) < 1e-12);
    }

    #[test]
    fn collapse_on_plus() {
        let u = collapse_update(&z(), 1e-9).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let out = u.inner().after(&ket(&[h, h])).unwrap();
        let expected = Transform::add(
            &ket(&[1.0, 0.0, 0.0, 0.0]).scale(0.5),
            &ket(&[0.0, 0.0, 0.0, 1.0]).scale(0.5),
        )
        .unwrap();
        assert!(out.operationally_eq(&expected, 1e-15));
        assert!(is_collapse(&u, 1e-12));
        assert!(collapse_update(&trine(), 1e-9).unwrap().inner().is_causal(1e-12));
    }

    #[test]
    fn zero_elements_are_dropped() {
        let mut povm = z();
        povm.push(ComplexMatrix::zeros(2, 2));
        let u = collapse_update(&povm, 1e-9).unwrap();
        assert!(u.inner().is_causal(1e-12));
    }

    #[test]
    fn coherent_copy_is_not_collapse() {
        assert!(!is_collapse(&coherent_copy_update(2), 1e-9));
    }

    #[test]
    fn classical_copy_examples() {
        let c2 = SystemType::classical(2);
        let id = Extractor::new(Transform::identity(&c2), 1e-9).unwrap();
        let u = classical_copy_update(&id).unwrap();
        let out = eval_to_dist(&u.inner().after(&Transform::classical_state(&[0.3, 0.7])).unwrap(), 1e-9).unwrap();
        assert_eq!(out.probs(), &[0.3, 0.0, 0.0, 0.7]);
        let flip = Extractor::new(Transform::stochastic(&c2, &c2, &[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(), 1e-9).unwrap();
        let u = classical_copy_update(&flip).unwrap();
        let out = eval_to_dist(&u.inner().after(&Transform::classical_state(&[1.0, 0.0])).unwrap(), 1e-9).unwrap();
        assert_eq!(out.get(&[1, 0]), 1.0);
        assert!(is_collapse(&u, 1e-12));
        let back = classical_copy_recovery(&u).after(u.inner()).unwrap();
        assert!(back.operationally_eq(&Transform::identity(&c2), 1e-15));
        let q = basis_extractor(&[vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]], 1e-9).unwrap();
        assert!(classical_copy_update(&q).is_err());
    }

    #[test]
    fn recovery_examples() {
        let q2 = SystemType::quantum(2);
        let r = recovery_for_isometry(&ComplexMatrix::identity(2), &q2, &q2, 1e-9).unwrap();
        assert!(r.operationally_eq(&Transform::identity(&q2), 1e-15));
        let v = ComplexMatrix::from_fn(4, 2, |r, c| if r == c * 3 { Complex::new(1.0, 0.0) } else { Complex::new(0.0, 0.0) });
        let q22 = SystemType::new(vec![Wire::Quantum(2), Wire::Quantum(2)]);
        let r = recovery_for_isometry(&v, &q2, &q22, 1e-9).unwrap();
        assert!(r.after(&ket(&[1.0, 0.0, 0.0, 0.0])).unwrap().operationally_eq(&ket(&[1.0, 0.0]), 1e-15));
        assert!(r.is_causal(1e-12));
        let u = coherent_copy_update(2);
        assert!(r.after(u.inner()).unwrap().operationally_eq(&Transform::identity(&q2), 1e-12));
    }
}
