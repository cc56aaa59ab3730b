//! Random systems, states, channels and measurements for property tests.

use num_complex::Complex;
use rand::Rng;

use super::{SystemType, Transform, Wire};
use crate::linalg::{hermitian_function, ComplexMatrix};

/// Standard normal sample (Box–Muller).
pub fn gaussian(rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn complex_gaussian(rng: &mut impl Rng) -> Complex<f64> {
    Complex::new(gaussian(rng), gaussian(rng))
}

/// Uniformly random unit vector in `ℂⁿ`.
pub fn unit_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex<f64>> {
    let v: Vec<Complex<f64>> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random point of the probability simplex.
pub fn simplex_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Random `rows × cols` isometry (`rows ≥ cols`) by Gram–Schmidt.
pub fn isometry(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "an isometry needs rows ≥ cols");
    let mut columns: Vec<Vec<Complex<f64>>> = Vec::with_capacity(cols);
    while columns.len() < cols {
        let mut v: Vec<Complex<f64>> = (0..rows).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &columns {
                let overlap: Complex<f64> = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            columns.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(rows, cols, |r, c| columns[c][r])
}

pub fn unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    isometry(rng, d, d)
}

/// A few wires, each classical with 1–3 values or quantum of dimension 1–2.
pub fn system(rng: &mut impl Rng, max_wires: usize) -> SystemType {
    let n = rng.gen_range(0..=max_wires);
    SystemType::new(
        (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Wire::Classical(rng.gen_range(1..=3))
                } else {
                    Wire::Quantum(rng.gen_range(1..=2))
                }
            })
            .collect(),
    )
}

/// Transform with independent random complex entries; not physical.
pub fn transform(rng: &mut impl Rng, input: &SystemType, output: &SystemType) -> Transform {
    let t = ComplexMatrix::from_fn(output.dim(), input.dim(), |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    Transform::new(input.clone(), output.clone(), t).expect("shape from systems")
}

/// Random density operator of full rank on `d` levels.
pub fn density(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let g = m.matmul(&m.adjoint()).expect("square");
    let tr = g.trace().re;
    g.scale_real(1.0 / tr).hermitian_part()
}

/// Random normalized state: a distribution on classical wires and a random
/// density operator on quantum ones, as a product over wires.
pub fn state(rng: &mut impl Rng, sys: &SystemType) -> Transform {
    let parts: Vec<Transform> = sys
        .wires()
        .iter()
        .map(|&w| match w {
            Wire::Classical(n) => Transform::classical_state(&simplex_point(rng, n)),
            Wire::Quantum(d) => Transform::state_from_density(&density(rng, d), &SystemType::quantum(d))
                .expect("dimensions match"),
        })
        .collect();
    Transform::tensor_all(&parts)
}

/// Random pure state on an all-quantum system.
pub fn pure_state(rng: &mut impl Rng, sys: &SystemType) -> Transform {
    Transform::state_from_ket(&unit_vector(rng, sys.levels()), sys, 1e-9).expect("normalized")
}

/// Random causal map between classical systems (column-stochastic).
pub fn stochastic(rng: &mut impl Rng, input: &SystemType, output: &SystemType) -> Transform {
    let columns: Vec<Vec<f64>> = (0..input.dim()).map(|_| simplex_point(rng, output.dim())).collect();
    let rows: Vec<Vec<f64>> = (0..output.dim())
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect();
    Transform::stochastic(input, output, &rows).expect("classical systems")
}

/// Random quantum channel between all-quantum systems with `kraus` Kraus
/// operators (raised to `⌈d_in/d_out⌉` when fewer cannot be trace preserving).
pub fn channel(rng: &mut impl Rng, input: &SystemType, output: &SystemType, kraus: usize) -> Transform {
    let din = input.levels();
    let dout = output.levels();
    let kraus = kraus.max(din.div_ceil(dout));
    let v = isometry(rng, dout * kraus, din);
    let ops: Vec<ComplexMatrix> = (0..kraus)
        .map(|k| ComplexMatrix::from_fn(dout, din, |r, c| v[(k * dout + r, c)]))
        .collect();
    Transform::channel_from_kraus(&ops, input, output).expect("quantum systems")
}

/// Random causal map on a system whose wires are all classical or all
/// quantum (one of the two, chosen by the input).
pub fn causal(rng: &mut impl Rng, input: &SystemType, output: &SystemType) -> Transform {
    if input.is_all_classical() && output.is_all_classical() {
        stochastic(rng, input, output)
    } else {
        let kraus = rng.gen_range(1..=3);
        channel(rng, input, output, kraus)
    }
}

/// Random `k`-outcome POVM on `d` levels (`σᵢ = S^{-1/2} Gᵢ S^{-1/2}` with
/// random positive `Gᵢ`).
pub fn povm(rng: &mut impl Rng, d: usize, k: usize) -> Vec<ComplexMatrix> {
    let gs: Vec<ComplexMatrix> = (0..k)
        .map(|_| {
            let a = ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
            a.matmul(&a.adjoint()).expect("square").hermitian_part()
        })
        .collect();
    let total = gs
        .iter()
        .skip(1)
        .fold(gs[0].clone(), |acc, g| acc.add(g).expect("same shape"));
    let inv_sqrt = hermitian_function(&total, 1e-9, |x| 1.0 / x.sqrt()).expect("positive definite");
    gs.iter()
        .map(|g| {
            inv_sqrt
                .matmul(g)
                .and_then(|m| m.matmul(&inv_sqrt))
                .expect("square")
                .hermitian_part()
        })
        .collect()
}

/// Random orthonormal basis of `ℂᵈ`, as kets.
pub fn basis(rng: &mut impl Rng, d: usize) -> Vec<Vec<Complex<f64>>> {
    let u = unitary(rng, d);
    (0..d).map(|c| u.col_vec(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let v = isometry(&mut rng, 5, 3);
            let gram = v.adjoint().matmul(&v).unwrap();
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
            let q = SystemType::new(vec![Wire::Quantum(2), Wire::Quantum(2)]);
            assert!(channel(&mut rng, &q, &SystemType::quantum(2), 3).is_causal(1e-12));
            let s = system(&mut rng, 3);
            let st = state(&mut rng, &s);
            assert!(st.is_causal(1e-12));
            let p = povm(&mut rng, 2, 3);
            let sum = p[0].add(&p[1]).unwrap().add(&p[2]).unwrap();
            assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-9);
        }
    }
}
