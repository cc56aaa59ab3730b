use num_complex::Complex;

use crate::circuit::{SystemType, Transform, Wire};

/// Trace-one states spanning the operator space of one wire.
fn spanning_states(w: Wire) -> Vec<Transform> {
    match w {
        Wire::Classical(n) => (0..n)
            .map(|i| {
                let mut p = vec![0.0; n];
                p[i] = 1.0;
                Transform::classical_state(&p)
            })
            .collect(),
        Wire::Quantum(d) => {
            let sys = SystemType::quantum(d);
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let zero = Complex::new(0.0, 0.0);
            let mut kets = Vec::new();
            for i in 0..d {
                let mut k = vec![zero; d];
                k[i] = Complex::new(1.0, 0.0);
                kets.push(k);
            }
            for i in 0..d {
                for j in i + 1..d {
                    for phase in [Complex::new(h, 0.0), Complex::new(0.0, h)] {
                        let mut k = vec![zero; d];
                        k[i] = Complex::new(h, 0.0);
                        k[j] = phase;
                        kets.push(k);
                    }
                }
            }
            kets.iter()
                .map(|k| Transform::state_from_ket(k, &sys, 1e-12).expect("normalized"))
                .collect()
        }
    }
}

/// Whether input wire `in_wire` of `v` has no causal influence on output
/// wire `out_wire`: the marginal on `out_wire` must not depend on what is fed
/// into `in_wire`, whatever the other inputs are.
///
/// Out-of-range wire indices give `true` only vacuously and are reported as
/// `false`.
pub fn no_influence(v: &Transform, in_wire: usize, out_wire: usize, tol: f64) -> bool {
    let ins = v.input();
    let outs = v.output();
    if in_wire >= ins.len() || out_wire >= outs.len() {
        return false;
    }
    let keep = Transform::tensor_all(&[
        Transform::discard(&outs.slice(0..out_wire)),
        Transform::identity(&outs.slice(out_wire..out_wire + 1)),
        Transform::discard(&outs.slice(out_wire + 1..outs.len())),
    ]);
    let marginal = keep.after(v).expect("types line up");
    let before = Transform::identity(&ins.slice(0..in_wire));
    let after = Transform::identity(&ins.slice(in_wire + 1..ins.len()));
    let states = spanning_states(ins.wires()[in_wire]);
    let plug = |s: &Transform| {
        marginal
            .after(&Transform::tensor_all(&[before.clone(), s.clone(), after.clone()]))
            .expect("types line up")
    };
    let reference = plug(&states[0]);
    states[1..]
        .iter()
        .all(|s| plug(s).transfer().max_abs_diff(reference.transfer()) <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;

    fn cnot() -> Transform {
        let q = SystemType::new(vec![Wire::Quantum(2), Wire::Quantum(2)]);
        let m = ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        )
        .unwrap();
        Transform::channel_from_isometry(&m, &q, &q, 1e-12).unwrap()
    }

    #[test]
    fn quantum_cnot_kicks_back() {
        let g = cnot();
        assert!(!no_influence(&g, 0, 1, 1e-9));
        // |+⟩|−⟩ ↦ |−⟩|−⟩: the target input reaches the control's coherences
        assert!(!no_influence(&g, 1, 0, 1e-9));
    }

    #[test]
    fn classical_cnot() {
        let c2 = SystemType::classical(2);
        let both = c2.concat(&c2);
        let m = [
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ];
        let g = Transform::stochastic(&both, &both, &m).unwrap();
        assert!(!no_influence(&g, 0, 1, 1e-9));
        assert!(no_influence(&g, 1, 0, 1e-9));
    }

    #[test]
    fn product_channels_do_not_signal() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap();
        let q = SystemType::quantum(2);
        let u = Transform::channel_from_isometry(&had, &q, &q, 1e-12).unwrap();
        let v = Transform::tensor(&u, &u);
        assert!(no_influence(&v, 0, 1, 1e-9));
        assert!(no_influence(&v, 1, 0, 1e-9));
    }

    #[test]
    fn classical_wires() {
        let c2 = SystemType::classical(2);
        let both = c2.concat(&c2);
        let swap = Transform::swap(&c2, &c2);
        assert!(!no_influence(&swap, 0, 1, 1e-9));
        assert!(no_influence(&swap, 0, 0, 1e-9));
        assert!(no_influence(&Transform::identity(&both), 0, 1, 1e-9));
        assert!(!no_influence(&swap, 5, 0, 1e-9));
    }
}
