use rand::Rng;

use super::{
    aoe_audit, construct, construct_with_explicit_layers, context_report, BellScenarioModel,
    ConstructedScenario, ContextReport, ExplicitLayer, WignerError,
};
use crate::circuit::{random, SystemType, Transform, Wire};
use crate::nonlocality::AoeVerdict;
use crate::theory::{basis_extractor, Extractor, PerspectivalRegistry, TheoryKind};
use crate::C64;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `{|0⟩, |1⟩}`.
pub fn z_basis() -> Vec<Vec<C64>> {
    vec![vec![re(1.0), re(0.0)], vec![re(0.0), re(1.0)]]
}

/// `{|+⟩, |−⟩}`.
pub fn pm_basis() -> Vec<Vec<C64>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![re(h), re(h)], vec![re(h), re(-h)]]
}

/// `(|00⟩ + |01⟩ + |10⟩)/√3`.
pub fn hardy_ket() -> Vec<C64> {
    let s = 1.0 / 3f64.sqrt();
    vec![re(s), re(s), re(s), re(0.0)]
}

fn two_qubits() -> SystemType {
    SystemType::new(vec![Wire::Quantum(2), Wire::Quantum(2)])
}

/// The Hardy state with settings `[Z, ±]` for both parties.
pub fn hardy_model(tol: f64) -> Result<BellScenarioModel, WignerError> {
    let state = Transform::state_from_ket(&hardy_ket(), &two_qubits(), tol)?;
    let z = basis_extractor(&z_basis(), tol)?;
    let pm = basis_extractor(&pm_basis(), tol)?;
    BellScenarioModel::new(state, vec![vec![z.clone(), pm.clone()], vec![z, pm]], tol)
}

/// Classical analog: the Hardy `Z Z` table as a classical joint state; the
/// first setting reads the variable, the second passes it through a noisy
/// flip.
pub fn classical_hardy_model(tol: f64) -> Result<BellScenarioModel, WignerError> {
    let c2 = SystemType::classical(2);
    let third = 1.0 / 3.0;
    let state = Transform::classical_joint_state(&c2.concat(&c2), &[third, third, third, 0.0])?;
    let read = Extractor::new(Transform::identity(&c2), tol)?;
    let flip = Extractor::new(
        Transform::stochastic(&c2, &c2, &[vec![0.25, 0.75], vec![0.75, 0.25]])?,
        tol,
    )?;
    BellScenarioModel::new(state, vec![vec![read.clone(), flip.clone()], vec![read, flip]], tol)
}

/// Everything the Hardy pipeline produces for one theory.
#[derive(Clone, Debug)]
pub struct HardyPreset {
    pub kind: TheoryKind,
    pub model: BellScenarioModel,
    pub scenario: ConstructedScenario,
    pub report: ContextReport,
    pub verdict: AoeVerdict,
}

/// Runs the Hardy scenario end to end.
///
/// The isometric and classical theories use the information-preservation
/// construction; the collapse theory has no recoveries, so each party
/// measures `Z` and then `±` on the re-prepared system.
pub fn hardy_preset(kind: TheoryKind, tol: f64) -> Result<HardyPreset, WignerError> {
    let registry = PerspectivalRegistry::builtin(kind, tol);
    let (model, scenario) = match kind {
        TheoryKind::QuantumIsometric => {
            let model = hardy_model(tol)?;
            let scenario = construct(&model, &registry, tol)?;
            (model, scenario)
        }
        TheoryKind::QuantumCollapse => {
            let model = hardy_model(tol)?;
            let explicit: Vec<Vec<ExplicitLayer>> = model
                .parties()
                .iter()
                .map(|p| p.iter().cloned().map(ExplicitLayer::Local).collect())
                .collect();
            let scenario = construct_with_explicit_layers(&model, &registry, &explicit, tol)?;
            (model, scenario)
        }
        TheoryKind::ClassicalCopy => {
            let model = classical_hardy_model(tol)?;
            let scenario = construct(&model, &registry, tol)?;
            (model, scenario)
        }
    };
    let report = context_report(&scenario, tol)?;
    let verdict = aoe_audit(&report, tol)?;
    Ok(HardyPreset {
        kind,
        model,
        scenario,
        report,
        verdict,
    })
}

/// Two parties, two settings each, a random pure two-qubit state and
/// random projective qubit measurements.
pub fn random_projective_model(rng: &mut impl Rng, tol: f64) -> Result<BellScenarioModel, WignerError> {
    let state = Transform::state_from_ket(&random::unit_vector(rng, 4), &two_qubits(), tol)?;
    let mut parties = Vec::with_capacity(2);
    for _ in 0..2 {
        let settings = (0..2)
            .map(|_| basis_extractor(&random::basis(rng, 2), tol))
            .collect::<Result<Vec<_>, _>>()?;
        parties.push(settings);
    }
    BellScenarioModel::new(state, parties, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wigner::{
        context_marginal, context_marginal_ordered, joint_readout, predicted_dist, verify_context_match,
    };

    const TOL: f64 = 1e-9;

    #[test]
    fn predicted_hardy_cells() {
        let p = predicted_dist(&hardy_model(TOL).unwrap(), TOL).unwrap();
        assert!(p.get(&[0, 0], &[1, 1]).abs() < 1e-12);
        assert!((p.get(&[1, 1], &[1, 1]) - 1.0 / 12.0).abs() < 1e-12);
        assert!(p.get(&[1, 0], &[1, 0]).abs() < 1e-12);
        assert!(p.get(&[0, 1], &[0, 1]).abs() < 1e-12);
        assert!(p.max_abs_diff(&crate::nonlocality::fixtures::hardy()) < 1e-12);
    }

    #[test]
    fn isometric_hardy() {
        let h = hardy_preset(TheoryKind::QuantumIsometric, TOL).unwrap();
        assert!(h.scenario.ip_verified());
        assert!(h.report.max_deviation() <= TOL);
        let zz = context_marginal(&h.scenario, &[0, 0], TOL).unwrap();
        assert!(zz.get(&[1, 1]).abs() < 1e-12);
        assert!((zz.get(&[0, 0]) - 1.0 / 3.0).abs() < 1e-12);
        let cert = h.verdict.certificate().expect("infeasible");
        assert!(cert.gap() > 1e-7);
        assert!(matches!(
            joint_readout(&h.scenario, TOL),
            Err(WignerError::NotRecordKeeping { party: 0, layer: 0 })
        ));
        assert!(h.scenario.layers()[0][0]
            .update
            .operationally_eq(&crate::theory::coherent_copy_update(2), 1e-12));
    }

    #[test]
    fn collapse_needs_explicit_layers() {
        let model = hardy_model(TOL).unwrap();
        let reg = PerspectivalRegistry::builtin(TheoryKind::QuantumCollapse, TOL);
        assert!(matches!(
            construct(&model, &reg, TOL),
            Err(WignerError::Theory(crate::theory::TheoryError::NoRecovery))
        ));
    }

    #[test]
    fn collapse_hardy() {
        let h = hardy_preset(TheoryKind::QuantumCollapse, TOL).unwrap();
        let mm = h.report.entry(&[1, 1]).unwrap();
        assert!((mm.probs[3] - 0.25).abs() < 1e-12);
        let predicted = crate::nonlocality::fixtures::hardy();
        assert!((mm.probs[3] - predicted.get(&[1, 1], &[1, 1]) - 1.0 / 6.0).abs() < 1e-12);
        assert!(mm.deviation >= 1.0 / 6.0);
        let check = verify_context_match(&h.scenario, TOL).unwrap();
        assert_eq!(check.contexts[0], (vec![0, 0], true));
        assert!(!check.all_match());
        let q = h.verdict.q().expect("feasible");
        assert!((q.get(&[0, 1, 0, 1]) - 1.0 / 12.0).abs() < 1e-12);
        let joint = joint_readout(&h.scenario, TOL).unwrap();
        assert!((joint.get(&[vec![0, 1], vec![0, 1]]) - 1.0 / 12.0).abs() < 1e-12);
        assert!(joint.q.max_abs_diff(q) < 1e-9);
    }

    #[test]
    fn classical_hardy() {
        let h = hardy_preset(TheoryKind::ClassicalCopy, TOL).unwrap();
        assert!(h.verdict.is_feasible());
        assert!(h.report.max_deviation() <= TOL);
        joint_readout(&h.scenario, TOL).unwrap();
    }

    #[test]
    fn interchange_order() {
        let h = hardy_preset(TheoryKind::QuantumIsometric, TOL).unwrap();
        for x in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let a = context_marginal_ordered(&h.scenario, &x, &[0, 1], TOL).unwrap();
            let b = context_marginal_ordered(&h.scenario, &x, &[1, 0], TOL).unwrap();
            let c = context_marginal(&h.scenario, &x, TOL).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-12);
            assert!(a.max_abs_diff(&c) <= 1e-12);
        }
    }

    #[test]
    fn explicit_layer_type_errors() {
        let model = hardy_model(TOL).unwrap();
        let reg = PerspectivalRegistry::builtin(TheoryKind::QuantumCollapse, TOL);
        let z = basis_extractor(&z_basis(), TOL).unwrap();
        let bad = vec![
            vec![ExplicitLayer::Local(z.clone()), ExplicitLayer::Accumulated(z.clone())],
            vec![ExplicitLayer::Local(z.clone()), ExplicitLayer::Local(z.clone())],
        ];
        assert!(matches!(
            construct_with_explicit_layers(&model, &reg, &bad, TOL),
            Err(WignerError::TypeMismatch { party: 0, layer: 1, .. })
        ));
    }

    #[test]
    fn single_setting_collapse_is_fine() {
        let state = Transform::state_from_ket(&[re(1.0), re(0.0)], &SystemType::quantum(2), TOL).unwrap();
        let z = basis_extractor(&z_basis(), TOL).unwrap();
        let model = BellScenarioModel::new(state, vec![vec![z]], TOL).unwrap();
        let reg = PerspectivalRegistry::builtin(TheoryKind::QuantumCollapse, TOL);
        let s = construct(&model, &reg, TOL).unwrap();
        assert_eq!(s.layers()[0].len(), 1);
    }
}
