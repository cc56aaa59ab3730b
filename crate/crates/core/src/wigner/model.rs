use super::WignerError;
use crate::circuit::{eval_to_dist, SystemType, Transform};
use crate::nonlocality::CondDist;
use crate::theory::Extractor;

/// A shared state on `S₁ ⊗ … ⊗ Sₙ` and, per party, the extractors
/// `Eᵢ¹ … Eᵢ^{mᵢ}` acting on that party's system alone.
#[derive(Clone, Debug)]
pub struct BellScenarioModel {
    state: Transform,
    parties: Vec<Vec<Extractor>>,
}

impl BellScenarioModel {
    pub fn new(state: Transform, parties: Vec<Vec<Extractor>>, tol: f64) -> Result<Self, WignerError> {
        if !state.is_state() {
            return Err(WignerError::InvalidModel("the shared state has a non-trivial input".into()));
        }
        let norm = Transform::discard(state.output())
            .after(&state)?
            .transfer()[(0, 0)];
        if (norm.re - 1.0).abs() > tol || norm.im.abs() > tol {
            return Err(WignerError::InvalidModel(format!("state has trace {norm}")));
        }
        if parties.is_empty() {
            return Err(WignerError::InvalidModel("no parties".into()));
        }
        let mut systems = SystemType::trivial();
        for (i, list) in parties.iter().enumerate() {
            let first = list
                .first()
                .ok_or_else(|| WignerError::InvalidModel(format!("party {i} has no settings")))?;
            for (x, e) in list.iter().enumerate() {
                if e.input() != first.input() {
                    return Err(WignerError::TypeMismatch {
                        party: i,
                        layer: x,
                        detail: format!("extractor acts on {}, party system is {}", e.input(), first.input()),
                    });
                }
                if e.outcomes() != first.outcomes() {
                    return Err(WignerError::TypeMismatch {
                        party: i,
                        layer: x,
                        detail: "extractors of one party must share an outcome count".into(),
                    });
                }
            }
            systems = systems.concat(first.input());
        }
        if systems != *state.output() {
            return Err(WignerError::InvalidModel(format!(
                "party systems {systems} do not match the state's {}",
                state.output()
            )));
        }
        Ok(Self { state, parties })
    }

    pub fn state(&self) -> &Transform {
        &self.state
    }

    pub fn parties(&self) -> &[Vec<Extractor>] {
        &self.parties
    }

    pub fn num_parties(&self) -> usize {
        self.parties.len()
    }

    pub fn system(&self, party: usize) -> &SystemType {
        self.parties[party][0].input()
    }

    pub fn settings(&self) -> Vec<usize> {
        self.parties.iter().map(|p| p.len()).collect()
    }

    pub fn outcomes(&self) -> Vec<usize> {
        self.parties.iter().map(|p| p[0].outcomes()).collect()
    }

    pub(crate) fn check_setting(&self, x: &[usize]) -> Result<(), WignerError> {
        if x.len() != self.parties.len() || x.iter().zip(&self.parties).any(|(&xi, p)| xi >= p.len()) {
            return Err(WignerError::SettingOutOfRange(x.to_vec()));
        }
        Ok(())
    }
}

/// `p(a⃗|x⃗)` from the extractors applied directly to the state.
pub fn predicted_dist(model: &BellScenarioModel, tol: f64) -> Result<CondDist, WignerError> {
    let settings = model.settings();
    let outcomes = model.outcomes();
    let contexts: usize = settings.iter().product();
    let mut probs = Vec::new();
    for ci in 0..contexts {
        let x = crate::nonlocality::digits(ci, &settings);
        let local = Transform::tensor_all(
            x.iter()
                .zip(model.parties())
                .map(|(&xi, p)| p[xi].inner()),
        );
        probs.extend(eval_to_dist(&local.after(model.state())?, tol)?.into_probs());
    }
    Ok(CondDist::new(settings, outcomes, probs, tol)?)
}
