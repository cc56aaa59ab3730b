use super::{BellScenarioModel, WignerError};
use crate::circuit::{SystemType, Transform};
use crate::theory::{witness_from_recovery, Extractor, MemoryUpdate, PerspectivalRegistry, TheoryError};

/// One measurement layer of one party.
///
/// `update` acts on everything the party holds so far
/// (`Mˣ⁻¹ ⊗ … ⊗ M¹ ⊗ S`) and prepends its own memory; `extractor` is the
/// inside view of the same measurement on that input.
#[derive(Clone, Debug)]
pub struct Layer {
    pub update: MemoryUpdate,
    pub extractor: Extractor,
    /// `‖extractor ∘ (earlier layers) − Eˣ‖∞` when the layer was derived
    /// from an information-preservation witness; `None` for explicit layers.
    pub ip_residual: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ConstructedScenario {
    model: BellScenarioModel,
    layers: Vec<Vec<Layer>>,
    registry: PerspectivalRegistry,
}

impl ConstructedScenario {
    pub fn model(&self) -> &BellScenarioModel {
        &self.model
    }

    pub fn layers(&self) -> &[Vec<Layer>] {
        &self.layers
    }

    pub fn registry(&self) -> &PerspectivalRegistry {
        &self.registry
    }

    /// True when every layer came from an information-preservation witness.
    pub fn ip_verified(&self) -> bool {
        self.layers.iter().flatten().all(|l| l.ip_residual.is_some())
    }

    /// `Uˣ ∘ … ∘ U¹` for party `party` (identity when `count` is 0).
    pub fn chain(&self, party: usize, count: usize) -> Result<Transform, WignerError> {
        let mut t = Transform::identity(self.model.system(party));
        for layer in &self.layers[party][..count] {
            t = layer.update.inner().after(&t)?;
        }
        Ok(t)
    }
}

/// Builds the layers from information-preservation witnesses: layer 1 is
/// `f(Eᵢ¹)`, layer `x` is `f(Eᵢˣ ∘ R)` with `R` the recovery of the chain so
/// far. Extractors missing from the registry are paired by its built-in rule.
pub fn construct(
    model: &BellScenarioModel,
    registry: &PerspectivalRegistry,
    tol: f64,
) -> Result<ConstructedScenario, WignerError> {
    let mut registry = registry.clone();
    let mut layers = Vec::with_capacity(model.num_parties());
    for (party, extractors) in model.parties().iter().enumerate() {
        let system = model.system(party);
        let mut chain = Transform::identity(system);
        let mut recovery = Some(Transform::identity(system));
        let mut party_layers = Vec::with_capacity(extractors.len());
        for (x, e) in extractors.iter().enumerate() {
            let lifted = if x == 0 {
                e.clone()
            } else {
                let r = recovery.as_ref().ok_or(TheoryError::NoRecovery)?;
                witness_from_recovery(r, &chain, e, tol)?
            };
            let (next, index) = registry.with_extractor(&lifted)?;
            registry = next;
            let pair = &registry.pairs()[index];
            let replay = pair.extractor.inner().after(&chain)?;
            let residual = replay.transfer().max_abs_diff(e.inner().transfer());
            if residual > tol {
                return Err(TheoryError::BadRecovery { deviation: residual }.into());
            }
            recovery = match (&recovery, &pair.recovery) {
                (Some(prev), Some(r)) => Some(prev.after(r)?),
                _ => None,
            };
            chain = pair.update.inner().after(&chain)?;
            party_layers.push(Layer {
                update: pair.update.clone(),
                extractor: pair.extractor.clone(),
                ip_residual: Some(residual),
            });
        }
        layers.push(party_layers);
    }
    Ok(ConstructedScenario {
        model: model.clone(),
        layers,
        registry,
    })
}

/// A directly specified layer.
#[derive(Clone, Debug)]
pub enum ExplicitLayer {
    /// Measures the party's system only; earlier memories are carried along
    /// untouched.
    Local(Extractor),
    /// Measures everything the party holds so far.
    Accumulated(Extractor),
}

/// Builds layers from given extractors, each paired by the registry. No
/// information-preservation identity is asserted.
pub fn construct_with_explicit_layers(
    model: &BellScenarioModel,
    registry: &PerspectivalRegistry,
    explicit: &[Vec<ExplicitLayer>],
    tol: f64,
) -> Result<ConstructedScenario, WignerError> {
    if explicit.len() != model.num_parties() {
        return Err(WignerError::InvalidModel(format!(
            "{} explicit layer lists for {} parties",
            explicit.len(),
            model.num_parties()
        )));
    }
    let mut registry = registry.clone();
    let mut layers = Vec::with_capacity(explicit.len());
    for (party, list) in explicit.iter().enumerate() {
        if list.len() != model.parties()[party].len() {
            return Err(WignerError::TypeMismatch {
                party,
                layer: list.len(),
                detail: format!("{} layers for {} settings", list.len(), model.parties()[party].len()),
            });
        }
        let system = model.system(party).clone();
        let mut held = system.clone();
        let mut party_layers = Vec::with_capacity(list.len());
        for (x, spec) in list.iter().enumerate() {
            let prior = held.slice(0..held.len() - system.len());
            let (update, extractor) = match spec {
                ExplicitLayer::Local(e) => {
                    if *e.input() != system {
                        return Err(mismatch(party, x, e, &system));
                    }
                    let (next, index) = registry.with_extractor(e)?;
                    registry = next;
                    let pair = &registry.pairs()[index];
                    lift_local(&pair.update, &pair.extractor, &prior, tol)?
                }
                ExplicitLayer::Accumulated(e) => {
                    if *e.input() != held {
                        return Err(mismatch(party, x, e, &held));
                    }
                    let (next, index) = registry.with_extractor(e)?;
                    registry = next;
                    let pair = &registry.pairs()[index];
                    (pair.update.clone(), pair.extractor.clone())
                }
            };
            held = update.output().clone();
            party_layers.push(Layer {
                update,
                extractor,
                ip_residual: None,
            });
        }
        layers.push(party_layers);
    }
    Ok(ConstructedScenario {
        model: model.clone(),
        layers,
        registry,
    })
}

fn mismatch(party: usize, layer: usize, e: &Extractor, expected: &SystemType) -> WignerError {
    WignerError::TypeMismatch {
        party,
        layer,
        detail: format!("extractor acts on {}, the party holds {}", e.input(), expected),
    }
}

/// `P ⊗ S → M ⊗ P ⊗ S` from `f(E): S → M ⊗ S`, and `E ∘ (discard P ⊗ 1)`.
fn lift_local(
    update: &MemoryUpdate,
    extractor: &Extractor,
    prior: &SystemType,
    tol: f64,
) -> Result<(MemoryUpdate, Extractor), WignerError> {
    let memory = update.memory();
    let system = update.input();
    let widened = Transform::tensor(&Transform::identity(prior), update.inner());
    let (p, m, s) = (prior.len(), memory.len(), system.len());
    let order: Vec<usize> = (p..p + m).chain(0..p).chain(p + m..p + m + s).collect();
    let reorder = Transform::permute(widened.output(), &order)?;
    let lifted = MemoryUpdate::new(reorder.after(&widened)?, memory.clone(), tol)?;
    let reads = extractor.after(
        &Transform::tensor(&Transform::discard(prior), &Transform::identity(system)),
        tol,
    )?;
    Ok((lifted, reads))
}
