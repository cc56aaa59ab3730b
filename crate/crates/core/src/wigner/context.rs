use super::{ConstructedScenario, WignerError};
use crate::circuit::{eval_to_dist, ProbTable, SystemType, Transform};
use crate::nonlocality::{
    digits, lhv_feasibility_capped, AoeVerdict, CondDist, Variable, DEFAULT_MAX_ASSIGNMENTS,
};
use crate::theory::is_collapse;

/// Party `party`'s view of setting `x`: earlier layers, then the layer's
/// extractor.
fn party_map(scenario: &ConstructedScenario, party: usize, x: usize) -> Result<Transform, WignerError> {
    let chain = scenario.chain(party, x)?;
    Ok(scenario.layers()[party][x].extractor.inner().after(&chain)?)
}

fn to_table(scenario: &ConstructedScenario, dist: ProbTable) -> ProbTable {
    ProbTable::new(scenario.model().outcomes(), dist.into_probs()).expect("outcome counts agree")
}

/// Joint distribution of `(C₁^{x₁}, …, Cₙ^{xₙ})` read off the layered circuit.
pub fn context_marginal(scenario: &ConstructedScenario, x: &[usize], tol: f64) -> Result<ProbTable, WignerError> {
    scenario.model().check_setting(x)?;
    let maps: Vec<Transform> = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| party_map(scenario, i, xi))
        .collect::<Result<_, _>>()?;
    let circuit = Transform::tensor_all(&maps).after(scenario.model().state())?;
    Ok(to_table(scenario, eval_to_dist(&circuit, tol)?))
}

/// Same distribution, with the parties' pieces applied one after another in
/// `order` instead of side by side.
pub fn context_marginal_ordered(
    scenario: &ConstructedScenario,
    x: &[usize],
    order: &[usize],
    tol: f64,
) -> Result<ProbTable, WignerError> {
    scenario.model().check_setting(x)?;
    let n = x.len();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(WignerError::InvalidModel(format!("{order:?} is not an ordering of {n} parties")));
    }
    let mut blocks: Vec<SystemType> = (0..n).map(|i| scenario.model().system(i).clone()).collect();
    let mut current = scenario.model().state().clone();
    for &p in order {
        let map = party_map(scenario, p, x[p])?;
        let pieces: Vec<Transform> = blocks
            .iter()
            .enumerate()
            .map(|(j, b)| if j == p { map.clone() } else { Transform::identity(b) })
            .collect();
        current = Transform::tensor_all(&pieces).after(&current)?;
        blocks[p] = map.output().clone();
    }
    Ok(to_table(scenario, eval_to_dist(&current, tol)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContextEntry {
    pub setting: Vec<usize>,
    /// Distribution over outcome tuples, row-major.
    pub probs: Vec<f64>,
    /// Largest deviation from the model's direct prediction.
    pub deviation: f64,
}

/// Every context of a constructed scenario and how far it is from the
/// model's prediction.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextReport {
    pub settings: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub entries: Vec<ContextEntry>,
}

impl ContextReport {
    pub fn max_deviation(&self) -> f64 {
        self.entries.iter().map(|e| e.deviation).fold(0.0, f64::max)
    }

    pub fn entry(&self, setting: &[usize]) -> Option<&ContextEntry> {
        self.entries.iter().find(|e| e.setting == setting)
    }

    /// The contexts as a conditional distribution.
    pub fn to_cond_dist(&self, tol: f64) -> Result<CondDist, WignerError> {
        let probs = self.entries.iter().flat_map(|e| e.probs.iter().copied()).collect();
        Ok(CondDist::new(self.settings.clone(), self.outcomes.clone(), probs, tol)?)
    }
}

pub fn context_report(scenario: &ConstructedScenario, tol: f64) -> Result<ContextReport, WignerError> {
    let predicted = super::predicted_dist(scenario.model(), tol)?;
    let settings = scenario.model().settings();
    let contexts: usize = settings.iter().product();
    let entries = (0..contexts)
        .map(|ci| {
            let setting = digits(ci, &settings);
            let probs = context_marginal(scenario, &setting, tol)?.into_probs();
            let deviation = probs
                .iter()
                .zip(predicted.context(&setting))
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            Ok(ContextEntry {
                setting,
                probs,
                deviation,
            })
        })
        .collect::<Result<_, WignerError>>()?;
    Ok(ContextReport {
        settings,
        outcomes: scenario.model().outcomes(),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContextMatch {
    /// `(setting tuple, matches within tol)` per context.
    pub contexts: Vec<(Vec<usize>, bool)>,
    pub max_deviation: f64,
}

impl ContextMatch {
    pub fn all_match(&self) -> bool {
        self.contexts.iter().all(|(_, ok)| *ok)
    }
}

pub fn verify_context_match(scenario: &ConstructedScenario, tol: f64) -> Result<ContextMatch, WignerError> {
    let report = context_report(scenario, tol)?;
    Ok(ContextMatch {
        contexts: report
            .entries
            .iter()
            .map(|e| (e.setting.clone(), e.deviation <= tol))
            .collect(),
        max_deviation: report.max_deviation(),
    })
}

pub fn aoe_audit(report: &ContextReport, tol: f64) -> Result<AoeVerdict, WignerError> {
    aoe_audit_capped(report, tol, DEFAULT_MAX_ASSIGNMENTS)
}

/// Is there one distribution over all `Cᵢˣ` with the reported contexts as
/// marginals?
pub fn aoe_audit_capped(report: &ContextReport, tol: f64, max_assignments: usize) -> Result<AoeVerdict, WignerError> {
    Ok(lhv_feasibility_capped(&report.to_cond_dist(tol)?, tol, max_assignments)?)
}

/// The global distribution read directly from classical memory records.
#[derive(Clone, Debug, PartialEq)]
pub struct JointReadout {
    /// `Cᵢˣ`, party-major.
    pub variables: Vec<Variable>,
    pub q: ProbTable,
}

impl JointReadout {
    /// `q` at the assignment given per party, per setting.
    pub fn get(&self, values: &[Vec<usize>]) -> f64 {
        let flat: Vec<usize> = values.iter().flatten().copied().collect();
        self.q.get(&flat)
    }
}

/// Runs every layer, reads every memory in its record basis and discards the
/// systems. Requires every update to be a collapse (classical record).
pub fn joint_readout(scenario: &ConstructedScenario, tol: f64) -> Result<JointReadout, WignerError> {
    let model = scenario.model();
    let mut party_maps = Vec::with_capacity(model.num_parties());
    let mut variables = Vec::new();
    let mut first = Vec::new();
    for (party, layers) in scenario.layers().iter().enumerate() {
        if let Some(layer) = layers.iter().position(|l| !is_collapse(&l.update, tol)) {
            return Err(WignerError::NotRecordKeeping { party, layer });
        }
        first.push(variables.len());
        for (x, l) in layers.iter().enumerate() {
            variables.push(Variable::new(format!("C{}^{}", party + 1, x + 1), l.update.memory().levels()));
        }
        let full = scenario.chain(party, layers.len())?;
        // full output: M^m ⊗ … ⊗ M¹ ⊗ S
        let memory_wires: usize = layers.iter().map(|l| l.update.memory().len()).sum();
        let out = full.output();
        let read = Transform::tensor(
            &Transform::computational_readout(&out.slice(0..memory_wires)),
            &Transform::discard(&out.slice(memory_wires..out.len())),
        );
        // wire ranges of M^m, …, M¹ in that order, then listed M¹ first
        let mut ranges = Vec::with_capacity(layers.len());
        let mut start = 0;
        for l in layers.iter().rev() {
            let len = l.update.memory().len();
            ranges.push(start..start + len);
            start += len;
        }
        let order: Vec<usize> = ranges.into_iter().rev().flatten().collect();
        let records = read.after(&full)?;
        let sorted = Transform::permute(records.output(), &order)?.after(&records)?;
        party_maps.push(sorted);
    }
    let circuit = Transform::tensor_all(&party_maps).after(model.state())?;
    let dist = eval_to_dist(&circuit, tol)?;
    let q = ProbTable::new(variables.iter().map(|v| v.card).collect(), dist.into_probs())
        .expect("record sizes agree");

    let settings = model.settings();
    let contexts: usize = settings.iter().product();
    for ci in 0..contexts {
        let x = digits(ci, &settings);
        let vars: Vec<usize> = x.iter().zip(&first).map(|(&xi, &f)| f + xi).collect();
        let observed = context_marginal(scenario, &x, tol)?;
        let deviation = q.marginal(&vars).max_abs_diff(&observed);
        if deviation > tol {
            return Err(WignerError::ContextMismatch { context: x, deviation });
        }
    }
    Ok(JointReadout { variables, q })
}
