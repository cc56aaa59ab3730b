//! Input file formats: conditional distributions, Bell scenarios and
//! channels, all JSON.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex;
use perspectiva::circuit::{SystemType, Transform, Wire};
use perspectiva::linalg::{check_psd, ComplexMatrix};
use perspectiva::nonlocality::CondDist;
use perspectiva::theory::{basis_extractor, povm_extractor, Extractor, TheoryKind};
use perspectiva::wigner::BellScenarioModel;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// A complex number as `[re, im]`.
pub type ComplexPair = [f64; 2];
/// A complex matrix as row-major nested arrays of `[re, im]`.
pub type ComplexRows = Vec<Vec<ComplexPair>>;

/// `p(a⃗|x⃗)` keyed by `"x1,…,xn|a1,…,an"` (0-based); absent cells are 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistFile {
    pub version: u32,
    pub parties: usize,
    pub settings: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub probs: BTreeMap<String, f64>,
    /// Normalization tolerance for this file; the run's tolerance otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl DistFile {
    /// Every cell of `p`, zeros included.
    pub fn from_dist(p: &CondDist) -> Self {
        let mut probs = BTreeMap::new();
        for ci in 0..p.num_contexts() {
            let x = p.setting_tuple(ci);
            for ai in 0..p.outcomes_per_context() {
                let a = p.outcome_tuple(ai);
                probs.insert(cell_key(&x, &a), p.get(&x, &a));
            }
        }
        Self {
            version: FORMAT_VERSION,
            parties: p.parties(),
            settings: p.settings().to_vec(),
            outcomes: p.outcomes().to_vec(),
            probs,
            tol: None,
        }
    }
}

pub fn cell_key(x: &[usize], a: &[usize]) -> String {
    let join = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
    format!("{}|{}", join(x), join(a))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Ket(Vec<ComplexPair>),
    Density(ComplexRows),
    /// Joint distribution over the parties' classical variables, row-major.
    Classical(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ExtractorSpec {
    /// Orthonormal basis; outcome `i` is ket `i`.
    Basis(Vec<Vec<ComplexPair>>),
    Povm(Vec<ComplexRows>),
    /// Column-stochastic matrix `p(outcome|value)`, rows are outcomes.
    Stochastic(Vec<Vec<f64>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub state: StateSpec,
    pub parties: Vec<Vec<ExtractorSpec>>,
    #[serde(default = "default_theory")]
    pub theory: String,
}

fn default_theory() -> String {
    TheoryKind::QuantumIsometric.name().to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum MapSpec {
    /// Unitary or isometry `V`, applied as `ρ ↦ VρV†`.
    Isometry(ComplexRows),
    Kraus(Vec<ComplexRows>),
    Stochastic(Vec<Vec<f64>>),
}

/// A transform with wires written as `"Q2"` or `"C3"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub version: u32,
    pub input: Vec<String>,
    pub output: Vec<String>,
    pub map: MapSpec,
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(origin, e.to_string()))
}

fn check_version(v: u32, origin: &str) -> Result<(), CliError> {
    if v != FORMAT_VERSION {
        return Err(CliError::parse(
            origin,
            format!("unsupported version {v}, expected {FORMAT_VERSION}"),
        ));
    }
    Ok(())
}

fn parse_indices(part: &str, key: &str, origin: &str) -> Result<Vec<usize>, CliError> {
    part.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::parse(origin, format!("key `{key}`: `{s}` is not an index")))
        })
        .collect()
}

pub fn parse_dist_text(text: &str, origin: &str, tol: f64) -> Result<CondDist, CliError> {
    let file: DistFile = from_json(text, origin)?;
    check_version(file.version, origin)?;
    if file.settings.len() != file.parties || file.outcomes.len() != file.parties {
        return Err(CliError::invalid(
            origin,
            format!(
                "{} parties but {} setting counts and {} outcome counts",
                file.parties,
                file.settings.len(),
                file.outcomes.len()
            ),
        ));
    }
    let contexts: usize = file.settings.iter().product();
    let per: usize = file.outcomes.iter().product();
    let mut probs = vec![0.0; contexts * per];
    let mut seen = vec![false; contexts * per];
    for (key, &value) in &file.probs {
        let (xs, as_) = key
            .split_once('|')
            .ok_or_else(|| CliError::parse(origin, format!("key `{key}` has no `|`")))?;
        let x = parse_indices(xs, key, origin)?;
        let a = parse_indices(as_, key, origin)?;
        if x.len() != file.parties || a.len() != file.parties {
            return Err(CliError::parse(origin, format!("key `{key}` needs {} entries per side", file.parties)));
        }
        if x.iter().zip(&file.settings).any(|(v, m)| v >= m) || a.iter().zip(&file.outcomes).any(|(v, k)| v >= k) {
            return Err(CliError::parse(origin, format!("key `{key}` is out of range")));
        }
        let ci = perspectiva::nonlocality::flat(&x, &file.settings);
        let index = ci * per + perspectiva::nonlocality::flat(&a, &file.outcomes);
        if std::mem::replace(&mut seen[index], true) {
            return Err(CliError::parse(origin, format!("cell `{key}` is given twice")));
        }
        probs[index] = value;
    }
    let tol = file.tol.unwrap_or(tol);
    CondDist::new(file.settings, file.outcomes, probs, tol).map_err(|e| CliError::invalid(origin, e.to_string()))
}

pub fn parse_dist(path: &Path, tol: f64) -> Result<CondDist, CliError> {
    parse_dist_text(&read(path)?, &path.display().to_string(), tol)
}

fn complex(p: &ComplexPair) -> Complex<f64> {
    Complex::new(p[0], p[1])
}

fn matrix(rows: &ComplexRows, what: &str, origin: &str) -> Result<ComplexMatrix, CliError> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if r == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(CliError::invalid(origin, format!("{what} is not a rectangular matrix")));
    }
    let data = rows.iter().flatten().map(complex).collect();
    ComplexMatrix::new(r, c, data).map_err(|e| CliError::invalid(origin, format!("{what}: {e}")))
}

fn extractor(spec: &ExtractorSpec, tol: f64, what: &str, origin: &str) -> Result<Extractor, CliError> {
    let bad = |e: &dyn std::fmt::Display| CliError::invalid(origin, format!("{what}: {e}"));
    match spec {
        ExtractorSpec::Basis(kets) => {
            let kets: Vec<Vec<Complex<f64>>> = kets.iter().map(|k| k.iter().map(complex).collect()).collect();
            basis_extractor(&kets, tol).map_err(|e| bad(&e))
        }
        ExtractorSpec::Povm(elements) => {
            let elements = elements
                .iter()
                .enumerate()
                .map(|(i, m)| matrix(m, &format!("{what}, element {i}"), origin))
                .collect::<Result<Vec<_>, _>>()?;
            povm_extractor(&elements, tol).map_err(|e| bad(&e))
        }
        ExtractorSpec::Stochastic(rows) => {
            let cols = rows.first().map_or(0, |r| r.len());
            let t = Transform::stochastic(&SystemType::classical(cols), &SystemType::classical(rows.len()), rows)
                .map_err(|e| bad(&e))?;
            Extractor::new(t, tol).map_err(|e| bad(&e))
        }
    }
}

pub fn parse_scenario_text(text: &str, origin: &str, tol: f64) -> Result<(BellScenarioModel, TheoryKind), CliError> {
    let file: ScenarioFile = from_json(text, origin)?;
    check_version(file.version, origin)?;
    let kind: TheoryKind = file.theory.parse().map_err(|e: String| CliError::parse(origin, e))?;
    let parties = file
        .parties
        .iter()
        .enumerate()
        .map(|(i, list)| {
            list.iter()
                .enumerate()
                .map(|(x, spec)| extractor(spec, tol, &format!("party {i}, setting {x}"), origin))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut sys = SystemType::trivial();
    for (i, list) in parties.iter().enumerate() {
        let first = list
            .first()
            .ok_or_else(|| CliError::invalid(origin, format!("party {i} has no settings")))?;
        sys = sys.concat(first.input());
    }
    let state = match &file.state {
        StateSpec::Ket(amps) => {
            let amps: Vec<Complex<f64>> = amps.iter().map(complex).collect();
            Transform::state_from_ket(&amps, &sys, tol)
        }
        StateSpec::Density(rows) => {
            let rho = matrix(rows, "density", origin)?;
            check_psd(&rho, tol).map_err(|e| CliError::invalid(origin, format!("density: {e}")))?;
            Transform::state_from_density(&rho, &sys)
        }
        StateSpec::Classical(p) => {
            if p.iter().any(|&v| v < -tol) {
                return Err(CliError::invalid(origin, "classical state has a negative entry"));
            }
            Transform::classical_joint_state(&sys, p)
        }
    }
    .map_err(|e| CliError::invalid(origin, format!("state: {e}")))?;
    let model = BellScenarioModel::new(state, parties, tol).map_err(|e| CliError::invalid(origin, e.to_string()))?;
    Ok((model, kind))
}

pub fn parse_scenario(path: &Path, tol: f64) -> Result<(BellScenarioModel, TheoryKind), CliError> {
    parse_scenario_text(&read(path)?, &path.display().to_string(), tol)
}

fn wire(s: &str, origin: &str) -> Result<Wire, CliError> {
    let bad = || CliError::parse(origin, format!("wire `{s}` is not of the form Q<d> or C<n>"));
    let count = |rest: &str| rest.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(bad);
    if let Some(rest) = s.strip_prefix('Q') {
        Ok(Wire::Quantum(count(rest)?))
    } else if let Some(rest) = s.strip_prefix('C') {
        Ok(Wire::Classical(count(rest)?))
    } else {
        Err(bad())
    }
}

fn system(wires: &[String], origin: &str) -> Result<SystemType, CliError> {
    Ok(SystemType::new(wires.iter().map(|w| wire(w, origin)).collect::<Result<_, _>>()?))
}

pub fn parse_channel_text(text: &str, origin: &str, tol: f64) -> Result<Transform, CliError> {
    let file: ChannelFile = from_json(text, origin)?;
    check_version(file.version, origin)?;
    let input = system(&file.input, origin)?;
    let output = system(&file.output, origin)?;
    let bad = |e: &dyn std::fmt::Display| CliError::invalid(origin, e.to_string());
    let t = match &file.map {
        MapSpec::Isometry(rows) => {
            Transform::channel_from_isometry(&matrix(rows, "isometry", origin)?, &input, &output, tol)
        }
        MapSpec::Kraus(list) => {
            let ks = list
                .iter()
                .enumerate()
                .map(|(i, m)| matrix(m, &format!("Kraus operator {i}"), origin))
                .collect::<Result<Vec<_>, _>>()?;
            Transform::channel_from_kraus(&ks, &input, &output)
        }
        MapSpec::Stochastic(rows) => Transform::stochastic(&input, &output, rows),
    }
    .map_err(|e| bad(&e))?;
    if !t.is_causal(tol) {
        return Err(CliError::invalid(origin, "the map does not preserve normalization"));
    }
    Ok(t)
}

pub fn parse_channel(path: &Path, tol: f64) -> Result<Transform, CliError> {
    parse_channel_text(&read(path)?, &path.display().to_string(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_file_round_trip() {
        let p = perspectiva::nonlocality::fixtures::hardy();
        let text = serde_json::to_string(&DistFile::from_dist(&p)).unwrap();
        let back = parse_dist_text(&text, "mem", 1e-9).unwrap();
        assert!(back.max_abs_diff(&p) == 0.0);
    }

    #[test]
    fn bad_keys() {
        let base = r#"{"version":1,"parties":1,"settings":[1],"outcomes":[2],"probs":{KEYS}}"#;
        for keys in [r#""0,0|0":1"#, r#""0|0,1":1"#, r#""0|2":1"#, r#""a|0":1"#] {
            let text = base.replace("KEYS", keys);
            let err = parse_dist_text(&text, "mem", 1e-9).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{keys}");
        }
    }

    #[test]
    fn wires() {
        assert_eq!(wire("Q2", "t").unwrap(), Wire::Quantum(2));
        assert_eq!(wire("C3", "t").unwrap(), Wire::Classical(3));
        assert!(wire("X2", "t").is_err());
        assert!(wire("Q0", "t").is_err());
        assert!(wire("", "t").is_err());
    }
}
