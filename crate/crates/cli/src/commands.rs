use std::time::Instant;

use perspectiva::nonlocality::{
    chsh_value, lhv_feasibility_capped, no_signalling_check, possibilistic_check_capped, CondDist,
};
use perspectiva::theory::{no_influence, PerspectivalRegistry, TheoryKind};
use perspectiva::wigner::{
    aoe_audit_capped, construct, construct_with_explicit_layers, context_report, hardy_preset,
    BellScenarioModel, ConstructedScenario, ContextReport, ExplicitLayer,
};

use crate::error::CliError;
use crate::files;
use crate::report::{CellRef, ContextTable, Inputs, Possibilistic, Report, VariableInfo};
use crate::{Command, Options};

pub(crate) fn dispatch(cmd: &Command, opts: &Options) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = match cmd {
        Command::CertifyLhv { file } => {
            let origin = file.display().to_string();
            let p = files::parse_dist(file, opts.tol)?;
            let mut r = Report::new("certify-lhv", dist_inputs(&origin, &p, opts));
            r.contexts = dist_contexts(&p);
            r.no_signalling = Some(no_signalling_check(&p, opts.tol));
            let v = lhv_feasibility_capped(&p, opts.tol, opts.max_assignments)
                .map_err(|e| CliError::from_core(&origin, e))?;
            r.set_verdict(&v, variables(p.settings(), p.outcomes()));
            r
        }
        Command::CertifyPossibilistic { file } => {
            let origin = file.display().to_string();
            let p = files::parse_dist(file, opts.tol)?;
            let mut r = Report::new("certify-possibilistic", dist_inputs(&origin, &p, opts));
            r.contexts = dist_contexts(&p);
            let check = possibilistic_check_capped(&p, opts.tol, opts.max_assignments)
                .map_err(|e| CliError::from_core(&origin, e))?;
            r.possibilistic = Some(Possibilistic {
                nonlocal: check.nonlocal,
                witness: check.witness.as_ref().map(CellRef::from),
                obstruction: check.obstruction.iter().map(CellRef::from).collect(),
            });
            r
        }
        Command::Chsh { file } => {
            let origin = file.display().to_string();
            let p = files::parse_dist(file, opts.tol)?;
            let mut r = Report::new("chsh", dist_inputs(&origin, &p, opts));
            r.contexts = dist_contexts(&p);
            r.chsh = Some(chsh_value(&p).map_err(|e| CliError::from_core(&origin, e))?);
            r.no_signalling = Some(no_signalling_check(&p, opts.tol));
            r
        }
        Command::Predict { file } => {
            let origin = file.display().to_string();
            let (model, kind) = files::parse_scenario(file, opts.tol)?;
            let p = perspectiva::wigner::predicted_dist(&model, opts.tol)
                .map_err(|e| CliError::from_core(&origin, e))?;
            let mut inputs = dist_inputs(&origin, &p, opts);
            inputs.theory = Some(kind.name().to_string());
            let mut r = Report::new("predict", inputs);
            r.contexts = dist_contexts(&p);
            r.no_signalling = Some(no_signalling_check(&p, opts.tol));
            r
        }
        Command::ConstructAudit { file } => {
            let origin = file.display().to_string();
            let (model, kind) = files::parse_scenario(file, opts.tol)?;
            let scenario = build(&model, kind, opts.tol).map_err(|e| CliError::from_core(&origin, e))?;
            let report = context_report(&scenario, opts.tol).map_err(|e| CliError::from_core(&origin, e))?;
            audit("construct-audit", Some(origin), kind, &scenario, &report, opts)?
        }
        Command::Hardy { theory } => {
            let kind = TheoryKind::from(*theory);
            let preset = hardy_preset(kind, opts.tol).map_err(|e| CliError::from_core("hardy preset", e))?;
            audit("hardy", None, kind, &preset.scenario, &preset.report, opts)?
        }
        Command::NoInfluence { file, from, to } => {
            let origin = file.display().to_string();
            let t = files::parse_channel(file, opts.tol)?;
            if *from >= t.input().len() || *to >= t.output().len() {
                return Err(CliError::invalid(
                    &origin,
                    format!(
                        "wires --from {from} --to {to} out of range for {} -> {}",
                        t.input(),
                        t.output()
                    ),
                ));
            }
            let mut r = Report::new("no-influence", base_inputs(Some(origin), opts));
            r.inputs.from = Some(*from);
            r.inputs.to = Some(*to);
            r.no_influence = Some(no_influence(&t, *from, *to, opts.tol));
            r
        }
    };
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

/// IP construction for isometric and classical theories; collapse layers act
/// on each party's system directly.
fn build(model: &BellScenarioModel, kind: TheoryKind, tol: f64) -> Result<ConstructedScenario, perspectiva::wigner::WignerError> {
    let registry = PerspectivalRegistry::builtin(kind, tol);
    match kind {
        TheoryKind::QuantumCollapse => {
            let explicit: Vec<Vec<ExplicitLayer>> = model
                .parties()
                .iter()
                .map(|p| p.iter().cloned().map(ExplicitLayer::Local).collect())
                .collect();
            construct_with_explicit_layers(model, &registry, &explicit, tol)
        }
        _ => construct(model, &registry, tol),
    }
}

fn audit(
    command: &str,
    source: Option<String>,
    kind: TheoryKind,
    scenario: &ConstructedScenario,
    report: &ContextReport,
    opts: &Options,
) -> Result<Report, CliError> {
    let origin = source.clone().unwrap_or_else(|| command.to_string());
    let mut inputs = base_inputs(source, opts);
    inputs.theory = Some(kind.name().to_string());
    inputs.settings = report.settings.clone();
    inputs.outcomes = report.outcomes.clone();
    let mut r = Report::new(command, inputs);
    r.contexts = report
        .entries
        .iter()
        .map(|e| ContextTable {
            setting: e.setting.clone(),
            probs: e.probs.clone(),
            deviation: Some(e.deviation),
        })
        .collect();
    r.max_deviation = Some(report.max_deviation());
    r.ip_verified = Some(scenario.ip_verified());
    let v = aoe_audit_capped(report, opts.tol, opts.max_assignments).map_err(|e| CliError::from_core(&origin, e))?;
    r.set_verdict(&v, variables(&report.settings, &report.outcomes));
    Ok(r)
}

fn base_inputs(source: Option<String>, opts: &Options) -> Inputs {
    Inputs {
        source,
        theory: None,
        tol: opts.tol,
        max_assignments: opts.max_assignments,
        settings: Vec::new(),
        outcomes: Vec::new(),
        from: None,
        to: None,
    }
}

fn dist_inputs(origin: &str, p: &CondDist, opts: &Options) -> Inputs {
    let mut inputs = base_inputs(Some(origin.to_string()), opts);
    inputs.settings = p.settings().to_vec();
    inputs.outcomes = p.outcomes().to_vec();
    inputs
}

fn dist_contexts(p: &CondDist) -> Vec<ContextTable> {
    (0..p.num_contexts())
        .map(|ci| {
            let x = p.setting_tuple(ci);
            ContextTable {
                probs: p.context(&x).to_vec(),
                setting: x,
                deviation: None,
            }
        })
        .collect()
}

/// `Cᵢˣ`, party-major, 1-based like the library's marginal problems.
fn variables(settings: &[usize], outcomes: &[usize]) -> Vec<VariableInfo> {
    settings
        .iter()
        .zip(outcomes)
        .enumerate()
        .flat_map(|(i, (&m, &k))| {
            (0..m).map(move |x| VariableInfo {
                name: format!("C{}^{}", i + 1, x + 1),
                card: k,
            })
        })
        .collect()
}
