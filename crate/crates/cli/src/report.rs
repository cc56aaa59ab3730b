//! The report every command produces, and its JSON and text renderings.

use std::fmt::Write as _;
use std::io;

use perspectiva::nonlocality::{AoeVerdict, Cell};
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<String>,
    pub tol: f64,
    pub max_assignments: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub settings: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outcomes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<usize>,
}

/// A Bell functional separating the data from every local model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// One coefficient vector per context, in context order.
    pub coefficients: Vec<Vec<f64>>,
    pub lhv_bound: f64,
    pub value_on_input: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableInfo {
    pub name: String,
    pub card: usize,
}

/// A global distribution over all variables, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalDistribution {
    pub variables: Vec<VariableInfo>,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextTable {
    pub setting: Vec<usize>,
    /// Outcome tuples row-major.
    pub probs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRef {
    pub setting: Vec<usize>,
    pub outcome: Vec<usize>,
}

impl From<&Cell> for CellRef {
    fn from(c: &Cell) -> Self {
        Self {
            setting: c.setting.clone(),
            outcome: c.outcome.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Possibilistic {
    pub nonlocal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<CellRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub obstruction: Vec<CellRef>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub inputs: Inputs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<GlobalDistribution>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contexts: Vec<ContextTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ip_verified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chsh: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_signalling: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub possibilistic: Option<Possibilistic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_influence: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, inputs: Inputs) -> Self {
        Self {
            version: REPORT_VERSION,
            command: command.to_string(),
            inputs,
            verdict: None,
            certificate: None,
            q: None,
            contexts: Vec::new(),
            max_deviation: None,
            ip_verified: None,
            chsh: None,
            no_signalling: None,
            possibilistic: None,
            no_influence: None,
            timing_ms: None,
        }
    }

    /// Fills verdict and certificate or global distribution.
    pub fn set_verdict(&mut self, v: &AoeVerdict, variables: Vec<VariableInfo>) {
        match v {
            AoeVerdict::Feasible { q } => {
                self.verdict = Some(Verdict::Feasible);
                self.q = Some(GlobalDistribution {
                    variables,
                    weights: q.probs().to_vec(),
                });
            }
            AoeVerdict::Infeasible { certificate } => {
                self.verdict = Some(Verdict::Infeasible);
                self.certificate = Some(Certificate {
                    coefficients: certificate.coefficients.clone(),
                    lhv_bound: certificate.lhv_bound,
                    value_on_input: certificate.value_on_input,
                    gap: certificate.gap(),
                });
            }
        }
    }

    pub fn context(&self, setting: &[usize]) -> Option<&ContextTable> {
        self.contexts.iter().find(|c| c.setting == setting)
    }
}

/// Writes every float with 17 significant digits, enough to read back the
/// same double.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            CompactFormatter.write_null(writer)
        }
    }
}

pub fn to_json(report: &Report) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    report.serialize(&mut ser).expect("reports serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(text)
}

fn tuple(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn row(probs: &[f64]) -> String {
    probs.iter().map(|p| format!("{p:.12}")).collect::<Vec<_>>().join("  ")
}

pub fn to_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = write!(s, "{}", r.command);
    if let Some(src) = &r.inputs.source {
        let _ = write!(s, " {src}");
    }
    if let Some(t) = &r.inputs.theory {
        let _ = write!(s, " (theory: {t})");
    }
    let _ = writeln!(s);
    if !r.inputs.settings.is_empty() {
        let _ = writeln!(
            s,
            "settings [{}], outcomes [{}], tol {:e}",
            tuple(&r.inputs.settings),
            tuple(&r.inputs.outcomes),
            r.inputs.tol
        );
    }
    if let Some(v) = r.verdict {
        let _ = writeln!(s, "verdict: {v:?}");
    }
    if !r.contexts.is_empty() {
        let _ = writeln!(s, "contexts (outcome tuples row-major):");
        for c in &r.contexts {
            let _ = write!(s, "  x=({})  {}", tuple(&c.setting), row(&c.probs));
            if let Some(d) = c.deviation {
                let _ = write!(s, "  deviation {d:.3e}");
            }
            let _ = writeln!(s);
        }
    }
    if let Some(d) = r.max_deviation {
        let _ = writeln!(s, "max deviation from prediction: {d:.3e}");
    }
    if let Some(ip) = r.ip_verified {
        let _ = writeln!(s, "information-preservation witnesses: {}", if ip { "verified" } else { "not used" });
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(
            s,
            "certificate: value {} vs local bound {} (gap {})",
            c.value_on_input, c.lhv_bound, c.gap
        );
        for (i, coeffs) in c.coefficients.iter().enumerate() {
            let setting = r.contexts.get(i).map_or_else(|| i.to_string(), |t| tuple(&t.setting));
            let _ = writeln!(s, "  x=({setting})  {}", coeffs.iter().map(|v| format!("{v:+.6}")).collect::<Vec<_>>().join("  "));
        }
    }
    if let Some(q) = &r.q {
        let names: Vec<&str> = q.variables.iter().map(|v| v.name.as_str()).collect();
        let _ = writeln!(s, "global distribution over ({}): {} weights", names.join(", "), q.weights.len());
        let support = q.weights.iter().filter(|&&w| w > r.inputs.tol).count();
        let _ = writeln!(s, "  support size {support}");
    }
    if let Some(v) = r.chsh {
        let _ = writeln!(s, "CHSH value: {v}");
    }
    if let Some(ns) = r.no_signalling {
        let _ = writeln!(s, "no-signalling: {}", if ns { "yes" } else { "no" });
    }
    if let Some(p) = &r.possibilistic {
        let _ = writeln!(s, "possibilistically nonlocal: {}", if p.nonlocal { "yes" } else { "no" });
        if let Some(w) = &p.witness {
            let _ = writeln!(s, "  witness: x=({}) a=({})", tuple(&w.setting), tuple(&w.outcome));
        }
        for c in &p.obstruction {
            let _ = writeln!(s, "  blocked by impossible x=({}) a=({})", tuple(&c.setting), tuple(&c.outcome));
        }
    }
    if let Some(n) = r.no_influence {
        let (from, to) = (r.inputs.from.unwrap_or(0), r.inputs.to.unwrap_or(0));
        let _ = writeln!(
            s,
            "input wire {from} {} output wire {to}",
            if n { "does not influence" } else { "influences" }
        );
    }
    if let Some(t) = r.timing_ms {
        let _ = writeln!(s, "time: {t:.3} ms");
    }
    s
}
