use super::{checked_count, digits, CondDist, NonlocalityError, DEFAULT_MAX_ASSIGNMENTS};
use crate::circuit::ProbTable;
use crate::linalg::{lp_feasibility, lp_minimize, LinearProgram, LpFeasibilityProblem, LpOutcome, LpSolution, RealMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub card: usize,
}

impl Variable {
    pub fn new(name: impl Into<String>, card: usize) -> Self {
        Self {
            name: name.into(),
            card,
        }
    }
}

/// A jointly observed subset of variables and its distribution (row-major
/// over the listed variables, first most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct Context {
    pub vars: Vec<usize>,
    pub probs: Vec<f64>,
}

/// Is there one distribution over all variables with the given context
/// marginals?
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalProblem {
    variables: Vec<Variable>,
    contexts: Vec<Context>,
}

impl MarginalProblem {
    pub fn new(variables: Vec<Variable>, contexts: Vec<Context>, tol: f64) -> Result<Self, NonlocalityError> {
        if let Some(v) = variables.iter().find(|v| v.card == 0) {
            return Err(NonlocalityError::InconsistentDeclaration(format!(
                "variable {} has no values",
                v.name
            )));
        }
        for (i, c) in contexts.iter().enumerate() {
            let mut seen = vec![false; variables.len()];
            for &v in &c.vars {
                if v >= variables.len() || std::mem::replace(&mut seen[v], true) {
                    return Err(NonlocalityError::InconsistentDeclaration(format!(
                        "context {i} lists variable {v} out of range or twice"
                    )));
                }
            }
            let size: usize = c.vars.iter().map(|&v| variables[v].card).product();
            if c.probs.len() != size {
                return Err(NonlocalityError::InconsistentDeclaration(format!(
                    "context {i} has {} entries, expected {size}",
                    c.probs.len()
                )));
            }
            if let Some(&value) = c.probs.iter().find(|&&p| !(p >= -tol)) {
                return Err(NonlocalityError::Negative { context: i, value });
            }
            let total: f64 = c.probs.iter().sum();
            if (total - 1.0).abs() > tol {
                return Err(NonlocalityError::NotNormalized { context: i, total });
            }
        }
        Ok(Self {
            variables,
            contexts,
        })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    fn cards(&self) -> Vec<usize> {
        self.variables.iter().map(|v| v.card).collect()
    }

    /// Index of the cell of context `c` that global assignment `s` lands in.
    fn local_index(&self, c: &Context, s: &[usize]) -> usize {
        c.vars
            .iter()
            .fold(0, |acc, &v| acc * self.variables[v].card + s[v])
    }

    /// Marginals of a global distribution on every context.
    pub fn marginals_of(&self, q: &[f64]) -> Vec<Vec<f64>> {
        let cards = self.cards();
        let mut out: Vec<Vec<f64>> = self.contexts.iter().map(|c| vec![0.0; c.probs.len()]).collect();
        for (s, &w) in q.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let values = digits(s, &cards);
            for (c, m) in self.contexts.iter().zip(out.iter_mut()) {
                m[self.local_index(c, &values)] += w;
            }
        }
        out
    }

    /// Largest deviation between the context marginals of `q` and the data.
    pub fn deviation(&self, q: &[f64]) -> f64 {
        self.marginals_of(q)
            .iter()
            .zip(&self.contexts)
            .flat_map(|(m, c)| m.iter().zip(&c.probs).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }
}

/// A linear functional on context tables with its local bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BellFunctional {
    /// One coefficient vector per context, laid out like the context's table.
    pub coefficients: Vec<Vec<f64>>,
    /// Maximum over deterministic global assignments.
    pub lhv_bound: f64,
    /// Value on the data the certificate was built for.
    pub value_on_input: f64,
}

impl BellFunctional {
    /// `value_on_input − lhv_bound`.
    pub fn gap(&self) -> f64 {
        self.value_on_input - self.lhv_bound
    }

    /// Evaluates the functional on context tables.
    pub fn evaluate(&self, tables: &[Vec<f64>]) -> f64 {
        self.coefficients
            .iter()
            .zip(tables)
            .flat_map(|(c, t)| c.iter().zip(t).map(|(a, b)| a * b))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AoeVerdict {
    /// A global distribution over all variables reproducing every context.
    Feasible { q: ProbTable<f64> },
    /// No global distribution exists; the functional separates the data
    /// from every deterministic assignment.
    Infeasible { certificate: BellFunctional },
}

impl AoeVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, AoeVerdict::Feasible { .. })
    }

    pub fn q(&self) -> Option<&ProbTable<f64>> {
        match self {
            AoeVerdict::Feasible { q } => Some(q),
            AoeVerdict::Infeasible { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&BellFunctional> {
        match self {
            AoeVerdict::Infeasible { certificate } => Some(certificate),
            AoeVerdict::Feasible { .. } => None,
        }
    }
}

pub fn marginal_problem_feasibility(prob: &MarginalProblem, tol: f64) -> Result<AoeVerdict, NonlocalityError> {
    marginal_problem_feasibility_capped(prob, tol, DEFAULT_MAX_ASSIGNMENTS)
}

/// Decides the marginal problem by LP over all global assignments.
///
/// A feasible answer carries the maximum-entropy global distribution when
/// iterative fitting reaches it within `tol`, the LP vertex otherwise. An
/// infeasible answer carries the functional dual to the ℓ₁ distance from the
/// data to the set of marginals, so its gap is that distance.
pub fn marginal_problem_feasibility_capped(
    prob: &MarginalProblem,
    tol: f64,
    max_assignments: usize,
) -> Result<AoeVerdict, NonlocalityError> {
    let cards = prob.cards();
    let n = checked_count(&cards, max_assignments)?;
    let rows: usize = prob.contexts.iter().map(|c| c.probs.len()).sum();
    let offsets: Vec<usize> = prob
        .contexts
        .iter()
        .scan(0, |acc, c| {
            let o = *acc;
            *acc += c.probs.len();
            Some(o)
        })
        .collect();

    // context rows, then one normalization row
    let mut a = vec![0.0; (rows + 1) * n];
    for s in 0..n {
        let values = digits(s, &cards);
        for (c, &off) in prob.contexts.iter().zip(&offsets) {
            a[(off + prob.local_index(c, &values)) * n + s] = 1.0;
        }
        a[rows * n + s] = 1.0;
    }
    let mut b: Vec<f64> = prob.contexts.iter().flat_map(|c| c.probs.iter().copied()).collect();
    b.push(1.0);
    let a = RealMatrix::new(rows + 1, n, a)?;

    match lp_feasibility(&LpFeasibilityProblem::new(a.clone(), b.clone(), tol))? {
        LpOutcome::Feasible { weights } => {
            let q = match max_entropy(prob, &cards, n, tol) {
                Some(q) => q,
                None => {
                    let total: f64 = weights.iter().sum();
                    weights.iter().map(|w| w / total).collect()
                }
            };
            Ok(AoeVerdict::Feasible {
                q: ProbTable::new(cards, q).expect("sizes agree"),
            })
        }
        LpOutcome::Infeasible { .. } => {
            let certificate = l1_certificate(prob, &a, &b, rows, n, &cards, tol)?;
            Ok(AoeVerdict::Infeasible { certificate })
        }
    }
}

/// Iterative proportional fitting from the uniform distribution.
fn max_entropy(prob: &MarginalProblem, cards: &[usize], n: usize, tol: f64) -> Option<Vec<f64>> {
    const SWEEPS: usize = 500;
    if n > 1 << 16 {
        return None;
    }
    let cells: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            let values = digits(s, cards);
            prob.contexts.iter().map(|c| prob.local_index(c, &values)).collect()
        })
        .collect();
    let mut q = vec![1.0 / n as f64; n];
    for _ in 0..SWEEPS {
        for (k, c) in prob.contexts.iter().enumerate() {
            let mut m = vec![0.0; c.probs.len()];
            for (s, &w) in q.iter().enumerate() {
                m[cells[s][k]] += w;
            }
            for (s, w) in q.iter_mut().enumerate() {
                let cell = cells[s][k];
                *w = if m[cell] > 0.0 { *w * c.probs[cell] / m[cell] } else { 0.0 };
            }
        }
        if prob.deviation(&q) <= 0.1 * tol {
            let total: f64 = q.iter().sum();
            return Some(q.into_iter().map(|w| w / total).collect());
        }
    }
    None
}

fn l1_certificate(
    prob: &MarginalProblem,
    a: &RealMatrix,
    b: &[f64],
    rows: usize,
    n: usize,
    cards: &[usize],
    tol: f64,
) -> Result<BellFunctional, NonlocalityError> {
    // min Σ(e⁺ + e⁻)  s.t.  A x + e⁺ − e⁻ = p,  1ᵀx = 1
    let width = n + 2 * rows;
    let mut data = vec![0.0; (rows + 1) * width];
    for r in 0..=rows {
        data[r * width..r * width + n].copy_from_slice(a.row(r));
        if r < rows {
            data[r * width + n + r] = 1.0;
            data[r * width + n + rows + r] = -1.0;
        }
    }
    let mut objective = vec![0.0; n];
    objective.extend(std::iter::repeat_n(1.0, 2 * rows));
    let lp = LinearProgram::new(RealMatrix::new(rows + 1, width, data)?, b.to_vec(), objective, tol);
    let duals = match lp_minimize(&lp)? {
        LpSolution::Optimal { duals, .. } => duals,
        _ => {
            return Err(crate::linalg::LinalgError::Numerical(
                "distance program has no optimum".into(),
            )
            .into())
        }
    };
    let scale = duals[..rows].iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    if scale <= 0.0 {
        return Err(crate::linalg::LinalgError::Numerical("zero certificate".into()).into());
    }
    let mut coefficients = Vec::with_capacity(prob.contexts.len());
    let mut offset = 0;
    for c in &prob.contexts {
        let len = c.probs.len();
        coefficients.push(duals[offset..offset + len].iter().map(|y| y / scale).collect::<Vec<_>>());
        offset += len;
    }
    let tables: Vec<Vec<f64>> = prob.contexts.iter().map(|c| c.probs.clone()).collect();
    let mut cert = BellFunctional {
        coefficients,
        lhv_bound: 0.0,
        value_on_input: 0.0,
    };
    cert.value_on_input = cert.evaluate(&tables);
    cert.lhv_bound = deterministic_max(prob, &cert.coefficients, cards, n);
    if cert.gap() <= tol {
        return Err(crate::linalg::LinalgError::Numerical(format!(
            "certificate gap {} does not exceed the tolerance",
            cert.gap()
        ))
        .into());
    }
    Ok(cert)
}

/// `max_s Σ_c coeff[c][s|c]` over all global assignments.
fn deterministic_max(prob: &MarginalProblem, coefficients: &[Vec<f64>], cards: &[usize], n: usize) -> f64 {
    (0..n)
        .map(|s| {
            let values = digits(s, cards);
            prob.contexts
                .iter()
                .zip(coefficients)
                .map(|(c, k)| k[prob.local_index(c, &values)])
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Variables `Cᵢˣ` (party-major) and one context per setting tuple.
pub fn lhv_problem(p: &CondDist, tol: f64) -> Result<MarginalProblem, NonlocalityError> {
    let mut variables = Vec::new();
    let mut first = Vec::with_capacity(p.parties());
    for (i, (&m, &k)) in p.settings().iter().zip(p.outcomes()).enumerate() {
        first.push(variables.len());
        for x in 0..m {
            variables.push(Variable::new(format!("C{}^{}", i + 1, x + 1), k));
        }
    }
    let contexts = (0..p.num_contexts())
        .map(|ci| {
            let x = p.setting_tuple(ci);
            Context {
                vars: x.iter().zip(&first).map(|(&xi, &f)| f + xi).collect(),
                probs: p.context(&x).to_vec(),
            }
        })
        .collect();
    MarginalProblem::new(variables, contexts, tol)
}

pub fn lhv_feasibility(p: &CondDist, tol: f64) -> Result<AoeVerdict, NonlocalityError> {
    lhv_feasibility_capped(p, tol, DEFAULT_MAX_ASSIGNMENTS)
}

pub fn lhv_feasibility_capped(p: &CondDist, tol: f64, max_assignments: usize) -> Result<AoeVerdict, NonlocalityError> {
    marginal_problem_feasibility_capped(&lhv_problem(p, tol)?, tol, max_assignments)
}
