//! Charges, causality and commutativity on explicitly enumerated systems.
//!
//! A system is a finite state space with a measure `μ` and, per flaw, the
//! member set `f_i` and the action distributions `ρ_i(σ, ·)` for `σ ∈ f_i`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};

pub const STATE_CAP: usize = 100_000;
const LOPSIDED_FLAW_CAP: usize = 12;
const REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitFlaw {
    pub members: Vec<bool>,
    /// Sparse rows of `ρ_i`; rows of non-members are empty.
    pub rho: Vec<Vec<(usize, f64)>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitSystem {
    pub mu: Vec<f64>,
    pub flaws: Vec<ExplicitFlaw>,
}

impl ExplicitSystem {
    /// Builds a system from labelled states. `action(i, σ)` gives the
    /// successor distribution of flaw `i` at `σ`; every successor must be one
    /// of `states`.
    pub fn build<S: Ord + Clone>(
        states: &[S],
        mu: Vec<f64>,
        detect: &[&dyn Fn(&S) -> bool],
        action: impl Fn(usize, &S) -> Result<Vec<(S, f64)>>,
    ) -> Result<Self> {
        if states.len() > STATE_CAP {
            return Err(Error::Capacity(format!(
                "{} states exceed the enumeration limit of {STATE_CAP}",
                states.len()
            )));
        }
        if mu.len() != states.len() {
            return Err(Error::Argument("measure length differs from state count".into()));
        }
        let index: BTreeMap<&S, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut flaws = Vec::with_capacity(detect.len());
        for (i, d) in detect.iter().enumerate() {
            let members: Vec<bool> = states.iter().map(|s| d(s)).collect();
            let mut rho = vec![Vec::new(); states.len()];
            for (k, s) in states.iter().enumerate() {
                if !members[k] {
                    continue;
                }
                let mut row: BTreeMap<usize, f64> = BTreeMap::new();
                for (t, p) in action(i, s)? {
                    let &ti = index
                        .get(&t)
                        .ok_or_else(|| Error::Invariant("action left the state space".into()))?;
                    *row.entry(ti).or_insert(0.0) += p;
                }
                rho[k] = row.into_iter().collect();
            }
            flaws.push(ExplicitFlaw { members, rho });
        }
        Ok(ExplicitSystem { mu, flaws })
    }

    pub fn state_count(&self) -> usize {
        self.mu.len()
    }

    /// `μ(f_i)`
    pub fn flaw_probability(&self, i: usize) -> f64 {
        self.flaws[i]
            .members
            .iter()
            .zip(&self.mu)
            .filter(|(m, _)| **m)
            .map(|(_, p)| p)
            .sum()
    }

    /// `γ_i = max_τ Σ_{σ∈f_i} μ(σ)/μ(τ) ρ_i(σ,τ)`
    pub fn charge(&self, i: usize) -> f64 {
        let f = &self.flaws[i];
        let mut incoming = vec![0.0; self.mu.len()];
        for (s, row) in f.rho.iter().enumerate() {
            if f.members[s] {
                for &(t, p) in row {
                    incoming[t] += self.mu[s] * p;
                }
            }
        }
        incoming
            .iter()
            .zip(&self.mu)
            .map(|(&inc, &m)| match (inc > 0.0, m > 0.0) {
                (false, _) => 0.0,
                (true, true) => inc / m,
                (true, false) => f64::INFINITY,
            })
            .fold(0.0, f64::max)
    }

    /// `d_i = max_τ ν_i(τ)/μ(τ)`, where `ν_i` is the law of the successor
    /// when `σ` is drawn from `μ` conditioned on `f_i`.
    pub fn distortion(&self, i: usize) -> f64 {
        let mass = self.flaw_probability(i);
        if mass == 0.0 {
            return 1.0;
        }
        let f = &self.flaws[i];
        let mut nu = vec![0.0; self.mu.len()];
        for (s, row) in f.rho.iter().enumerate() {
            if f.members[s] {
                let w = self.mu[s] / mass;
                for &(t, p) in row {
                    nu[t] += w * p;
                }
            }
        }
        nu.iter()
            .zip(&self.mu)
            .filter(|(&n, _)| n > 0.0)
            .map(|(&n, &m)| if m > 0.0 { n / m } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }
}

/// Symmetric flaw adjacency.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CausalityGraph {
    pub neighbors: Vec<BTreeSet<usize>>,
}

impl CausalityGraph {
    pub fn new(flaws: usize) -> Self {
        CausalityGraph {
            neighbors: vec![BTreeSet::new(); flaws],
        }
    }

    pub fn add(&mut self, i: usize, j: usize) {
        if i != j {
            self.neighbors[i].insert(j);
            self.neighbors[j].insert(i);
        }
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].contains(&j)
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.neighbors
            .iter()
            .enumerate()
            .all(|(i, s)| s.iter().all(|&j| self.neighbors[j].contains(&i)))
    }

    /// `i ~ j` when addressing `f_i` can move some `σ ∉ f_j` into `f_j`,
    /// or the other way round.
    pub fn from_explicit(sys: &ExplicitSystem) -> Self {
        let k = sys.flaws.len();
        let mut g = CausalityGraph::new(k);
        for i in 0..k {
            let fi = &sys.flaws[i];
            for (s, row) in fi.rho.iter().enumerate() {
                if !fi.members[s] {
                    continue;
                }
                for &(t, p) in row {
                    if p <= 0.0 {
                        continue;
                    }
                    for j in 0..k {
                        if j != i && sys.flaws[j].members[t] && !sys.flaws[j].members[s] {
                            g.add(i, j);
                        }
                    }
                }
            }
        }
        g
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChargeReport {
    pub gamma: Vec<f64>,
    pub distortion: Vec<f64>,
    pub flaw_probability: Vec<f64>,
    pub x: Vec<f64>,
    pub epsilon: f64,
    /// `log2 max_σ θ(σ)/μ(σ)` for the initial distribution `θ`.
    pub theta_log2_ratio: f64,
    pub t0: f64,
    /// Largest `|γ_i - d_i μ(f_i)|` relative to `max(1, γ_i)`.
    pub identity_error: f64,
}

impl ChargeReport {
    /// `T0 = log2 max θ/μ + Σ_j log2 1/(1-x_j)`
    pub fn compute_t0(theta_log2_ratio: f64, x: &[f64]) -> f64 {
        theta_log2_ratio + x.iter().map(|&xj| -(1.0 - xj).log2()).sum::<f64>()
    }

    pub fn from_parts(gamma: Vec<f64>, x: Vec<f64>, epsilon: f64, theta_log2_ratio: f64) -> Self {
        let t0 = Self::compute_t0(theta_log2_ratio, &x);
        let k = gamma.len();
        ChargeReport {
            distortion: vec![f64::NAN; k],
            flaw_probability: vec![f64::NAN; k],
            gamma,
            x,
            epsilon,
            theta_log2_ratio,
            t0,
            identity_error: 0.0,
        }
    }

    pub fn identity_holds(&self) -> bool {
        self.identity_error <= REL_TOL
    }
}

/// Exact charges with the uniform choice `x_i = 1/(1 + max_j |Γ(j)|)`.
/// `theta` defaults to `μ`.
pub fn estimate_charges_exact(
    sys: &ExplicitSystem,
    graph: &CausalityGraph,
    epsilon: f64,
    theta: Option<&[f64]>,
) -> Result<ChargeReport> {
    if sys.state_count() > STATE_CAP {
        return Err(Error::Capacity(format!("more than {STATE_CAP} states")));
    }
    let k = sys.flaws.len();
    let gamma: Vec<f64> = (0..k).map(|i| sys.charge(i)).collect();
    let distortion: Vec<f64> = (0..k).map(|i| sys.distortion(i)).collect();
    let flaw_probability: Vec<f64> = (0..k).map(|i| sys.flaw_probability(i)).collect();
    let identity_error = (0..k)
        .map(|i| (gamma[i] - distortion[i] * flaw_probability[i]).abs() / gamma[i].max(1.0))
        .fold(0.0, f64::max);
    let xi = 1.0 / (1.0 + graph.max_degree() as f64);
    let x = vec![xi; k];
    let theta_log2_ratio = match theta {
        None => 0.0,
        Some(th) => th
            .iter()
            .zip(&sys.mu)
            .filter(|(&t, _)| t > 0.0)
            .map(|(&t, &m)| if m > 0.0 { (t / m).log2() } else { f64::INFINITY })
            .fold(f64::NEG_INFINITY, f64::max),
    };
    Ok(ChargeReport {
        t0: ChargeReport::compute_t0(theta_log2_ratio, &x),
        gamma,
        distortion,
        flaw_probability,
        x,
        epsilon,
        theta_log2_ratio,
        identity_error,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricCheck {
    pub holds: bool,
    pub margin: f64,
    pub max_neighbors: usize,
    pub zeta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LllCheck {
    pub holds: bool,
    /// `min_i RHS_i / γ_i`; infinite when every charge is zero.
    pub margin: f64,
    pub symmetric: SymmetricCheck,
}

/// Checks `γ_i ≤ (1-ε) x_i ∏_{j∈Γ(i)} (1-x_j)` for every flaw, and the
/// symmetric form `max γ · (1 + D) · e ≤ 1 - ζ/2` with `D = max |Γ|`.
pub fn check_lll_condition(report: &ChargeReport, graph: &CausalityGraph, zeta: f64) -> LllCheck {
    let mut holds = true;
    let mut margin = f64::INFINITY;
    for (i, &g) in report.gamma.iter().enumerate() {
        let rhs = (1.0 - report.epsilon)
            * report.x[i]
            * graph.neighbors[i].iter().map(|&j| 1.0 - report.x[j]).product::<f64>();
        if g > rhs * (1.0 + REL_TOL) {
            holds = false;
        }
        if g > 0.0 {
            margin = margin.min(rhs / g);
        }
    }
    let d = graph.max_degree();
    let gmax = report.gamma.iter().copied().fold(0.0, f64::max);
    let lhs = gmax * (1.0 + d as f64) * std::f64::consts::E;
    let bound = 1.0 - zeta / 2.0;
    LllCheck {
        holds,
        margin,
        symmetric: SymmetricCheck {
            holds: lhs <= bound * (1.0 + REL_TOL),
            margin: if lhs > 0.0 { bound / lhs } else { f64::INFINITY },
            max_neighbors: d,
            zeta,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutativityCheck {
    pub commute: bool,
    pub max_difference: f64,
}

fn operator_product(sys: &ExplicitSystem, a: usize, b: usize) -> Vec<Vec<f64>> {
    let n = sys.state_count();
    let (fa, fb) = (&sys.flaws[a], &sys.flaws[b]);
    let mut out = vec![vec![0.0; n]; n];
    for s in 0..n {
        if !fa.members[s] {
            continue;
        }
        for &(k, p) in &fa.rho[s] {
            if !fb.members[k] {
                continue;
            }
            for &(t, q) in &fb.rho[k] {
                out[s][t] += p * q;
            }
        }
    }
    out
}

/// Compares `A_i A_j` with `A_j A_i` entrywise, where `A_i[σ,τ] = ρ_i(σ,τ)`
/// on `σ ∈ f_i` and zero elsewhere.
pub fn check_commutativity(sys: &ExplicitSystem, i: usize, j: usize) -> Result<CommutativityCheck> {
    if i == j {
        return Err(Error::Argument("commutativity needs two distinct flaws".into()));
    }
    let ij = operator_product(sys, i, j);
    let ji = operator_product(sys, j, i);
    let max_difference = ij
        .iter()
        .flatten()
        .zip(ji.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(CommutativityCheck {
        commute: max_difference <= REL_TOL,
        max_difference,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LopsidependencyReport {
    pub holds: bool,
    pub checked: usize,
    /// `(i, S)` pairs whose conditioning event has probability zero.
    pub skipped: Vec<(usize, Vec<usize>)>,
    /// Largest `μ(f_i | ∩_S ¬f_j) / γ_i` seen.
    pub worst_ratio: f64,
}

/// Checks `μ(f_i | ∩_{j∈S} ¬f_j) ≤ γ_i` for every `S` avoiding `Γ(i) ∪ {i}`.
pub fn verify_lopsidependency(sys: &ExplicitSystem, graph: &CausalityGraph) -> Result<LopsidependencyReport> {
    let k = sys.flaws.len();
    if k > LOPSIDED_FLAW_CAP {
        return Err(Error::Capacity(format!(
            "lopsidependency check is limited to {LOPSIDED_FLAW_CAP} flaws, got {k}"
        )));
    }
    let mut report = LopsidependencyReport {
        holds: true,
        checked: 0,
        skipped: Vec::new(),
        worst_ratio: 0.0,
    };
    for i in 0..k {
        let gamma = sys.charge(i);
        let others: Vec<usize> = (0..k).filter(|&j| j != i && !graph.adjacent(i, j)).collect();
        for mask in 0u32..(1 << others.len()) {
            let set: Vec<usize> = (0..others.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| others[b])
                .collect();
            let mut cond = 0.0;
            let mut joint = 0.0;
            for s in 0..sys.state_count() {
                if set.iter().any(|&j| sys.flaws[j].members[s]) {
                    continue;
                }
                cond += sys.mu[s];
                if sys.flaws[i].members[s] {
                    joint += sys.mu[s];
                }
            }
            if cond <= 0.0 {
                report.skipped.push((i, set));
                continue;
            }
            report.checked += 1;
            let p = joint / cond;
            if p > gamma * (1.0 + REL_TOL) + 1e-15 {
                report.holds = false;
            }
            if gamma > 0.0 {
                report.worst_ratio = report.worst_ratio.max(p / gamma);
            } else if p > 0.0 {
                report.worst_ratio = f64::INFINITY;
            }
        }
    }
    Ok(report)
}
