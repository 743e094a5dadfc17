//! Round-based coloring. Each round finds `N = ⌊χ*^{3/4}⌋` matchings whose
//! deletion brings the fractional chromatic index down to
//! `c* = χ* - N/(1+ε)`, gives each matching a fresh color and recurses.
//! Below the threshold `χ0` the rest is colored greedily with at most
//! `2Δ - 1` colors.
//!
//! A round is a local search over `N`-tuples of matchings. A vertex flaw
//! fires when `v` keeps more than `c* - εN/4` edges; an odd-set flaw fires
//! when a connected odd set `H` keeps more than `(|H|-1)/2 · c*` edges.
//! Vertex flaws take priority, vertices in id order.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fractional::{ceil, chi_star, find_violated_matching_constraint, ser_ratio, OddSetCertificate, Rational};
use crate::hardcore::{calibrate_with, CalibrationConfig, CalibrationResult, ChainConfig, ExactLimits, HardCoreModel, Sampler};
use crate::lll::{default_step_cap, run_local_search, LocalSearch, RunTrace};
use crate::multigraph::{Color, EdgeId, Matching, Multigraph, PartialColoring, Subgraph, VertexId};
use crate::oracle;
use crate::rng::stream;

#[derive(Clone, Debug)]
pub struct GsConfig {
    pub epsilon: Rational,
    /// Threshold below which the remaining graph is colored greedily.
    pub chi0: Option<Rational>,
    /// Resampling radius; `None` uses `8(K+1)²/δ + 2` with the empirical `K`.
    pub t: Option<usize>,
    pub sampler: ChainConfig,
    pub limits: ExactLimits,
    pub retries: usize,
    pub seed: u64,
    /// Cap on the odd-set size searched, on top of the `Δ/((ε/4)N)` bound.
    pub odd_set_cap: Option<usize>,
    /// Replaces `c*`; only useful to build infeasible rounds on purpose.
    pub c_star: Option<Rational>,
    pub step_cap: Option<usize>,
    pub calibration_iters: usize,
}

impl Default for GsConfig {
    fn default() -> Self {
        GsConfig {
            epsilon: Rational::new(1, 10),
            chi0: None,
            t: None,
            sampler: ChainConfig::default(),
            limits: ExactLimits::default(),
            retries: 3,
            seed: 0,
            odd_set_cap: None,
            c_star: None,
            step_cap: None,
            calibration_iters: 5000,
        }
    }
}

impl GsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon <= Rational::from_integer(0) || self.epsilon > Rational::new(1, 10) {
            return Err(Error::Argument("ε must be in (0, 0.1]".into()));
        }
        self.sampler.validate()
    }

    /// `max(64, ⌈(4/ε)^4⌉)` unless overridden.
    pub fn effective_chi0(&self) -> Rational {
        self.chi0.unwrap_or_else(|| {
            let r = Rational::from_integer(4) / self.epsilon;
            let p = r * r * r * r;
            Rational::from_integer(ceil(p).max(64))
        })
    }
}

/// `⌊c^{3/4}⌋`, computed exactly as the largest `N` with `N^4 ≤ c^3`.
pub fn matchings_per_round(chi: Rational) -> usize {
    let (p, q) = (*chi.numer() as i128, *chi.denom() as i128);
    let fits = |n: i128| n * n * n * n * q * q * q <= p * p * p;
    let mut n = (p as f64 / q as f64).powf(0.75).floor() as i128;
    while n > 0 && !fits(n) {
        n -= 1;
    }
    while fits(n + 1) {
        n += 1;
    }
    n as usize
}

/// `χ* - N/(1+ε)`
pub fn c_star(chi: Rational, n: usize, epsilon: Rational) -> Rational {
    chi - Rational::from_integer(n as i64) / (Rational::from_integer(1) + epsilon)
}

/// Largest odd integer `≤ Δ/((ε/4)N)`.
pub fn vertex_cap(max_degree: usize, epsilon: Rational, n: usize) -> usize {
    if n == 0 {
        return usize::MAX;
    }
    let bound = Rational::from_integer(4 * max_degree as i64) / (epsilon * Rational::from_integer(n as i64));
    let f = bound.floor().to_integer().max(0) as usize;
    if f % 2 == 1 {
        f
    } else {
        f.saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundParams {
    /// The `χ*` value the round works with: exact, or the certified upper
    /// bound when the odd-set search was capped.
    #[serde(serialize_with = "ser_ratio")]
    pub chi_star: Rational,
    pub chi_star_exact: bool,
    #[serde(rename = "N")]
    pub n_matchings: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub c_star: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub delta: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub epsilon: Rational,
    pub t: usize,
    pub k_hat: f64,
    pub vertex_cap: usize,
}

impl RoundParams {
    /// `c* - (ε/4)N`
    pub fn degree_threshold(&self) -> Rational {
        self.c_star - self.epsilon / Rational::from_integer(4) * Rational::from_integer(self.n_matchings as i64)
    }
}

#[derive(Clone, Debug)]
pub enum RoundPlan {
    Greedy,
    Round {
        params: RoundParams,
        calibration: CalibrationResult,
    },
}

pub fn plan_round(g: &Multigraph, cfg: &GsConfig) -> Result<RoundPlan> {
    cfg.validate()?;
    if g.edge_count() == 0 {
        return Ok(RoundPlan::Greedy);
    }
    let fi = chi_star(g, cfg.odd_set_cap)?;
    let chi = fi.upper_bound;
    if chi < cfg.effective_chi0() {
        return Ok(RoundPlan::Greedy);
    }
    let n = matchings_per_round(chi);
    let c = cfg.c_star.unwrap_or_else(|| c_star(chi, n, cfg.epsilon));
    let delta = cfg.epsilon / Rational::from_integer(4);
    let target = (Rational::from_integer(1) - delta) / chi;
    let calibration = calibrate_with(
        g,
        target,
        &CalibrationConfig {
            max_iters: cfg.calibration_iters,
            limits: cfg.limits,
            chain: cfg.sampler.clone(),
            chi_star: Some(chi),
            ..Default::default()
        },
    )?;
    let diameter = g.diameter().max(1);
    let t = match cfg.t {
        Some(t) => t.clamp(1, diameter),
        None => {
            let k = calibration.k_hat;
            let d = *delta.numer() as f64 / *delta.denom() as f64;
            let raw = 8.0 * (k + 1.0) * (k + 1.0) / d + 2.0;
            if raw >= diameter as f64 {
                diameter
            } else {
                raw.ceil() as usize
            }
        }
    };
    let mut cap = vertex_cap(g.max_degree(), cfg.epsilon, n);
    if let Some(c) = cfg.odd_set_cap {
        cap = cap.min(c);
    }
    Ok(RoundPlan::Round {
        params: RoundParams {
            chi_star: chi,
            chi_star_exact: fi.exact,
            n_matchings: n,
            c_star: c,
            delta,
            epsilon: cfg.epsilon,
            t,
            k_hat: calibration.k_hat,
            vertex_cap: cap,
        },
        calibration,
    })
}

/// An `N`-tuple of matchings of the round's graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GsState(pub Vec<Matching>);

impl GsState {
    fn removed(&self, g: &Multigraph) -> Vec<bool> {
        let mut r = vec![false; g.edge_count()];
        for m in &self.0 {
            for &e in m.edges() {
                r[e] = true;
            }
        }
        r
    }

    /// Degrees in `G` minus the union of the matchings.
    pub fn residual_degrees(&self, g: &Multigraph) -> Vec<usize> {
        let r = self.removed(g);
        (0..g.vertex_count())
            .map(|v| g.incident(v).iter().filter(|&&e| !r[e]).count())
            .collect()
    }

    pub fn residual_graph(&self, g: &Multigraph) -> Subgraph {
        let r = self.removed(g);
        g.edge_subgraph(|e| !r[e])
    }
}

/// `N` independent samples, color `i` drawing from the stream
/// `(seed, path.., i)`.
pub fn initial_state(
    g: &Multigraph,
    n: usize,
    activities: &[f64],
    cfg: &GsConfig,
    path: &[u64],
) -> Result<GsState> {
    if n == 0 {
        return Ok(GsState::default());
    }
    let model = HardCoreModel::new(g.clone(), activities.to_vec())?;
    let mut sampler = Sampler::new(&model, cfg.limits, &cfg.sampler);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut p = path.to_vec();
        p.push(i as u64);
        out.push(sampler.sample(&mut stream(cfg.seed, &p)));
    }
    Ok(GsState(out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GsFlaw {
    Vertex { vertex: VertexId },
    OddSet(OddSetCertificate),
}

impl GsFlaw {
    pub fn footprint(&self) -> Vec<VertexId> {
        match self {
            GsFlaw::Vertex { vertex } => vec![*vertex],
            GsFlaw::OddSet(c) => c.vertices.clone(),
        }
    }
}

pub fn detect_flaw(g: &Multigraph, state: &GsState, params: &RoundParams) -> Option<GsFlaw> {
    let threshold = params.degree_threshold();
    let degs = state.residual_degrees(g);
    if let Some(v) = degs
        .iter()
        .position(|&d| Rational::from_integer(d as i64) > threshold)
    {
        return Some(GsFlaw::Vertex { vertex: v });
    }
    let residual = state.residual_graph(g);
    find_violated_matching_constraint(&residual.graph, params.c_star, params.vertex_cap).map(GsFlaw::OddSet)
}

/// Edges of `m` that stay frozen (both endpoints at distance `≥ d`) and the
/// subgraph of `g` available for resampling: edges inside `S_{<d+1}(H)` that
/// avoid every frozen endpoint. `dist` holds distances from `H`.
pub fn compatible_subgraph(g: &Multigraph, m: &Matching, dist: &[Option<usize>], d: usize) -> (Vec<EdgeId>, Subgraph) {
    let far = |v: VertexId| dist[v].map_or(true, |x| x >= d);
    let near = |v: VertexId| dist[v].is_some_and(|x| x <= d);
    let kept: Vec<EdgeId> = m
        .edges()
        .iter()
        .copied()
        .filter(|&e| {
            let (a, b) = g.endpoints(e);
            far(a) && far(b)
        })
        .collect();
    let mut blocked = vec![false; g.vertex_count()];
    for &e in &kept {
        let (a, b) = g.endpoints(e);
        blocked[a] = true;
        blocked[b] = true;
    }
    let sub = g.edge_subgraph(|e| {
        let (a, b) = g.endpoints(e);
        near(a) && near(b) && !blocked[a] && !blocked[b]
    });
    (kept, sub)
}

/// Re-draws one matching of `g` around `H` (given through `dist`). Edges of
/// `m` with both endpoints at distance `≥ d` are kept; a fresh hard-core
/// matching of the compatible part of the `(d+1)`-ball is spliced in.
#[allow(clippy::too_many_arguments)]
pub fn resample_matching<R: Rng + ?Sized>(
    g: &Multigraph,
    activities: &[f64],
    m: &Matching,
    dist: &[Option<usize>],
    d: usize,
    limits: ExactLimits,
    chain: &ChainConfig,
    rng: &mut R,
) -> Result<Matching> {
    let (kept, sub) = compatible_subgraph(g, m, dist, d);
    let model = HardCoreModel::new(sub.graph.clone(), sub.to_parent.iter().map(|&p| activities[p]).collect())?;
    let fresh = Sampler::new(&model, limits, chain).sample(rng).lift(&sub);
    let mut edges = kept;
    edges.extend_from_slice(fresh.edges());
    let out = Matching::from_edges(edges);
    debug_assert!(out.is_matching_in(g));
    Ok(out)
}

/// Exact law of [`resample_matching`] by enumeration.
pub fn resample_matching_distribution(
    g: &Multigraph,
    activities: &[f64],
    m: &Matching,
    dist: &[Option<usize>],
    d: usize,
) -> Result<Vec<(Matching, f64)>> {
    let (kept, sub) = compatible_subgraph(g, m, dist, d);
    let model = HardCoreModel::new(sub.graph.clone(), sub.to_parent.iter().map(|&p| activities[p]).collect())?;
    let law = oracle::exact_distribution(&model)?;
    Ok(law
        .support
        .iter()
        .zip(law.probabilities)
        .map(|(x, p)| {
            let mut edges = kept.clone();
            edges.extend_from_slice(x.lift(&sub).edges());
            (Matching::from_edges(edges), p)
        })
        .collect())
}

/// Resamples every matching of the state around `H` with radius `d ≥ 1`.
/// Color `i` draws from the stream `(seed, path.., i)`.
#[allow(clippy::too_many_arguments)]
pub fn resample(
    g: &Multigraph,
    activities: &[f64],
    state: &GsState,
    h: &[VertexId],
    d: usize,
    cfg: &GsConfig,
    path: &[u64],
) -> Result<GsState> {
    if d == 0 {
        return Err(Error::Argument("resampling radius must be at least 1".into()));
    }
    let dist = g.distances_from(h);
    let mut out = Vec::with_capacity(state.0.len());
    for (i, m) in state.0.iter().enumerate() {
        let mut p = path.to_vec();
        p.push(i as u64);
        let mut rng = stream(cfg.seed, &p);
        out.push(resample_matching(g, activities, m, &dist, d, cfg.limits, &cfg.sampler, &mut rng)?);
    }
    Ok(GsState(out))
}

/// Exact law of [`resample`] as a product over colors.
pub fn resample_distribution(
    g: &Multigraph,
    activities: &[f64],
    state: &GsState,
    h: &[VertexId],
    d: usize,
) -> Result<Vec<(GsState, f64)>> {
    let dist = g.distances_from(h);
    let mut acc: Vec<(Vec<Matching>, f64)> = vec![(Vec::new(), 1.0)];
    for m in &state.0 {
        let law = resample_matching_distribution(g, activities, m, &dist, d)?;
        let mut next = Vec::with_capacity(acc.len() * law.len());
        for (prefix, p) in &acc {
            for (x, q) in &law {
                let mut s = prefix.clone();
                s.push(x.clone());
                next.push((s, p * q));
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().map(|(s, p)| (GsState(s), p)).collect())
}

struct RoundSearch<'a> {
    g: &'a Multigraph,
    params: &'a RoundParams,
    activities: &'a [f64],
    cfg: &'a GsConfig,
    path: Vec<u64>,
}

impl LocalSearch for RoundSearch<'_> {
    type State = GsState;
    type Flaw = GsFlaw;

    fn first_flaw(&mut self, state: &GsState) -> Option<GsFlaw> {
        detect_flaw(self.g, state, self.params)
    }

    fn address(&mut self, flaw: &GsFlaw, state: &mut GsState, step: usize) -> Result<()> {
        let mut p = self.path.clone();
        p.push(step as u64);
        *state = resample(self.g, self.activities, state, &flaw.footprint(), self.params.t, self.cfg, &p)?;
        Ok(())
    }

    fn describe(&self, flaw: &GsFlaw) -> (usize, &'static str, usize) {
        match flaw {
            GsFlaw::Vertex { vertex } => (*vertex, "vertex", 1),
            GsFlaw::OddSet(c) => (self.g.vertex_count() + c.vertices[0], "odd_set", c.vertices.len()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RoundOutcome {
    pub matchings: Vec<Matching>,
    pub remaining: Subgraph,
    pub trace: RunTrace,
    pub attempts: usize,
}

/// Largest vertex count for which a flawless round is re-checked against the
/// exact `χ*` of the remaining graph.
pub const EXACT_CHECK_VERTICES: usize = 10;

/// Runs the local search for one round, re-seeding up to `cfg.retries`
/// times when the step cap is reached.
pub fn run_round(
    g: &Multigraph,
    params: &RoundParams,
    activities: &[f64],
    cfg: &GsConfig,
    round: usize,
) -> Result<RoundOutcome> {
    let cap = cfg.step_cap.unwrap_or_else(|| default_step_cap(None));
    let mut last_trace = RunTrace::default();
    for attempt in 0..=cfg.retries {
        let path = vec![round as u64, attempt as u64];
        let mut state = initial_state(g, params.n_matchings, activities, cfg, &[round as u64, attempt as u64, u64::MAX])?;
        let mut search = RoundSearch {
            g,
            params,
            activities,
            cfg,
            path,
        };
        let trace = run_local_search(&mut search, &mut state, cap)?;
        if !trace.terminated_flawless {
            log::info!("round {round} attempt {attempt} hit the step cap of {cap}");
            last_trace = trace;
            continue;
        }
        if let Some(m) = state.0.iter().find(|m| !m.is_matching_in(g)) {
            return Err(Error::Invariant(format!("round produced a non-matching {m:?}")));
        }
        let remaining = state.residual_graph(g);
        if g.vertex_count() <= EXACT_CHECK_VERTICES && remaining.graph.edge_count() > 0 {
            let after = chi_star(&remaining.graph, None)?.value;
            if after > params.c_star {
                return Err(Error::Invariant(format!(
                    "flawless round left χ* = {after} above c* = {}",
                    params.c_star
                )));
            }
        }
        return Ok(RoundOutcome {
            matchings: state.0,
            remaining,
            trace,
            attempts: attempt + 1,
        });
    }
    Err(Error::RoundFailed {
        attempts: cfg.retries + 1,
        reason: format!(
            "step cap {cap} reached without a flawless state ({} vertex and {} odd-set flaws addressed in the last attempt)",
            last_trace.count_kind("vertex"),
            last_trace.count_kind("odd_set")
        ),
    })
}

/// Colors edges in id order with the smallest color free at both endpoints.
pub fn greedy_edge_coloring(g: &Multigraph) -> PartialColoring {
    let mut col = PartialColoring::uncolored(g.edge_count());
    let mut used: Vec<Vec<bool>> = vec![Vec::new(); g.vertex_count()];
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        let c = (0..)
            .find(|&c: &Color| !used[u].get(c).copied().unwrap_or(false) && !used[v].get(c).copied().unwrap_or(false))
            .unwrap();
        for w in [u, v] {
            if used[w].len() <= c {
                used[w].resize(c + 1, false);
            }
            used[w][c] = true;
        }
        col.set(e, c);
    }
    col
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundStats {
    #[serde(rename = "N")]
    pub n_matchings: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub c_star: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub chi_star: Rational,
    pub steps: usize,
    pub attempts: usize,
    pub flaws_by_kind: BTreeMap<String, usize>,
    pub t: usize,
    pub k_hat: f64,
    pub edges_removed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GsStats {
    pub rounds: Vec<RoundStats>,
    pub colors_used: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub chi_star: Rational,
    pub chi_star_exact: bool,
    pub ratio: f64,
    pub greedy_edges: usize,
}

#[derive(Clone, Debug)]
pub struct GsOutcome {
    pub coloring: PartialColoring,
    pub stats: GsStats,
}

/// Full pipeline: rounds while `χ* ≥ χ0`, then greedy.
pub fn color_multigraph(g: &Multigraph, cfg: &GsConfig) -> Result<GsOutcome> {
    cfg.validate()?;
    let mut coloring = PartialColoring::uncolored(g.edge_count());
    if g.edge_count() == 0 {
        return Ok(GsOutcome {
            coloring,
            stats: GsStats {
                rounds: vec![],
                colors_used: 0,
                chi_star: Rational::from_integer(0),
                chi_star_exact: true,
                ratio: 0.0,
                greedy_edges: 0,
            },
        });
    }
    let original = chi_star(g, cfg.odd_set_cap)?;
    let mut current = g.edge_subgraph(|_| true);
    let mut next_color: Color = 0;
    let mut rounds = Vec::new();
    loop {
        let (params, calibration) = match plan_round(&current.graph, cfg)? {
            RoundPlan::Greedy => break,
            RoundPlan::Round { params, calibration } => (params, calibration),
        };
        let out = run_round(&current.graph, &params, &calibration.activities, cfg, rounds.len())?;
        let mut removed = 0;
        for (i, m) in out.matchings.iter().enumerate() {
            for &e in m.edges() {
                let p = current.to_parent[e];
                if coloring.get(p).is_none() {
                    coloring.set(p, next_color + i);
                    removed += 1;
                }
            }
        }
        next_color += params.n_matchings;
        let mut flaws_by_kind = BTreeMap::new();
        for r in &out.trace.records {
            *flaws_by_kind.entry(r.kind.clone()).or_insert(0) += 1;
        }
        rounds.push(RoundStats {
            n_matchings: params.n_matchings,
            c_star: params.c_star,
            chi_star: params.chi_star,
            steps: out.trace.steps,
            attempts: out.attempts,
            flaws_by_kind,
            t: params.t,
            k_hat: params.k_hat,
            edges_removed: removed,
        });
        if removed == 0 {
            log::warn!("round {} removed no edges; finishing greedily", rounds.len() - 1);
            break;
        }
        current = Subgraph {
            to_parent: out.remaining.to_parent.iter().map(|&e| current.to_parent[e]).collect(),
            graph: out.remaining.graph,
        };
    }
    let greedy = greedy_edge_coloring(&current.graph);
    for e in 0..current.graph.edge_count() {
        coloring.set(current.to_parent[e], next_color + greedy.get(e).unwrap());
    }
    let colors_used = coloring.distinct_colors();
    let chi = original.value;
    Ok(GsOutcome {
        coloring,
        stats: GsStats {
            rounds,
            colors_used,
            chi_star: chi,
            chi_star_exact: original.exact,
            ratio: colors_used as f64 / (*chi.numer() as f64 / *chi.denom() as f64),
            greedy_edges: current.graph.edge_count(),
        },
    })
}
