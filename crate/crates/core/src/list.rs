//! Iterated partial list coloring.
//!
//! Every color `i` owns the subgraph `G_i` of uncolored edges whose list
//! contains `i` and a fixed activity vector `λ_i` calibrated once so that
//! each edge has marginal `1/C`. An iteration draws, per color, a hard-core
//! matching `M_i`, activation bits (probability `α`) and equalizer bits.
//! Activated matching edges are colored. `G_i` then loses the vertices of
//! `F_i`, every edge outside `M_i` colored by another color, and every edge
//! whose equalizer coin came up. Flaws are repaired by a local search; when
//! the degree has dropped enough the rest is colored greedily.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fractional::{chi_star, Rational};
use crate::gs::resample_matching;
use crate::hardcore::{
    calibrate_with, estimate_marginals, CalibrationConfig, ChainConfig, ExactLimits, ExactTable, HardCoreModel,
    Sampler,
};
use crate::lll::{run_local_search, LocalSearch};
use crate::multigraph::{Color, EdgeId, ListAssignment, Matching, Multigraph, PartialColoring, Subgraph, VertexId};
use crate::rng::stream;

#[derive(Clone, Debug)]
pub struct ListConfig {
    pub epsilon: Rational,
    /// Color budget `C`; defaults to the smallest list size.
    pub budget: Option<usize>,
    /// Activation probability; defaults to `1/ln Δ`, at most 1.
    pub alpha: Option<f64>,
    /// Radius of the ball used for the edge-flaw marginals (default 2).
    pub t_prime: Option<usize>,
    /// Resampling radius (default `t'²`).
    pub t: Option<usize>,
    pub edge_threshold: Option<f64>,
    pub vertex_threshold: Option<f64>,
    /// Allowed `|Σ_i Pr(e ∈ M_i) - 1|` after calibration before a warning.
    pub ledger_tol: f64,
    pub sampler: ChainConfig,
    pub limits: ExactLimits,
    /// Chain reads for marginals that do not fit the exact solver.
    pub samples: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub step_cap: usize,
    pub retries: usize,
    pub odd_set_cap: Option<usize>,
    pub calibration_iters: usize,
    /// Check after every repair that nothing outside the ball changed.
    pub audit_locality: bool,
    /// Extra independent initial samples per iteration used to estimate the
    /// standard error of the colored fraction; 0 disables the estimate.
    pub stderr_samples: usize,
}

impl Default for ListConfig {
    fn default() -> Self {
        ListConfig {
            epsilon: Rational::new(1, 10),
            budget: None,
            alpha: None,
            t_prime: None,
            t: None,
            edge_threshold: None,
            vertex_threshold: None,
            ledger_tol: 1e-2,
            sampler: ChainConfig::default(),
            limits: ExactLimits::default(),
            samples: 2000,
            seed: 0,
            max_iterations: 32,
            step_cap: 10_000,
            retries: 3,
            odd_set_cap: None,
            calibration_iters: 5000,
            audit_locality: false,
            stderr_samples: 0,
        }
    }
}

impl ListConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon <= Rational::from_integer(0) {
            return Err(Error::Argument("ε must be positive".into()));
        }
        if let Some(a) = self.alpha {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::Argument("α must be in [0, 1]".into()));
            }
        }
        for (name, v) in [("edge threshold", self.edge_threshold), ("vertex threshold", self.vertex_threshold)] {
            if let Some(x) = v {
                if !(x >= 0.0) {
                    return Err(Error::Argument(format!("{name} must be non-negative")));
                }
            }
        }
        if self.t_prime == Some(0) || self.t == Some(0) {
            return Err(Error::Argument("radii must be at least 1".into()));
        }
        if !(self.ledger_tol >= 0.0) {
            return Err(Error::Argument("ledger tolerance must be non-negative".into()));
        }
        self.sampler.validate()
    }
}

/// Parameters resolved against the input graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ListParams {
    pub alpha: f64,
    pub t_prime: usize,
    pub t: usize,
    pub edge_threshold: f64,
    pub vertex_threshold: f64,
}

impl ListParams {
    pub fn resolve(g: &Multigraph, cfg: &ListConfig) -> ListParams {
        let delta = g.max_degree() as f64;
        let ln = delta.ln();
        let alpha = cfg.alpha.unwrap_or(if ln > 1.0 { 1.0 / ln } else { 1.0 });
        let inv4 = 1.0 / ln.powi(4);
        let diameter = g.diameter().max(1);
        let t_prime = cfg.t_prime.unwrap_or(2);
        let t = cfg.t.unwrap_or(t_prime * t_prime);
        ListParams {
            alpha,
            t_prime: t_prime.min(diameter),
            t: t.min(diameter),
            edge_threshold: cfg.edge_threshold.unwrap_or(f64::max(0.05, 2.0 / 3.0 * inv4)),
            vertex_threshold: cfg.vertex_threshold.unwrap_or(alpha - f64::min(alpha / 2.0, inv4)),
        }
    }
}

/// Per-color subgraphs of the uncolored edges.
#[derive(Clone, Debug)]
pub struct ColorSubgraphs {
    /// Ascending; color index `i` refers to `colors[i]`.
    pub colors: Vec<Color>,
    pub graphs: Vec<Subgraph>,
    /// Parent edge to local edge, per color.
    pub local: Vec<Vec<Option<EdgeId>>>,
    /// Parent edge to the color indices whose subgraph contains it.
    pub edge_colors: Vec<Vec<usize>>,
}

impl ColorSubgraphs {
    pub fn color_index(&self, c: Color) -> Option<usize> {
        self.colors.binary_search(&c).ok()
    }
}

/// `G_i` for every color appearing on an uncolored edge.
pub fn build_color_subgraphs(g: &Multigraph, lists: &ListAssignment, colored: &[bool]) -> Result<ColorSubgraphs> {
    let m = g.edge_count();
    if lists.len() != m || colored.len() != m {
        return Err(Error::Argument(format!("{} lists for {m} edges", lists.len())));
    }
    let mut palette = BTreeSet::new();
    for e in (0..m).filter(|&e| !colored[e]) {
        if lists.list(e).is_empty() {
            return Err(Error::EmptyList { edge: e });
        }
        palette.extend(lists.list(e).iter().copied());
    }
    let colors: Vec<Color> = palette.into_iter().collect();
    let graphs: Vec<Subgraph> = colors
        .iter()
        .map(|&c| g.edge_subgraph(|e| !colored[e] && lists.allows(e, c)))
        .collect();
    let local = graphs.iter().map(|s| s.from_parent(m)).collect();
    let mut edge_colors = vec![Vec::new(); m];
    for (i, s) in graphs.iter().enumerate() {
        for &p in &s.to_parent {
            edge_colors[p].push(i);
        }
    }
    Ok(ColorSubgraphs {
        colors,
        graphs,
        local,
        edge_colors,
    })
}

/// Activities per color, indexed by parent edge id.
pub type Activities = BTreeMap<Color, Vec<f64>>;

/// Calibrates every `G_i` to the uniform marginal `1/C`. Colors sharing the
/// same subgraph share one calibration.
pub fn calibrate_colors(g: &Multigraph, subs: &ColorSubgraphs, budget: usize, cfg: &ListConfig) -> Result<Activities> {
    let mut cache: HashMap<&[EdgeId], Vec<f64>> = HashMap::new();
    let mut out = Activities::new();
    let ccfg = CalibrationConfig {
        max_iters: cfg.calibration_iters,
        limits: cfg.limits,
        chain: cfg.sampler.clone(),
        samples: cfg.samples,
        odd_set_cap: cfg.odd_set_cap,
        ..Default::default()
    };
    let target = Rational::new(1, budget as i64);
    for (i, s) in subs.graphs.iter().enumerate() {
        let lam = match cache.get(s.to_parent.as_slice()) {
            Some(l) => l.clone(),
            None => {
                let l = calibrate_with(&s.graph, target, &ccfg)?.activities;
                cache.insert(&s.to_parent, l.clone());
                l
            }
        };
        let mut full = vec![0.0; g.edge_count()];
        for (le, &p) in s.to_parent.iter().enumerate() {
            full[p] = lam[le];
        }
        out.insert(subs.colors[i], full);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalLedger {
    /// `Pr(e ∈ M_i)` per color, by local edge id.
    pub per_color: Vec<Vec<f64>>,
    /// `Σ_i Pr(e ∈ M_i)` by parent edge id; 0 on colored edges.
    pub per_edge: Vec<f64>,
    pub exact: bool,
}

fn local_activities(subs: &ColorSubgraphs, acts: &Activities) -> Vec<Vec<f64>> {
    subs.graphs
        .iter()
        .zip(&subs.colors)
        .map(|(s, c)| s.to_parent.iter().map(|&p| acts[c][p]).collect())
        .collect()
}

/// Groups colors with identical subgraph and activities.
fn group_colors(subs: &ColorSubgraphs, lam: &[Vec<f64>]) -> Vec<usize> {
    let mut ids: HashMap<(Vec<EdgeId>, Vec<u64>), usize> = HashMap::new();
    (0..subs.colors.len())
        .map(|i| {
            let key = (subs.graphs[i].to_parent.clone(), lam[i].iter().map(|x| x.to_bits()).collect());
            let next = ids.len();
            *ids.entry(key).or_insert(next)
        })
        .collect()
}

fn marginals_of(model: &HardCoreModel, cfg: &ListConfig, path: &[u64]) -> (Vec<f64>, bool) {
    if let Ok(mut t) = ExactTable::new(model, cfg.limits) {
        if let Ok(p) = t.marginals(model.host().edge_count()) {
            return (p, true);
        }
    }
    let mut rng = stream(cfg.seed, path);
    (estimate_marginals(model, &cfg.sampler, cfg.samples, &mut rng).mean, false)
}

pub fn compute_ledger(g: &Multigraph, subs: &ColorSubgraphs, acts: &Activities, cfg: &ListConfig) -> Result<MarginalLedger> {
    let lam = local_activities(subs, acts);
    let groups = group_colors(subs, &lam);
    let mut cache: HashMap<usize, (Vec<f64>, bool)> = HashMap::new();
    let mut per_color = Vec::with_capacity(subs.colors.len());
    let mut exact = true;
    for (i, s) in subs.graphs.iter().enumerate() {
        if !cache.contains_key(&groups[i]) {
            let model = HardCoreModel::new(s.graph.clone(), lam[i].clone())?;
            cache.insert(groups[i], marginals_of(&model, cfg, &[0x1ED, groups[i] as u64]));
        }
        let (p, ex) = &cache[&groups[i]];
        exact &= *ex;
        per_color.push(p.clone());
    }
    let mut per_edge = vec![0.0; g.edge_count()];
    for (i, s) in subs.graphs.iter().enumerate() {
        for (le, &p) in s.to_parent.iter().enumerate() {
            per_edge[p] += per_color[i][le];
        }
    }
    Ok(MarginalLedger {
        per_color,
        per_edge,
        exact,
    })
}

/// Probability that `e` is colored and leaves `G_i` in the activation
/// step: `αp_i + (1 - p_i)(1 - Π_{j≠i}(1 - αp_j))`.
pub fn removal_probability(p_i: f64, others: &[f64], alpha: f64) -> f64 {
    let none: f64 = others.iter().map(|p| 1.0 - alpha * p).product();
    alpha * p_i + (1.0 - p_i) * (1.0 - none)
}

/// `(α - q)/(1 - q)`: the equalizer success probability that brings the
/// total removal probability to exactly `α`.
pub fn equalizer_probability(q: f64, alpha: f64) -> f64 {
    if q > alpha {
        log::warn!("activation-step removal probability {q} exceeds α = {alpha}; equalizer disabled");
        return 0.0;
    }
    if q >= 1.0 {
        return 0.0;
    }
    ((alpha - q) / (1.0 - q)).clamp(0.0, 1.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ColorState {
    /// Local edge ids of `G_i`.
    pub matching: Matching,
    pub active: Vec<bool>,
    pub equalize: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IterationState {
    pub colors: Vec<ColorState>,
}

/// What an iteration state does to the graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Smallest color index whose activated matching holds the edge.
    pub color_of: Vec<Option<usize>>,
    /// Per color, by local edge: whether the edge survives in `G_i'`.
    pub keeps: Vec<Vec<bool>>,
    /// Number of (color, edge) slots colored-and-removed or equalized.
    pub removed: usize,
    pub slots: usize,
}

impl Outcome {
    pub fn removed_fraction(&self) -> f64 {
        if self.slots == 0 {
            0.0
        } else {
            self.removed as f64 / self.slots as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ListFlaw {
    Vertex { vertex: VertexId },
    Edge { edge: EdgeId },
}

/// Everything fixed for one iteration: the subgraphs, activities, ledger,
/// equalizer probabilities and edge-flaw baselines.
pub struct Iteration<'g> {
    g: &'g Multigraph,
    pub params: ListParams,
    pub subs: ColorSubgraphs,
    lam: Vec<Vec<f64>>,
    groups: Vec<usize>,
    pub ledger: MarginalLedger,
    /// Per color, by local edge.
    pub equalizer: Vec<Vec<f64>>,
    /// Per parent edge: `Σ_i` marginal of `e` in `G_i` restricted to its ball.
    pub baseline: Vec<f64>,
    uncolored: Subgraph,
    degree: Vec<usize>,
    max_degree: usize,
    balls: HashMap<(VertexId, VertexId), (Vec<VertexId>, Vec<bool>)>,
    ball_cache: HashMap<(usize, Vec<EdgeId>), (Vec<f64>, bool)>,
    samplers: HashMap<usize, Sampler>,
    cfg: ListConfig,
    estimated: bool,
}

impl<'g> Iteration<'g> {
    pub fn new(
        g: &'g Multigraph,
        subs: ColorSubgraphs,
        acts: &Activities,
        params: ListParams,
        colored: &[bool],
        cfg: &ListConfig,
    ) -> Result<Self> {
        let ledger = compute_ledger(g, &subs, acts, cfg)?;
        let lam = local_activities(&subs, acts);
        let groups = group_colors(&subs, &lam);
        let mut equalizer = Vec::with_capacity(subs.colors.len());
        for (i, s) in subs.graphs.iter().enumerate() {
            let eq = s
                .to_parent
                .iter()
                .enumerate()
                .map(|(le, &p)| {
                    let others: Vec<f64> = subs.edge_colors[p]
                        .iter()
                        .filter(|&&j| j != i)
                        .map(|&j| ledger.per_color[j][subs.local[j][p].unwrap()])
                        .collect();
                    let q = removal_probability(ledger.per_color[i][le], &others, params.alpha);
                    equalizer_probability(q, params.alpha)
                })
                .collect();
            equalizer.push(eq);
        }
        let uncolored = g.edge_subgraph(|e| !colored[e]);
        let degree: Vec<usize> = (0..g.vertex_count()).map(|v| uncolored.graph.degree(v)).collect();
        let max_degree = degree.iter().copied().max().unwrap_or(0);
        let mut it = Iteration {
            g,
            params,
            subs,
            lam,
            groups,
            ledger,
            equalizer,
            baseline: vec![0.0; g.edge_count()],
            uncolored,
            degree,
            max_degree,
            balls: HashMap::new(),
            ball_cache: HashMap::new(),
            samplers: HashMap::new(),
            cfg: cfg.clone(),
            estimated: false,
        };
        for &e in &it.uncolored.to_parent.clone() {
            let mut s = 0.0;
            for i in it.subs.edge_colors[e].clone() {
                s += it.ball_marginal(i, e, None);
            }
            it.baseline[e] = s;
        }
        Ok(it)
    }

    pub fn graph(&self) -> &Multigraph {
        self.g
    }

    pub fn max_uncolored_degree(&self) -> usize {
        self.max_degree
    }

    fn ball(&mut self, e: EdgeId) -> (Vec<VertexId>, Vec<bool>) {
        let (u, v) = self.g.endpoints(e);
        let key = (u.min(v), u.max(v));
        if let Some(b) = self.balls.get(&key) {
            return b.clone();
        }
        let verts = self.uncolored.graph.ball(&[u, v], self.params.t_prime);
        let mut mask = vec![false; self.g.vertex_count()];
        for &x in &verts {
            mask[x] = true;
        }
        self.balls.insert(key, (verts.clone(), mask.clone()));
        (verts, mask)
    }

    /// Marginal of parent edge `e` in color `i`'s hard-core model on
    /// `G_i' ∩ S_{<t'}(e)`, where `keeps` selects `G_i'` (all of `G_i` if
    /// `None`).
    fn ball_marginal(&mut self, i: usize, e: EdgeId, keeps: Option<&[bool]>) -> f64 {
        let (verts, mask) = self.ball(e);
        let sg = &self.subs.graphs[i].graph;
        let mut edges = Vec::new();
        for &v in &verts {
            for &le in sg.incident(v) {
                let w = sg.other_endpoint(le, v);
                if v < w && mask[w] && keeps.is_none_or(|k| k[le]) {
                    edges.push(le);
                }
            }
        }
        edges.sort_unstable();
        let target = self.subs.local[i][e].expect("edge belongs to the color");
        let key = (self.groups[i], edges);
        if !self.ball_cache.contains_key(&key) {
            let mut h = Multigraph::new(self.g.vertex_count());
            for &le in &key.1 {
                let (a, b) = sg.endpoints(le);
                h.add_edge(a, b).expect("endpoints are valid");
            }
            let lam = key.1.iter().map(|&le| self.lam[i][le]).collect();
            let model = HardCoreModel::new(h, lam).expect("calibrated activities are positive");
            let digest = key.1.iter().fold(0xcbf2_9ce4_8422_2325u64, |acc, &x| {
                (acc ^ x as u64).wrapping_mul(0x100_0000_01b3)
            });
            let r = marginals_of(&model, &self.cfg, &[0xBA11, key.0 as u64, digest]);
            self.ball_cache.insert(key.clone(), r);
        }
        let (p, exact) = &self.ball_cache[&key];
        if !exact {
            self.estimated = true;
        }
        match key.1.binary_search(&target) {
            Ok(pos) => p[pos],
            Err(_) => 0.0,
        }
    }

    fn sampler(&mut self, i: usize) -> Result<&mut Sampler> {
        let g = self.groups[i];
        if !self.samplers.contains_key(&g) {
            let model = HardCoreModel::new(self.subs.graphs[i].graph.clone(), self.lam[i].clone())?;
            self.samplers.insert(g, Sampler::new(&model, self.cfg.limits, &self.cfg.sampler));
        }
        Ok(self.samplers.get_mut(&g).unwrap())
    }

    /// A fresh state; color `i` uses the stream `(seed, path.., i)`.
    pub fn sample(&mut self, path: &[u64]) -> Result<IterationState> {
        let mut colors = Vec::with_capacity(self.subs.colors.len());
        for i in 0..self.subs.colors.len() {
            let mut p = path.to_vec();
            p.push(i as u64);
            let mut rng = stream(self.cfg.seed, &p);
            let matching = self.sampler(i)?.sample(&mut rng);
            let m = self.subs.graphs[i].graph.edge_count();
            let alpha = self.params.alpha;
            let mut active = Vec::with_capacity(m);
            let mut equalize = Vec::with_capacity(m);
            for le in 0..m {
                active.push(rng.gen_bool(alpha));
                equalize.push(rng.gen_bool(self.equalizer[i][le]));
            }
            colors.push(ColorState {
                matching,
                active,
                equalize,
            });
        }
        Ok(IterationState { colors })
    }

    pub fn outcome(&self, state: &IterationState) -> Outcome {
        let n = self.g.vertex_count();
        let m = self.g.edge_count();
        let k = self.subs.colors.len();
        let mut color_of: Vec<Option<usize>> = vec![None; m];
        let mut in_f: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut covered = vec![vec![false; n]; k];
        for (i, cs) in state.colors.iter().enumerate() {
            let sg = &self.subs.graphs[i];
            for &le in cs.matching.edges() {
                if cs.active[le] {
                    let p = sg.to_parent[le];
                    in_f[p].push(i);
                    if color_of[p].is_none() {
                        color_of[p] = Some(i);
                    }
                    let (a, b) = sg.graph.endpoints(le);
                    covered[i][a] = true;
                    covered[i][b] = true;
                }
            }
        }
        let mut keeps = Vec::with_capacity(k);
        let mut removed = 0;
        let mut slots = 0;
        for (i, cs) in state.colors.iter().enumerate() {
            let sg = &self.subs.graphs[i];
            let mut keep = Vec::with_capacity(sg.graph.edge_count());
            for le in 0..sg.graph.edge_count() {
                let p = sg.to_parent[le];
                let (a, b) = sg.graph.endpoints(le);
                let in_m = cs.matching.contains(le);
                let other = in_f[p].iter().any(|&j| j != i);
                let step2 = covered[i][a] || covered[i][b] || (!in_m && other);
                if (step2 && color_of[p].is_some()) || cs.equalize[le] {
                    removed += 1;
                }
                slots += 1;
                keep.push(!step2 && !cs.equalize[le]);
            }
            keeps.push(keep);
        }
        Outcome {
            color_of,
            keeps,
            removed,
            slots,
        }
    }

    fn budget(&self) -> f64 {
        if self.estimated {
            self.params.edge_threshold / 10.0
        } else {
            0.0
        }
    }

    /// Vertex flaws in vertex order, then edge flaws in edge order. Only
    /// vertices of degree at least half the current maximum are checked.
    pub fn detect(&mut self, state: &IterationState) -> Option<ListFlaw> {
        let out = self.outcome(state);
        let floor = self.max_degree.div_ceil(2).max(1);
        for v in 0..self.g.vertex_count() {
            let d = self.degree[v];
            if d == 0 || d < floor {
                continue;
            }
            let hit = self
                .uncolored
                .graph
                .incident(v)
                .iter()
                .filter(|&&le| out.color_of[self.uncolored.to_parent[le]].is_some())
                .count();
            if (hit as f64) / (d as f64) < self.params.vertex_threshold {
                return Some(ListFlaw::Vertex { vertex: v });
            }
        }
        for e in self.uncolored.to_parent.clone() {
            if out.color_of[e].is_some() {
                continue;
            }
            let mut s = 0.0;
            for i in self.subs.edge_colors[e].clone() {
                let le = self.subs.local[i][e].unwrap();
                if out.keeps[i][le] {
                    s += self.ball_marginal(i, e, Some(&out.keeps[i]));
                }
            }
            if (s - self.baseline[e]).abs() > self.params.edge_threshold - self.budget() {
                return Some(ListFlaw::Edge { edge: e });
            }
        }
        None
    }

    pub fn footprint(&self, flaw: &ListFlaw) -> Vec<VertexId> {
        match *flaw {
            ListFlaw::Vertex { vertex } => vec![vertex],
            ListFlaw::Edge { edge } => {
                let (u, v) = self.g.endpoints(edge);
                vec![u, v]
            }
        }
    }

    /// Resamples every color's matching around `h` with radius `t` and
    /// re-flips the activation and equalizer bits of the edges of
    /// `G_i ∩ S_{<t+1}(h)`. Color `i` uses the stream `(seed, path.., i)`.
    pub fn fix(&self, h: &[VertexId], state: &IterationState, path: &[u64]) -> Result<IterationState> {
        let t = self.params.t.max(1);
        let dist = self.uncolored.graph.distances_from(h);
        let inside = |v: VertexId| dist[v].is_some_and(|d| d <= t);
        let mut colors = Vec::with_capacity(state.colors.len());
        for (i, cs) in state.colors.iter().enumerate() {
            let mut p = path.to_vec();
            p.push(i as u64);
            let mut rng = stream(self.cfg.seed, &p);
            let sg = &self.subs.graphs[i].graph;
            let matching = resample_matching(
                sg,
                &self.lam[i],
                &cs.matching,
                &dist,
                t,
                self.cfg.limits,
                &self.cfg.sampler,
                &mut rng,
            )?;
            let mut next = ColorState {
                matching,
                active: cs.active.clone(),
                equalize: cs.equalize.clone(),
            };
            for le in 0..sg.edge_count() {
                let (a, b) = sg.endpoints(le);
                if inside(a) && inside(b) {
                    next.active[le] = rng.gen_bool(self.params.alpha);
                    next.equalize[le] = rng.gen_bool(self.equalizer[i][le]);
                }
            }
            colors.push(next);
        }
        Ok(IterationState { colors })
    }

    /// True when every edge of every `G_i` with an endpoint outside
    /// `S_{<t+1}(h)` has identical matching membership and bits.
    pub fn locality_holds(&self, h: &[VertexId], before: &IterationState, after: &IterationState) -> bool {
        let t = self.params.t.max(1);
        let dist = self.uncolored.graph.distances_from(h);
        let inside = |v: VertexId| dist[v].is_some_and(|d| d <= t);
        before.colors.iter().zip(&after.colors).enumerate().all(|(i, (x, y))| {
            let sg = &self.subs.graphs[i].graph;
            (0..sg.edge_count()).all(|le| {
                let (a, b) = sg.endpoints(le);
                (inside(a) && inside(b))
                    || (x.matching.contains(le) == y.matching.contains(le)
                        && x.active[le] == y.active[le]
                        && x.equalize[le] == y.equalize[le])
            })
        })
    }
}

struct ListSearch<'a, 'g> {
    it: &'a mut Iteration<'g>,
    path: Vec<u64>,
    audits: usize,
}

impl LocalSearch for ListSearch<'_, '_> {
    type State = IterationState;
    type Flaw = ListFlaw;

    fn first_flaw(&mut self, state: &IterationState) -> Option<ListFlaw> {
        self.it.detect(state)
    }

    fn address(&mut self, flaw: &ListFlaw, state: &mut IterationState, step: usize) -> Result<()> {
        let mut p = self.path.clone();
        p.push(step as u64);
        let h = self.it.footprint(flaw);
        let next = self.it.fix(&h, state, &p)?;
        if self.it.cfg.audit_locality {
            if !self.it.locality_holds(&h, state, &next) {
                return Err(Error::Invariant(format!("repair of {flaw:?} changed state outside its ball")));
            }
            self.audits += 1;
        }
        *state = next;
        Ok(())
    }

    fn describe(&self, flaw: &ListFlaw) -> (usize, &'static str, usize) {
        match *flaw {
            ListFlaw::Vertex { vertex } => (vertex, "vertex", 1),
            ListFlaw::Edge { edge } => (self.it.g.vertex_count() + edge, "edge", 2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationStats {
    /// Fraction of `(color, edge)` slots colored-and-removed or equalized.
    pub colored_fraction: f64,
    /// Number of `(color, edge)` slots behind `colored_fraction`.
    pub slots: usize,
    /// The same fraction for the initial sample, before any flaw is fixed.
    pub sampled_colored_fraction: f64,
    /// Standard deviation of the fraction over independent initial samples.
    pub colored_fraction_stderr: Option<f64>,
    /// Fraction of the uncolored edges that received a color.
    pub edges_colored_fraction: f64,
    pub edges_colored: usize,
    pub flaws_addressed: usize,
    pub flaws_by_kind: BTreeMap<String, usize>,
    pub steps: usize,
    pub attempts: usize,
    pub max_uncolored_degree: usize,
    /// `max_e |Σ_i Pr(e ∈ M_i) - 1|` at the start of the iteration.
    pub ledger_max_deviation: f64,
    /// `max_e` change of `Σ_i Pr(e ∈ M_i)` into the next iteration.
    pub ledger_max_drift: Option<f64>,
    pub colors_active: usize,
    pub locality_audits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ListStats {
    pub params: ListParams,
    pub budget: Option<usize>,
    pub k_hat: Option<f64>,
    pub iterations: Vec<IterationStats>,
    pub greedy_edges: usize,
    pub colors_used: usize,
}

#[derive(Clone, Debug)]
pub struct ListOutcome {
    pub coloring: PartialColoring,
    pub stats: ListStats,
}

fn available(g: &Multigraph, lists: &[Vec<Color>], coloring: &PartialColoring, e: EdgeId) -> Vec<Color> {
    let (u, v) = g.endpoints(e);
    let used: BTreeSet<Color> = g
        .incident(u)
        .iter()
        .chain(g.incident(v))
        .filter_map(|&f| coloring.get(f))
        .collect();
    lists[e].iter().copied().filter(|c| !used.contains(c)).collect()
}

/// True when every uncolored edge has more available colors than uncolored
/// neighbours, so greedy completion cannot block.
pub fn greedy_guaranteed(g: &Multigraph, lists: &[Vec<Color>], coloring: &PartialColoring) -> bool {
    (0..g.edge_count()).filter(|&e| coloring.get(e).is_none()).all(|e| {
        let (u, v) = g.endpoints(e);
        let adjacent = g
            .incident(u)
            .iter()
            .chain(g.incident(v))
            .filter(|&&f| f != e && coloring.get(f).is_none())
            .count();
        available(g, lists, coloring, e).len() > adjacent
    })
}

/// Colors the remaining edges one at a time, always taking an edge with the
/// fewest available colors (ties by id) and giving it its smallest one.
pub fn greedy_list_completion(g: &Multigraph, lists: &[Vec<Color>], coloring: &mut PartialColoring) -> Result<usize> {
    let mut count = 0;
    loop {
        let mut best: Option<(usize, EdgeId, Color)> = None;
        for e in (0..g.edge_count()).filter(|&e| coloring.get(e).is_none()) {
            let avail = available(g, lists, coloring, e);
            let Some(&c) = avail.first() else {
                return Err(Error::GreedyBlocked { edge: e });
            };
            if best.is_none_or(|(n, _, _)| avail.len() < n) {
                best = Some((avail.len(), e, c));
            }
        }
        let Some((_, e, c)) = best else {
            return Ok(count);
        };
        coloring.set(e, c);
        count += 1;
    }
}

/// Full pipeline: iterations while they are needed, then greedy completion.
pub fn list_edge_color(g: &Multigraph, lists: &ListAssignment, cfg: &ListConfig) -> Result<ListOutcome> {
    cfg.validate()?;
    let m = g.edge_count();
    if lists.len() != m {
        return Err(Error::Argument(format!("{} lists for {m} edges", lists.len())));
    }
    if let Some(e) = (0..m).find(|&e| lists.list(e).is_empty()) {
        return Err(Error::EmptyList { edge: e });
    }
    let params = ListParams::resolve(g, cfg);
    let delta0 = g.max_degree();
    let mut current: Vec<Vec<Color>> = (0..m).map(|e| lists.list(e).to_vec()).collect();
    let mut coloring = PartialColoring::uncolored(m);
    let mut acts: Option<Activities> = None;
    let mut budget = None;
    let mut k_hat: Option<f64> = None;
    let mut iterations: Vec<IterationStats> = Vec::new();
    let mut prev_ledger: Option<Vec<f64>> = None;

    for round in 0..=cfg.max_iterations {
        let colored: Vec<bool> = (0..m).map(|e| coloring.get(e).is_some()).collect();
        if colored.iter().all(|&c| c) || current.iter().enumerate().any(|(e, l)| !colored[e] && l.is_empty()) {
            break;
        }
        let assignment = ListAssignment::new(current.clone());
        let subs = build_color_subgraphs(g, &assignment, &colored)?;
        if let (Some(a), Some(prev)) = (&acts, &prev_ledger) {
            let ledger = compute_ledger(g, &subs, a, cfg)?;
            let drift = (0..m)
                .filter(|&e| !colored[e])
                .map(|e| (ledger.per_edge[e] - prev[e]).abs())
                .fold(0.0, f64::max);
            if let Some(last) = iterations.last_mut() {
                last.ledger_max_drift = Some(drift);
            }
        }
        let d_cur = (0..g.vertex_count())
            .map(|v| g.incident(v).iter().filter(|&&e| !colored[e]).count())
            .max()
            .unwrap_or(0);
        if round == cfg.max_iterations
            || greedy_guaranteed(g, &current, &coloring)
            || k_hat.is_some_and(|k| (d_cur as f64) < delta0 as f64 / (2.0 * k))
        {
            break;
        }
        if acts.is_none() {
            let c = cfg
                .budget
                .unwrap_or_else(|| (0..m).map(|e| current[e].len()).min().unwrap_or(0));
            if let Some(e) = (0..m).find(|&e| current[e].len() < c) {
                return Err(Error::Argument(format!("edge {e} has fewer than C = {c} colors")));
            }
            let chi = chi_star(g, cfg.odd_set_cap)?.upper_bound;
            let need = crate::fractional::ceil((Rational::from_integer(1) + cfg.epsilon) * chi);
            if (c as i64) < need {
                return Err(Error::Argument(format!(
                    "color budget C = {c} is below ⌈(1+ε)χ*⌉ = {need}"
                )));
            }
            let a = calibrate_colors(g, &subs, c, cfg)?;
            let max_l = a.values().flat_map(|v| v.iter().copied()).fold(0.0, f64::max);
            k_hat = Some(c as f64 * max_l);
            budget = Some(c);
            acts = Some(a);
        }
        let a = acts.as_ref().unwrap();
        let mut it = Iteration::new(g, subs, a, params.clone(), &colored, cfg)?;
        let deviation = (0..m)
            .filter(|&e| !colored[e])
            .map(|e| (it.ledger.per_edge[e] - 1.0).abs())
            .fold(0.0, f64::max);
        if deviation > cfg.ledger_tol {
            log::warn!("iteration {round}: ledger deviates from 1 by {deviation}");
        }
        prev_ledger = Some(it.ledger.per_edge.clone());

        let spread = if cfg.stderr_samples >= 2 {
            let draws = (0..cfg.stderr_samples as u64)
                .map(|k| {
                    let s = it.sample(&[round as u64, u64::MAX, k])?;
                    Ok(it.outcome(&s).removed_fraction())
                })
                .collect::<Result<Vec<f64>>>()?;
            let mean = draws.iter().sum::<f64>() / draws.len() as f64;
            let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (draws.len() - 1) as f64;
            Some(var.sqrt())
        } else {
            None
        };

        let mut done = None;
        for attempt in 0..=cfg.retries {
            let mut state = it.sample(&[round as u64, attempt as u64, u64::MAX])?;
            let fresh = it.outcome(&state).removed_fraction();
            let mut search = ListSearch {
                it: &mut it,
                path: vec![round as u64, attempt as u64],
                audits: 0,
            };
            let trace = run_local_search(&mut search, &mut state, cfg.step_cap)?;
            let audits = search.audits;
            if trace.terminated_flawless {
                done = Some((state, trace, attempt + 1, audits, fresh));
                break;
            }
            log::info!("list iteration {round} attempt {attempt} hit the step cap");
        }
        let Some((state, trace, attempts, audits, fresh)) = done else {
            return Err(Error::RoundFailed {
                attempts: cfg.retries + 1,
                reason: format!("list iteration {round} reached the step cap of {}", cfg.step_cap),
            });
        };

        let out = it.outcome(&state);
        let before = colored.iter().filter(|&&c| !c).count();
        let mut newly = 0;
        for e in 0..m {
            if let Some(i) = out.color_of[e] {
                coloring.set(e, it.subs.colors[i]);
                newly += 1;
            }
        }
        for e in 0..m {
            if colored[e] || coloring.get(e).is_some() {
                continue;
            }
            current[e] = it.subs.edge_colors[e]
                .iter()
                .filter(|&&i| out.keeps[i][it.subs.local[i][e].unwrap()])
                .map(|&i| it.subs.colors[i])
                .collect();
        }
        let mut flaws_by_kind = BTreeMap::new();
        for r in &trace.records {
            *flaws_by_kind.entry(r.kind.clone()).or_insert(0) += 1;
        }
        let max_uncolored_degree = (0..g.vertex_count())
            .map(|v| g.incident(v).iter().filter(|&&e| coloring.get(e).is_none()).count())
            .max()
            .unwrap_or(0);
        iterations.push(IterationStats {
            colored_fraction: out.removed_fraction(),
            slots: out.slots,
            sampled_colored_fraction: fresh,
            colored_fraction_stderr: spread,
            edges_colored_fraction: newly as f64 / before.max(1) as f64,
            edges_colored: newly,
            flaws_addressed: trace.steps,
            flaws_by_kind,
            steps: trace.steps,
            attempts,
            max_uncolored_degree,
            ledger_max_deviation: deviation,
            ledger_max_drift: None,
            colors_active: it.subs.colors.len(),
            locality_audits: audits,
        });
    }

    let greedy_edges = greedy_list_completion(g, &current, &mut coloring)?;
    let colors_used = coloring.distinct_colors();
    Ok(ListOutcome {
        coloring,
        stats: ListStats {
            params,
            budget,
            k_hat,
            iterations,
            greedy_edges,
            colors_used,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::validate_coloring;
    use crate::oracle;

    fn g(n: usize, e: &[(usize, usize)]) -> Multigraph {
        Multigraph::from_edges(n, e).unwrap()
    }

    fn k3() -> Multigraph {
        g(3, &[(0, 1), (1, 2), (2, 0)])
    }

    fn path(k: usize) -> Multigraph {
        g(k + 1, &(0..k).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    #[test]
    fn subgraph_examples() {
        let t = k3();
        let s = build_color_subgraphs(&t, &ListAssignment::uniform(3, 1), &[false; 3]).unwrap();
        assert_eq!(s.colors, vec![0]);
        assert_eq!(s.graphs[0].graph.edge_count(), 3);

        let s = build_color_subgraphs(&t, &ListAssignment::new(vec![vec![0], vec![1], vec![2]]), &[false; 3]).unwrap();
        assert_eq!(s.colors.len(), 3);
        assert!(s.graphs.iter().all(|x| x.graph.edge_count() == 1));

        let s = build_color_subgraphs(&t, &ListAssignment::uniform(3, 2), &[false; 3]).unwrap();
        assert_eq!(s.graphs[0].to_parent, s.graphs[1].to_parent);
        assert_eq!(s.edge_colors[1], vec![0, 1]);

        let bad = ListAssignment::new(vec![vec![0], vec![], vec![1]]);
        assert!(matches!(
            build_color_subgraphs(&t, &bad, &[false; 3]),
            Err(Error::EmptyList { edge: 1 })
        ));
        // colored edges are ignored
        assert!(build_color_subgraphs(&t, &bad, &[false, true, false]).is_ok());
    }

    #[test]
    fn equalizer_examples() {
        let a = 0.3;
        assert_eq!(equalizer_probability(0.0, a), a);
        assert_eq!(equalizer_probability(a, a), 0.0);
        assert!((equalizer_probability(a / 2.0, a) - (a / 2.0) / (1.0 - a / 2.0)).abs() < 1e-15);
        assert_eq!(equalizer_probability(0.5, a), 0.0);
        // total removal probability is exactly α
        for q in [0.0, 0.05, 0.1, 0.29] {
            let x = equalizer_probability(q, a);
            assert!((q + (1.0 - q) * x - a).abs() < 1e-15);
        }
    }

    #[test]
    fn removal_probability_matches_enumeration() {
        // two colors, independent membership and activations
        let (p0, p1, a) = (0.3, 0.6, 0.4);
        let mut brute = 0.0;
        for in0 in [false, true] {
            for in1 in [false, true] {
                for act0 in [false, true] {
                    for act1 in [false, true] {
                        let w = [(in0, p0), (in1, p1)]
                            .iter()
                            .map(|&(b, p)| if b { p } else { 1.0 - p })
                            .product::<f64>()
                            * [act0, act1].iter().map(|&b| if b { a } else { 1.0 - a }).product::<f64>();
                        let f0 = in0 && act0;
                        let f1 = in1 && act1;
                        if f0 || (!in0 && f1) {
                            brute += w;
                        }
                    }
                }
            }
        }
        assert!((removal_probability(p0, &[p1], a) - brute).abs() < 1e-15);
    }

    #[test]
    fn greedy_examples() {
        let cfg = ListConfig {
            max_iterations: 0,
            ..Default::default()
        };
        let out = list_edge_color(&k3(), &ListAssignment::uniform(3, 3), &cfg).unwrap();
        assert!(validate_coloring(&k3(), &out.coloring, Some(&ListAssignment::uniform(3, 3))).is_clean());
        assert_eq!(out.stats.colors_used, 3);

        let one = path(1);
        let lists = ListAssignment::new(vec![vec![7]]);
        let out = list_edge_color(&one, &lists, &ListConfig::default()).unwrap();
        assert_eq!(out.coloring.get(0), Some(7));

        let blocked = ListAssignment::new(vec![vec![0], vec![0]]);
        assert!(matches!(
            list_edge_color(&path(2), &blocked, &cfg),
            Err(Error::GreedyBlocked { edge: 1 })
        ));
        assert!(matches!(
            list_edge_color(&path(2), &ListAssignment::new(vec![vec![0], vec![]]), &cfg),
            Err(Error::EmptyList { edge: 1 })
        ));
    }

    #[test]
    fn single_color_single_edge_is_infeasible() {
        let subs = build_color_subgraphs(&path(1), &ListAssignment::uniform(1, 1), &[false]).unwrap();
        assert!(matches!(
            calibrate_colors(&path(1), &subs, 1, &ListConfig::default()),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn triangle_calibration_is_uniform() {
        let t = k3();
        let subs = build_color_subgraphs(&t, &ListAssignment::uniform(3, 4), &[false; 3]).unwrap();
        let a = calibrate_colors(&t, &subs, 4, &ListConfig::default()).unwrap();
        for v in a.values() {
            for &l in v {
                assert!((l - 1.0).abs() < 1e-4);
            }
        }
        let ledger = compute_ledger(&t, &subs, &a, &ListConfig::default()).unwrap();
        for &s in &ledger.per_edge {
            assert!((s - 1.0).abs() < 1e-5);
        }
        // dropping an edge from color 0 keeps the surviving activities
        let lists = ListAssignment::new(vec![vec![1, 2, 3], vec![0, 1, 2, 3], vec![0, 1, 2, 3]]);
        let subs2 = build_color_subgraphs(&t, &lists, &[false; 3]).unwrap();
        let l2 = local_activities(&subs2, &a);
        assert_eq!(subs2.graphs[0].to_parent, vec![1, 2]);
        assert_eq!(l2[0], vec![a[&0][1], a[&0][2]]);
    }

    fn desk_scale() -> ListConfig {
        ListConfig {
            alpha: Some(0.2),
            edge_threshold: Some(0.3),
            vertex_threshold: Some(0.05),
            t_prime: Some(2),
            t: Some(2),
            max_iterations: 2,
            ..Default::default()
        }
    }

    fn fat_path(k: usize, mult: usize) -> Multigraph {
        let mut gr = Multigraph::new(k + 1);
        for i in 0..k {
            for _ in 0..mult {
                gr.add_edge(i, i + 1).unwrap();
            }
        }
        gr
    }

    fn iteration<'g>(gr: &'g Multigraph, colors: usize, cfg: &ListConfig) -> Iteration<'g> {
        let m = gr.edge_count();
        let subs = build_color_subgraphs(gr, &ListAssignment::uniform(m, colors), &vec![false; m]).unwrap();
        let a = calibrate_colors(gr, &subs, colors, cfg).unwrap();
        let params = ListParams::resolve(gr, cfg);
        Iteration::new(gr, subs, &a, params, &vec![false; m], cfg).unwrap()
    }

    #[test]
    fn degenerate_alpha() {
        let gr = fat_path(3, 2);
        for (alpha, all) in [(0.0, false), (1.0, true)] {
            let cfg = ListConfig {
                alpha: Some(alpha),
                ..Default::default()
            };
            let mut it = iteration(&gr, 5, &cfg);
            let s = it.sample(&[0]).unwrap();
            let out = it.outcome(&s);
            for (i, cs) in s.colors.iter().enumerate() {
                for &le in cs.matching.edges() {
                    let p = it.subs.graphs[i].to_parent[le];
                    assert_eq!(out.color_of[p].is_some(), all);
                }
            }
            if !all {
                assert!(out.color_of.iter().all(|c| c.is_none()));
            }
            assert_eq!(s, it.sample(&[0]).unwrap());
        }
    }

    #[test]
    fn identity_conditioning_has_no_edge_flaw() {
        // one color, nothing activated or equalized: G_0' = G_0
        let gr = path(3);
        let cfg = ListConfig {
            alpha: Some(0.0),
            vertex_threshold: Some(0.0),
            ..Default::default()
        };
        let mut it = iteration(&gr, 3, &cfg);
        let s = it.sample(&[1]).unwrap();
        assert_eq!(it.detect(&s), None);
    }

    #[test]
    fn starving_a_vertex_is_a_vertex_flaw() {
        let gr = fat_path(3, 2);
        let cfg = ListConfig {
            alpha: Some(0.0),
            vertex_threshold: Some(0.2),
            ..Default::default()
        };
        let mut it = iteration(&gr, 5, &cfg);
        let s = it.sample(&[0]).unwrap();
        assert_eq!(it.detect(&s), Some(ListFlaw::Vertex { vertex: 0 }));
    }

    #[test]
    fn frozen_neighbours_raise_an_edge_flaw() {
        // path a-b-c-d with three colors; equalizing the outer edges away
        // leaves the middle edge alone in its ball
        let gr = path(3);
        let cfg = ListConfig {
            alpha: Some(0.0),
            vertex_threshold: Some(0.0),
            edge_threshold: Some(0.1),
            ..Default::default()
        };
        let mut it = iteration(&gr, 3, &cfg);
        assert!((it.baseline[1] - 1.0).abs() < 1e-4);
        let lam = it.lam[0][1];
        let alone = it.ball_marginal(0, 1, Some(&[false, true, false]));
        assert!((alone - lam / (1.0 + lam)).abs() < 1e-12);
        assert!((3.0 * alone - it.baseline[1]).abs() > 0.1);

        let mut s = it.sample(&[0]).unwrap();
        for cs in &mut s.colors {
            cs.equalize = vec![false, false, true];
        }
        // edge 0's ball does not reach edge 2, edge 1's does
        assert_eq!(it.detect(&s), Some(ListFlaw::Edge { edge: 1 }));
    }

    #[test]
    fn fix_is_local() {
        let gr = fat_path(8, 2);
        let cfg = ListConfig {
            t: Some(1),
            ..Default::default()
        };
        let mut it = iteration(&gr, 6, &cfg);
        let s = it.sample(&[0]).unwrap();
        for step in 0..30u64 {
            let h = [(step % 9) as usize];
            let next = it.fix(&h, &s, &[step]).unwrap();
            assert!(it.locality_holds(&h, &s, &next));
            for (i, cs) in next.colors.iter().enumerate() {
                assert!(cs.matching.is_matching_in(&it.subs.graphs[i].graph));
            }
        }
        // radius beyond the diameter re-draws everything
        let cfg = ListConfig {
            t: Some(50),
            ..Default::default()
        };
        let it = iteration(&gr, 6, &cfg);
        assert_eq!(it.params.t, 8);
    }

    #[test]
    fn removal_rate_is_alpha_on_fresh_samples() {
        let gr = fat_path(4, 3);
        let cfg = ListConfig {
            alpha: Some(0.4),
            ..Default::default()
        };
        let mut it = iteration(&gr, 8, &cfg);
        let runs = 400;
        let mut xs = Vec::new();
        for s in 0..runs {
            let st = it.sample(&[s]).unwrap();
            xs.push(it.outcome(&st).removed_fraction());
        }
        let mean = xs.iter().sum::<f64>() / runs as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
        let se = (var / runs as f64).sqrt();
        assert!((mean - 0.4).abs() < 4.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn end_to_end_small() {
        let gr = fat_path(6, 4);
        let m = gr.edge_count();
        let chi = chi_star(&gr, None).unwrap().value;
        let size = crate::fractional::ceil(chi * Rational::new(12, 10)) as usize;
        let lists = ListAssignment::uniform(m, size);
        let cfg = ListConfig {
            seed: 5,
            audit_locality: true,
            ..desk_scale()
        };
        let out = list_edge_color(&gr, &lists, &cfg).unwrap();
        assert!(validate_coloring(&gr, &out.coloring, Some(&lists)).is_clean());
        assert!(!out.stats.iterations.is_empty());
        let again = list_edge_color(&gr, &lists, &cfg).unwrap();
        assert_eq!(out.coloring, again.coloring);
    }

    #[test]
    fn greedy_completion_agrees_with_oracle_when_it_succeeds() {
        let t = k3();
        let lists = ListAssignment::new(vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        let mut col = PartialColoring::uncolored(3);
        let cur: Vec<Vec<Color>> = (0..3).map(|e| lists.list(e).to_vec()).collect();
        greedy_list_completion(&t, &cur, &mut col).unwrap();
        assert!(validate_coloring(&t, &col, Some(&lists)).is_clean());
        assert!(oracle::brute_force_list_coloring(&t, &lists).unwrap().is_some());
    }
}
