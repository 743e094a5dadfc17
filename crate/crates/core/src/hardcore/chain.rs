//! Metropolis chain on matchings with insert, delete and slide moves.
//!
//! The chain runs on the collapsed simple graph (parallel activities summed)
//! and the final matching is lifted edge by edge. Each step picks a move type
//! from the proposal mix and a uniform skeleton edge:
//!
//! * insert `e` (both endpoints free): accept with `min(1, λ·p_del/p_ins)`;
//! * delete `e ∈ M`: accept with `min(1, p_ins/(λ·p_del))`;
//! * slide onto `e` when exactly one endpoint is covered by `f ∈ M`:
//!   accept with `min(1, λ_e/λ_f)`.
//!
//! Proposals are symmetric within each move type, so `ν` is stationary.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::exact::Collapsed;
use super::HardCoreModel;
use crate::error::{Error, Result};
use crate::multigraph::Matching;
use crate::rng::{stream, StreamRng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProposalMix {
    pub insert: f64,
    pub delete: f64,
    pub slide: f64,
}

impl Default for ProposalMix {
    fn default() -> Self {
        ProposalMix {
            insert: 0.4,
            delete: 0.4,
            slide: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    /// Steps per sample; `None` uses `10·m²·⌈max(λ',1)⌉` with `m` the
    /// number of collapsed edges and `λ'` their largest activity.
    pub steps: Option<usize>,
    pub seed: u64,
    pub mix: ProposalMix,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            steps: None,
            seed: 0,
            mix: ProposalMix::default(),
        }
    }
}

impl ChainConfig {
    pub fn with_seed(seed: u64) -> Self {
        ChainConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.mix;
        let ok = [m.insert, m.delete, m.slide].iter().all(|&p| p > 0.0 && p.is_finite())
            && (m.insert + m.delete + m.slide - 1.0).abs() < 1e-9;
        if !ok {
            return Err(Error::Argument(
                "proposal probabilities must be positive and sum to 1".into(),
            ));
        }
        Ok(())
    }
}

pub(crate) fn default_steps(col: &Collapsed) -> usize {
    let m = col.edges.len();
    let lam = col.max_weight().max(1.0).ceil() as usize;
    10 * m * m * lam
}

pub(crate) struct Chain<'a> {
    col: &'a Collapsed,
    mate: Vec<Option<usize>>,
    in_m: Vec<bool>,
    mix: ProposalMix,
}

impl<'a> Chain<'a> {
    pub fn new(col: &'a Collapsed, mix: ProposalMix) -> Self {
        Chain {
            col,
            mate: vec![None; col.host_of.len()],
            in_m: vec![false; col.edges.len()],
            mix,
        }
    }

    fn add(&mut self, e: usize) {
        let se = &self.col.edges[e];
        self.mate[se.a] = Some(e);
        self.mate[se.b] = Some(e);
        self.in_m[e] = true;
    }

    fn remove(&mut self, e: usize) {
        let se = &self.col.edges[e];
        self.mate[se.a] = None;
        self.mate[se.b] = None;
        self.in_m[e] = false;
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let m = self.col.edges.len();
        if m == 0 {
            return;
        }
        let r: f64 = rng.gen();
        let e = rng.gen_range(0..m);
        let (a, b, w) = {
            let se = &self.col.edges[e];
            (se.a, se.b, se.weight)
        };
        let mix = self.mix;
        if r < mix.insert {
            if self.mate[a].is_none() && self.mate[b].is_none() {
                let acc = (w * mix.delete / mix.insert).min(1.0);
                if rng.gen::<f64>() < acc {
                    self.add(e);
                }
            }
        } else if r < mix.insert + mix.delete {
            if self.in_m[e] {
                let acc = (mix.insert / (w * mix.delete)).min(1.0);
                if rng.gen::<f64>() < acc {
                    self.remove(e);
                }
            }
        } else if !self.in_m[e] {
            let f = match (self.mate[a], self.mate[b]) {
                (Some(f), None) | (None, Some(f)) => f,
                _ => return,
            };
            let acc = (w / self.col.edges[f].weight).min(1.0);
            if rng.gen::<f64>() < acc {
                self.remove(f);
                self.add(e);
            }
        }
    }

    pub fn run<R: Rng + ?Sized>(&mut self, steps: usize, rng: &mut R) {
        for _ in 0..steps {
            self.step(rng);
        }
    }

    pub fn contains(&self, e: usize) -> bool {
        self.in_m[e]
    }

    pub fn is_free(&self, v: usize) -> bool {
        self.mate[v].is_none()
    }

    pub fn lifted<R: Rng + ?Sized>(&self, rng: &mut R) -> Matching {
        let edges = (0..self.in_m.len())
            .filter(|&e| self.in_m[e])
            .map(|e| self.col.lift(e, rng))
            .collect();
        Matching::from_edges(edges)
    }
}

/// One sample from a fresh chain started at the empty matching, drawing
/// from the supplied stream.
pub fn sample_matching_with<R: Rng + ?Sized>(
    model: &HardCoreModel,
    cfg: &ChainConfig,
    rng: &mut R,
) -> Matching {
    let col = Collapsed::new(model);
    let steps = cfg.steps.unwrap_or_else(|| default_steps(&col));
    let mut chain = Chain::new(&col, cfg.mix);
    chain.run(steps, rng);
    chain.lifted(rng)
}

/// One sample from the chain seeded by `cfg.seed`.
pub fn sample_matching(model: &HardCoreModel, cfg: &ChainConfig) -> Matching {
    let mut rng: StreamRng = stream(cfg.seed, &[]);
    sample_matching_with(model, cfg, &mut rng)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarginalEstimate {
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples: usize,
}

impl MarginalEstimate {
    pub fn max_stderr(&self) -> f64 {
        self.stderr.iter().copied().fold(0.0, f64::max)
    }
}

const BATCHES: usize = 20;

/// Rao–Blackwellised marginal estimates from one long chain.
///
/// After burn-in the chain is read every `m` steps. Each read adds, for
/// every collapsed edge `e = ab`, `λ/(1+λ)` if `a` and `b` are both free in
/// `M - e`. Standard errors come from batch means over 20 batches.
pub fn estimate_marginals<R: Rng + ?Sized>(
    model: &HardCoreModel,
    cfg: &ChainConfig,
    samples: usize,
    rng: &mut R,
) -> MarginalEstimate {
    let col = Collapsed::new(model);
    let host_m = model.host().edge_count();
    let me = col.edges.len();
    let burn = cfg.steps.unwrap_or_else(|| default_steps(&col));
    let thin = me.max(1);
    let samples = samples.max(BATCHES);
    let per_batch = samples / BATCHES;
    let samples = per_batch * BATCHES;
    let mut chain = Chain::new(&col, cfg.mix);
    chain.run(burn, rng);
    let mut batch_sums = vec![vec![0.0; me]; BATCHES];
    for s in 0..samples {
        chain.run(thin, rng);
        let row = &mut batch_sums[s / per_batch];
        for (e, se) in col.edges.iter().enumerate() {
            let free = chain.contains(e) || (chain.is_free(se.a) && chain.is_free(se.b));
            if free {
                row[e] += se.weight / (1.0 + se.weight);
            }
        }
    }
    let mut mean = vec![0.0; host_m];
    let mut stderr = vec![0.0; host_m];
    for (e, se) in col.edges.iter().enumerate() {
        let means: Vec<f64> = batch_sums.iter().map(|r| r[e] / per_batch as f64).collect();
        let mu = means.iter().sum::<f64>() / BATCHES as f64;
        let var = means.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (BATCHES - 1) as f64;
        let se_mu = (var / BATCHES as f64).sqrt();
        for &(h, l) in &se.parallel {
            mean[h] = mu * l / se.weight;
            stderr[h] = se_mu * l / se.weight;
        }
    }
    MarginalEstimate {
        mean,
        stderr,
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::Multigraph;

    #[test]
    fn rejects_bad_mix() {
        let mut c = ChainConfig::default();
        c.mix.slide = 0.0;
        assert!(c.validate().is_err());
        assert!(ChainConfig::default().validate().is_ok());
    }

    #[test]
    fn edgeless_samples_empty() {
        let m = HardCoreModel::uniform(Multigraph::new(3), 1.0).unwrap();
        assert!(sample_matching(&m, &ChainConfig::default()).is_empty());
    }

    #[test]
    fn samples_are_matchings() {
        let g = Multigraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 1)]).unwrap();
        let m = HardCoreModel::uniform(g.clone(), 2.0).unwrap();
        let mut rng = stream(3, &[]);
        for _ in 0..200 {
            assert!(sample_matching_with(&m, &ChainConfig::default(), &mut rng).is_matching_in(&g));
        }
    }

    #[test]
    fn estimate_tracks_exact_marginals() {
        let g = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let m = HardCoreModel::uniform(g, 1.0).unwrap();
        let est = estimate_marginals(&m, &ChainConfig::default(), 4000, &mut stream(5, &[]));
        let exact = [0.4, 0.2, 0.4];
        for (e, &p) in exact.iter().enumerate() {
            assert!((est.mean[e] - p).abs() < 5.0 * est.stderr[e] + 1e-3, "{est:?}");
        }
    }

    #[test]
    fn transition_flows_are_balanced() {
        use std::collections::BTreeMap;
        let graphs = [
            Multigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap(),
            Multigraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(),
            Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap(),
        ];
        for (k, g) in graphs.into_iter().enumerate() {
            let lam: Vec<f64> = (0..g.edge_count()).map(|e| 0.5 + e as f64).collect();
            let model = HardCoreModel::new(g, lam).unwrap();
            let col = Collapsed::new(&model);
            let mut chain = Chain::new(&col, ProposalMix::default());
            let mut rng = stream(17, &[k as u64]);
            chain.run(1000, &mut rng);
            let key = |c: &Chain| c.in_m.clone();
            let mut flow: BTreeMap<(Vec<bool>, Vec<bool>), f64> = BTreeMap::new();
            let steps = 400_000;
            let mut prev = key(&chain);
            for _ in 0..steps {
                chain.step(&mut rng);
                let next = key(&chain);
                if next != prev {
                    *flow.entry((prev.clone(), next.clone())).or_default() += 1.0;
                }
                prev = next;
            }
            for ((a, b), &n_ab) in &flow {
                let n_ba = flow.get(&(b.clone(), a.clone())).copied().unwrap_or(0.0);
                // Counts of a→b and b→a differ by at most one per excursion;
                // compare with a Poisson-scale allowance.
                let sd = (n_ab + n_ba).sqrt();
                assert!((n_ab - n_ba).abs() <= 5.0 * sd + 2.0, "graph {k}: {a:?}→{b:?} {n_ab} vs {n_ba}");
            }
        }
    }

    #[test]
    fn lift_follows_parallel_activities() {
        let g = Multigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        let m = HardCoreModel::new(g, vec![1.0, 3.0]).unwrap();
        let mut rng = stream(23, &[]);
        let (mut occupied, mut second) = (0usize, 0usize);
        for _ in 0..20_000 {
            let s = sample_matching_with(&m, &ChainConfig::default(), &mut rng);
            if let Some(&e) = s.edges().first() {
                occupied += 1;
                second += usize::from(e == 1);
            }
        }
        let freq = second as f64 / occupied as f64;
        let sd = (0.75 * 0.25 / occupied as f64).sqrt();
        assert!((freq - 0.75).abs() < 4.0 * sd, "{freq}");
    }
}
