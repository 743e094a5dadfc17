//! Hard-core distributions on matchings: `ν(M) ∝ ∏_{e∈M} λ(e)`.

mod calibrate;
mod chain;
mod decay;
mod exact;

pub use calibrate::{calibrate_activities, calibrate_with, CalibrationConfig, CalibrationResult};
pub use chain::{
    estimate_marginals, sample_matching, sample_matching_with, ChainConfig, MarginalEstimate,
    ProposalMix,
};
pub use decay::{measure_correlation_decay, DecayReport};
pub use exact::{ExactLimits, ExactTable};

use rand::Rng;

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Matching, Multigraph, Subgraph, VertexId};

#[derive(Clone, Debug, PartialEq)]
pub struct HardCoreModel {
    host: Multigraph,
    activities: Vec<f64>,
}

impl HardCoreModel {
    pub fn new(host: Multigraph, activities: Vec<f64>) -> Result<Self> {
        if activities.len() != host.edge_count() {
            return Err(Error::Argument(format!(
                "{} activities for {} edges",
                activities.len(),
                host.edge_count()
            )));
        }
        if let Some(e) = activities.iter().position(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::Argument(format!(
                "activity of edge {e} must be positive and finite, got {}",
                activities[e]
            )));
        }
        Ok(HardCoreModel { host, activities })
    }

    pub fn uniform(host: Multigraph, lambda: f64) -> Result<Self> {
        let m = host.edge_count();
        Self::new(host, vec![lambda; m])
    }

    pub fn host(&self) -> &Multigraph {
        &self.host
    }

    pub fn activities(&self) -> &[f64] {
        &self.activities
    }

    pub fn activity(&self, e: EdgeId) -> f64 {
        self.activities[e]
    }

    /// The model on a subgraph, activities carried over unchanged.
    pub fn restrict(&self, sub: &Subgraph) -> HardCoreModel {
        HardCoreModel {
            host: sub.graph.clone(),
            activities: sub.to_parent.iter().map(|&p| self.activities[p]).collect(),
        }
    }

    /// `ln λ(M)`.
    pub fn ln_weight(&self, m: &Matching) -> f64 {
        m.edges().iter().map(|&e| self.activities[e].ln()).sum()
    }
}

/// `ln Z`, with `Z` summed over all matchings including the empty one.
pub fn partition_function(model: &HardCoreModel) -> Result<f64> {
    partition_function_with(model, ExactLimits::default())
}

pub fn partition_function_with(model: &HardCoreModel, limits: ExactLimits) -> Result<f64> {
    let mut t = ExactTable::new(model, limits)?;
    let full = t.full_mask();
    t.ln_z(full)
}

/// `Pr[e ∈ M]` for every edge, indexed by edge id.
pub fn exact_marginals(model: &HardCoreModel) -> Result<Vec<f64>> {
    exact_marginals_with(model, ExactLimits::default())
}

pub fn exact_marginals_with(model: &HardCoreModel, limits: ExactLimits) -> Result<Vec<f64>> {
    ExactTable::new(model, limits)?.marginals(model.host.edge_count())
}

/// Draws `count` exact samples sharing one memo table.
pub fn sample_exact<R: Rng + ?Sized>(
    model: &HardCoreModel,
    count: usize,
    limits: ExactLimits,
    rng: &mut R,
) -> Result<Vec<Matching>> {
    let mut t = ExactTable::new(model, limits)?;
    (0..count).map(|_| t.sample(rng)).collect()
}

/// Exact sampling when the memo table fits, the Metropolis chain otherwise.
pub enum Sampler {
    Exact(Box<ExactTable>),
    Chain { model: HardCoreModel, cfg: ChainConfig },
}

impl Sampler {
    pub fn new(model: &HardCoreModel, limits: ExactLimits, chain: &ChainConfig) -> Sampler {
        if let Ok(mut t) = ExactTable::new(model, limits) {
            let full = t.full_mask();
            if t.ln_z(full).is_ok() {
                return Sampler::Exact(Box::new(t));
            }
        }
        Sampler::Chain {
            model: model.clone(),
            cfg: chain.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Sampler::Exact(_))
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Matching {
        match self {
            // every state the sampler visits was memoised by the full solve
            Sampler::Exact(t) => t.sample(rng).expect("memo table covers every sampled state"),
            Sampler::Chain { model, cfg } => sample_matching_with(model, cfg, rng),
        }
    }
}

/// Marginal of `e` in the hard-core model on the subgraph induced by `ball`
/// after deleting every vertex covered by `frozen`.
pub fn conditional_marginal(
    model: &HardCoreModel,
    e: EdgeId,
    frozen: &Matching,
    ball: &[VertexId],
) -> Result<f64> {
    conditional_marginal_with(model, e, frozen, ball, ExactLimits::default())
}

pub fn conditional_marginal_with(
    model: &HardCoreModel,
    e: EdgeId,
    frozen: &Matching,
    ball: &[VertexId],
    limits: ExactLimits,
) -> Result<f64> {
    let g = &model.host;
    if e >= g.edge_count() {
        return Err(Error::Argument(format!("edge {e} is not in the graph")));
    }
    let mut inside = vec![false; g.vertex_count()];
    for &v in ball {
        if v >= g.vertex_count() {
            return Err(Error::Argument(format!("vertex {v} is not in the graph")));
        }
        inside[v] = true;
    }
    let (u, v) = g.endpoints(e);
    if !inside[u] || !inside[v] {
        return Err(Error::Argument(format!("edge {e} is not inside the ball")));
    }
    if !frozen.is_matching_in(g) {
        return Err(Error::Argument("frozen edges do not form a matching".into()));
    }
    if frozen.contains(e) {
        return Err(Error::Argument(format!("edge {e} is itself frozen")));
    }
    for (x, c) in frozen.covered(g).into_iter().enumerate() {
        if c {
            inside[x] = false;
        }
    }
    if !inside[u] || !inside[v] {
        return Ok(0.0);
    }
    let sub = g.induced(&inside);
    let local = sub.from_parent(g.edge_count())[e].unwrap();
    Ok(exact_marginals_with(&model.restrict(&sub), limits)?[local])
}
