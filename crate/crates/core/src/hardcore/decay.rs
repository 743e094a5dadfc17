//! Empirical correlation decay of edge marginals.
//!
//! An edge is *far* from `e` when both of its endpoints are at distance at
//! least `t` from `e`'s endpoints. A conditioning fixes the matching on the
//! far edges to some `F`; the conditional law of the near part is then the
//! hard-core model on the near edges with `V(F)` deleted.

use std::collections::HashMap;

use serde::Serialize;

use super::exact::ExactLimits;
use super::{exact_marginals_with, sample_exact, HardCoreModel};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Matching, VertexId};
use crate::oracle::enumerate_matchings;
use crate::rng::stream;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub max_deviation: f64,
    pub unconditional: f64,
    pub conditionings: usize,
    /// True when every far matching was enumerated.
    pub exhaustive: bool,
}

const ENUMERATION_CAP: usize = 20;

/// Max over conditionings of `|Pr[e ∈ M | M ∩ far = F] / Pr[e ∈ M] - 1|`.
///
/// All far matchings are enumerated when there are at most 20 far edges;
/// otherwise `trials` conditionings are drawn from `ν` itself.
pub fn measure_correlation_decay(
    model: &HardCoreModel,
    e: EdgeId,
    t: usize,
    trials: usize,
    seed: u64,
) -> Result<DecayReport> {
    let g = model.host();
    if e >= g.edge_count() {
        return Err(Error::Argument(format!("edge {e} is not in the graph")));
    }
    let limits = ExactLimits::default();
    let (u, v) = g.endpoints(e);
    let dist = g.distances_from(&[u, v]);
    let far_vertex = |x: VertexId| dist[x].map_or(true, |d| d >= t);
    let far: Vec<bool> = g
        .edges()
        .iter()
        .map(|&(a, b)| far_vertex(a) && far_vertex(b))
        .collect();
    let base = exact_marginals_with(model, limits)?[e];

    let far_sub = g.edge_subgraph(|x| far[x]);
    let far_count = far_sub.graph.edge_count();
    let (conditionings, exhaustive): (Vec<Matching>, bool) = if far_count <= ENUMERATION_CAP {
        let all = enumerate_matchings(&far_sub.graph)?;
        (all.iter().map(|m| m.lift(&far_sub)).collect(), true)
    } else {
        let mut rng = stream(seed, &[0xDECA]);
        let draws = sample_exact(model, trials, limits, &mut rng)?;
        let keep = |m: &Matching| Matching::from_edges(m.edges().iter().copied().filter(|&x| far[x]).collect());
        (draws.iter().map(keep).collect(), false)
    };

    // The conditional marginal only depends on which near-edge endpoints F
    // covers.
    let near_vertices: Vec<VertexId> = {
        let mut vs: Vec<VertexId> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|&(x, _)| !far[x])
            .flat_map(|(_, &(a, b))| [a, b])
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    let mut cache: HashMap<Vec<VertexId>, f64> = HashMap::new();
    let mut worst: f64 = 0.0;
    for f in &conditionings {
        let covered = f.covered(g);
        let key: Vec<VertexId> = near_vertices.iter().copied().filter(|&x| covered[x]).collect();
        let p = match cache.get(&key) {
            Some(&p) => p,
            None => {
                let p = if covered[u] || covered[v] {
                    0.0
                } else {
                    let sub = g.edge_subgraph(|x| {
                        let (a, b) = g.endpoints(x);
                        !far[x] && !covered[a] && !covered[b]
                    });
                    let local = sub.from_parent(g.edge_count())[e].unwrap();
                    exact_marginals_with(&model.restrict(&sub), limits)?[local]
                };
                cache.insert(key, p);
                p
            }
        };
        worst = worst.max((p / base - 1.0).abs());
    }
    Ok(DecayReport {
        max_deviation: worst,
        unconditional: base,
        conditionings: conditionings.len(),
        exhaustive,
    })
}
