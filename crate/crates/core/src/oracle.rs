//! Brute-force ground truth for tiny instances. Caps are hard errors.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardcore::HardCoreModel;
use crate::multigraph::{Color, ListAssignment, Matching, Multigraph, PartialColoring};

pub const MATCHING_CAP: usize = 20;
pub const CHROMATIC_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactDistribution {
    pub support: Vec<Matching>,
    pub probabilities: Vec<f64>,
}

impl ExactDistribution {
    pub fn to_map(&self) -> BTreeMap<Matching, f64> {
        self.support.iter().cloned().zip(self.probabilities.iter().copied()).collect()
    }
}

/// Every matching of `g`, the empty one first, in include/exclude order
/// over edge ids.
pub fn enumerate_matchings(g: &Multigraph) -> Result<Vec<Matching>> {
    if g.edge_count() > MATCHING_CAP {
        return Err(Error::Capacity(format!(
            "matching enumeration is limited to {MATCHING_CAP} edges, got {}",
            g.edge_count()
        )));
    }
    fn rec(g: &Multigraph, e: usize, used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Matching>) {
        if e == g.edge_count() {
            out.push(Matching::from_edges(cur.clone()));
            return;
        }
        rec(g, e + 1, used, cur, out);
        let (u, v) = g.endpoints(e);
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            cur.push(e);
            rec(g, e + 1, used, cur, out);
            cur.pop();
            used[u] = false;
            used[v] = false;
        }
    }
    let mut out = Vec::new();
    rec(g, 0, &mut vec![false; g.vertex_count()], &mut Vec::new(), &mut out);
    Ok(out)
}

pub fn exact_distribution(model: &HardCoreModel) -> Result<ExactDistribution> {
    let support = enumerate_matchings(model.host())?;
    let weights: Vec<f64> = support
        .iter()
        .map(|m| m.edges().iter().map(|&e| model.activity(e)).product())
        .collect();
    let z: f64 = weights.iter().sum();
    Ok(ExactDistribution {
        probabilities: weights.iter().map(|w| w / z).collect(),
        support,
    })
}

/// Empirical distribution of a sample.
pub fn empirical<K: Ord + Clone>(samples: &[K]) -> BTreeMap<K, f64> {
    let mut counts: BTreeMap<K, f64> = BTreeMap::new();
    for s in samples {
        *counts.entry(s.clone()).or_insert(0.0) += 1.0;
    }
    let n = samples.len() as f64;
    counts.values_mut().for_each(|c| *c /= n);
    counts
}

/// `½ Σ |a(x) - b(x)|` over the union of supports.
pub fn tv_distance<K: Ord>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    let mut s = 0.0;
    for (k, p) in a {
        s += (p - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, q) in b {
        if !a.contains_key(k) {
            s += q.abs();
        }
    }
    s / 2.0
}

fn check_chromatic_cap(g: &Multigraph) -> Result<()> {
    if g.edge_count() > CHROMATIC_CAP {
        return Err(Error::Capacity(format!(
            "brute-force coloring is limited to {CHROMATIC_CAP} edges, got {}",
            g.edge_count()
        )));
    }
    Ok(())
}

/// Backtracking in edge-id order, ascending colors, with forward checking.
// With `interchangeable` every list is the same palette `0..q`, so an edge may
// only open the next unused color.
fn backtrack(g: &Multigraph, lists: &[Vec<Color>], interchangeable: bool) -> Option<Vec<Color>> {
    let m = g.edge_count();
    let mut col: Vec<Option<Color>> = vec![None; m];
    fn free(g: &Multigraph, col: &[Option<Color>], e: usize, c: Color) -> bool {
        let (u, v) = g.endpoints(e);
        g.incident(u)
            .iter()
            .chain(g.incident(v))
            .all(|&f| f == e || col[f] != Some(c))
    }
    fn rec(g: &Multigraph, lists: &[Vec<Color>], col: &mut Vec<Option<Color>>, e: usize, opened: Option<usize>) -> bool {
        if e == g.edge_count() {
            return true;
        }
        for &c in &lists[e] {
            if opened.is_some_and(|k| c > k) {
                break;
            }
            if !free(g, col, e, c) {
                continue;
            }
            col[e] = Some(c);
            let ok = (e + 1..g.edge_count()).all(|f| lists[f].iter().any(|&d| free(g, col, f, d)));
            let next = opened.map(|k| k.max(c + 1));
            if ok && rec(g, lists, col, e + 1, next) {
                return true;
            }
            col[e] = None;
        }
        false
    }
    if rec(g, lists, &mut col, 0, interchangeable.then_some(0)) {
        Some(col.into_iter().map(|c| c.unwrap()).collect())
    } else {
        None
    }
}

/// Exact chromatic index together with an optimal coloring.
pub fn brute_force_chromatic_index(g: &Multigraph) -> Result<(usize, PartialColoring)> {
    check_chromatic_cap(g)?;
    let mut q = g.max_degree();
    loop {
        let lists = vec![(0..q).collect::<Vec<_>>(); g.edge_count()];
        if let Some(c) = backtrack(g, &lists, true) {
            let mut out = PartialColoring::uncolored(g.edge_count());
            for (e, &x) in c.iter().enumerate() {
                out.set(e, x);
            }
            return Ok((q, out));
        }
        q += 1;
    }
}

/// A proper coloring from the given lists, or `None` when none exists.
pub fn brute_force_list_coloring(g: &Multigraph, lists: &ListAssignment) -> Result<Option<PartialColoring>> {
    check_chromatic_cap(g)?;
    if lists.len() != g.edge_count() {
        return Err(Error::Argument("list count differs from edge count".into()));
    }
    let ls: Vec<Vec<Color>> = (0..g.edge_count()).map(|e| lists.list(e).to_vec()).collect();
    Ok(backtrack(g, &ls, false).map(|c| {
        let mut out = PartialColoring::uncolored(g.edge_count());
        for (e, &x) in c.iter().enumerate() {
            out.set(e, x);
        }
        out
    }))
}
