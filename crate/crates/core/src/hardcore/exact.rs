//! Exact partition functions by vertex-grouped deletion–contraction.
//!
//! Parallel edges are collapsed into one skeleton edge carrying the summed
//! activity. Non-isolated vertices are relabelled in BFS order and a state is
//! the set of still-available vertices as a `u128` mask. For the lowest
//! available vertex `v`,
//! `Z(S) = Z(S - v) + Σ_x w(v,x) Z(S - v - x)`,
//! memoised on masks with vertices that have no available neighbour stripped.
//! BFS order keeps the live frontier narrow on sparse skeletons.

use std::collections::{HashMap, VecDeque};

use rand::Rng;

use super::HardCoreModel;
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, Matching, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactLimits {
    /// Maximum number of skeleton (collapsed) edges.
    pub max_edges: usize,
    /// Maximum number of memoised states.
    pub max_states: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        ExactLimits {
            max_edges: 64,
            max_states: 2_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SkelEdge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
    pub parallel: Vec<(EdgeId, f64)>,
}

/// The simple graph obtained by merging parallel edges, over the
/// non-isolated vertices of the host.
#[derive(Clone, Debug)]
pub(crate) struct Collapsed {
    pub host_of: Vec<VertexId>,
    pub edges: Vec<SkelEdge>,
    pub adj: Vec<Vec<(usize, usize)>>,
}

impl Collapsed {
    pub fn new(model: &HardCoreModel) -> Self {
        let g = model.host();
        let n = g.vertex_count();
        let skel = g.skeleton();
        let mut local = vec![usize::MAX; n];
        let mut host_of = Vec::new();
        for s in 0..n {
            if local[s] != usize::MAX || skel[s].is_empty() {
                continue;
            }
            local[s] = host_of.len();
            host_of.push(s);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in skel[u].keys() {
                    if local[w] == usize::MAX {
                        local[w] = host_of.len();
                        host_of.push(w);
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut edges = Vec::new();
        let mut adj = vec![Vec::new(); host_of.len()];
        for (u, nbrs) in skel.iter().enumerate() {
            for (&w, es) in nbrs {
                if u < w {
                    let (a, b) = (local[u], local[w]);
                    let parallel: Vec<(EdgeId, f64)> =
                        es.iter().map(|&e| (e, model.activity(e))).collect();
                    let weight = parallel.iter().map(|p| p.1).sum();
                    let id = edges.len();
                    adj[a].push((b, id));
                    adj[b].push((a, id));
                    edges.push(SkelEdge { a, b, weight, parallel });
                }
            }
        }
        Collapsed { host_of, edges, adj }
    }

    /// Chooses one of the parallel host edges in proportion to activity.
    pub fn lift<R: Rng + ?Sized>(&self, skel_edge: usize, rng: &mut R) -> EdgeId {
        let se = &self.edges[skel_edge];
        if se.parallel.len() == 1 {
            return se.parallel[0].0;
        }
        let mut u = rng.gen::<f64>() * se.weight;
        for &(e, l) in &se.parallel {
            if u < l {
                return e;
            }
            u -= l;
        }
        se.parallel.last().unwrap().0
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).fold(0.0, f64::max)
    }
}

pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Memoised `ln Z` over vertex masks of the collapsed graph.
pub struct ExactTable {
    col: Collapsed,
    nbr: Vec<u128>,
    ln_w: Vec<f64>,
    memo: HashMap<u128, f64>,
    max_states: usize,
}

impl ExactTable {
    pub fn new(model: &HardCoreModel, limits: ExactLimits) -> Result<Self> {
        let col = Collapsed::new(model);
        if col.edges.len() > limits.max_edges {
            return Err(Error::Capacity(format!(
                "{} distinct adjacent pairs exceed the exact limit of {}; use the MCMC path",
                col.edges.len(),
                limits.max_edges
            )));
        }
        if col.host_of.len() > 128 {
            return Err(Error::Capacity(format!(
                "{} non-isolated vertices exceed the exact limit of 128; use the MCMC path",
                col.host_of.len()
            )));
        }
        let mut nbr = vec![0u128; col.host_of.len()];
        for (v, list) in col.adj.iter().enumerate() {
            for &(x, _) in list {
                nbr[v] |= 1u128 << x;
            }
        }
        let ln_w = col.edges.iter().map(|e| e.weight.ln()).collect();
        Ok(ExactTable {
            col,
            nbr,
            ln_w,
            memo: HashMap::new(),
            max_states: limits.max_states,
        })
    }

    pub fn full_mask(&self) -> u128 {
        let k = self.col.host_of.len();
        if k == 128 {
            u128::MAX
        } else {
            (1u128 << k) - 1
        }
    }

    fn strip(&self, s: u128) -> u128 {
        let mut out = s;
        let mut t = s;
        while t != 0 {
            let v = t.trailing_zeros() as usize;
            t &= t - 1;
            if self.nbr[v] & s == 0 {
                out &= !(1u128 << v);
            }
        }
        out
    }

    /// `ln Z` of the collapsed graph induced by the mask.
    pub fn ln_z(&mut self, s: u128) -> Result<f64> {
        let s = self.strip(s);
        if s == 0 {
            return Ok(0.0);
        }
        if let Some(&z) = self.memo.get(&s) {
            return Ok(z);
        }
        let v = s.trailing_zeros() as usize;
        let rest = s & !(1u128 << v);
        let mut acc = self.ln_z(rest)?;
        for k in 0..self.col.adj[v].len() {
            let (x, se) = self.col.adj[v][k];
            if rest >> x & 1 == 1 {
                let sub = self.ln_z(rest & !(1u128 << x))?;
                acc = log_add(acc, self.ln_w[se] + sub);
            }
        }
        if self.memo.len() >= self.max_states {
            return Err(Error::Capacity(format!(
                "exact partition function needs more than {} memo states; use the MCMC path",
                self.max_states
            )));
        }
        self.memo.insert(s, acc);
        Ok(acc)
    }

    /// Mask with the given host vertices removed.
    pub fn without(&self, removed: &[VertexId]) -> u128 {
        let mut s = self.full_mask();
        for &v in removed {
            if let Some(l) = self.col.host_of.iter().position(|&h| h == v) {
                s &= !(1u128 << l);
            }
        }
        s
    }

    /// Exact marginal of every host edge, indexed by host edge id.
    pub fn marginals(&mut self, host_edges: usize) -> Result<Vec<f64>> {
        let full = self.full_mask();
        let z = self.ln_z(full)?;
        let mut out = vec![0.0; host_edges];
        for i in 0..self.col.edges.len() {
            let (a, b) = (self.col.edges[i].a, self.col.edges[i].b);
            let sub = self.ln_z(full & !(1u128 << a) & !(1u128 << b))?;
            for &(e, l) in &self.col.edges[i].parallel {
                out[e] = (l.ln() + sub - z).exp();
            }
        }
        Ok(out)
    }

    /// Draws one matching exactly from the hard-core distribution.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Matching> {
        let mut s = self.full_mask();
        let mut chosen = Vec::new();
        loop {
            s = self.strip(s);
            if s == 0 {
                break;
            }
            let total = self.ln_z(s)?;
            let v = s.trailing_zeros() as usize;
            let rest = s & !(1u128 << v);
            let u: f64 = rng.gen();
            let mut cum = (self.ln_z(rest)? - total).exp();
            let mut pick: Option<(usize, usize)> = None;
            if u >= cum {
                for k in 0..self.col.adj[v].len() {
                    let (x, se) = self.col.adj[v][k];
                    if rest >> x & 1 == 0 {
                        continue;
                    }
                    cum += (self.ln_w[se] + self.ln_z(rest & !(1u128 << x))? - total).exp();
                    pick = Some((x, se));
                    if u < cum {
                        break;
                    }
                }
            }
            match pick {
                Some((x, se)) => {
                    chosen.push(self.col.lift(se, rng));
                    s = rest & !(1u128 << x);
                }
                None => s = rest,
            }
        }
        Ok(Matching::from_edges(chosen))
    }
}
