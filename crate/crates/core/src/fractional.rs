//! Fractional chromatic index `χ* = max(Δ, Γ)` and the odd-set violation
//! oracle.
//!
//! `Γ` is the maximum of `|E(H)| / ⌊|H|/2⌋` over vertex sets with at least two
//! vertices. Even sets never beat `Δ`, and a disconnected set never beats its
//! best component, so only connected odd sets of size ≥ 3 are enumerated.
//! Enumeration grows connected sets from their minimum vertex, visiting each
//! connected set exactly once.

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, VertexId};

pub type Rational = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddSetCertificate {
    pub vertices: Vec<VertexId>,
    pub edge_count: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub ratio: Rational,
}

impl OddSetCertificate {
    fn new(mut vertices: Vec<VertexId>, edge_count: usize) -> Self {
        vertices.sort_unstable();
        let half = (vertices.len() / 2) as i64;
        OddSetCertificate {
            ratio: Rational::new(edge_count as i64, half),
            vertices,
            edge_count,
        }
    }

    /// Recounts `|E(H)|` in `g` and checks the stored ratio.
    pub fn recount_matches(&self, g: &Multigraph) -> bool {
        let mut inside = vec![false; g.vertex_count()];
        for &v in &self.vertices {
            inside[v] = true;
        }
        let count = g
            .edges()
            .iter()
            .filter(|&&(u, v)| inside[u] && inside[v])
            .count();
        count == self.edge_count
            && self.vertices.len() >= 2
            && self.ratio == Rational::new(count as i64, (self.vertices.len() / 2) as i64)
    }

    /// `|E(H)| > ((|H|-1)/2)·c`
    pub fn violates(&self, c: Rational) -> bool {
        exceeds(self.edge_count, self.vertices.len(), c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Degree { vertex: VertexId, degree: usize },
    OddSet(OddSetCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FractionalIndex {
    #[serde(serialize_with = "ser_ratio")]
    pub value: Rational,
    pub witness: Witness,
    /// False when the odd-set search was capped below `n` and the degree
    /// bound could not rule out larger dense sets.
    pub exact: bool,
    /// Certified upper bound; equals `value` when `exact`.
    #[serde(serialize_with = "ser_ratio")]
    pub upper_bound: Rational,
    pub size_cap: usize,
}

pub fn ser_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn exceeds(edge_count: usize, size: usize, c: Rational) -> bool {
    // 2|E| > (k-1) c  with c = p/q  <=>  2|E| q > (k-1) p
    let lhs = 2 * edge_count as i128 * *c.denom() as i128;
    let rhs = (size as i128 - 1) * *c.numer() as i128;
    lhs > rhs
}

/// Skeleton adjacency with multiplicities, used by the enumerator.
fn skeleton(g: &Multigraph) -> Vec<Vec<(VertexId, usize)>> {
    g.skeleton()
        .into_iter()
        .map(|m| m.into_iter().map(|(w, es)| (w, es.len())).collect())
        .collect()
}

/// Visits every connected vertex set of size in `[1, cap]` once, passing the
/// (unsorted) vertex list and its induced edge count.
pub fn for_each_connected_set(g: &Multigraph, cap: usize, mut visit: impl FnMut(&[VertexId], usize)) {
    let adj = skeleton(g);
    let n = g.vertex_count();
    let mut in_sub = vec![false; n];
    let mut near = vec![0u32; n];
    let mut sub = Vec::with_capacity(cap);
    for root in 0..n {
        if cap == 0 {
            break;
        }
        in_sub[root] = true;
        for &(u, _) in &adj[root] {
            near[u] += 1;
        }
        sub.push(root);
        let ext: Vec<VertexId> = adj[root].iter().map(|&(u, _)| u).filter(|&u| u > root).collect();
        extend(&adj, root, cap, &mut sub, ext, 0, &mut in_sub, &mut near, &mut visit);
        sub.pop();
        for &(u, _) in &adj[root] {
            near[u] -= 1;
        }
        in_sub[root] = false;
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    adj: &[Vec<(VertexId, usize)>],
    root: VertexId,
    cap: usize,
    sub: &mut Vec<VertexId>,
    mut ext: Vec<VertexId>,
    edges: usize,
    in_sub: &mut [bool],
    near: &mut [u32],
    visit: &mut impl FnMut(&[VertexId], usize),
) {
    visit(sub, edges);
    if sub.len() == cap {
        return;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        let mut added = 0;
        for &(u, mult) in &adj[w] {
            if in_sub[u] {
                added += mult;
            } else if u > root && near[u] == 0 {
                next.push(u);
            }
        }
        in_sub[w] = true;
        for &(u, _) in &adj[w] {
            near[u] += 1;
        }
        sub.push(w);
        extend(adj, root, cap, sub, next, edges + added, in_sub, near, visit);
        sub.pop();
        for &(u, _) in &adj[w] {
            near[u] -= 1;
        }
        in_sub[w] = false;
    }
}

/// Largest odd `k ≤ cap` for which the `k` largest degrees could support
/// `|E(H)| > ((k-1)/2)·c`; sets beyond it cannot violate.
fn degree_feasible_cap(g: &Multigraph, c: Rational, cap: usize) -> usize {
    let mut degs: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    let mut best = 0;
    let mut sum = 0usize;
    for (i, d) in degs.iter().enumerate() {
        let k = i + 1;
        if k > cap {
            break;
        }
        sum += d;
        // |E(H)| <= floor(sum/2)
        if k >= 3 && k % 2 == 1 && exceeds(sum / 2, k, c) {
            best = k;
        }
    }
    best
}

/// Searches connected odd vertex sets `H` with `3 ≤ |H| ≤ vertex_cap` for
/// `|E(H)| > ((|H|-1)/2)·c`. Exhaustive within the cap; among violators the
/// lexicographically smallest sorted vertex list is returned.
pub fn find_violated_matching_constraint(
    g: &Multigraph,
    c: Rational,
    vertex_cap: usize,
) -> Option<OddSetCertificate> {
    let cap = degree_feasible_cap(g, c, vertex_cap.min(g.vertex_count()));
    if cap < 3 {
        return None;
    }
    let mut best: Option<Vec<VertexId>> = None;
    let mut best_edges = 0;
    let mut scratch = Vec::new();
    for_each_connected_set(g, cap, |set, edges| {
        let k = set.len();
        if k < 3 || k % 2 == 0 || !exceeds(edges, k, c) {
            return;
        }
        scratch.clear();
        scratch.extend_from_slice(set);
        scratch.sort_unstable();
        if best.as_ref().map_or(true, |b| scratch < *b) {
            best = Some(scratch.clone());
            best_edges = edges;
        }
    });
    best.map(|vs| OddSetCertificate::new(vs, best_edges))
}

/// Fractional chromatic index. With `size_cap` below `n` the odd-set search is
/// bounded; the result then carries a certified upper bound and `exact` tells
/// whether the bound closes the gap.
pub fn chi_star(g: &Multigraph, size_cap: Option<usize>) -> Result<FractionalIndex> {
    if g.edge_count() == 0 {
        return Err(Error::Argument("fractional chromatic index of an edgeless graph".into()));
    }
    let n = g.vertex_count();
    let cap = size_cap.unwrap_or(n).min(n);
    let delta = g.max_degree();
    let delta_vertex = (0..n).find(|&v| g.degree(v) == delta).unwrap();

    let mut best: Option<(Rational, Vec<VertexId>, usize)> = None;
    let mut scratch = Vec::new();
    for_each_connected_set(g, cap, |set, edges| {
        let k = set.len();
        if k < 3 || k % 2 == 0 {
            return;
        }
        let ratio = Rational::new(edges as i64, (k / 2) as i64);
        let better = match &best {
            None => true,
            Some((r, vs, _)) => {
                if ratio != *r {
                    ratio > *r
                } else {
                    scratch.clear();
                    scratch.extend_from_slice(set);
                    scratch.sort_unstable();
                    scratch < *vs
                }
            }
        };
        if better {
            let mut vs = set.to_vec();
            vs.sort_unstable();
            best = Some((ratio, vs, edges));
        }
    });

    let delta_r = Rational::from_integer(delta as i64);
    let (value, witness) = match best {
        Some((r, vs, edges)) if r > delta_r => (r, Witness::OddSet(OddSetCertificate::new(vs, edges))),
        _ => (
            delta_r,
            Witness::Degree {
                vertex: delta_vertex,
                degree: delta,
            },
        ),
    };

    // Odd sets larger than the cap: 2|E(H)| <= sum of the k largest degrees.
    let mut upper = value;
    if cap < n {
        let mut degs: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        degs.sort_unstable_by(|a, b| b.cmp(a));
        let mut sum = 0usize;
        for (i, d) in degs.iter().enumerate() {
            let k = i + 1;
            sum += d;
            if k > cap && k % 2 == 1 && k >= 3 {
                let bound = Rational::new((sum / 2) as i64, (k / 2) as i64);
                if bound > upper {
                    upper = bound;
                }
            }
        }
    }
    Ok(FractionalIndex {
        exact: upper == value,
        value,
        witness,
        upper_bound: upper,
        size_cap: cap,
    })
}

/// Parses `a/b`, an integer, or a plain decimal such as `0.05` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Argument(format!("`{text}` is not a rational number"));
    if let Some((a, b)) = t.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(a, b));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let neg = int.starts_with('-');
    let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let n: i64 = digits.parse().map_err(|_| bad())?;
    let r = Rational::new(n, 10i64.pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

/// `⌈r⌉` for a positive rational.
pub fn ceil(r: Rational) -> i64 {
    let q = r.numer().div_euclid(*r.denom());
    if (r - Rational::from_integer(q)).is_zero() {
        q
    } else {
        q + 1
    }
}
