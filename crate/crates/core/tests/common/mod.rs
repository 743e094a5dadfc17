#![allow(dead_code)]

use matchcolor::fractional::Rational;
use matchcolor::multigraph::{ListAssignment, Multigraph};
use matchcolor::rng::StreamRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn path(edges: usize) -> Multigraph {
    let mut g = Multigraph::new(edges + 1);
    for i in 0..edges {
        g.add_edge(i, i + 1).unwrap();
    }
    g
}

pub fn cycle(n: usize) -> Multigraph {
    let mut g = Multigraph::new(n);
    for i in 0..n {
        g.add_edge(i, (i + 1) % n).unwrap();
    }
    g
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Multigraph {
    Multigraph::from_edges(n, edges).unwrap()
}

/// Connected multigraph: a random spanning tree plus extra (possibly
/// parallel) edges, `n ≥ 2`, `m ≥ n - 1`.
pub fn connected(rng: &mut StreamRng, n: usize, m: usize) -> Multigraph {
    let mut g = Multigraph::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(order[i], order[j]).unwrap();
    }
    while g.edge_count() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Any multigraph with `m` edges on `n` vertices.
pub fn loose(rng: &mut StreamRng, n: usize, m: usize) -> Multigraph {
    let mut g = Multigraph::new(n);
    while g.edge_count() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Connected multigraph of bandwidth `band`: the path `0..n` is always
/// present, other pairs `{i, i+k}` with `k ≤ band` appear with probability
/// `p`, at most `skeleton_cap` distinct pairs in total. Each pair gets
/// between 1 and `max_mult` parallel edges.
pub fn banded(rng: &mut StreamRng, n: usize, band: usize, p: f64, max_mult: usize, skeleton_cap: usize) -> Multigraph {
    let mut pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mut extra = Vec::new();
    for k in 2..=band {
        for i in 0..n.saturating_sub(k) {
            if rng.gen_bool(p) {
                extra.push((i, i + k));
            }
        }
    }
    extra.shuffle(rng);
    extra.truncate(skeleton_cap.saturating_sub(pairs.len()));
    pairs.extend(extra);
    pairs.sort_unstable();
    let mut g = Multigraph::new(n);
    for (u, v) in pairs {
        for _ in 0..rng.gen_range(1..=max_mult) {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

pub fn ceil(r: Rational) -> usize {
    matchcolor::fractional::ceil(r) as usize
}

/// Every edge gets `0..size`.
pub fn uniform_lists(g: &Multigraph, size: usize) -> ListAssignment {
    ListAssignment::uniform(g.edge_count(), size)
}

/// Lists of `size` colors drawn from a palette of `⌈3·size/2⌉`, shifted by
/// the lower endpoint so that neighbouring edges overlap only partially.
pub fn skewed_lists(rng: &mut StreamRng, g: &Multigraph, size: usize) -> ListAssignment {
    let palette = (3 * size).div_ceil(2);
    let lists = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let start = (u.min(v) * 2 + rng.gen_range(0..2)) % palette;
            let mut l: Vec<usize> = (0..size).map(|k| (start + k) % palette).collect();
            l.sort_unstable();
            l
        })
        .collect();
    ListAssignment::new(lists)
}
