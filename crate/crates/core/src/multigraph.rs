//! Multigraphs with parallel edges, matchings, colorings and list assignments.
//!
//! Vertices and edges are dense integer ids. Edge ids are assigned in
//! insertion order, so an edge-list document maps line order to edge id.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Color = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    incidence: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph {
            n,
            edges: Vec::new(),
            incidence: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Multigraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        if u >= self.n || v >= self.n {
            return Err(Error::Argument(format!(
                "edge ({u}, {v}) has an endpoint outside [0, {})",
                self.n
            )));
        }
        if u == v {
            return Err(Error::Argument(format!("self-loop at vertex {u}")));
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.incidence[u].push(id);
        self.incidence[v].push(id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    /// Maximum number of incident edges over all vertices; parallel edges
    /// each count.
    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Distinct neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self.incidence[v]
            .iter()
            .map(|&e| self.other_endpoint(e, v))
            .collect();
        set.into_iter().collect()
    }

    /// Simple-graph view: for each vertex, its distinct neighbours together
    /// with the parallel edge ids joining them.
    pub fn skeleton(&self) -> Vec<BTreeMap<VertexId, Vec<EdgeId>>> {
        let mut adj = vec![BTreeMap::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].entry(v).or_insert_with(Vec::new).push(e);
            adj[v].entry(u).or_insert_with(Vec::new).push(e);
        }
        adj
    }

    /// Multi-source BFS hop distances; `None` marks unreachable vertices.
    pub fn distances_from(&self, sources: &[VertexId]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &e in &self.incidence[u] {
                let w = self.other_endpoint(e, u);
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest finite distance between two vertices (0 for edgeless graphs).
    pub fn diameter(&self) -> usize {
        (0..self.n)
            .map(|v| {
                self.distances_from(&[v])
                    .into_iter()
                    .flatten()
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Vertices at distance strictly less than `d` from `sources`.
    pub fn ball(&self, sources: &[VertexId], d: usize) -> Vec<VertexId> {
        self.distances_from(sources)
            .into_iter()
            .enumerate()
            .filter_map(|(v, dv)| dv.filter(|&x| x < d).map(|_| v))
            .collect()
    }

    /// The set `S_{<d}(H)` and the multigraph it induces.
    pub fn ball_subgraph(&self, h: &[VertexId], d: usize) -> Result<(Vec<VertexId>, Subgraph)> {
        if h.is_empty() {
            return Err(Error::Argument("ball centre set is empty".into()));
        }
        if let Some(&v) = h.iter().find(|&&v| v >= self.n) {
            return Err(Error::Argument(format!("vertex {v} is not in the graph")));
        }
        let verts = self.ball(h, d);
        let mut inside = vec![false; self.n];
        for &v in &verts {
            inside[v] = true;
        }
        let sub = self.induced(&inside);
        Ok((verts, sub))
    }

    /// Subgraph on the same vertex set keeping the edges with both
    /// endpoints marked in `inside`.
    pub fn induced(&self, inside: &[bool]) -> Subgraph {
        self.edge_subgraph(|e| {
            let (u, v) = self.edges[e];
            inside[u] && inside[v]
        })
    }

    /// Subgraph on the same vertex set keeping the edges selected by `keep`.
    /// Edge ids are renumbered densely in ascending parent order.
    pub fn edge_subgraph(&self, mut keep: impl FnMut(EdgeId) -> bool) -> Subgraph {
        let mut graph = Multigraph::new(self.n);
        let mut to_parent = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if keep(e) {
                graph.edges.push((u, v));
                let id = graph.edges.len() - 1;
                graph.incidence[u].push(id);
                graph.incidence[v].push(id);
                to_parent.push(e);
            }
        }
        Subgraph { graph, to_parent }
    }

    /// `G` minus every edge of every matching. Vertex set unchanged.
    pub fn delete_matchings(&self, matchings: &[Matching]) -> Result<Subgraph> {
        let mut removed = vec![false; self.edges.len()];
        for m in matchings {
            for &e in m.edges() {
                if e >= self.edges.len() {
                    return Err(Error::Argument(format!("edge {e} is not in the graph")));
                }
                removed[e] = true;
            }
        }
        Ok(self.edge_subgraph(|e| !removed[e]))
    }

    /// Parses the `p <n> <m>` / `e <u> <v>` edge-list format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut graph: Option<Multigraph> = None;
        let mut declared_m = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let err = |message: String| Error::Parse { line, message };
            match fields[0] {
                "p" => {
                    if graph.is_some() {
                        return Err(err("duplicate problem line".into()));
                    }
                    if fields.len() != 3 {
                        return Err(err("expected `p <n> <m>`".into()));
                    }
                    let n = parse_usize(fields[1]).ok_or_else(|| err(format!("bad vertex count `{}`", fields[1])))?;
                    declared_m = parse_usize(fields[2]).ok_or_else(|| err(format!("bad edge count `{}`", fields[2])))?;
                    graph = Some(Multigraph::new(n));
                }
                "e" => {
                    let g = graph
                        .as_mut()
                        .ok_or_else(|| err("edge line before `p` line".into()))?;
                    if fields.len() != 3 {
                        return Err(err("expected `e <u> <v>`".into()));
                    }
                    let u = parse_usize(fields[1]).ok_or_else(|| err(format!("bad vertex `{}`", fields[1])))?;
                    let v = parse_usize(fields[2]).ok_or_else(|| err(format!("bad vertex `{}`", fields[2])))?;
                    if u == v {
                        return Err(err(format!("self-loop at vertex {u}")));
                    }
                    if u >= g.n || v >= g.n {
                        return Err(err(format!("vertex index out of range (n = {})", g.n)));
                    }
                    g.add_edge(u, v)?;
                }
                other => return Err(err(format!("unknown line type `{other}`"))),
            }
        }
        let g = graph.ok_or(Error::Parse {
            line: 0,
            message: "missing `p <n> <m>` line".into(),
        })?;
        if g.edge_count() != declared_m {
            return Err(Error::Parse {
                line: 0,
                message: format!("declared {declared_m} edges, found {}", g.edge_count()),
            });
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "e {u} {v}");
        }
        out
    }
}

fn parse_usize(s: &str) -> Option<usize> {
    s.parse().ok()
}

/// A subgraph sharing the parent's vertex ids, with a map from its own edge
/// ids back to parent edge ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Multigraph,
    pub to_parent: Vec<EdgeId>,
}

impl Subgraph {
    /// Inverse of `to_parent`, sized for the parent's edge count.
    pub fn from_parent(&self, parent_edges: usize) -> Vec<Option<EdgeId>> {
        let mut map = vec![None; parent_edges];
        for (local, &p) in self.to_parent.iter().enumerate() {
            map[p] = Some(local);
        }
        map
    }
}

/// A set of edge ids, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching(Vec<EdgeId>);

impl Matching {
    pub fn empty() -> Self {
        Matching(Vec::new())
    }

    pub fn from_edges(mut edges: Vec<EdgeId>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Matching(edges)
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    /// True when every member is an edge of `g` and no two members share
    /// an endpoint.
    pub fn is_matching_in(&self, g: &Multigraph) -> bool {
        let mut used = vec![false; g.vertex_count()];
        for &e in &self.0 {
            if e >= g.edge_count() {
                return false;
            }
            let (u, v) = g.endpoints(e);
            if used[u] || used[v] {
                return false;
            }
            used[u] = true;
            used[v] = true;
        }
        true
    }

    /// Vertices covered by the matching.
    pub fn covered(&self, g: &Multigraph) -> Vec<bool> {
        let mut used = vec![false; g.vertex_count()];
        for &e in &self.0 {
            let (u, v) = g.endpoints(e);
            used[u] = true;
            used[v] = true;
        }
        used
    }

    /// Re-expresses a matching of a subgraph in parent edge ids.
    pub fn lift(&self, sub: &Subgraph) -> Matching {
        Matching::from_edges(self.0.iter().map(|&e| sub.to_parent[e]).collect())
    }
}

/// Edge id to optional color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialColoring {
    colors: Vec<Option<Color>>,
}

impl PartialColoring {
    pub fn uncolored(m: usize) -> Self {
        PartialColoring { colors: vec![None; m] }
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.colors[e]
    }

    pub fn set(&mut self, e: EdgeId, c: Color) {
        self.colors[e] = Some(c);
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn distinct_colors(&self) -> usize {
        self.colors.iter().flatten().collect::<BTreeSet<_>>().len()
    }

    /// `{edge id: color}` for colored edges.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .colors
            .iter()
            .enumerate()
            .filter_map(|(e, c)| c.map(|c| (e.to_string(), serde_json::Value::from(c))))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(value: &serde_json::Value, m: usize) -> Result<Self> {
        let map: BTreeMap<String, Color> = serde_json::from_value(value.clone())?;
        let mut col = PartialColoring::uncolored(m);
        for (k, c) in map {
            let e: EdgeId = k
                .parse()
                .map_err(|_| Error::Argument(format!("bad edge id `{k}`")))?;
            if e >= m {
                return Err(Error::Argument(format!("edge id {e} out of range")));
            }
            col.set(e, c);
        }
        Ok(col)
    }
}

/// Edge id to the sorted set of colors allowed on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListAssignment {
    lists: Vec<Vec<Color>>,
}

impl ListAssignment {
    pub fn new(lists: Vec<Vec<Color>>) -> Self {
        let lists = lists
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        ListAssignment { lists }
    }

    pub fn uniform(m: usize, colors: usize) -> Self {
        ListAssignment {
            lists: vec![(0..colors).collect(); m],
        }
    }

    pub fn list(&self, e: EdgeId) -> &[Color] {
        &self.lists[e]
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn allows(&self, e: EdgeId, c: Color) -> bool {
        self.lists[e].binary_search(&c).is_ok()
    }

    /// Parses `{edge id: [colors]}`; every edge in `[0, m)` must appear.
    pub fn from_json_str(text: &str, m: usize) -> Result<Self> {
        let map: BTreeMap<String, Vec<Color>> = serde_json::from_str(text)?;
        let mut lists: Vec<Option<Vec<Color>>> = vec![None; m];
        for (k, l) in map {
            let e: EdgeId = k
                .parse()
                .map_err(|_| Error::Argument(format!("bad edge id `{k}`")))?;
            if e >= m {
                return Err(Error::Argument(format!("edge id {e} out of range")));
            }
            lists[e] = Some(l);
        }
        let lists = lists
            .into_iter()
            .enumerate()
            .map(|(e, l)| l.ok_or_else(|| Error::Argument(format!("edge {e} has no list"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ListAssignment::new(lists))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .lists
            .iter()
            .enumerate()
            .map(|(e, l)| (e.to_string(), serde_json::Value::from(l.clone())))
            .collect();
        serde_json::Value::Object(map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub first: EdgeId,
    pub second: EdgeId,
    pub vertex: VertexId,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringReport {
    pub proper: bool,
    pub conflicts: Vec<Conflict>,
    pub colors_used: usize,
    pub uncolored: Vec<EdgeId>,
    pub list_violations: Vec<(EdgeId, Color)>,
}

impl ColoringReport {
    /// Proper, total, and list-respecting.
    pub fn is_clean(&self) -> bool {
        self.proper && self.uncolored.is_empty() && self.list_violations.is_empty()
    }
}

pub fn validate_coloring(
    g: &Multigraph,
    col: &PartialColoring,
    lists: Option<&ListAssignment>,
) -> ColoringReport {
    let mut conflicts = Vec::new();
    for v in 0..g.vertex_count() {
        let inc = g.incident(v);
        for (i, &a) in inc.iter().enumerate() {
            for &b in &inc[i + 1..] {
                if let (Some(ca), Some(cb)) = (col.get(a), col.get(b)) {
                    if ca == cb {
                        conflicts.push(Conflict {
                            first: a.min(b),
                            second: a.max(b),
                            vertex: v,
                            color: ca,
                        });
                    }
                }
            }
        }
    }
    let uncolored = (0..g.edge_count()).filter(|&e| col.get(e).is_none()).collect();
    let list_violations = match lists {
        Some(l) => (0..g.edge_count())
            .filter_map(|e| col.get(e).filter(|&c| !l.allows(e, c)).map(|c| (e, c)))
            .collect(),
        None => Vec::new(),
    };
    ColoringReport {
        proper: conflicts.is_empty(),
        conflicts,
        colors_used: col.distinct_colors(),
        uncolored,
        list_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Multigraph {
        Multigraph::parse("p 3 3\ne 0 1\ne 1 2\ne 2 0\n").unwrap()
    }

    fn path4() -> Multigraph {
        Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn parses_triangle_and_double_edge() {
        let k3 = triangle();
        assert_eq!(k3.edge_count(), 3);
        assert_eq!(k3.endpoints(2), (2, 0));
        let d = Multigraph::parse("# two parallel edges\np 2 2\ne 0 1\ne 0 1").unwrap();
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.incident(0), &[0, 1]);
    }

    #[test]
    fn parse_errors_name_the_line() {
        match Multigraph::parse("p 2 1\ne 0 0") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("self-loop"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Multigraph::parse("p 2 1\ne 0 5"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Multigraph::parse("p 2 1\nx 0 1"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Multigraph::parse("p 2 1\ne 0"), Err(Error::Parse { line: 2, .. })));
        assert!(Multigraph::parse("e 0 0").is_err());
    }

    #[test]
    fn max_degree_counts_parallel_edges() {
        assert_eq!(triangle().max_degree(), 2);
        assert_eq!(Multigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap().max_degree(), 2);
        assert_eq!(path4().max_degree(), 2);
    }

    #[test]
    fn balls() {
        let k3 = triangle();
        let (s, sub) = k3.ball_subgraph(&[0], 1).unwrap();
        assert_eq!(s, vec![0]);
        assert_eq!(sub.graph.edge_count(), 0);
        let (s, sub) = k3.ball_subgraph(&[0], 2).unwrap();
        assert_eq!(s, vec![0, 1, 2]);
        assert_eq!(sub.graph.edge_count(), 3);
        let (s, sub) = path4().ball_subgraph(&[0], 2).unwrap();
        assert_eq!(s, vec![0, 1]);
        assert_eq!(sub.to_parent, vec![0]);
        assert!(k3.ball_subgraph(&[], 2).is_err());
    }

    #[test]
    fn deleting_matchings() {
        let k3 = triangle();
        let g = k3.delete_matchings(&[Matching::from_edges(vec![0])]).unwrap();
        assert_eq!(g.to_parent, vec![1, 2]);
        assert_eq!((g.graph.degree(0), g.graph.degree(1), g.graph.degree(2)), (1, 1, 2));
        let all: Vec<Matching> = (0..3).map(|e| Matching::from_edges(vec![e])).collect();
        assert_eq!(k3.delete_matchings(&all).unwrap().graph.edge_count(), 0);
        let d = Multigraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(d.delete_matchings(&[Matching::from_edges(vec![0])]).unwrap().to_parent, vec![1]);
        assert!(k3.delete_matchings(&[Matching::from_edges(vec![9])]).is_err());
    }

    #[test]
    fn coloring_reports() {
        let k3 = triangle();
        let mut col = PartialColoring::uncolored(3);
        col.set(0, 1);
        col.set(1, 2);
        col.set(2, 3);
        let r = validate_coloring(&k3, &col, None);
        assert!(r.proper && r.is_clean());
        assert_eq!(r.colors_used, 3);

        let mut bad = PartialColoring::uncolored(3);
        bad.set(0, 1);
        bad.set(1, 1);
        let r = validate_coloring(&k3, &bad, None);
        assert!(!r.proper);
        assert_eq!(r.conflicts, vec![Conflict { first: 0, second: 1, vertex: 1, color: 1 }]);
        assert_eq!(r.uncolored, vec![2]);

        let single = Multigraph::from_edges(2, &[(0, 1)]).unwrap();
        let mut c = PartialColoring::uncolored(1);
        c.set(0, 5);
        let lists = ListAssignment::new(vec![vec![1, 2]]);
        let r = validate_coloring(&single, &c, Some(&lists));
        assert_eq!(r.list_violations, vec![(0, 5)]);
        assert!(!r.is_clean());
    }

    #[test]
    fn json_shapes() {
        let mut c = PartialColoring::uncolored(2);
        c.set(1, 4);
        let v = c.to_json();
        assert_eq!(v, serde_json::json!({"1": 4}));
        assert_eq!(PartialColoring::from_json(&v, 2).unwrap(), c);
        let l = ListAssignment::from_json_str(r#"{"0": [3, 1], "1": [2]}"#, 2).unwrap();
        assert_eq!(l.list(0), &[1, 3]);
        assert!(ListAssignment::from_json_str(r#"{"0": [1]}"#, 2).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Multigraph> {
        (2usize..9).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..20).prop_map(move |pairs| {
                let mut g = Multigraph::new(n);
                for (u, v) in pairs {
                    if u != v {
                        g.add_edge(u, v).unwrap();
                    }
                }
                g
            })
        })
    }

    fn greedy_matching(g: &Multigraph, offset: usize) -> Matching {
        let mut used = vec![false; g.vertex_count()];
        let mut m = Vec::new();
        for k in 0..g.edge_count() {
            let e = (k + offset) % g.edge_count();
            let (u, v) = g.endpoints(e);
            if !used[u] && !used[v] {
                used[u] = true;
                used[v] = true;
                m.push(e);
            }
        }
        Matching::from_edges(m)
    }

    proptest! {
        #[test]
        fn text_round_trip(g in arb_graph()) {
            let back = Multigraph::parse(&g.to_text()).unwrap();
            prop_assert_eq!(back, g);
        }

        #[test]
        fn big_ball_is_component(g in arb_graph()) {
            let d = g.diameter() + 1;
            let (s, _) = g.ball_subgraph(&[0], d).unwrap();
            let reach = g.distances_from(&[0]).iter().filter(|x| x.is_some()).count();
            prop_assert_eq!(s.len(), reach);
        }

        #[test]
        fn deletion_order_independent_and_degree_drop(g in arb_graph(), a in 0usize..20, b in 0usize..20) {
            prop_assume!(g.edge_count() > 0);
            let m1 = greedy_matching(&g, a);
            let m2 = greedy_matching(&g, b);
            prop_assert!(m1.is_matching_in(&g));
            let x = g.delete_matchings(&[m1.clone(), m2.clone()]).unwrap();
            let y = g.delete_matchings(&[m2, m1.clone()]).unwrap();
            prop_assert_eq!(&x, &y);
            let single = g.delete_matchings(&[m1]).unwrap();
            for v in 0..g.vertex_count() {
                prop_assert!(single.graph.degree(v) + 1 >= g.degree(v));
            }
        }
    }
}
