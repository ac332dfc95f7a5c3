//! Finite simple undirected graphs with stable vertex ids.
//!
//! Vertices are the integers `0..vertex_count`. Removing a vertex in the
//! reductions leaves its id in place as an isolated vertex, so ids never
//! shift between the graphs of a reduction trace. Isolated vertices carry no
//! rigidity-matrix rows and do not affect stress counts.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected edge stored as `(min, max)`. The derived order is the
/// canonical lexicographic edge order used for matrix rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge(usize, usize);

impl Edge {
    /// Normalizes the endpoint order. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop {a}-{a}");
        Edge(a.min(b), a.max(b))
    }

    pub fn try_new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        Ok(Edge(a.min(b), a.max(b)))
    }

    pub fn low(&self) -> usize {
        self.0
    }

    pub fn high(&self) -> usize {
        self.1
    }

    pub fn endpoints(&self) -> [usize; 2] {
        [self.0, self.1]
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: usize) -> Option<usize> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;

    fn try_from([a, b]: [usize; 2]) -> Result<Self> {
        Edge::try_new(a, b)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct Graph {
    adjacency: Vec<BTreeSet<usize>>,
    edge_count: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            vertex_count: g.vertex_count(),
            edges: g.edges().collect(),
        }
    }
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::from_edges(r.vertex_count, r.edges.into_iter().map(|e| (e.0, e.1)))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertex_count", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `vertex_count` vertices.
    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            adjacency: vec![BTreeSet::new(); vertex_count],
            edge_count: 0,
        }
    }

    /// Builds a simple graph, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(vertex_count);
        for (a, b) in edges {
            let e = Edge::try_new(a, b)?;
            g.check_vertex(e.1)?;
            if !g.insert(e) {
                return Err(Error::DuplicateEdge(e));
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.adjacency.len()
    }

    /// Edges in canonical lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.range(u + 1..).map(move |&v| Edge(u, v)))
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.adjacency
            .get(e.0)
            .is_some_and(|nbrs| nbrs.contains(&e.1))
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        a != b && self.has_edge(Edge::new(a, b))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.adjacency[v].len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(BTreeSet::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Number of vertices of exactly degree `d`.
    pub fn degree_census(&self, d: usize) -> usize {
        self.adjacency.iter().filter(|n| n.len() == d).count()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adjacency.iter().all(|n| n.len() == d)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
        }
    }

    fn insert(&mut self, e: Edge) -> bool {
        if self.adjacency[e.0].insert(e.1) {
            self.adjacency[e.1].insert(e.0);
            self.edge_count += 1;
            true
        } else {
            false
        }
    }

    fn remove(&mut self, e: Edge) -> bool {
        if self.adjacency[e.0].remove(&e.1) {
            self.adjacency[e.1].remove(&e.0);
            self.edge_count -= 1;
            true
        } else {
            false
        }
    }

    /// Copy of `self` with `removed` deleted and `added` inserted.
    pub fn edited(&self, removed: &[Edge], added: &[Edge]) -> Result<Graph> {
        let mut g = self.clone();
        for &e in removed {
            if !g.remove(e) {
                return Err(Error::MissingEdge(e));
            }
        }
        for &e in added {
            g.check_vertex(e.1)?;
            if !g.insert(e) {
                return Err(Error::DuplicateEdge(e));
            }
        }
        Ok(g)
    }

    pub fn without_edges(&self, removed: &[Edge]) -> Result<Graph> {
        self.edited(removed, &[])
    }

    pub fn incident_edges(&self, v: usize) -> Vec<Edge> {
        self.neighbors(v).map(|u| Edge::new(u, v)).collect()
    }

    /// Same vertex set, only the edges with both ends in `keep`.
    pub fn restricted_to(&self, keep: &BTreeSet<usize>) -> Graph {
        let mut g = Graph::empty(self.vertex_count());
        for e in self.edges() {
            if keep.contains(&e.0) && keep.contains(&e.1) {
                g.insert(e);
            }
        }
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.vertex_count();
        let mut g = Graph::empty(shift + other.vertex_count());
        for e in self.edges() {
            g.insert(e);
        }
        for e in other.edges() {
            g.insert(Edge(e.0 + shift, e.1 + shift));
        }
        g
    }

    /// Connected components (isolated vertices included), each sorted,
    /// ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Components with at least one edge.
    pub fn nontrivial_components(&self) -> Vec<Vec<usize>> {
        self.components()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// True when all vertices lie in one component. The empty graph counts
    /// as connected.
    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.components().len() == 1
    }

    /// Σ (deg(v) − 2) over all vertices of a connected graph. At least −2,
    /// with equality exactly for trees.
    pub fn degree_sum_defect(&self) -> Result<i64> {
        if self.vertex_count() == 0 {
            return Err(Error::Precondition("graph has no vertices".into()));
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.adjacency.iter().map(|n| n.len() as i64 - 2).sum())
    }

    /// Bridges in canonical order, found with an iterative low-link search.
    pub fn bridges(&self) -> Vec<Edge> {
        let n = self.vertex_count();
        let mut order = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut counter = 0;
        let mut bridges = Vec::new();
        let nbrs: Vec<Vec<usize>> = self
            .adjacency
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect();

        for root in 0..n {
            if order[root] != usize::MAX {
                continue;
            }
            // (vertex, parent, next neighbour index)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            order[root] = counter;
            low[root] = counter;
            counter += 1;
            while let Some(frame) = stack.last_mut() {
                let (u, parent, idx) = *frame;
                if idx < nbrs[u].len() {
                    frame.2 += 1;
                    let w = nbrs[u][idx];
                    if w == parent {
                        continue;
                    }
                    if order[w] == usize::MAX {
                        order[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push((w, u, 0));
                    } else {
                        low[u] = low[u].min(order[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if low[u] > order[parent] {
                            bridges.push(Edge::new(parent, u));
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }

    /// Bridges, minimal two-edge cuts and component counts.
    pub fn cut_analysis(&self) -> CutReport {
        let bridges = self.bridges();
        let bridge_set: BTreeSet<Edge> = bridges.iter().copied().collect();
        let mut two_edge_cuts = Vec::new();
        for e in self.edges().filter(|e| !bridge_set.contains(e)) {
            let mut reduced = self.clone();
            reduced.remove(e);
            for f in reduced.bridges() {
                if f > e && !bridge_set.contains(&f) {
                    two_edge_cuts.push((e, f));
                }
            }
        }
        let components = self.components();
        CutReport {
            bridges,
            two_edge_cuts,
            component_count: components.len(),
            nontrivial_component_count: components.iter().filter(|c| c.len() > 1).count(),
        }
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#`
    /// comments, optional `n <count>` header.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut declared: Option<usize> = None;
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens[0] == "n" {
                if tokens.len() != 2 || declared.is_some() || !pairs.is_empty() {
                    return Err(err(format!("misplaced or malformed header `{line}`")));
                }
                let count = tokens[1]
                    .parse()
                    .map_err(|_| err(format!("bad vertex count `{}`", tokens[1])))?;
                declared = Some(count);
                continue;
            }
            if tokens.len() != 2 {
                return Err(err(format!("expected two vertex ids, found `{line}`")));
            }
            let parse = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| err(format!("bad vertex id `{t}`")))
            };
            let (a, b) = (parse(tokens[0])?, parse(tokens[1])?);
            if a == b {
                return Err(err(format!("self-loop at vertex {a}")));
            }
            pairs.push((line_no, a, b));
        }
        let inferred = pairs
            .iter()
            .map(|&(_, a, b)| a.max(b) + 1)
            .max()
            .unwrap_or(0);
        let vertex_count = declared.unwrap_or(inferred);
        let mut g = Graph::empty(vertex_count);
        for (line, a, b) in pairs {
            let e = Edge::new(a, b);
            if e.1 >= vertex_count {
                return Err(Error::Parse {
                    line,
                    message: format!("vertex {} exceeds declared count {vertex_count}", e.1),
                });
            }
            if !g.insert(e) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate edge {e}"),
                });
            }
        }
        Ok(g)
    }

    /// Edge-list text with an explicit `n` header so isolated vertices
    /// survive a round trip.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.vertex_count());
        for e in self.edges() {
            let _ = writeln!(out, "{} {}", e.0, e.1);
        }
        out
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in self.vertices() {
            let _ = writeln!(out, "  {v};");
        }
        for e in self.edges() {
            let _ = writeln!(out, "  {} -- {};", e.0, e.1);
        }
        out.push_str("}\n");
        out
    }
}

/// Edge-connectivity summary of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub bridges: Vec<Edge>,
    /// Pairs `(e, f)` with `e < f`, neither a bridge, whose joint removal
    /// adds one component.
    pub two_edge_cuts: Vec<(Edge, Edge)>,
    pub component_count: usize,
    pub nontrivial_component_count: usize,
}
