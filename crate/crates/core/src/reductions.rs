//! Stress-count preserving (or controlled) graph reductions, recorded as
//! replayable steps, and the driver that reduces a bounded-degree graph to
//! the empty graph while certifying `s(G) ≤ z(G)`.
//!
//! Removed vertices stay in the graph as isolated vertices, so every graph in
//! a trace has the same vertex set and edge ids stay comparable.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::bounds::{check_lemma_hypotheses, format_ratio, potential_unchecked};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::rigidity::{generic_rank, DEFAULT_SEED, DEFAULT_TRIALS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    DeleteLowDegreeVertex,
    DeleteVertexGeneral,
    RemoveBridge,
    RemoveTwoCut,
    RemoveEdge,
    DisconnectSplit,
    InverseOneExtension,
    InverseOneExtensionDeg4,
    PeelClosure,
    /// A whole component removed with its stress count computed directly.
    BaseCase,
}

/// Relation `s(pre) ⋈ s(post) + offset` where `⋈` is `=` or `≤`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RelationRepr", try_from = "RelationRepr")]
pub enum StressRelation {
    Equal,
    AtMost,
    AtMostPlus(usize),
    EqualPlus(usize),
}

#[derive(Serialize, Deserialize)]
struct RelationRepr {
    relation: String,
    offset: usize,
}

impl From<StressRelation> for RelationRepr {
    fn from(r: StressRelation) -> Self {
        RelationRepr {
            relation: r.name().to_string(),
            offset: r.offset(),
        }
    }
}

impl TryFrom<RelationRepr> for StressRelation {
    type Error = Error;

    fn try_from(r: RelationRepr) -> Result<Self> {
        let exact = match r.relation.as_str() {
            "equal" | "eq_plus" => true,
            "le" | "le_plus" => false,
            other => {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("unknown relation {other:?}"),
                })
            }
        };
        Ok(StressRelation::from_parts(exact, r.offset))
    }
}

impl StressRelation {
    pub fn from_parts(exact: bool, offset: usize) -> Self {
        match (exact, offset) {
            (true, 0) => StressRelation::Equal,
            (true, k) => StressRelation::EqualPlus(k),
            (false, 0) => StressRelation::AtMost,
            (false, k) => StressRelation::AtMostPlus(k),
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, StressRelation::Equal | StressRelation::EqualPlus(_))
    }

    pub fn offset(self) -> usize {
        match self {
            StressRelation::Equal | StressRelation::AtMost => 0,
            StressRelation::AtMostPlus(k) | StressRelation::EqualPlus(k) => k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StressRelation::Equal => "equal",
            StressRelation::AtMost => "le",
            StressRelation::AtMostPlus(_) => "le_plus",
            StressRelation::EqualPlus(_) => "eq_plus",
        }
    }

    /// Composition: `self` relates `a` to `b`, `next` relates `b` to `c`.
    pub fn then(self, next: StressRelation) -> StressRelation {
        StressRelation::from_parts(
            self.is_exact() && next.is_exact(),
            self.offset() + next.offset(),
        )
    }

    pub fn holds(self, before: usize, after: usize) -> bool {
        let rhs = after + self.offset();
        if self.is_exact() {
            before == rhs
        } else {
            before <= rhs
        }
    }
}

impl fmt::Display for StressRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.is_exact() { "=" } else { "<=" };
        match self.offset() {
            0 => write!(f, "s(pre) {op} s(post)"),
            k => write!(f, "s(pre) {op} s(post) + {k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    pub removed_vertices: Vec<usize>,
    pub removed_edges: Vec<Edge>,
    pub added_edges: Vec<Edge>,
    pub relation: StressRelation,
}

impl ReductionStep {
    /// The post-graph. Fails if an edge is missing or duplicated, or a
    /// removed vertex keeps an edge.
    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        let h = g.edited(&self.removed_edges, &self.added_edges)?;
        for &v in &self.removed_vertices {
            if h.degree(v)? != 0 {
                return Err(Error::Precondition(format!(
                    "removed vertex {v} still has edges"
                )));
            }
        }
        Ok(h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub initial_graph: Graph,
    pub steps: Vec<ReductionStep>,
    pub final_graph: Graph,
    /// `s(initial) ⋈ s(final) + offset`.
    pub accumulated_relation: StressRelation,
}

/// Stress counts along a replayed trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceCheck {
    /// `stresses[i]` is the stress count before step `i`; the last entry is
    /// the final graph's.
    pub stresses: Vec<usize>,
    /// Steps whose relation failed numerically.
    pub failed_steps: Vec<usize>,
}

impl TraceCheck {
    pub fn is_valid(&self) -> bool {
        self.failed_steps.is_empty()
    }
}

fn stress(g: &Graph) -> usize {
    g.edge_count() - generic_rank(g, DEFAULT_TRIALS, DEFAULT_SEED)
}

impl ReductionTrace {
    pub fn new(g: &Graph) -> Self {
        ReductionTrace {
            initial_graph: g.clone(),
            steps: Vec::new(),
            final_graph: g.clone(),
            accumulated_relation: StressRelation::Equal,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends a step applied to the current final graph.
    pub fn push(&mut self, step: ReductionStep) -> Result<()> {
        self.final_graph = step.apply(&self.final_graph)?;
        self.accumulated_relation = self.accumulated_relation.then(step.relation);
        self.steps.push(step);
        Ok(())
    }

    /// Appends every step of `other`, which must start at our final graph.
    pub fn append(&mut self, other: ReductionTrace) -> Result<()> {
        if other.initial_graph != self.final_graph {
            return Err(Error::Precondition("traces do not chain".into()));
        }
        for step in other.steps {
            self.push(step)?;
        }
        Ok(())
    }

    /// Every graph of the trace, initial first.
    pub fn graphs(&self) -> Result<Vec<Graph>> {
        let mut out = vec![self.initial_graph.clone()];
        for step in &self.steps {
            let next = step.apply(out.last().unwrap())?;
            out.push(next);
        }
        if out.last() != Some(&self.final_graph) {
            return Err(Error::Precondition(
                "replay does not reach the final graph".into(),
            ));
        }
        Ok(out)
    }

    /// Replays the trace and checks each step's relation against generic
    /// ranks. Steps that only delete edges must also not increase the
    /// stress count.
    pub fn verify(&self) -> Result<TraceCheck> {
        let graphs = self.graphs()?;
        let stresses: Vec<usize> = graphs.iter().map(stress).collect();
        let failed_steps = self
            .steps
            .iter()
            .enumerate()
            .filter(|(i, step)| {
                let (before, after) = (stresses[*i], stresses[i + 1]);
                let monotone = !step.added_edges.is_empty() || after <= before;
                !(step.relation.holds(before, after) && monotone)
            })
            .map(|(i, _)| i)
            .collect();
        Ok(TraceCheck {
            stresses,
            failed_steps,
        })
    }

    /// The trace folded into one step of the given kind. Only meaningful
    /// for traces that add no edges.
    pub fn collapse(&self, kind: ReductionKind) -> ReductionStep {
        let mut removed_edges: Vec<Edge> = self
            .steps
            .iter()
            .flat_map(|s| s.removed_edges.iter().copied())
            .collect();
        removed_edges.sort_unstable();
        let removed_vertices = self
            .steps
            .iter()
            .flat_map(|s| s.removed_vertices.iter().copied())
            .collect();
        ReductionStep {
            kind,
            removed_vertices,
            removed_edges,
            added_edges: Vec::new(),
            relation: self.accumulated_relation,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

fn present(g: &Graph, e: Edge) -> Result<()> {
    g.check_vertex(e.high())?;
    if g.has_edge(e) {
        Ok(())
    } else {
        Err(Error::MissingEdge(e))
    }
}

/// Deletes `v` with its edges. Exact for degree at most 2; otherwise
/// `s(pre) ≤ s(post) + deg − 2`.
pub fn delete_vertex(g: &Graph, v: usize) -> Result<(Graph, ReductionStep)> {
    let degree = g.degree(v)?;
    let (kind, relation) = if degree <= 2 {
        (ReductionKind::DeleteLowDegreeVertex, StressRelation::Equal)
    } else {
        (
            ReductionKind::DeleteVertexGeneral,
            StressRelation::AtMostPlus(degree - 2),
        )
    };
    let step = ReductionStep {
        kind,
        removed_vertices: vec![v],
        removed_edges: g.incident_edges(v),
        added_edges: Vec::new(),
        relation,
    };
    Ok((step.apply(g)?, step))
}

pub fn remove_bridge(g: &Graph, e: Edge) -> Result<(Graph, ReductionStep)> {
    present(g, e)?;
    if !g.bridges().contains(&e) {
        return Err(Error::Precondition(format!("{e} is not a bridge")));
    }
    let step = ReductionStep {
        kind: ReductionKind::RemoveBridge,
        removed_vertices: Vec::new(),
        removed_edges: vec![e],
        added_edges: Vec::new(),
        relation: StressRelation::Equal,
    };
    Ok((step.apply(g)?, step))
}

pub fn remove_two_cut(g: &Graph, e1: Edge, e2: Edge) -> Result<(Graph, ReductionStep)> {
    present(g, e1)?;
    present(g, e2)?;
    if e1 == e2 {
        return Err(Error::Precondition("cut edges must differ".into()));
    }
    let bridges = g.bridges();
    if let Some(b) = [e1, e2].into_iter().find(|e| bridges.contains(e)) {
        return Err(Error::Precondition(format!("{b} alone disconnects")));
    }
    let h = g.without_edges(&[e1, e2])?;
    if h.component_count() != g.component_count() + 1 {
        return Err(Error::Precondition(format!(
            "{{{e1}, {e2}}} is not an edge cut"
        )));
    }
    let mut removed_edges = vec![e1, e2];
    removed_edges.sort_unstable();
    let step = ReductionStep {
        kind: ReductionKind::RemoveTwoCut,
        removed_vertices: Vec::new(),
        removed_edges,
        added_edges: Vec::new(),
        relation: StressRelation::Equal,
    };
    Ok((h, step))
}

/// Deletes one edge: `s(pre) ≤ s(post) + 1`.
pub fn remove_edge(g: &Graph, e: Edge) -> Result<(Graph, ReductionStep)> {
    present(g, e)?;
    let step = ReductionStep {
        kind: ReductionKind::RemoveEdge,
        removed_vertices: Vec::new(),
        removed_edges: vec![e],
        added_edges: Vec::new(),
        relation: StressRelation::AtMostPlus(1),
    };
    Ok((step.apply(g)?, step))
}

/// Result of [`disconnect_split`]. Both parts keep the full vertex set;
/// components of the input not touched by the cut belong to neither.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub first: Graph,
    pub second: Graph,
    pub step: ReductionStep,
}

/// `K(V3) ∪ K(V4) ∪ cut` for a cut oriented from `side` to its complement.
fn auxiliary_graph(n: usize, cut: &[Edge], side: &BTreeSet<usize>) -> Result<Graph> {
    let mut near = BTreeSet::new();
    let mut far = BTreeSet::new();
    for e in cut {
        let (a, b) = if side.contains(&e.low()) {
            (e.low(), e.high())
        } else {
            (e.high(), e.low())
        };
        near.insert(a);
        far.insert(b);
    }
    let mut edges: BTreeSet<Edge> = cut.iter().copied().collect();
    for set in [&near, &far] {
        let members: Vec<usize> = set.iter().copied().collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                edges.insert(Edge::new(a, b));
            }
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|e| (e.low(), e.high())))
}

/// Removes an edge cut whose two sides are each connected. Accepted only
/// when the auxiliary graph on the cut endpoints has no stress, in which
/// case `s(G) = s(G1) + s(G2)`.
pub fn disconnect_split(g: &Graph, cut: &[Edge]) -> Result<Split> {
    if cut.is_empty() {
        return Err(Error::Precondition("empty cut".into()));
    }
    for &e in cut {
        present(g, e)?;
    }
    let mut removed_edges = cut.to_vec();
    removed_edges.sort_unstable();
    removed_edges.dedup();
    if removed_edges.len() != cut.len() {
        return Err(Error::Precondition("repeated cut edge".into()));
    }
    let h = g.without_edges(&removed_edges)?;
    let mut label = vec![usize::MAX; g.vertex_count()];
    let components = h.components();
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            label[v] = c;
        }
    }
    let (a, b) = (label[cut[0].low()], label[cut[0].high()]);
    let splits = cut.iter().all(|e| {
        let (x, y) = (label[e.low()], label[e.high()]);
        a != b && ((x, y) == (a, b) || (x, y) == (b, a))
    });
    if !splits {
        return Err(Error::Precondition(
            "cut does not split its component into exactly two parts".into(),
        ));
    }
    let first_side: BTreeSet<usize> = components[a].iter().copied().collect();
    let second_side: BTreeSet<usize> = components[b].iter().copied().collect();
    let aux = auxiliary_graph(g.vertex_count(), &removed_edges, &first_side)?;
    let aux_stress = stress(&aux);
    if aux_stress != 0 {
        let vertices = aux
            .vertices()
            .filter(|&v| aux.degree(v).unwrap() > 0)
            .collect();
        return Err(Error::LemmaInapplicable {
            vertices,
            stress: aux_stress,
        });
    }
    let (first, second) = if first_side.first() < second_side.first() {
        (h.restricted_to(&first_side), h.restricted_to(&second_side))
    } else {
        (h.restricted_to(&second_side), h.restricted_to(&first_side))
    };
    Ok(Split {
        first,
        second,
        step: ReductionStep {
            kind: ReductionKind::DisconnectSplit,
            removed_vertices: Vec::new(),
            removed_edges,
            added_edges: Vec::new(),
            relation: StressRelation::Equal,
        },
    })
}

fn inverse_extension(
    g: &Graph,
    s: usize,
    i: usize,
    j: usize,
    degree: usize,
) -> Result<(Graph, ReductionStep)> {
    let actual = g.degree(s)?;
    if actual != degree {
        return Err(Error::Precondition(format!(
            "vertex {s} has degree {actual}, expected {degree}"
        )));
    }
    if i == j || !g.adjacent(s, i) || !g.adjacent(s, j) {
        return Err(Error::Precondition(format!(
            "{i} and {j} must be distinct neighbours of {s}"
        )));
    }
    if g.adjacent(i, j) {
        return Err(Error::Precondition(format!("edge {i}-{j} already present")));
    }
    let (kind, relation) = if degree == 3 {
        (ReductionKind::InverseOneExtension, StressRelation::AtMost)
    } else {
        (
            ReductionKind::InverseOneExtensionDeg4,
            StressRelation::AtMostPlus(1),
        )
    };
    let step = ReductionStep {
        kind,
        removed_vertices: vec![s],
        removed_edges: g.incident_edges(s),
        added_edges: vec![Edge::new(i, j)],
        relation,
    };
    Ok((step.apply(g)?, step))
}

/// Removes a degree-3 vertex `s` and joins two of its non-adjacent
/// neighbours: `s(pre) ≤ s(post)`.
pub fn inverse_one_extension(
    g: &Graph,
    s: usize,
    i: usize,
    j: usize,
) -> Result<(Graph, ReductionStep)> {
    inverse_extension(g, s, i, j, 3)
}

/// Degree-4 variant: `s(pre) ≤ s(post) + 1`.
pub fn inverse_one_extension_deg4(
    g: &Graph,
    s: usize,
    i: usize,
    j: usize,
) -> Result<(Graph, ReductionStep)> {
    inverse_extension(g, s, i, j, 4)
}

/// Starting from a degree-2 vertex, repeatedly deletes the boundary vertices
/// of the removed region whose residual degree is at most 2. The boundary
/// grows by the original neighbours of each deleted vertex.
pub fn peel_closure(g: &Graph, start: usize) -> Result<(Graph, ReductionTrace)> {
    if g.degree(start)? != 2 {
        return Err(Error::Precondition(format!(
            "vertex {start} does not have degree 2"
        )));
    }
    let mut trace = ReductionTrace::new(g);
    let mut removed = BTreeSet::new();
    let mut boundary: BTreeSet<usize> = BTreeSet::new();
    let mut wave = vec![start];
    while !wave.is_empty() {
        for &v in &wave {
            let (_, step) = delete_vertex(&trace.final_graph, v)?;
            trace.push(step)?;
            removed.insert(v);
            boundary.extend(g.neighbors(v));
        }
        let current = &trace.final_graph;
        wave = boundary
            .iter()
            .copied()
            .filter(|v| !removed.contains(v) && current.degree(*v).unwrap() <= 2)
            .collect();
    }
    Ok((trace.final_graph.clone(), trace))
}

/// Exhaustively applies the exact reductions: vertices of degree 1 or 2,
/// bridges, then 2-edge cuts, always taking the lowest candidate.
pub fn simplify(g: &Graph) -> Result<ReductionTrace> {
    let mut trace = ReductionTrace::new(g);
    loop {
        let current = &trace.final_graph;
        let step = if let Some(v) = current
            .vertices()
            .find(|&v| matches!(current.degree(v).unwrap(), 1 | 2))
        {
            delete_vertex(current, v)?.1
        } else if let Some(&e) = current.bridges().first() {
            remove_bridge(current, e)?.1
        } else if let Some(&(e, f)) = current.cut_analysis().two_edge_cuts.first() {
            remove_two_cut(current, e, f)?.1
        } else {
            return Ok(trace);
        };
        trace.push(step)?;
    }
}

/// Outcome of [`certify_stress_bound`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressCertificate {
    pub max_degree: usize,
    /// `z(G)` for the input.
    #[serde(serialize_with = "ser_ratio")]
    pub potential: Rational64,
    /// Generic stress count of the input.
    pub stress: usize,
    /// Offset of the accumulated relation; the trace proves
    /// `s(G) ≤ certified_bound`.
    pub certified_bound: usize,
    /// `z` of each graph along the trace; informational.
    #[serde(serialize_with = "ser_ratios")]
    pub potentials: Vec<Rational64>,
    pub check: TraceCheck,
    pub valid: bool,
    pub trace: ReductionTrace,
}

fn ser_ratio<S: serde::Serializer>(q: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(q))
}

fn ser_ratios<S: serde::Serializer>(
    qs: &[Rational64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(format_ratio))
}

/// Reduces `g` to the empty graph by the bounded-degree case analysis and
/// checks every step against generic ranks. The certificate is valid when
/// all steps hold and the accumulated offset is at most `z(g)`.
pub fn certify_stress_bound(g: &Graph, max_degree: usize) -> Result<StressCertificate> {
    if max_degree != 4 && max_degree != 5 {
        return Err(Error::Precondition(format!(
            "degree cap must be 4 or 5, got {max_degree}"
        )));
    }
    check_lemma_hypotheses(g, max_degree)?;
    let mut trace = ReductionTrace::new(g);
    while let Some(component) = trace.final_graph.nontrivial_components().into_iter().next() {
        let steps = if max_degree == 4 {
            dispatch_degree_four(&trace.final_graph, &component)?
        } else {
            dispatch_degree_five(&trace.final_graph, &component)?
        };
        for step in steps {
            trace.push(step)?;
        }
    }
    let potentials = trace
        .graphs()?
        .iter()
        .map(|h| potential_unchecked(h, max_degree))
        .collect();
    let check = trace.verify()?;
    let potential = potential_unchecked(g, max_degree);
    let stress = check.stresses[0];
    let certified_bound = trace.accumulated_relation.offset();
    let bound = Rational64::from_integer(certified_bound as i64);
    let valid =
        check.is_valid() && trace.accumulated_relation.holds(stress, 0) && bound <= potential;
    Ok(StressCertificate {
        max_degree,
        potential,
        stress,
        certified_bound,
        potentials,
        check,
        valid,
        trace,
    })
}

fn sorted_neighbors(g: &Graph, v: usize) -> Vec<usize> {
    g.neighbors(v).collect()
}

fn degree(g: &Graph, v: usize) -> usize {
    g.degree(v).unwrap()
}

/// Cases shared by both caps: pendant vertex, peel from a degree-2 vertex,
/// bridge, 2-edge cut.
fn dispatch_common(g: &Graph, component: &[usize]) -> Result<Option<ReductionStep>> {
    if let Some(&v) = component.iter().find(|&&v| degree(g, v) == 1) {
        return Ok(Some(delete_vertex(g, v)?.1));
    }
    if let Some(&v) = component.iter().find(|&&v| degree(g, v) == 2) {
        let (_, trace) = peel_closure(g, v)?;
        return Ok(Some(trace.collapse(ReductionKind::PeelClosure)));
    }
    let part = g.restricted_to(&component.iter().copied().collect());
    if let Some(&e) = part.bridges().first() {
        return Ok(Some(remove_bridge(g, e)?.1));
    }
    if let Some(&(e, f)) = part.cut_analysis().two_edge_cuts.first() {
        return Ok(Some(remove_two_cut(g, e, f)?.1));
    }
    Ok(None)
}

/// Removes a whole component whose stress count is computed directly.
fn base_case(g: &Graph, component: &[usize]) -> ReductionStep {
    let part = g.restricted_to(&component.iter().copied().collect());
    ReductionStep {
        kind: ReductionKind::BaseCase,
        removed_vertices: component.to_vec(),
        removed_edges: part.edges().collect(),
        added_edges: Vec::new(),
        relation: StressRelation::from_parts(true, stress(&part)),
    }
}

/// First pair of neighbours of `v` (lexicographic) that is not an edge.
fn missing_pair(g: &Graph, v: usize) -> Option<(usize, usize)> {
    let nbrs = sorted_neighbors(g, v);
    for (a, &i) in nbrs.iter().enumerate() {
        for &j in &nbrs[a + 1..] {
            if !g.adjacent(i, j) {
                return Some((i, j));
            }
        }
    }
    None
}

/// The unique neighbour of `v` outside `clique`.
fn external_neighbor(g: &Graph, v: usize, clique: &[usize]) -> Result<usize> {
    let outside: Vec<usize> = g.neighbors(v).filter(|w| !clique.contains(w)).collect();
    match outside[..] {
        [x] => Ok(x),
        _ => Err(Error::UnhandledCase(format!(
            "vertex {v} has {} neighbours outside its clique",
            outside.len()
        ))),
    }
}

fn split_step(g: &Graph, cut: &[Edge]) -> Result<ReductionStep> {
    Ok(disconnect_split(g, cut)?.step)
}

fn dispatch_degree_four(g: &Graph, component: &[usize]) -> Result<Vec<ReductionStep>> {
    if let Some(step) = dispatch_common(g, component)? {
        return Ok(vec![step]);
    }
    let cubic: Vec<usize> = component
        .iter()
        .copied()
        .filter(|&v| degree(g, v) == 3)
        .collect();
    for &s in &cubic {
        if let Some((i, j)) = missing_pair(g, s) {
            return Ok(vec![inverse_one_extension(g, s, i, j)?.1]);
        }
    }
    let &s = cubic.first().ok_or_else(|| {
        Error::UnhandledCase(format!(
            "component of {} has no degree-3 vertex",
            component[0]
        ))
    })?;
    let nbrs = sorted_neighbors(g, s);
    let degrees: Vec<usize> = nbrs.iter().map(|&v| degree(g, v)).collect();
    if degrees.iter().all(|&d| d == 3) && component.len() == 4 {
        return Ok(vec![base_case(g, component)]);
    }
    if degrees.iter().all(|&d| d == 4) {
        let mut clique = nbrs.clone();
        clique.push(s);
        let ext = nbrs
            .iter()
            .map(|&v| external_neighbor(g, v, &clique))
            .collect::<Result<Vec<_>>>()?;
        let coincide = ext.iter().all(|&x| x == ext[0]);
        if coincide && degree(g, ext[0]) == 3 && component.len() == 5 {
            return Ok(vec![base_case(g, component)]);
        }
        let cut: Vec<Edge> = nbrs
            .iter()
            .zip(&ext)
            .map(|(&v, &x)| Edge::new(v, x))
            .collect();
        return Ok(vec![split_step(g, &cut)?]);
    }
    Err(Error::UnhandledCase(format!(
        "degree-3 vertex {s} with neighbour degrees {degrees:?}"
    )))
}

fn dispatch_degree_five(g: &Graph, component: &[usize]) -> Result<Vec<ReductionStep>> {
    if let Some(step) = dispatch_common(g, component)? {
        return Ok(vec![step]);
    }
    if let Some(&v) = component.iter().find(|&&v| degree(g, v) == 3) {
        return Ok(vec![delete_vertex(g, v)?.1]);
    }
    let quartic: Vec<usize> = component
        .iter()
        .copied()
        .filter(|&v| degree(g, v) == 4)
        .collect();
    for &s in &quartic {
        if let Some((i, j)) = missing_pair(g, s) {
            return Ok(vec![inverse_one_extension_deg4(g, s, i, j)?.1]);
        }
    }
    let &s = quartic.first().ok_or_else(|| {
        Error::UnhandledCase(format!(
            "component of {} has no degree-4 vertex",
            component[0]
        ))
    })?;
    let nbrs = sorted_neighbors(g, s);
    if component.len() == 5 {
        return Ok(vec![base_case(g, component)]);
    }
    let mut clique = nbrs.clone();
    clique.push(s);
    let heavy: Vec<usize> = nbrs
        .iter()
        .copied()
        .filter(|&v| degree(g, v) == 5)
        .collect();
    let ext = heavy
        .iter()
        .map(|&v| external_neighbor(g, v, &clique))
        .collect::<Result<Vec<_>>>()?;
    match heavy.len() {
        3 => {
            let cut: Vec<Edge> = heavy
                .iter()
                .zip(&ext)
                .map(|(&v, &x)| Edge::new(v, x))
                .collect();
            Ok(vec![split_step(g, &cut)?])
        }
        4 if ext.iter().all(|&x| x == ext[0]) && component.len() == 6 => {
            Ok(vec![base_case(g, component)])
        }
        4 => {
            // drop one external edge so the other three ends are not all equal
            let t = (0..4)
                .find(|&t| {
                    let rest: Vec<usize> = (0..4).filter(|&u| u != t).map(|u| ext[u]).collect();
                    !rest.iter().all(|&x| x == rest[0])
                })
                .ok_or_else(|| Error::UnhandledCase("all external neighbours coincide".into()))?;
            let (h, first) = remove_edge(g, Edge::new(heavy[t], ext[t]))?;
            let cut: Vec<Edge> = (0..4)
                .filter(|&u| u != t)
                .map(|u| Edge::new(heavy[u], ext[u]))
                .collect();
            Ok(vec![first, split_step(&h, &cut)?])
        }
        k => Err(Error::UnhandledCase(format!(
            "degree-4 vertex {s} has {k} degree-5 neighbours"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{
        clique_chain, complete, complete_minus_edge, cycle, path, random_regular,
    };

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn k4_plus_pendant() -> Graph {
        graph(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
    }

    fn two_k4_bridged() -> Graph {
        let two = complete(4).disjoint_union(&complete(4));
        two.edited(&[], &[Edge::new(3, 4)]).unwrap()
    }

    /// K4 on {0,1,2,3} plus 4 joined to 1, 2, 3: tight for the degree-4 potential.
    fn degree_four_terminal() -> Graph {
        graph(
            5,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (1, 4),
                (2, 4),
                (3, 4),
            ],
        )
    }

    #[test]
    fn relation_algebra() {
        use StressRelation::*;
        assert_eq!(Equal.then(Equal), Equal);
        assert_eq!(Equal.then(AtMost), AtMost);
        assert_eq!(AtMostPlus(1).then(EqualPlus(2)), AtMostPlus(3));
        assert_eq!(EqualPlus(1).then(EqualPlus(2)), EqualPlus(3));
        assert!(AtMostPlus(2).holds(3, 1));
        assert!(!AtMostPlus(1).holds(3, 1));
        assert!(EqualPlus(2).holds(2, 0) && !EqualPlus(2).holds(1, 0));
        let json = serde_json::to_string(&AtMostPlus(2)).unwrap();
        assert_eq!(json, r#"{"relation":"le_plus","offset":2}"#);
        assert_eq!(
            serde_json::from_str::<StressRelation>(&json).unwrap(),
            AtMostPlus(2)
        );
    }

    #[test]
    fn delete_vertex_examples() {
        let g = k4_plus_pendant();
        let (h, step) = delete_vertex(&g, 4).unwrap();
        assert_eq!(step.relation, StressRelation::Equal);
        assert_eq!((stress(&g), stress(&h)), (1, 1));

        let k5 = complete(5);
        let (h, step) = delete_vertex(&k5, 0).unwrap();
        assert_eq!(step.kind, ReductionKind::DeleteVertexGeneral);
        assert_eq!(step.relation, StressRelation::AtMostPlus(2));
        let (before, after) = (stress(&k5), stress(&h));
        assert_eq!((before, after), (3, 1));
        assert!(step.relation.holds(before, after) && after <= before);

        let apex = graph(4, &[(0, 1), (1, 2), (0, 2), (3, 0), (3, 1)]);
        let (h, _) = delete_vertex(&apex, 3).unwrap();
        assert_eq!((stress(&apex), stress(&h)), (0, 0));
        assert!(matches!(
            delete_vertex(&apex, 9),
            Err(Error::InvalidVertex { .. })
        ));
    }

    #[test]
    fn bridge_examples() {
        let g = two_k4_bridged();
        let (h, _) = remove_bridge(&g, Edge::new(3, 4)).unwrap();
        assert_eq!((stress(&g), stress(&h)), (2, 2));
        let tree = path(5);
        let (h, _) = remove_bridge(&tree, Edge::new(1, 2)).unwrap();
        assert_eq!(stress(&h), 0);
        assert!(remove_bridge(&g, Edge::new(0, 1)).is_err());
    }

    #[test]
    fn two_cut_examples() {
        let g = clique_chain(5, 2).unwrap();
        let (h, _) = remove_two_cut(&g, Edge::new(1, 5), Edge::new(0, 6)).unwrap();
        assert_eq!((stress(&g), stress(&h)), (4, 4));
        assert_eq!(h.nontrivial_components().len(), 2);

        let c6 = cycle(6);
        let (h, _) = remove_two_cut(&c6, Edge::new(0, 1), Edge::new(3, 4)).unwrap();
        assert_eq!(stress(&h), 0);

        let bridged = two_k4_bridged();
        assert!(remove_two_cut(&bridged, Edge::new(3, 4), Edge::new(0, 1)).is_err());
        assert!(remove_two_cut(&complete(5), Edge::new(0, 1), Edge::new(2, 3)).is_err());
    }

    #[test]
    fn split_examples() {
        let g = clique_chain(5, 3).unwrap();
        let cut = [Edge::new(1, 5), Edge::new(0, 11)];
        let split = disconnect_split(&g, &cut).unwrap();
        assert_eq!(stress(&g), stress(&split.first) + stress(&split.second));

        let bridged = two_k4_bridged();
        let split = disconnect_split(&bridged, &[Edge::new(3, 4)]).unwrap();
        assert_eq!((stress(&split.first), stress(&split.second)), (1, 1));

        // prism-type auxiliary graph: two triangles joined by a matching
        let prism_cut = graph(
            12,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (4, 5),
                (4, 6),
                (4, 7),
                (5, 6),
                (5, 7),
                (6, 7),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        );
        let split = disconnect_split(
            &prism_cut,
            &[Edge::new(1, 5), Edge::new(2, 6), Edge::new(3, 7)],
        )
        .unwrap();
        assert_eq!(stress(&prism_cut), 2);
        assert_eq!(stress(&split.first) + stress(&split.second), 2);
    }

    #[test]
    fn split_rejects_bad_cuts() {
        // triangle fully joined to one vertex: the auxiliary graph is K4
        let g = degree_four_terminal();
        let cut = [Edge::new(1, 4), Edge::new(2, 4), Edge::new(3, 4)];
        match disconnect_split(&g, &cut) {
            Err(Error::LemmaInapplicable { vertices, stress }) => {
                assert_eq!(vertices, vec![1, 2, 3, 4]);
                assert_eq!(stress, 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(disconnect_split(&complete(5), &[Edge::new(0, 1)]).is_err());
        assert!(disconnect_split(&complete(4), &[]).is_err());
    }

    #[test]
    fn inverse_extension_examples() {
        // triangle 0,1,2 with apex 3; base edge 0-1 removed
        let g = graph(4, &[(0, 2), (1, 2), (3, 0), (3, 1), (3, 2)]);
        let (h, step) = inverse_one_extension(&g, 3, 0, 1).unwrap();
        assert!(h.has_edge(Edge::new(0, 1)) && h.degree(3).unwrap() == 0);
        assert!(step.relation.holds(stress(&g), stress(&h)));
        assert!(inverse_one_extension(&complete(4), 0, 1, 2).is_err());
        assert!(inverse_one_extension(&complete(5), 0, 1, 2).is_err());

        let g = complete_minus_edge(5);
        let (h, step) = inverse_one_extension_deg4(&g, 2, 0, 1).unwrap();
        assert_eq!((stress(&g), stress(&h)), (2, 1));
        assert!(step.relation.holds(2, 1));
        assert!(inverse_one_extension_deg4(&complete(5), 0, 1, 2).is_err());

        for seed in 0..5 {
            let g = random_regular(12, 4, seed).unwrap();
            let s = g
                .vertices()
                .find(|&v| missing_pair(&g, v).is_some())
                .unwrap();
            let (i, j) = missing_pair(&g, s).unwrap();
            let (h, step) = inverse_one_extension_deg4(&g, s, i, j).unwrap();
            assert!(step.relation.holds(stress(&g), stress(&h)));
        }
    }

    #[test]
    fn peel_examples() {
        let (h, trace) = peel_closure(&cycle(5), 2).unwrap();
        assert_eq!(h.edge_count(), 0);
        assert_eq!(trace.accumulated_relation, StressRelation::Equal);
        assert!(trace.verify().unwrap().is_valid());

        // K4 with the path 1 - 4 - 5 - 2 hung on it
        let g = graph(
            6,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (1, 4),
                (4, 5),
                (5, 2),
            ],
        );
        let (h, trace) = peel_closure(&g, 4).unwrap();
        assert_eq!(h, complete(4).disjoint_union(&Graph::empty(2)));
        assert_eq!(trace.verify().unwrap().stresses, vec![1, 1, 1]);
        assert!(peel_closure(&g, 0).is_err());
    }

    #[test]
    fn peel_leaves_no_low_boundary_vertex() {
        for seed in 0..20 {
            let g = random_regular(16, 3, seed).unwrap();
            let g = g.without_edges(&g.incident_edges(0)[..1]).unwrap();
            let start = g.vertices().find(|&v| g.degree(v).unwrap() == 2).unwrap();
            let (h, trace) = peel_closure(&g, start).unwrap();
            let removed: BTreeSet<usize> = trace
                .steps
                .iter()
                .flat_map(|s| s.removed_vertices.clone())
                .collect();
            for v in &removed {
                for w in g.neighbors(*v) {
                    if !removed.contains(&w) {
                        assert!(h.degree(w).unwrap() >= 3, "seed {seed}");
                    }
                }
            }
            assert!(trace.verify().unwrap().is_valid());
        }
    }

    #[test]
    fn trace_round_trips_through_json() {
        let trace = simplify(&clique_chain(5, 3).unwrap()).unwrap();
        assert!(!trace.is_empty());
        let json = trace.to_json();
        assert!(json.contains("\"kind\": \"remove-two-cut\""));
        let back: ReductionTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, trace);
        assert!(back.graphs().is_ok());
    }

    #[test]
    fn simplify_keeps_stress() {
        let g = clique_chain(5, 4).unwrap();
        let trace = simplify(&g).unwrap();
        assert_eq!(trace.accumulated_relation, StressRelation::Equal);
        let check = trace.verify().unwrap();
        assert!(check.is_valid());
        assert_eq!(check.stresses.first(), check.stresses.last());
        assert_eq!(trace.final_graph.nontrivial_components().len(), 4);
    }

    #[test]
    fn certificate_examples() {
        let cert = certify_stress_bound(&complete_minus_edge(5), 4).unwrap();
        assert!(cert.valid);
        assert_eq!(
            (cert.stress, cert.potential),
            (2, Rational64::from_integer(2))
        );

        let cert = certify_stress_bound(&degree_four_terminal(), 4).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.stress, 2);
        assert_eq!(cert.trace.steps[0].kind, ReductionKind::BaseCase);

        let cert = certify_stress_bound(&complete_minus_edge(6), 5).unwrap();
        assert!(cert.valid);
        assert_eq!(
            (cert.stress, cert.potential),
            (5, Rational64::from_integer(5))
        );

        let cert = certify_stress_bound(&complete(4), 4).unwrap();
        assert!(cert.valid && cert.stress == 1);
        assert!(certify_stress_bound(&complete(5), 4).is_err());
        assert!(certify_stress_bound(&complete(4), 6).is_err());
    }

    #[test]
    fn certificates_for_regular_graphs_minus_an_edge() {
        for (d, n) in [(4, 10), (4, 15), (5, 12), (5, 16)] {
            for seed in 0..4 {
                let g = random_regular(n, d, seed).unwrap();
                let first = g.edges().next().unwrap();
                let h = g.without_edges(&[first]).unwrap();
                let cert = certify_stress_bound(&h, d).unwrap();
                assert!(cert.valid, "d={d} n={n} seed={seed}: {:?}", cert.check);
                assert!(Rational64::from_integer(cert.stress as i64) <= cert.potential);
            }
        }
        let chain = clique_chain(5, 3).unwrap();
        let first = chain.edges().next().unwrap();
        let cert = certify_stress_bound(&chain.without_edges(&[first]).unwrap(), 4).unwrap();
        assert!(cert.valid);
    }
}
