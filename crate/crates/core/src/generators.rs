//! Graph families: complete graphs, the clique chains that show the
//! regular-graph bounds are sharp, and seeded random graphs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Attempts made by [`random_regular`] before giving up.
pub const REGULAR_RETRY_BUDGET: usize = 200_000;

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    Graph::from_edges(n, edges).expect("complete graph is simple")
}

/// K_n with the edge `0-1` removed.
pub fn complete_minus_edge(n: usize) -> Graph {
    assert!(n >= 2);
    complete(n)
        .without_edges(&[Edge::new(0, 1)])
        .expect("0-1 is an edge of K_n")
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
}

/// `k` copies of K_n each missing one edge, wired in a ring.
///
/// Copy `t` occupies ids `t*n .. t*n+n`; its missing edge joins `a_t = t*n`
/// and `b_t = t*n + 1`, and the ring edges are `b_t - a_{t+1 mod k}`. Every
/// vertex ends up with degree `n - 1`.
pub fn clique_chain(clique_size: usize, k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::Infeasible(format!(
            "clique chain needs k >= 2, got {k}"
        )));
    }
    if clique_size < 3 {
        return Err(Error::Infeasible(format!(
            "clique chain needs cliques of size >= 3, got {clique_size}"
        )));
    }
    let n = clique_size;
    let mut edges = Vec::with_capacity(k * (n * (n - 1) / 2));
    for t in 0..k {
        let base = t * n;
        for i in 0..n {
            for j in i + 1..n {
                if (i, j) != (0, 1) {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((base + 1, ((t + 1) % k) * n));
    }
    Graph::from_edges(k * n, edges)
}

/// Connected simple `degree`-regular graph on `n` vertices from the pairing
/// model. Any pairing with a loop, a repeated pair or more than one
/// component is discarded and redrawn, so the result is uniform over
/// connected simple `degree`-regular graphs. Deterministic in `seed`.
pub fn random_regular(n: usize, degree: usize, seed: u64) -> Result<Graph> {
    if !(n * degree).is_multiple_of(2) {
        return Err(Error::Infeasible(format!("n·d = {n}·{degree} is odd")));
    }
    if degree >= n {
        return Err(Error::Infeasible(format!("degree {degree} >= n = {n}")));
    }
    if (degree == 0 && n > 1) || (degree == 1 && n > 2) {
        return Err(Error::Infeasible(format!(
            "no connected {degree}-regular graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    'attempt: for _ in 0..REGULAR_RETRY_BUDGET {
        points.shuffle(&mut rng);
        let mut added = BTreeSet::new();
        for pair in points.chunks_exact(2) {
            if pair[0] == pair[1] || !added.insert(Edge::new(pair[0], pair[1])) {
                continue 'attempt;
            }
        }
        let added: Vec<Edge> = added.into_iter().collect();
        let g = Graph::empty(n)
            .edited(&[], &added)
            .expect("pairs checked simple");
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::RetryBudgetExhausted {
        attempts: REGULAR_RETRY_BUDGET,
    })
}

/// Erdős–Rényi G(n, p), deterministic in `seed`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).expect("G(n,p) is simple")
}

/// G(n, p) plus a random Hamiltonian cycle (n ≥ 3), hence 2-edge-connected.
pub fn random_bridgeless(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let g = random_graph(n, p, seed);
    let ring: Vec<Edge> = (0..n)
        .map(|i| Edge::new(order[i], order[(i + 1) % n]))
        .filter(|&e| !g.has_edge(e))
        .collect();
    g.edited(&[], &ring).expect("ring edges are new")
}

/// G(n, p) plus a random spanning tree, hence connected.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2545_f491_4f6c_dd1d);
    let g = random_graph(n, p, seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut tree = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let e = Edge::new(order[i], parent);
        if !g.has_edge(e) {
            tree.push(e);
        }
    }
    g.edited(&[], &tree).expect("tree edges are new")
}
