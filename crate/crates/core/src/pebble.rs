//! (2,3)-pebble game: a combinatorial oracle for independence in the planar
//! generic rigidity matroid.
//!
//! Each vertex starts with two pebbles. An edge `uv` is accepted when four
//! pebbles can be gathered on `u` and `v`; one pebble of `u` then covers the
//! edge, which is oriented out of `u`. Pebbles move by reversing a directed
//! path from the vertex that needs a pebble to a vertex that has one. The
//! accepted set is always (2,3)-sparse, and the number of accepted edges
//! equals the generic rank.

use crate::graph::{Edge, Graph};

#[derive(Debug, Clone)]
pub struct PebbleGame {
    pebbles: Vec<u8>,
    /// Out-neighbours along accepted, oriented edges.
    out: Vec<Vec<usize>>,
    accepted: Vec<Edge>,
    // scratch for the searches
    visited: Vec<bool>,
    parent: Vec<usize>,
}

impl PebbleGame {
    pub fn new(vertex_count: usize) -> Self {
        PebbleGame {
            pebbles: vec![2; vertex_count],
            out: vec![Vec::new(); vertex_count],
            accepted: Vec::new(),
            visited: vec![false; vertex_count],
            parent: vec![usize::MAX; vertex_count],
        }
    }

    pub fn pebbles(&self) -> &[u8] {
        &self.pebbles
    }

    /// Accepted edges in insertion order.
    pub fn accepted(&self) -> &[Edge] {
        &self.accepted
    }

    /// Accepted edges as `(tail, head)`; the tail's pebble covers the edge.
    pub fn oriented_edges(&self) -> Vec<(usize, usize)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, heads)| heads.iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn free_pebbles(&self) -> usize {
        self.pebbles.iter().map(|&p| p as usize).sum()
    }

    /// Tries to accept `e`; returns whether it was independent of the edges
    /// accepted so far.
    pub fn insert(&mut self, e: Edge) -> bool {
        let (u, v) = (e.low(), e.high());
        while self.pebbles[u] < 2 && self.fetch_pebble(u, v) {}
        while self.pebbles[v] < 2 && self.fetch_pebble(v, u) {}
        if self.pebbles[u] + self.pebbles[v] < 4 {
            return false;
        }
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        self.accepted.push(e);
        true
    }

    /// Depth-first search from `root` along out-edges, never entering
    /// `blocked`, for a vertex holding a pebble. On success the path is
    /// reversed and one pebble moves to `root`.
    fn fetch_pebble(&mut self, root: usize, blocked: usize) -> bool {
        self.visited.iter_mut().for_each(|b| *b = false);
        self.visited[root] = true;
        self.visited[blocked] = true;
        let mut stack = vec![root];
        let mut found = None;
        'search: while let Some(x) = stack.pop() {
            for idx in 0..self.out[x].len() {
                let y = self.out[x][idx];
                if self.visited[y] {
                    continue;
                }
                self.visited[y] = true;
                self.parent[y] = x;
                if self.pebbles[y] > 0 {
                    found = Some(y);
                    break 'search;
                }
                stack.push(y);
            }
        }
        let Some(target) = found else {
            return false;
        };
        self.pebbles[target] -= 1;
        self.pebbles[root] += 1;
        let mut y = target;
        while y != root {
            let x = self.parent[y];
            let pos = self.out[x]
                .iter()
                .position(|&w| w == y)
                .expect("edge on path");
            self.out[x].swap_remove(pos);
            self.out[y].push(x);
            y = x;
        }
        true
    }
}

/// Generic rank from the pebble game, edges processed in canonical order.
pub fn pebble_rank(g: &Graph) -> usize {
    let mut game = PebbleGame::new(g.vertex_count());
    g.edges().filter(|&e| game.insert(e)).count()
}

/// The edges the pebble game accepts, in canonical order: a basis of the
/// rigidity matroid restricted to `g`.
pub fn pebble_basis(g: &Graph) -> Vec<Edge> {
    let mut game = PebbleGame::new(g.vertex_count());
    g.edges().filter(|&e| game.insert(e)).collect()
}

/// Whether `subset` is independent in the rigidity matroid. Edges outside
/// `g` are ignored by the caller's contract; duplicates count once.
pub fn pebble_independent(g: &Graph, subset: &[Edge]) -> bool {
    let mut game = PebbleGame::new(g.vertex_count());
    let mut edges = subset.to_vec();
    edges.sort_unstable();
    edges.dedup();
    edges.into_iter().all(|e| game.insert(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path, random_graph};

    /// Every vertex subset with at least two vertices spans at most
    /// 2|V'| − 3 of the given edges. Exhaustive over subsets.
    fn is_sparse(n: usize, edges: &[Edge]) -> bool {
        (0u32..1 << n).all(|mask| {
            let k = mask.count_ones() as usize;
            if k < 2 {
                return true;
            }
            let spanned = edges
                .iter()
                .filter(|e| mask >> e.low() & 1 == 1 && mask >> e.high() & 1 == 1)
                .count();
            spanned <= 2 * k - 3
        })
    }

    #[test]
    fn complete_graph_ranks() {
        assert_eq!(pebble_rank(&complete(4)), 5);
        assert_eq!(pebble_rank(&complete(5)), 7);
        assert_eq!(pebble_rank(&complete(6)), 9);
    }

    #[test]
    fn cycles_are_independent() {
        for n in 3..10 {
            assert_eq!(pebble_rank(&cycle(n)), n);
        }
    }

    #[test]
    fn independence_examples() {
        let k4 = complete(4);
        let all: Vec<Edge> = k4.edges().collect();
        assert!(!pebble_independent(&k4, &all));
        for skip in 0..all.len() {
            let five: Vec<Edge> = all.iter().copied().filter(|&e| e != all[skip]).collect();
            assert!(pebble_independent(&k4, &five));
        }
        let tree = path(7);
        let edges: Vec<Edge> = tree.edges().collect();
        assert!(pebble_independent(&tree, &edges));
    }

    #[test]
    fn pebble_invariant_holds_after_every_insertion() {
        let g = random_graph(9, 0.6, 4);
        let mut game = PebbleGame::new(9);
        for e in g.edges() {
            game.insert(e);
            assert_eq!(game.free_pebbles() + game.oriented_edges().len(), 18);
            assert!(game.pebbles().iter().all(|&p| p <= 2));
        }
    }

    #[test]
    fn accepted_sets_are_sparse_and_maximal() {
        for seed in 0..40 {
            let n = 4 + (seed as usize % 5);
            let g = random_graph(n, 0.3 + 0.1 * (seed % 6) as f64, seed);
            let basis = pebble_basis(&g);
            assert!(is_sparse(n, &basis), "seed {seed}");
            for e in g.edges().filter(|e| !basis.contains(e)) {
                let mut extended = basis.clone();
                extended.push(e);
                assert!(!is_sparse(n, &extended), "seed {seed}: {e} could be added");
            }
        }
    }

    #[test]
    fn rank_is_monotone_under_edge_addition() {
        let g = random_graph(10, 0.5, 17);
        let mut partial = Graph::empty(10);
        let mut last = 0;
        for e in g.edges() {
            partial = partial.edited(&[], &[e]).unwrap();
            let r = pebble_rank(&partial);
            assert!(r >= last);
            last = r;
        }
    }
}
