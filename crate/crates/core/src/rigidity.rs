//! Rigidity matrices, generic rank, stresses and the H¹ dimension.
//!
//! The row of edge `ij` is `p_i − p_j` in the two columns of vertex `i`,
//! `p_j − p_i` in the two columns of `j`, and zero elsewhere (columns
//! `2v` and `2v + 1` hold the x and y parts of vertex `v`).
//!
//! Generic rank is estimated by evaluating at uniformly random points of
//! F_p² for p = 2^61 − 1. Rank at any particular point never exceeds the
//! generic rank, and a nonzero maximal minor vanishes at a random point with
//! probability at most `deg / p` (a minor has degree at most `2|V|` in the
//! coordinates), so the maximum over a few trials is the generic rank except
//! with negligible probability. The pebble game gives an independent,
//! deterministic check.

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::graph::{Edge, Graph};
use crate::linalg::{is_zero_vector, Matrix, Scalar};
use crate::realization::{sample_field, sample_rational, Realization, ScalarDomain};

pub const DEFAULT_TRIALS: usize = 3;

/// Seed used by the convenience wrappers that take no seed.
pub const DEFAULT_SEED: u64 = 0x005e_ed0f_6e6e;

/// `min(|E|, 2|V| − 3)` for `|V| ≥ 2`; `0` otherwise.
pub fn rank_upper_bound(g: &Graph) -> usize {
    if g.vertex_count() < 2 {
        0
    } else {
        g.edge_count().min(2 * g.vertex_count() - 3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidityMatrix<S> {
    edges: Vec<Edge>,
    vertex_count: usize,
    matrix: Matrix<S>,
}

impl<S: Scalar> RigidityMatrix<S> {
    pub fn build(g: &Graph, r: &Realization<S>) -> Result<Self> {
        if r.len() != g.vertex_count() {
            return Err(Error::SizeMismatch {
                coords: r.len(),
                vertices: g.vertex_count(),
            });
        }
        let edges: Vec<Edge> = g.edges().collect();
        let rows = edges.iter().map(|&e| edge_row(e, r)).collect();
        Ok(RigidityMatrix {
            edges,
            vertex_count: g.vertex_count(),
            matrix: Matrix::from_rows(2 * g.vertex_count(), rows),
        })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    /// Row index of `e` (rows follow the canonical edge order).
    pub fn row_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn row(&self, e: Edge) -> Option<&[S]> {
        self.row_index(e).map(|i| self.matrix.row(i))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Exact basis of the stresses `{ω : Σ ω(e)·row(e) = 0}`.
    pub fn stress_basis(&self) -> StressBasis<S> {
        StressBasis {
            vectors: self.matrix.left_kernel(),
            edge_order: self.edges.clone(),
        }
    }

    pub fn is_stress(&self, omega: &[S]) -> bool {
        omega.len() == self.edges.len() && is_zero_vector(&self.matrix.left_multiply(omega))
    }
}

/// Row vector of edge `e` at realization `r`, length `2|V|`.
pub fn edge_row<S: Scalar>(e: Edge, r: &Realization<S>) -> Vec<S> {
    let mut row = vec![S::zero(); 2 * r.len()];
    let (i, j) = (e.low(), e.high());
    let (pi, pj) = (r.point(i), r.point(j));
    let dx = pi.x.minus(&pj.x);
    let dy = pi.y.minus(&pj.y);
    row[2 * j] = dx.negate();
    row[2 * j + 1] = dy.negate();
    row[2 * i] = dx;
    row[2 * i + 1] = dy;
    row
}

pub fn build_rigidity_matrix<S: Scalar>(
    g: &Graph,
    r: &Realization<S>,
) -> Result<RigidityMatrix<S>> {
    RigidityMatrix::build(g, r)
}

pub fn matrix_rank<S: Scalar>(m: &RigidityMatrix<S>) -> usize {
    m.rank()
}

/// Linearly independent stresses, one per vector, indexed like `edge_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct StressBasis<S> {
    pub vectors: Vec<Vec<S>>,
    pub edge_order: Vec<Edge>,
}

impl<S: Scalar> StressBasis<S> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

pub fn stress_basis<S: Scalar>(m: &RigidityMatrix<S>) -> StressBasis<S> {
    m.stress_basis()
}

/// Maximum rank over `trials` random F_p realizations.
pub fn generic_rank(g: &Graph, trials: usize, seed: u64) -> usize {
    generic_rank_in(g, trials, seed, ScalarDomain::PrimeField)
}

/// As [`generic_rank`] in a chosen domain; rational trials use general
/// position integer samples and Bareiss elimination.
pub fn generic_rank_in(g: &Graph, trials: usize, seed: u64, domain: ScalarDomain) -> usize {
    let cap = rank_upper_bound(g);
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials.max(1) {
        let trial_seed: u64 = seeds.gen();
        let rank = match domain {
            ScalarDomain::PrimeField => {
                let r = sample_field(g.vertex_count(), trial_seed);
                RigidityMatrix::<Fp>::build(g, &r)
                    .expect("sizes match")
                    .rank()
            }
            ScalarDomain::Rational => match sample_rational(g.vertex_count(), trial_seed) {
                Ok(r) => RigidityMatrix::<BigRational>::build(g, &r)
                    .expect("sizes match")
                    .rank(),
                Err(_) => continue,
            },
        };
        best = best.max(rank);
        if best == cap {
            break;
        }
    }
    best
}

/// `|E| − rank`.
pub fn stress_count(g: &Graph, rank: usize) -> Result<usize> {
    g.edge_count()
        .checked_sub(rank)
        .ok_or(Error::RankExceedsEdges {
            rank,
            edges: g.edge_count(),
        })
}

/// Generic stress count with the default trials and seed.
pub fn generic_stress(g: &Graph) -> usize {
    g.edge_count() - generic_rank(g, DEFAULT_TRIALS, DEFAULT_SEED)
}

/// Dimension of degree-one graph cohomology, `2|V| − r(G)`, at the generic
/// rank.
pub fn h1_dimension(g: &Graph) -> usize {
    2 * g.vertex_count() - generic_rank(g, DEFAULT_TRIALS, DEFAULT_SEED)
}

/// Checks that every vector of the row span of `R_G(p)` supported on the
/// columns of `u` lies in the row span of the complete graph on `u`.
///
/// The intersection is computed as `{cᵀR : cᵀR vanishes off u}` by solving
/// for `c` in the left kernel of the off-`u` columns.
pub fn restriction_containment<S: Scalar>(
    g: &Graph,
    r: &Realization<S>,
    u: &BTreeSet<usize>,
) -> Result<bool> {
    if u.is_empty() {
        return Err(Error::Precondition("vertex subset must be nonempty".into()));
    }
    for &v in u {
        g.check_vertex(v)?;
    }
    let m = RigidityMatrix::build(g, r)?;
    let outside: Vec<usize> = g
        .vertices()
        .filter(|v| !u.contains(v))
        .flat_map(|v| [2 * v, 2 * v + 1])
        .collect();
    let combos = m.matrix().select_columns(&outside).left_kernel();
    let intersection: Vec<Vec<S>> = combos
        .iter()
        .map(|c| m.matrix().left_multiply(c))
        .filter(|w| !is_zero_vector(w))
        .collect();
    if intersection.is_empty() {
        return Ok(true);
    }

    let members: Vec<usize> = u.iter().copied().collect();
    let mut clique = Matrix::from_rows(2 * g.vertex_count(), Vec::new());
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            clique.push_row(edge_row(Edge::new(i, j), r));
        }
    }
    let base = clique.gaussian_rank();
    for w in intersection {
        clique.push_row(w);
    }
    Ok(clique.gaussian_rank() == base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique_chain, complete, cycle, path, random_connected};
    use crate::linalg::proportional;
    use crate::realization::{sample_rational, Point};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn single_edge_row() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let r = Realization::<BigRational>::from_integers(&[(0, 0), (1, 0)]);
        let m = build_rigidity_matrix(&g, &r).unwrap();
        assert_eq!(m.matrix().row(0), &[q(-1), q(0), q(1), q(0)]);
        assert_eq!(matrix_rank(&m), 1);
    }

    #[test]
    fn triangle_rows_have_four_nonzeros() {
        let r = sample_rational(3, 1).unwrap();
        let m = build_rigidity_matrix(&complete(3), &r).unwrap();
        assert_eq!(m.matrix().rows(), 3);
        for row in m.matrix().row_vectors() {
            assert_eq!(row.iter().filter(|v| !Scalar::is_zero(*v)).count(), 4);
        }
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let r = sample_field(3, 0);
        assert!(matches!(
            build_rigidity_matrix(&complete(4), &r),
            Err(Error::SizeMismatch {
                coords: 3,
                vertices: 4
            })
        ));
    }

    #[test]
    fn row_sums_vanish_by_parity() {
        let g = random_connected(9, 0.4, 3);
        let m = build_rigidity_matrix(&g, &sample_field(9, 3)).unwrap();
        for row in m.matrix().row_vectors() {
            let odd = row.iter().step_by(2).fold(Fp::ZERO, |a, &b| a + b);
            let even = row.iter().skip(1).step_by(2).fold(Fp::ZERO, |a, &b| a + b);
            assert!(odd.is_zero() && even.is_zero());
        }
    }

    #[test]
    fn complete_graph_ranks() {
        for (n, rank) in [(2, 1), (3, 3), (4, 5), (5, 7), (6, 9), (7, 11)] {
            assert_eq!(generic_rank(&complete(n), DEFAULT_TRIALS, 1), rank, "K{n}");
            let r = sample_rational(n, 5).unwrap();
            assert_eq!(
                build_rigidity_matrix(&complete(n), &r).unwrap().rank(),
                rank
            );
        }
    }

    #[test]
    fn clique_chain_rank() {
        assert_eq!(generic_rank(&clique_chain(5, 3).unwrap(), 3, 0), 24);
    }

    #[test]
    fn stress_counts() {
        assert_eq!(stress_count(&complete(4), 5).unwrap(), 1);
        assert_eq!(stress_count(&complete(5), 7).unwrap(), 3);
        assert_eq!(stress_count(&path(6), 5).unwrap(), 0);
        assert!(matches!(
            stress_count(&path(3), 3),
            Err(Error::RankExceedsEdges { rank: 3, edges: 2 })
        ));
    }

    #[test]
    fn k4_stress_has_full_support() {
        let r = sample_rational(4, 2).unwrap();
        let m = build_rigidity_matrix(&complete(4), &r).unwrap();
        let basis = m.stress_basis();
        assert_eq!(basis.len(), 1);
        assert!(basis.vectors[0].iter().all(|w| !Scalar::is_zero(w)));
        assert!(m.is_stress(&basis.vectors[0]));
    }

    #[test]
    fn collinear_triangle_stress() {
        // points on the line y = 2x + 1
        let xs = [3i64, 7, -2];
        let pts: Vec<(i64, i64)> = xs.iter().map(|&x| (x, 2 * x + 1)).collect();
        let r = Realization::<BigRational>::from_integers(&pts);
        let m = build_rigidity_matrix(&complete(3), &r).unwrap();
        let basis = m.stress_basis();
        assert_eq!(basis.len(), 1);
        // canonical rows: 0-1, 0-2, 1-2
        let d = |a: usize, b: usize| BigRational::new(1.into(), (xs[a] - xs[b]).into());
        let expected = vec![d(0, 1), -d(0, 2), d(1, 2)];
        assert!(proportional(&basis.vectors[0], &expected));
    }

    #[test]
    fn tree_has_no_stress() {
        let r = sample_rational(6, 0).unwrap();
        let m = build_rigidity_matrix(&path(6), &r).unwrap();
        assert!(m.stress_basis().is_empty());
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1_dimension(&complete(5)), 3);
        assert_eq!(h1_dimension(&clique_chain(5, 3).unwrap()), 6);
        assert_eq!(h1_dimension(&Graph::empty(1)), 2);
    }

    #[test]
    fn specialization_never_raises_rank() {
        // all points on one line: rank of K4 drops to |V| - 1
        let r = Realization::<BigRational>::from_integers(&[(0, 0), (1, 0), (2, 0), (5, 0)]);
        let special = build_rigidity_matrix(&complete(4), &r).unwrap().rank();
        assert_eq!(special, 3);
        assert!(special <= generic_rank(&complete(4), 3, 0));
    }

    #[test]
    fn restriction_containment_examples() {
        let g = random_connected(7, 0.5, 1);
        let r = sample_field(7, 1);
        assert!(restriction_containment(&g, &r, &BTreeSet::from([3])).unwrap());
        let all: BTreeSet<usize> = g.vertices().collect();
        assert!(restriction_containment(&g, &r, &all).unwrap());
        assert!(restriction_containment(&g, &r, &BTreeSet::new()).is_err());
        assert!(
            restriction_containment(&cycle(5), &sample_field(5, 0), &BTreeSet::from([0, 2]))
                .unwrap()
        );
    }

    #[test]
    fn containment_fails_for_degenerate_points() {
        // A single point on its own: with all of U's points coincident the
        // complete graph on U spans nothing, while the edge space can still
        // reach into W_U. Here u = {0, 1} share a position.
        let g = complete(4);
        let mut r = sample_rational(4, 3).unwrap();
        let p0 = r.point(0).clone();
        r.set_point(1, Point::new(p0.x.clone(), p0.y.clone()));
        let u = BTreeSet::from([0, 1]);
        assert!(!restriction_containment(&g, &r, &u).unwrap());
    }
}
