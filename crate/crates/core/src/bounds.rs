//! Stress potentials, the regular-graph rank bounds and batch experiments.
//!
//! For graphs of maximum degree 4 the potential is
//! `z4 = (n3 + 2·n4 + 2c) / 5`, for maximum degree 5 it is
//! `z5 = 5·(n3 + 2·n4 + 3·n5 + 2c) / 18`, where `n_d` counts vertices of
//! degree `d` and `c` counts components with at least one edge. Whenever
//! every component has a vertex below the degree cap, `s(G) ≤ z(G)`.
//! Deleting one edge of a connected `d`-regular graph yields such a graph,
//! which gives `r(G) ≥ 8|V|/5 − 1` for `d = 4` and `r(G) ≥ 5|V|/3 − 1` for
//! `d = 5`. All comparisons are exact.

use std::fmt::Write as _;
use std::time::Instant;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::generators;
use crate::graph::Graph;
use crate::pebble::pebble_rank;
use crate::rigidity::{generic_rank, DEFAULT_SEED, DEFAULT_TRIALS};

fn ratio(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Checks the potential's hypotheses: degrees at most `cap`, and a vertex of
/// degree below `cap` in every component that has an edge.
pub fn check_lemma_hypotheses(g: &Graph, cap: usize) -> Result<()> {
    if let Some(v) = g.vertices().find(|&v| g.degree(v).unwrap() > cap) {
        return Err(Error::Hypothesis(format!(
            "vertex {v} has degree {} > {cap}",
            g.degree(v).unwrap()
        )));
    }
    for comp in g.nontrivial_components() {
        if comp.iter().all(|&v| g.degree(v).unwrap() == cap) {
            return Err(Error::Hypothesis(format!(
                "component containing vertex {} is {cap}-regular",
                comp[0]
            )));
        }
    }
    Ok(())
}

/// Degree-four potential without the hypothesis check.
pub fn z4_unchecked(g: &Graph) -> Rational64 {
    let c = g.nontrivial_components().len() as i64;
    let weighted = g.degree_census(3) as i64 + 2 * g.degree_census(4) as i64;
    ratio(weighted + 2 * c, 5)
}

/// Degree-five potential without the hypothesis check.
pub fn z5_unchecked(g: &Graph) -> Rational64 {
    let c = g.nontrivial_components().len() as i64;
    let weighted =
        g.degree_census(3) as i64 + 2 * g.degree_census(4) as i64 + 3 * g.degree_census(5) as i64;
    ratio(5 * (weighted + 2 * c), 18)
}

pub fn z4(g: &Graph) -> Result<Rational64> {
    check_lemma_hypotheses(g, 4)?;
    Ok(z4_unchecked(g))
}

pub fn z5(g: &Graph) -> Result<Rational64> {
    check_lemma_hypotheses(g, 5)?;
    Ok(z5_unchecked(g))
}

/// `z4` or `z5` according to `cap`.
pub fn potential(g: &Graph, cap: usize) -> Result<Rational64> {
    match cap {
        4 => z4(g),
        5 => z5(g),
        _ => Err(Error::Precondition(format!(
            "degree cap must be 4 or 5, got {cap}"
        ))),
    }
}

pub(crate) fn potential_unchecked(g: &Graph, cap: usize) -> Rational64 {
    if cap == 4 {
        z4_unchecked(g)
    } else {
        z5_unchecked(g)
    }
}

/// The two regular-graph rank bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// Connected 4-regular: `r ≥ 8|V|/5 − 1`.
    DegreeFour,
    /// Connected 5-regular: `r ≥ 5|V|/3 − 1`.
    DegreeFive,
}

impl Theorem {
    pub fn degree(self) -> usize {
        match self {
            Theorem::DegreeFour => 4,
            Theorem::DegreeFive => 5,
        }
    }

    pub fn from_degree(d: usize) -> Option<Self> {
        match d {
            4 => Some(Theorem::DegreeFour),
            5 => Some(Theorem::DegreeFive),
            _ => None,
        }
    }

    pub fn rank_bound(self, vertex_count: usize) -> Rational64 {
        let n = vertex_count as i64;
        match self {
            Theorem::DegreeFour => ratio(8 * n, 5) - 1,
            Theorem::DegreeFive => ratio(5 * n, 3) - 1,
        }
    }
}

fn ser_ratio<S: Serializer>(q: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_ratio(q))
}

/// `"7"` or `"12/5"`.
pub fn format_ratio(q: &Rational64) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Outcome of one bound check. For theorem checks `z_value` is the stress
/// ceiling `|E| − theorem_bound`; for lemma checks it is the potential and
/// `theorem_bound` is `|E| − z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub graph_id: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub rank: usize,
    pub stress: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub z_value: Rational64,
    #[serde(serialize_with = "ser_ratio")]
    pub theorem_bound: Rational64,
    pub satisfied: bool,
    pub oracle_agreement: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "graph_id,vertex_count,edge_count,rank,stress,z_value,theorem_bound,satisfied,oracle_agreement,runtime_ms";

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_csv_row(&self) -> String {
        let mut row = String::new();
        let _ = write!(
            row,
            "{},{},{},{},{},{},{},{},{},",
            self.graph_id,
            self.vertex_count,
            self.edge_count,
            self.rank,
            self.stress,
            format_ratio(&self.z_value),
            format_ratio(&self.theorem_bound),
            self.satisfied,
            self.oracle_agreement,
        );
        if let Some(ms) = self.runtime_ms {
            let _ = write!(row, "{ms:.3}");
        }
        row
    }

    /// `rank − theorem_bound`.
    pub fn gap(&self) -> Rational64 {
        Rational64::from_integer(self.rank as i64) - self.theorem_bound
    }
}

struct Ranks {
    pebble: usize,
    matrix: usize,
}

fn both_ranks(g: &Graph) -> Ranks {
    Ranks {
        pebble: pebble_rank(g),
        matrix: generic_rank(g, DEFAULT_TRIALS, DEFAULT_SEED),
    }
}

fn report(
    graph_id: &str,
    g: &Graph,
    ranks: Ranks,
    z_value: Rational64,
    theorem_bound: Rational64,
    started: Instant,
) -> BoundReport {
    // the pebble game is authoritative; the matrix rank only certifies it
    let rank = ranks.pebble;
    BoundReport {
        graph_id: graph_id.to_string(),
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        rank,
        stress: g.edge_count() - rank,
        z_value,
        theorem_bound,
        satisfied: Rational64::from_integer(rank as i64) >= theorem_bound,
        oracle_agreement: ranks.pebble == ranks.matrix,
        runtime_ms: Some(started.elapsed().as_secs_f64() * 1e3),
    }
}

pub fn verify_theorem(g: &Graph, theorem: Theorem, graph_id: &str) -> Result<BoundReport> {
    let started = Instant::now();
    let d = theorem.degree();
    if !g.is_regular(d) {
        return Err(Error::Precondition(format!("graph is not {d}-regular")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let bound = theorem.rank_bound(g.vertex_count());
    let ceiling = Rational64::from_integer(g.edge_count() as i64) - bound;
    Ok(report(graph_id, g, both_ranks(g), ceiling, bound, started))
}

pub fn verify_theorem1(g: &Graph) -> Result<BoundReport> {
    verify_theorem(g, Theorem::DegreeFour, "graph")
}

pub fn verify_theorem2(g: &Graph) -> Result<BoundReport> {
    verify_theorem(g, Theorem::DegreeFive, "graph")
}

/// Checks `s(G) ≤ z(G)` directly from the ranks.
pub fn verify_lemma_bound(g: &Graph, cap: usize) -> Result<BoundReport> {
    verify_lemma_bound_as(g, cap, "graph")
}

pub fn verify_lemma_bound_as(g: &Graph, cap: usize, graph_id: &str) -> Result<BoundReport> {
    let started = Instant::now();
    let z = potential(g, cap)?;
    let bound = Rational64::from_integer(g.edge_count() as i64) - z;
    Ok(report(graph_id, g, both_ranks(g), z, bound, started))
}

/// Graph family for [`batch_verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Item `i` is the ring of `k_min + i mod (k_max − k_min + 1)` cliques.
    CliqueChain {
        clique_size: usize,
        k_min: usize,
        k_max: usize,
    },
    /// Item `i` draws `n` uniformly from the admissible sizes in
    /// `n_min..=n_max` with seed `seed + i`.
    RandomRegular {
        degree: usize,
        n_min: usize,
        n_max: usize,
    },
    /// Item `i` is K_n with `n = n_min + i mod (n_max − n_min + 1)`.
    Complete { n_min: usize, n_max: usize },
}

impl Family {
    /// The `index`-th member and its identifier.
    pub fn member(&self, index: usize, seed: u64) -> Result<(String, Graph)> {
        match *self {
            Family::CliqueChain {
                clique_size,
                k_min,
                k_max,
            } => {
                let k = cycle_pick(k_min, k_max, index)?;
                Ok((
                    format!("k{clique_size}chain-{k}"),
                    generators::clique_chain(clique_size, k)?,
                ))
            }
            Family::RandomRegular {
                degree,
                n_min,
                n_max,
            } => {
                let item_seed = seed.wrapping_add(index as u64);
                let sizes: Vec<usize> = (n_min.max(degree + 1)..=n_max)
                    .filter(|n| n * degree % 2 == 0)
                    .collect();
                if sizes.is_empty() {
                    return Err(Error::Infeasible(format!(
                        "no admissible size in {n_min}..={n_max} for degree {degree}"
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(item_seed);
                let n = sizes[rng.gen_range(0..sizes.len())];
                Ok((
                    format!("rr-d{degree}-n{n}-s{item_seed}"),
                    generators::random_regular(n, degree, item_seed)?,
                ))
            }
            Family::Complete { n_min, n_max } => {
                let n = cycle_pick(n_min, n_max, index)?;
                Ok((format!("k{n}"), generators::complete(n)))
            }
        }
    }
}

fn cycle_pick(lo: usize, hi: usize, index: usize) -> Result<usize> {
    if lo > hi {
        return Err(Error::Infeasible(format!("empty range {lo}..={hi}")));
    }
    Ok(lo + index % (hi - lo + 1))
}

/// Runs the theorem matching each member's regular degree. Items are
/// evaluated in parallel and returned in generation order.
pub fn batch_verify(family: &Family, count: usize, seed: u64) -> Vec<Result<BoundReport>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let (id, g) = family.member(i, seed)?;
            let degree = g.max_degree();
            let theorem = Theorem::from_degree(degree)
                .filter(|_| g.is_regular(degree))
                .ok_or_else(|| Error::Precondition(format!("{id} is not 4- or 5-regular")))?;
            verify_theorem(&g, theorem, &id)
        })
        .collect()
}

/// Aggregate of a batch run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub total: usize,
    pub satisfied: usize,
    pub violations: usize,
    pub oracle_mismatches: usize,
    pub errors: usize,
    /// Reports with `rank == theorem_bound`.
    pub tight: usize,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub min_gap: Option<Rational64>,
}

fn ser_opt_ratio<S: Serializer>(q: &Option<Rational64>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_ratio(q)),
        None => s.serialize_none(),
    }
}

impl BatchSummary {
    pub fn all_passed(&self) -> bool {
        self.violations == 0 && self.oracle_mismatches == 0 && self.errors == 0
    }
}

pub fn summarize(results: &[Result<BoundReport>]) -> BatchSummary {
    let reports: Vec<&BoundReport> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    BatchSummary {
        total: results.len(),
        satisfied: reports.iter().filter(|r| r.satisfied).count(),
        violations: reports.iter().filter(|r| !r.satisfied).count(),
        oracle_mismatches: reports.iter().filter(|r| !r.oracle_agreement).count(),
        errors: results.len() - reports.len(),
        tight: reports
            .iter()
            .filter(|r| r.gap() == Rational64::from_integer(0))
            .count(),
        min_gap: reports.iter().map(|r| r.gap()).min(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique_chain, complete, complete_minus_edge, random_regular};

    #[test]
    fn z4_examples() {
        assert_eq!(z4(&complete_minus_edge(5)).unwrap(), ratio(2, 1));
        assert_eq!(z4(&complete(4)).unwrap(), ratio(6, 5));
        let two = complete(4).disjoint_union(&complete(4));
        assert_eq!(z4(&two).unwrap(), ratio(12, 5));
        assert!(matches!(z4(&complete(5)), Err(Error::Hypothesis(_))));
        assert!(matches!(z4(&complete(6)), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn z5_examples() {
        assert_eq!(z5(&complete_minus_edge(6)).unwrap(), ratio(5, 1));
        assert_eq!(z5(&complete(5)).unwrap(), ratio(10, 3));
        assert_eq!(ratio(12, 1) / ratio(18, 5), ratio(10, 3));
        assert!(z5(&complete(6)).is_err());
    }

    #[test]
    fn isolated_vertices_do_not_count() {
        let g = complete(4).disjoint_union(&Graph::empty(3));
        assert_eq!(z4(&g).unwrap(), ratio(6, 5));
    }

    #[test]
    fn theorem_bounds_are_exact() {
        assert_eq!(Theorem::DegreeFour.rank_bound(5), ratio(7, 1));
        assert_eq!(Theorem::DegreeFive.rank_bound(6), ratio(9, 1));
        assert_eq!(Theorem::DegreeFour.rank_bound(7), ratio(51, 5));
    }

    #[test]
    fn tight_cases() {
        let r = verify_theorem1(&complete(5)).unwrap();
        assert_eq!((r.rank, r.gap()), (7, ratio(0, 1)));
        assert!(r.satisfied && r.oracle_agreement);
        let r = verify_theorem2(&complete(6)).unwrap();
        assert_eq!((r.rank, r.gap()), (9, ratio(0, 1)));
        for k in 2..=4 {
            let r = verify_theorem1(&clique_chain(5, k).unwrap()).unwrap();
            assert_eq!(r.rank, 8 * k);
            assert_eq!(r.gap(), ratio(1, 1));
        }
    }

    #[test]
    fn theorem_rejects_wrong_inputs() {
        assert!(verify_theorem1(&complete(6)).is_err());
        let two = complete(5).disjoint_union(&complete(5));
        assert!(matches!(verify_theorem1(&two), Err(Error::Disconnected)));
    }

    #[test]
    fn lemma_examples() {
        let r = verify_lemma_bound(&complete_minus_edge(5), 4).unwrap();
        assert_eq!((r.stress, r.z_value), (2, ratio(2, 1)));
        assert!(r.satisfied);
        let r = verify_lemma_bound(&complete_minus_edge(6), 5).unwrap();
        assert_eq!((r.stress, r.z_value), (5, ratio(5, 1)));
        assert!(r.satisfied);
        for seed in 0..10 {
            let g = random_regular(14, 4, seed).unwrap();
            let first = g.edges().next().unwrap();
            let h = g.without_edges(&[first]).unwrap();
            let r = verify_lemma_bound(&h, 4).unwrap();
            assert_eq!(r.z_value, ratio(2 * 14, 5));
            assert!(r.satisfied);
        }
    }

    #[test]
    fn batch_examples() {
        let family = Family::CliqueChain {
            clique_size: 5,
            k_min: 2,
            k_max: 6,
        };
        let reports: Vec<_> = batch_verify(&family, 5, 0)
            .into_iter()
            .map(Result::unwrap)
            .collect();
        assert!(reports.iter().all(|r| r.gap() == ratio(1, 1)));
        assert!(batch_verify(&family, 0, 0).is_empty());
        let summary = summarize(&batch_verify(&family, 5, 0));
        assert!(summary.all_passed());
        assert_eq!((summary.tight, summary.min_gap), (0, Some(ratio(1, 1))));

        let family = Family::RandomRegular {
            degree: 4,
            n_min: 6,
            n_max: 20,
        };
        let a = batch_verify(&family, 6, 3);
        assert!(a.iter().all(|r| r.as_ref().unwrap().satisfied));
        let b = batch_verify(&family, 6, 3);
        let strip = |v: Vec<Result<BoundReport>>| {
            v.into_iter()
                .map(|r| BoundReport {
                    runtime_ms: None,
                    ..r.unwrap()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(a), strip(b));
    }

    #[test]
    fn infeasible_family_items_are_errors() {
        let family = Family::RandomRegular {
            degree: 5,
            n_min: 7,
            n_max: 7,
        };
        assert!(batch_verify(&family, 2, 0).iter().all(Result::is_err));
        let family = Family::Complete { n_min: 4, n_max: 4 };
        let results = batch_verify(&family, 1, 0);
        assert!(results[0].is_err());
        assert!(!summarize(&results).all_passed());
    }

    #[test]
    fn csv_and_json_rows() {
        let mut r = verify_theorem1(&complete(5)).unwrap();
        r.runtime_ms = None;
        assert_eq!(r.to_csv_row(), "graph,5,10,7,3,3,7,true,true,");
        let json = r.to_json_line();
        assert!(json.starts_with("{\"graph_id\":\"graph\",\"vertex_count\":5"));
        assert!(!json.contains("runtime_ms"));
        assert_eq!(
            BoundReport::CSV_HEADER.split(',').count(),
            r.to_csv_row().split(',').count()
        );
    }
}
