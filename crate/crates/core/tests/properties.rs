use num_rational::Rational64;
use proptest::prelude::*;

use rigidity_core::bounds::{self, Theorem};
use rigidity_core::generators;
use rigidity_core::pebble::pebble_rank;
use rigidity_core::realization::{sample_field, sample_rational};
use rigidity_core::reductions::{certify_stress_bound, simplify, StressRelation};
use rigidity_core::rigidity::{generic_rank, h1_dimension, RigidityMatrix};
use rigidity_core::{Fp, Graph};

fn small_graph() -> impl Strategy<Value = Graph> {
    (1usize..12, 0.0f64..1.0, any::<u64>())
        .prop_map(|(n, p, seed)| generators::random_graph(n, p, seed))
}

/// Random graph with every degree capped at `cap` by dropping edges.
fn capped_graph(cap: usize) -> impl Strategy<Value = Graph> {
    (2usize..16, 0.1f64..0.7, any::<u64>()).prop_map(move |(n, p, seed)| {
        let g = generators::random_graph(n, p, seed);
        let mut degree = vec![0usize; n];
        let mut kept = Vec::new();
        for e in g.edges() {
            let [a, b] = e.endpoints();
            if degree[a] < cap && degree[b] < cap {
                degree[a] += 1;
                degree[b] += 1;
                kept.push((a, b));
            }
        }
        Graph::from_edges(n, kept).unwrap()
    })
}

fn eligible(g: &Graph, cap: usize) -> bool {
    bounds::check_lemma_hypotheses(g, cap).is_ok()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_is_bounded_and_agrees(g in small_graph()) {
        let r = generic_rank(&g, 3, 1);
        prop_assert_eq!(r, pebble_rank(&g));
        prop_assert!(r <= g.edge_count());
        if g.vertex_count() >= 3 {
            prop_assert!(r <= 2 * g.vertex_count() - 3);
        }
        prop_assert_eq!(h1_dimension(&g), 2 * g.vertex_count() - r);
    }

    #[test]
    fn specialization_never_raises_rank(g in small_graph(), seed in any::<u64>()) {
        let m = RigidityMatrix::build(&g, &sample_field(g.vertex_count(), seed)).unwrap();
        prop_assert!(m.rank() <= generic_rank(&g, 3, 2));
    }

    #[test]
    fn rows_sum_to_zero_per_coordinate(g in small_graph(), seed in any::<u64>()) {
        let m = RigidityMatrix::build(&g, &sample_field(g.vertex_count(), seed)).unwrap();
        for row in m.matrix().row_vectors() {
            let even = row.iter().step_by(2).fold(Fp::new(0), |a, &b| a + b);
            let odd = row.iter().skip(1).step_by(2).fold(Fp::new(0), |a, &b| a + b);
            prop_assert!(even.is_zero() && odd.is_zero());
        }
    }

    #[test]
    fn stress_basis_complements_rank(g in (1usize..8, 0.3f64..1.0, any::<u64>())
        .prop_map(|(n, p, s)| generators::random_graph(n, p, s)), seed in any::<u64>()) {
        let r = sample_rational(g.vertex_count(), seed).unwrap();
        let m = RigidityMatrix::build(&g, &r).unwrap();
        let basis = m.stress_basis();
        prop_assert_eq!(basis.len() + m.rank(), g.edge_count());
        for omega in &basis.vectors {
            prop_assert!(m.is_stress(omega));
        }
    }

    #[test]
    fn potentials_are_additive(a in capped_graph(4), b in capped_graph(4)) {
        prop_assume!(eligible(&a, 4) && eligible(&b, 4));
        let both = a.disjoint_union(&b);
        prop_assert_eq!(bounds::z4(&both).unwrap(), bounds::z4(&a).unwrap() + bounds::z4(&b).unwrap());
    }

    #[test]
    fn lemma_bound_holds(g in capped_graph(4), h in capped_graph(5)) {
        if eligible(&g, 4) {
            let report = bounds::verify_lemma_bound(&g, 4).unwrap();
            prop_assert!(report.satisfied && report.oracle_agreement);
        }
        if eligible(&h, 5) {
            let report = bounds::verify_lemma_bound(&h, 5).unwrap();
            prop_assert!(report.satisfied && report.oracle_agreement);
        }
    }

    #[test]
    fn certificates_hold_on_capped_graphs(g in capped_graph(4), h in capped_graph(5)) {
        for (graph, cap) in [(g, 4), (h, 5)] {
            if !eligible(&graph, cap) {
                continue;
            }
            let cert = certify_stress_bound(&graph, cap).unwrap();
            prop_assert!(cert.valid, "{:?}", cert.check);
            prop_assert!(cert.trace.final_graph.edge_count() == 0);
            prop_assert!(Rational64::from_integer(cert.stress as i64) <= cert.potential);
        }
    }

    #[test]
    fn simplify_is_exact(g in small_graph()) {
        let trace = simplify(&g).unwrap();
        prop_assert_eq!(trace.accumulated_relation, StressRelation::Equal);
        let check = trace.verify().unwrap();
        prop_assert!(check.is_valid());
        let last = trace.final_graph.clone();
        prop_assert!(last.vertices().all(|v| last.degree(v).unwrap() != 1 && last.degree(v).unwrap() != 2));
        prop_assert!(last.bridges().is_empty());
    }
}

#[test]
fn theorem_bounds_for_clique_chains_are_off_by_one() {
    for k in 2..=6 {
        let report = bounds::verify_theorem1(&generators::clique_chain(5, k).unwrap()).unwrap();
        assert_eq!(report.gap(), Rational64::from_integer(1));
        assert_eq!(
            Rational64::from_integer(report.rank as i64),
            Theorem::DegreeFour.rank_bound(5 * k) + 1
        );
    }
    for k in 2..=5 {
        let report = bounds::verify_theorem2(&generators::clique_chain(6, k).unwrap()).unwrap();
        assert_eq!(report.gap(), Rational64::from_integer(1));
    }
}

#[test]
fn regular_graphs_minus_an_edge_meet_the_potential() {
    for seed in 0..20 {
        let g = generators::random_regular(20, 4, seed).unwrap();
        let first = g.edges().next().unwrap();
        let h = g.without_edges(&[first]).unwrap();
        let report = bounds::verify_lemma_bound(&h, 4).unwrap();
        assert_eq!(report.z_value, Rational64::new(2 * 20, 5));
        assert!(report.satisfied);
    }
}
