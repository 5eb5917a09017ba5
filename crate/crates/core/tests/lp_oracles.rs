mod common;

use feedback_bandits::domination::{
    gap_report, integral_delta, integral_zeta, solve_dual, solve_dual_in, solve_primal,
    solve_primal_in, TOL,
};
use feedback_bandits::generators::{directed_tree, orthogonal_f2k, random_weakly_observable};
use feedback_bandits::rng::{stream, Stream};
use feedback_bandits::DirectedGraph;
use proptest::prelude::*;

#[test]
fn six_vertex_lp_matches_vertex_enumeration() {
    let mut rng = stream(21, Stream::Aux(0));
    for _ in 0..40 {
        let g = random_weakly_observable(6, &mut rng);
        let exact = solve_primal(&g).unwrap().value;
        let float = solve_primal_in::<f64>(&g).unwrap().value;
        let oracle = common::lp_vertex_oracle(&g);
        assert!((exact - oracle).abs() < 1e-6, "{exact} vs {oracle}\n{g}");
        assert!((float - exact).abs() < 1e-9);
        let dual = solve_dual_in::<f64>(&g).unwrap().value;
        assert!((dual - oracle).abs() < 1e-6);
    }
}

#[test]
fn integral_values_match_subset_enumeration() {
    let mut rng = stream(22, Stream::Aux(0));
    for i in 0..150 {
        let g = random_weakly_observable(3 + i % 9, &mut rng);
        let d = integral_delta(&g).unwrap();
        assert!(d.exact);
        assert_eq!(Some(d.value), common::brute_delta(&g), "{g}");
        let z = integral_zeta(&g);
        assert!(z.exact);
        assert_eq!(z.value, common::brute_zeta(&g), "{g}");
    }
}

#[test]
fn small_orthogonal_graph_by_enumeration() {
    let g = orthogonal_f2k(2).unwrap();
    assert_eq!(g.n(), 7);
    assert_eq!(common::brute_delta(&g), Some(2));
    assert_eq!(integral_delta(&g).unwrap().value, 2);
}

#[test]
fn directed_trees_have_no_packing_gap() {
    // Root self-looped so the covering side is feasible too.
    let tree = directed_tree(&[0, 0, 1, 1, 2, 4]).unwrap();
    let mut edges = tree.edges().to_vec();
    edges.push((0, 0));
    let g = DirectedGraph::new(tree.n(), edges).unwrap();
    let r = gap_report(&g).unwrap();
    assert!((r.dual_gap - 1.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn duality_feasibility_and_sandwich(g in common::arb_coverable(8)) {
        let p = solve_primal(&g).unwrap();
        let d = solve_dual(&g).unwrap();
        prop_assert!((p.value - d.value).abs() <= TOL);
        prop_assert!(p.is_feasible(&g, 1e-9));
        prop_assert!(d.is_feasible(&g, 1e-9));
        let delta = integral_delta(&g).unwrap().value as f64;
        let zeta = integral_zeta(&g).value as f64;
        prop_assert!(zeta <= d.value + TOL && p.value <= delta + TOL);
    }

    #[test]
    fn isolated_looped_vertex_leaves_delta_star_unchanged(g in common::arb_coverable(7)) {
        let n = g.n();
        let mut edges = g.edges().to_vec();
        edges.push((n, n));
        let h = DirectedGraph::new(n + 1, edges).unwrap();
        let a = solve_primal(&g).unwrap().value;
        let b = solve_primal(&h).unwrap().value;
        prop_assert!((a - b).abs() <= TOL);
    }
}
