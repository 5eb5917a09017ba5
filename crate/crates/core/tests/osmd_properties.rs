//! Mirror-descent learner: simplex preservation, exact unbiasedness,
//! agreement with a numeric argmin, and end-to-end regret behaviour.

mod common;

use feedback_bandits::domination::solve_primal;
use feedback_bandits::env::{ConstantEnv, EnvSpec, Environment, ProbabilisticGraph};
use feedback_bandits::generators::{clique_with_loops, revealing_pairs};
use feedback_bandits::osmd::{
    estimate_loss, make_config, manual_config, md_update, run_episode, run_probabilistic,
    run_time_varying, variance_terms, PolicyState, RunOptions, StepMode,
};
use feedback_bandits::rng::{stream, Stream};
use feedback_bandits::DirectedGraph;
use proptest::prelude::*;

fn simplex(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..1.0, n).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.iter().map(|v| v / s).collect()
    })
}

proptest! {
    #[test]
    fn updates_stay_on_the_simplex(
        (prev, lhat) in (2usize..8).prop_flat_map(|n| (simplex(n), proptest::collection::vec(0.0f64..1e4, n))),
        eta in 1e-3f64..10.0,
    ) {
        let n = prev.len();
        let u = vec![1.0 / n as f64; n];
        let cfg = manual_config(n, 1, 0.0, eta, u.clone()).unwrap();
        let mut state = PolicyState::with_iterate(prev, 0.0, &u).unwrap();
        for _ in 0..20 {
            md_update(&mut state, &cfg, &lhat);
            prop_assert!((state.x.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            prop_assert!(state.x.iter().all(|&v| v > 0.0 && v.is_finite()));
        }
    }

    #[test]
    fn estimator_is_unbiased_as_a_finite_sum(
        g in common::arb_coverable(7),
        seed in any::<u64>(),
    ) {
        let n = g.n();
        let mut rng = stream(seed, Stream::Aux(0));
        let mut state = PolicyState::with_iterate(vec![1.0 / n as f64; n], 0.0, &vec![1.0 / n as f64; n]).unwrap();
        state.x_tilde = common::random_simplex(n, &mut rng);
        let losses: Vec<f64> = (0..n).map(|i| ((seed >> (i % 60)) & 7) as f64 / 7.0).collect();
        let observed: Vec<Option<f64>> = losses.iter().copied().map(Some).collect();
        let mut expect = vec![0.0; n];
        for arm in 0..n {
            let lhat = estimate_loss(&g, &state, arm, &observed).unwrap();
            for j in 0..n {
                expect[j] += state.x_tilde[arm] * lhat[j];
            }
        }
        for j in (0..n).filter(|&j| !g.in_nbrs(j).is_empty()) {
            prop_assert!((expect[j] - losses[j]).abs() <= 1e-12, "j={} {} vs {}", j, expect[j], losses[j]);
        }
    }

    #[test]
    fn update_matches_numeric_argmin(
        (prev, lhat) in (2usize..=4).prop_flat_map(|n| (simplex(n), proptest::collection::vec(0.0f64..5.0, n))),
        eta in 0.01f64..2.0,
    ) {
        let n = prev.len();
        let u = vec![1.0 / n as f64; n];
        let cfg = manual_config(n, 1, 0.0, eta, u.clone()).unwrap();
        let mut state = PolicyState::with_iterate(prev.clone(), 0.0, &u).unwrap();
        md_update(&mut state, &cfg, &lhat);
        let oracle = common::kkt_argmin(&prev, &lhat, eta);
        for k in 0..n {
            prop_assert!((state.x[k] - oracle[k]).abs() <= 1e-6);
        }
    }
}

#[test]
fn missing_observation_is_a_contract_error() {
    let g = revealing_pairs(2).unwrap();
    let n = g.n();
    let state =
        PolicyState::with_iterate(vec![1.0 / n as f64; n], 0.0, &vec![1.0 / n as f64; n]).unwrap();
    let observed = vec![None; n];
    let arm = 0;
    assert!(!g.out_nbrs(arm).is_empty());
    let err = estimate_loss(&g, &state, arm, &observed).unwrap_err();
    assert!(!err.is_bad_input());
}

#[test]
fn identical_constant_losses_give_zero_regret() {
    let g = revealing_pairs(3).unwrap();
    let cfg = make_config(&g, 500, &solve_primal(&g).unwrap()).unwrap();
    let mut env = ConstantEnv::new(vec![0.3; g.n()]).unwrap();
    let trace = run_episode(&g, &mut env, &cfg, 9, RunOptions::default()).unwrap();
    assert_eq!(trace.final_regret, 0.0);
    assert!(trace.rounds.iter().all(|r| r.cum_regret == 0.0));
}

#[test]
fn out_of_range_loss_aborts_with_round() {
    struct Bad;
    impl Environment for Bad {
        fn arms(&self) -> usize {
            4
        }
        fn losses(&mut self, t: usize, out: &mut [f64]) -> feedback_bandits::Result<()> {
            out.fill(if t == 3 { 1.5 } else { 0.5 });
            Ok(())
        }
        fn descriptor(&self) -> String {
            "bad".into()
        }
    }
    let g = revealing_pairs(2).unwrap();
    let cfg = make_config(&g, 10, &solve_primal(&g).unwrap()).unwrap();
    let err = run_episode(&g, &mut Bad, &cfg, 0, RunOptions::default()).unwrap_err();
    assert!(err.to_string().contains("round 3"), "{err}");
    assert!(!err.is_bad_input());
}

#[test]
fn full_feedback_clique_regret_is_sublinear() {
    // Strongly observable graphs are refused by make_config, so the step
    // sizes are set by hand.
    let n = 5;
    let g = clique_with_loops(n);
    let mut losses = vec![1.0; n];
    losses[2] = 0.0;
    let mut per_round = Vec::new();
    for horizon in [1000usize, 4000, 16000] {
        let gamma = 0.0;
        let eta = ((n as f64).ln() / horizon as f64).sqrt();
        let cfg = manual_config(n, horizon, gamma, eta, vec![1.0 / n as f64; n]).unwrap();
        let mut env = ConstantEnv::new(losses.clone()).unwrap();
        let trace = run_episode(&g, &mut env, &cfg, 1, RunOptions::default()).unwrap();
        per_round.push(trace.final_regret / horizon as f64);
    }
    assert!(per_round.windows(2).all(|w| w[1] < w[0]), "{per_round:?}");
}

#[test]
fn variance_bounds_hold_along_an_episode() {
    let g = revealing_pairs(6).unwrap();
    let sol = solve_primal(&g).unwrap();
    let cfg = make_config(&g, 3000, &sol).unwrap();
    let mut env = EnvSpec::parse("hard:S=6..12,j=7,eps=0.2")
        .unwrap()
        .build(&g, 3000, 4)
        .unwrap();
    let opts = RunOptions {
        record_rounds: false,
        check_variance: true,
    };
    run_episode(&g, env.as_mut(), &cfg, 4, opts).unwrap();

    let n = g.n();
    let state = PolicyState::with_iterate(vec![1.0 / n as f64; n], cfg.gamma, &cfg.u).unwrap();
    let terms = variance_terms(&g, &state);
    assert!(terms.looped <= 2.0 * n as f64);
    assert!(terms.loop_free <= sol.value / cfg.gamma * (1.0 + 1e-9));
}

fn opts() -> RunOptions {
    RunOptions::default()
}

#[test]
fn runners_agree_on_a_fixed_graph() {
    let g = revealing_pairs(3).unwrap();
    let sol = solve_primal(&g).unwrap();
    let horizon = 400;
    let cfg = make_config(&g, horizon, &sol).unwrap();
    let spec = EnvSpec::parse("hard:S=3..6,j=4,eps=0.1").unwrap();

    let mut e1 = spec.build(&g, horizon, 11).unwrap();
    let fixed = run_episode(&g, e1.as_mut(), &cfg, 11, opts()).unwrap();

    let gs = vec![g.clone(); horizon];
    let mut e2 = spec.build(&g, horizon, 11).unwrap();
    let varying =
        run_time_varying(&gs, e2.as_mut(), StepMode::Offline(sol.value), 11, opts()).unwrap();

    let pg = ProbabilisticGraph::uniform(g.clone(), 1.0).unwrap();
    let mut e3 = spec.build(&g, horizon, 11).unwrap();
    let prob = run_probabilistic(
        &pg,
        e3.as_mut(),
        horizon,
        StepMode::Offline(sol.value),
        11,
        opts(),
    )
    .unwrap();

    assert_eq!(fixed.rounds, varying.rounds);
    assert_eq!(fixed.rounds, prob.rounds);
    assert_eq!(prob.flagged_rounds, 0);
}

#[test]
fn alternating_graphs_average_their_domination_numbers() {
    let a = revealing_pairs(2).unwrap();
    let b =
        DirectedGraph::new(4, [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (2, 2), (3, 3)]).unwrap();
    let (da, db) = (
        solve_primal(&a).unwrap().value,
        solve_primal(&b).unwrap().value,
    );
    let gs: Vec<DirectedGraph> = (0..100)
        .map(|t| if t % 2 == 0 { a.clone() } else { b.clone() })
        .collect();
    let mut env = ConstantEnv::new(vec![0.5; 4]).unwrap();
    let trace = run_time_varying(&gs, &mut env, StepMode::Adaptive, 0, opts()).unwrap();
    assert!((trace.mean_delta_star.unwrap() - (da + db) / 2.0).abs() < 1e-9);
}

#[test]
fn uncovered_graph_in_sequence_names_the_round() {
    let good = revealing_pairs(2).unwrap();
    let bad = DirectedGraph::new(4, [(0, 1), (1, 0), (2, 3)]).unwrap();
    let gs = vec![good.clone(), good.clone(), bad, good];
    let mut env = ConstantEnv::new(vec![0.5; 4]).unwrap();
    let err = run_time_varying(&gs, &mut env, StepMode::Offline(2.0), 0, opts()).unwrap_err();
    assert!(err.to_string().contains("round 3"), "{err}");
}

#[test]
fn probabilistic_expectation_matches_sampling() {
    // Vertex 0 is looped; 1 and 2 are not. Edge 0->2 fires half the time:
    // with it {0} dominates (δ* = 1), without it 2 needs 1 and 1 needs 0 or 2
    // (δ* = 2). Every realization covers both loop-free vertices.
    let base = DirectedGraph::new(3, [(0, 0), (0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
    let probs = vec![1.0, 1.0, 0.5, 1.0, 0.6];
    let pg = ProbabilisticGraph::new(base, probs).unwrap();
    let exact = pg.expected_delta_star().unwrap();
    assert!((exact - 1.5).abs() < 1e-9);
    let (est, skipped) = pg.sample_delta_star(10_000, 3);
    assert_eq!(skipped, 0);
    assert!((exact - est).abs() < 0.02, "{exact} vs {est}");
}
