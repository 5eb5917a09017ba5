//! Browser bindings. Every export takes plain strings and numbers and
//! returns a JSON string for the page script to draw.

use feedback_bandits::domination::solve_primal;
use feedback_bandits::env::{bai_instances, bai_success_rate, BaiFamily, EnvSpec};
use feedback_bandits::generators::named;
use feedback_bandits::harness::report_params;
use feedback_bandits::osmd::{make_config, run_episode, RunOptions};
use feedback_bandits::DirectedGraph;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Most points sent back for one curve.
const MAX_POINTS: usize = 400;

/// Catalogue name (`bipartite:2,8`) or edge-list text.
fn graph_from(input: &str) -> Result<DirectedGraph, String> {
    let trimmed = input.trim();
    let looks_like_text = trimmed.contains('\n') || trimmed.chars().all(|c| c.is_ascii_digit());
    let g = if looks_like_text {
        DirectedGraph::parse(trimmed)
    } else {
        named(trimmed)
    };
    g.map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct GraphView {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(flatten)]
    params: feedback_bandits::harness::ParamsReport,
    /// Exploration distribution from the covering LP.
    exploration: Vec<f64>,
}

pub fn graph_params_json(input: &str) -> Result<String, String> {
    let g = graph_from(input)?;
    let params = report_params(&g).map_err(|e| e.to_string())?;
    let exploration = solve_primal(&g)
        .map_err(|e| e.to_string())?
        .exploration_distribution();
    to_json(&GraphView {
        n: g.n(),
        edges: g.edges().to_vec(),
        params,
        exploration,
    })
}

#[derive(Serialize)]
struct Curve {
    t: Vec<usize>,
    regret: Vec<f64>,
    pseudo_regret: Vec<Option<f64>>,
    gamma: f64,
    eta: f64,
    delta_star: f64,
    /// Pulls per arm over the whole episode.
    pulls: Vec<usize>,
}

pub fn regret_curve_json(
    graph: &str,
    env: &str,
    horizon: usize,
    seed: u64,
) -> Result<String, String> {
    let g = graph_from(graph)?;
    let spec = EnvSpec::parse(env).map_err(|e| e.to_string())?;
    let cfg = make_config(&g, horizon, &solve_primal(&g).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let mut e = spec.build(&g, horizon, seed).map_err(|e| e.to_string())?;
    let trace = run_episode(&g, e.as_mut(), &cfg, seed, RunOptions::default())
        .map_err(|e| e.to_string())?;
    let stride = horizon.div_ceil(MAX_POINTS).max(1);
    let kept: Vec<_> = trace
        .rounds
        .iter()
        .filter(|r| r.t % stride == 0 || r.t == horizon)
        .collect();
    let mut pulls = vec![0; g.n()];
    for r in &trace.rounds {
        pulls[r.arm] += 1;
    }
    to_json(&Curve {
        t: kept.iter().map(|r| r.t).collect(),
        regret: kept.iter().map(|r| r.cum_regret).collect(),
        pseudo_regret: kept.iter().map(|r| r.pseudo_regret).collect(),
        gamma: cfg.gamma,
        eta: cfg.eta,
        delta_star: cfg.delta_star,
        pulls,
    })
}

#[derive(Serialize)]
struct BaiPoint {
    pulls: usize,
    success: f64,
}

/// Success rate of uniform pulling on the last instance of the `P` family,
/// for `points` budgets spaced geometrically from 1 to `max_pulls`. Ties go
/// to the lowest index, so the last instance gets no help from them.
pub fn bai_curve_json(
    n: usize,
    eps: f64,
    max_pulls: usize,
    points: usize,
    trials: usize,
    seed: u64,
) -> Result<String, String> {
    if points < 2 || max_pulls < 1 {
        return Err("need at least two budgets".into());
    }
    let means = bai_instances(n, eps, BaiFamily::P).map_err(|e| e.to_string())?;
    let mut budgets: Vec<usize> = (0..points)
        .map(|i| {
            (max_pulls as f64)
                .powf(i as f64 / (points - 1) as f64)
                .round() as usize
        })
        .collect();
    budgets.dedup();
    let curve: Vec<BaiPoint> = budgets
        .iter()
        .map(|&t| BaiPoint {
            pulls: t,
            success: bai_success_rate(&means[n - 1], n - 1, t, trials, seed),
        })
        .collect();
    to_json(&curve)
}

#[wasm_bindgen]
pub fn graph_params(input: &str) -> Result<String, JsValue> {
    graph_params_json(input).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn regret_curve(graph: &str, env: &str, horizon: usize, seed: u32) -> Result<String, JsValue> {
    regret_curve_json(graph, env, horizon, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bai_curve(
    n: usize,
    eps: f64,
    max_pulls: usize,
    points: usize,
    trials: usize,
    seed: u32,
) -> Result<String, JsValue> {
    bai_curve_json(n, eps, max_pulls, points, trials, seed as u64)
        .map_err(|e| JsValue::from_str(&e))
}
