//! Online stochastic mirror descent with exploration.
//!
//! Each round the learner plays from `X̃ = (1 - γ) X + γ u`, where `X` is
//! the mirror-descent iterate and `u` is the normalized optimal fractional
//! weak dominating set, so every loop-free arm is observed with probability
//! at least `γ / δ*`. Observed losses are importance-weighted by their
//! observation probability and fed to an exponential-weights step (mirror
//! descent with the negentropy potential).
//!
//! Weights are kept as normalized logarithms so large estimates never
//! underflow the whole vector.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domination::{solve_primal, DominationSolution};
use crate::env::{check_round, Environment, ProbabilisticGraph};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, ObservabilityClass};
use crate::harness::{RegretTrace, RoundRecord};
use crate::rng::{stream, Stream, StreamRng};

/// Relative slack on the per-round variance bounds.
const VARIANCE_SLACK: f64 = 1e-9;

/// Cap on cached LP solutions in the time-varying runners.
const LP_CACHE_LIMIT: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub gamma: f64,
    pub eta: f64,
    pub u: Vec<f64>,
    pub horizon: usize,
    pub delta_star: f64,
    /// Set when the horizon is below `n^3 ln n / δ*^2` or `γ` was clamped.
    pub warning: bool,
}

/// `γ = (δ* ln n / T)^(1/3)` clamped to `1/2`, `η = γ² / δ*`.
pub fn step_sizes(n: usize, horizon: usize, delta_star: f64) -> (f64, f64, bool) {
    let ln_n = (n as f64).ln();
    let raw = (delta_star * ln_n / horizon as f64).cbrt();
    let gamma = raw.min(0.5);
    let eta = gamma * gamma / delta_star;
    let threshold = (n as f64).powi(3) * ln_n / (delta_star * delta_star);
    (gamma, eta, raw > 0.5 || (horizon as f64) < threshold)
}

/// Parameters for a weakly observable graph from its fractional domination
/// solution.
pub fn make_config(
    g: &DirectedGraph,
    horizon: usize,
    sol: &DominationSolution,
) -> Result<PolicyConfig> {
    match g.classify() {
        ObservabilityClass::WeaklyObservable => {}
        ObservabilityClass::StronglyObservable => {
            return Err(Error::Observability(
                "graph is strongly observable; only weakly observable graphs are supported",
            ))
        }
        ObservabilityClass::NonObservable => {
            return Err(Error::Observability(
                "graph is not observable; some arm has no in-neighbor",
            ))
        }
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    config_for(g.n(), horizon, sol.value, sol.exploration_distribution())
}

/// Parameters from an arbitrary positive domination value and exploration
/// distribution, e.g. uniform over an integral dominating set.
pub fn config_for(n: usize, horizon: usize, delta_star: f64, u: Vec<f64>) -> Result<PolicyConfig> {
    if !(delta_star > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "domination value {delta_star} must be positive"
        )));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    check_distribution(n, &u)?;
    let (gamma, eta, warning) = step_sizes(n, horizon, delta_star);
    Ok(PolicyConfig {
        gamma,
        eta,
        u,
        horizon,
        delta_star,
        warning,
    })
}

/// Fully manual parameters; no graph checks. `gamma = 0` disables
/// exploration, which is only sound when every arm observes itself.
pub fn manual_config(
    n: usize,
    horizon: usize,
    gamma: f64,
    eta: f64,
    u: Vec<f64>,
) -> Result<PolicyConfig> {
    if !(0.0..=0.5).contains(&gamma) || !(eta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= gamma <= 1/2 and eta > 0, got {gamma}, {eta}"
        )));
    }
    check_distribution(n, &u)?;
    Ok(PolicyConfig {
        gamma,
        eta,
        u,
        horizon,
        delta_star: f64::NAN,
        warning: false,
    })
}

fn check_distribution(n: usize, u: &[f64]) -> Result<()> {
    let s: f64 = u.iter().sum();
    if u.len() != n || u.iter().any(|&p| !(p >= 0.0)) || (s - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(
            "exploration distribution must be a point of the simplex".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyState {
    log_x: Vec<f64>,
    pub x: Vec<f64>,
    pub x_tilde: Vec<f64>,
    pub t: usize,
}

/// Uniform iterate, mixed with the configured exploration.
pub fn init_state(n: usize, cfg: &PolicyConfig) -> PolicyState {
    let mut s = PolicyState {
        log_x: vec![-(n as f64).ln(); n],
        x: vec![1.0 / n as f64; n],
        x_tilde: vec![0.0; n],
        t: 1,
    };
    s.mix(cfg.gamma, &cfg.u);
    s
}

impl PolicyState {
    /// State with iterate `x` (strictly positive, summing to one), mixed
    /// with `gamma` and `u`.
    pub fn with_iterate(x: Vec<f64>, gamma: f64, u: &[f64]) -> Result<Self> {
        check_distribution(x.len(), &x)?;
        if x.iter().any(|&v| v <= 0.0) {
            return Err(Error::InvalidArgument(
                "iterate must be strictly positive".into(),
            ));
        }
        let mut s = PolicyState {
            log_x: x.iter().map(|v| v.ln()).collect(),
            x_tilde: vec![0.0; x.len()],
            x,
            t: 1,
        };
        s.mix(gamma, u);
        Ok(s)
    }

    /// Recomputes `X̃ = (1 - γ) X + γ u`.
    pub fn mix(&mut self, gamma: f64, u: &[f64]) {
        for ((xt, &x), &ui) in self.x_tilde.iter_mut().zip(&self.x).zip(u) {
            *xt = (1.0 - gamma) * x + gamma * ui;
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total: f64 = self.x_tilde.iter().sum();
        let mut r = rng.random::<f64>() * total;
        let mut last = 0;
        for (i, &p) in self.x_tilde.iter().enumerate() {
            if p > 0.0 {
                if r < p {
                    return i;
                }
                r -= p;
                last = i;
            }
        }
        last
    }
}

/// Probability that each arm is observed when playing `x_tilde` on `g`.
pub fn observation_probs(g: &DirectedGraph, x_tilde: &[f64]) -> Vec<f64> {
    (0..g.n())
        .map(|j| g.in_nbrs(j).iter().map(|&i| x_tilde[i]).sum())
        .collect()
}

/// Importance-weighted estimate after playing `arm`. `observed[j]` must hold
/// the loss of every out-neighbor `j` of `arm`; other entries are ignored.
pub fn estimate_loss(
    g: &DirectedGraph,
    state: &PolicyState,
    arm: usize,
    observed: &[Option<f64>],
) -> Result<Vec<f64>> {
    let mut lhat = vec![0.0; g.n()];
    for &j in g.out_nbrs(arm) {
        let loss =
            observed[j].ok_or_else(|| Error::Contract(format!("loss of arm {j} not observed")))?;
        let p: f64 = g.in_nbrs(j).iter().map(|&i| state.x_tilde[i]).sum();
        lhat[j] = loss / p;
    }
    Ok(lhat)
}

/// Exponential-weights step `X' ∝ X exp(-η ℓ̂)`, then re-mixing with the
/// configured exploration.
pub fn md_update(state: &mut PolicyState, cfg: &PolicyConfig, lhat: &[f64]) {
    md_step(state, cfg.eta, lhat);
    state.mix(cfg.gamma, &cfg.u);
}

fn md_step(state: &mut PolicyState, eta: f64, lhat: &[f64]) {
    for (lx, &l) in state.log_x.iter_mut().zip(lhat) {
        *lx -= eta * l;
    }
    let max = state
        .log_x
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let lse = max
        + state
            .log_x
            .iter()
            .map(|&v| (v - max).exp())
            .sum::<f64>()
            .ln();
    for (x, lx) in state.x.iter_mut().zip(state.log_x.iter_mut()) {
        *lx -= lse;
        *x = lx.exp().max(f64::MIN_POSITIVE);
    }
    state.t += 1;
}

/// The two sums bounding the estimator's second moment:
/// `Σ_{i∉U} X(i)/P(i observed)` and `Σ_{i∈U} X(i)/P(i observed)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceTerms {
    pub looped: f64,
    pub loop_free: f64,
}

pub fn variance_terms(g: &DirectedGraph, state: &PolicyState) -> VarianceTerms {
    let obs = observation_probs(g, &state.x_tilde);
    let mut v = VarianceTerms {
        looped: 0.0,
        loop_free: 0.0,
    };
    for i in 0..g.n() {
        let term = state.x[i] / obs[i];
        if g.has_self_loop(i) {
            v.looped += term;
        } else {
            v.loop_free += term;
        }
    }
    v
}

/// Checks `looped <= 2n` and `loop_free <= δ*/γ`.
pub fn check_variance(
    g: &DirectedGraph,
    state: &PolicyState,
    delta_star: f64,
    gamma: f64,
) -> Result<VarianceTerms> {
    let v = variance_terms(g, state);
    let n = g.n() as f64;
    if v.looped > 2.0 * n * (1.0 + VARIANCE_SLACK) {
        return Err(Error::Contract(format!(
            "looped variance term {} exceeds 2n = {}",
            v.looped,
            2.0 * n
        )));
    }
    let bound = delta_star / gamma;
    if v.loop_free > bound * (1.0 + VARIANCE_SLACK) {
        return Err(Error::Contract(format!(
            "loop-free variance term {} exceeds δ*/γ = {bound}",
            v.loop_free
        )));
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Keep one record per round in the trace.
    pub record_rounds: bool,
    /// Assert the variance bounds every round.
    pub check_variance: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            record_rounds: true,
            check_variance: false,
        }
    }
}

/// Per-episode bookkeeping shared by all runners.
struct Episode<'a> {
    env: &'a mut (dyn Environment + Send),
    opts: RunOptions,
    state: PolicyState,
    rng: StreamRng,
    losses: Vec<f64>,
    observed: Vec<Option<f64>>,
    arm_totals: Vec<f64>,
    learner_total: f64,
    mean_total: f64,
    best_mean: Option<f64>,
    trace: RegretTrace,
}

impl<'a> Episode<'a> {
    fn new(
        env: &'a mut (dyn Environment + Send),
        n: usize,
        cfg: &PolicyConfig,
        seed: u64,
        opts: RunOptions,
    ) -> Result<Self> {
        if env.arms() != n {
            return Err(Error::InvalidArgument(format!(
                "environment has {} arms, graph has {n}",
                env.arms()
            )));
        }
        let best_mean = env
            .means()
            .map(|m| m.iter().copied().fold(f64::INFINITY, f64::min));
        Ok(Episode {
            env,
            opts,
            state: init_state(n, cfg),
            rng: stream(seed, Stream::Policy),
            losses: vec![0.0; n],
            observed: vec![None; n],
            arm_totals: vec![0.0; n],
            learner_total: 0.0,
            mean_total: 0.0,
            best_mean,
            trace: RegretTrace::new(seed),
        })
    }

    fn step(
        &mut self,
        t: usize,
        g: &DirectedGraph,
        gamma: f64,
        eta: f64,
        u: &[f64],
        delta_star: Option<f64>,
    ) -> Result<()> {
        self.env.losses(t, &mut self.losses)?;
        check_round(t, &self.losses)?;
        self.state.mix(gamma, u);
        if self.opts.check_variance {
            if let Some(d) = delta_star.filter(|_| gamma > 0.0) {
                check_variance(g, &self.state, d, gamma)?;
            }
        }
        let arm = self.state.sample(&mut self.rng);
        self.observed.fill(None);
        for &j in g.out_nbrs(arm) {
            self.observed[j] = Some(self.losses[j]);
        }
        let lhat = estimate_loss(g, &self.state, arm, &self.observed)?;
        md_step(&mut self.state, eta, &lhat);

        let loss = self.losses[arm];
        self.learner_total += loss;
        for (a, &l) in self.arm_totals.iter_mut().zip(&self.losses) {
            *a += l;
        }
        let best = self
            .arm_totals
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let cum_regret = self.learner_total - best;
        let pseudo_regret = match (self.env.means(), self.best_mean) {
            (Some(m), Some(b)) => {
                self.mean_total += m[arm] - b;
                Some(self.mean_total)
            }
            _ => None,
        };
        self.trace.final_regret = cum_regret;
        self.trace.final_pseudo_regret = pseudo_regret;
        self.trace.horizon = t;
        if self.opts.record_rounds {
            self.trace.rounds.push(RoundRecord {
                t,
                arm,
                loss,
                cum_regret,
                pseudo_regret,
            });
        }
        Ok(())
    }
}

/// Runs the learner for `cfg.horizon` rounds on a fixed graph.
pub fn run_episode(
    g: &DirectedGraph,
    env: &mut (dyn Environment + Send),
    cfg: &PolicyConfig,
    seed: u64,
    opts: RunOptions,
) -> Result<RegretTrace> {
    let mut ep = Episode::new(env, g.n(), cfg, seed, opts)?;
    let delta = cfg.delta_star.is_finite().then_some(cfg.delta_star);
    for t in 1..=cfg.horizon {
        ep.step(t, g, cfg.gamma, cfg.eta, &cfg.u, delta)
            .map_err(|e| e.at_round(t))?;
    }
    Ok(ep.trace)
}

/// Step-size policy when the graph changes every round.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepMode {
    /// `γ, η` from a caller-supplied average domination number.
    Offline(f64),
    /// `γ_t, η_t` from the running average of `δ*(G_1..G_t)`. Experimental.
    Adaptive,
}

/// LP solutions keyed by edge list.
#[derive(Default)]
struct LpCache {
    map: HashMap<Vec<(usize, usize)>, Option<(f64, Vec<f64>)>>,
}

impl LpCache {
    fn get(&mut self, g: &DirectedGraph) -> Option<(f64, Vec<f64>)> {
        if let Some(hit) = self.map.get(g.edges()) {
            return hit.clone();
        }
        let sol = solve_primal(g)
            .ok()
            .map(|s| (s.value, s.exploration_distribution()));
        if self.map.len() < LP_CACHE_LIMIT {
            self.map.insert(g.edges().to_vec(), sol.clone());
        }
        sol
    }
}

fn run_dynamic(
    n: usize,
    mut next_graph: impl FnMut(usize) -> DirectedGraph,
    env: &mut (dyn Environment + Send),
    horizon: usize,
    mode: StepMode,
    skip_unobservable: bool,
    seed: u64,
    opts: RunOptions,
) -> Result<RegretTrace> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    let uniform = vec![1.0 / n as f64; n];
    let init_delta = match mode {
        StepMode::Offline(d) if d > 0.0 => d,
        StepMode::Offline(d) => {
            return Err(Error::InvalidArgument(format!(
                "average domination {d} must be positive"
            )))
        }
        StepMode::Adaptive => 1.0,
    };
    let cfg = config_for(n, horizon, init_delta, uniform.clone())?;
    let mut ep = Episode::new(env, n, &cfg, seed, opts)?;
    let mut cache = LpCache::default();
    let (mut delta_sum, mut solved) = (0.0, 0usize);
    let mut flagged = 0usize;
    for t in 1..=horizon {
        let g = next_graph(t);
        match cache.get(&g) {
            Some((delta, u)) => {
                delta_sum += delta;
                solved += 1;
                let avg = match mode {
                    StepMode::Offline(d) => d,
                    StepMode::Adaptive => delta_sum / solved as f64,
                };
                let (gamma, eta, _) = step_sizes(n, horizon, avg.max(f64::MIN_POSITIVE));
                let gamma = if delta > 0.0 { gamma } else { 0.0 };
                let check = (delta > 0.0).then_some(delta);
                ep.step(t, &g, gamma, eta, &u, check)
                    .map_err(|e| e.at_round(t))?;
            }
            None if skip_unobservable => {
                flagged += 1;
                let avg = match mode {
                    StepMode::Offline(d) => d,
                    StepMode::Adaptive if solved > 0 => delta_sum / solved as f64,
                    StepMode::Adaptive => 1.0,
                };
                let (_, eta, _) = step_sizes(n, horizon, avg);
                ep.step(t, &g, 0.0, eta, &uniform, None)
                    .map_err(|e| e.at_round(t))?;
            }
            None => {
                let uncovered = crate::domination::check_coverable(&g)
                    .err()
                    .unwrap_or(Error::Contract("LP failed".into()));
                return Err(uncovered.at_round(t));
            }
        }
    }
    let mut trace = ep.trace;
    trace.flagged_rounds = flagged;
    trace.mean_delta_star = (solved > 0).then(|| delta_sum / solved as f64);
    Ok(trace)
}

/// Runs the learner on `gs[t - 1]` in round `t`. Every graph must cover its
/// loop-free vertices; the first that does not aborts the run.
pub fn run_time_varying(
    gs: &[DirectedGraph],
    env: &mut (dyn Environment + Send),
    mode: StepMode,
    seed: u64,
    opts: RunOptions,
) -> Result<RegretTrace> {
    let n = gs
        .first()
        .map(DirectedGraph::n)
        .ok_or_else(|| Error::InvalidArgument("no graphs".into()))?;
    if gs.iter().any(|g| g.n() != n) {
        return Err(Error::InvalidArgument(
            "graphs differ in vertex count".into(),
        ));
    }
    run_dynamic(
        n,
        |t| gs[t - 1].clone(),
        env,
        gs.len(),
        mode,
        false,
        seed,
        opts,
    )
}

/// Runs the learner on fresh realizations of `pg`, revealed at the start of
/// each round. Realizations leaving a loop-free vertex uncovered are played
/// without exploration and counted in `flagged_rounds`.
pub fn run_probabilistic(
    pg: &ProbabilisticGraph,
    env: &mut (dyn Environment + Send),
    horizon: usize,
    mode: StepMode,
    seed: u64,
    opts: RunOptions,
) -> Result<RegretTrace> {
    let mut graph_rng = stream(seed, Stream::Graph);
    run_dynamic(
        pg.base().n(),
        |_| pg.realize(&mut graph_rng),
        env,
        horizon,
        mode,
        true,
        seed,
        opts,
    )
}
