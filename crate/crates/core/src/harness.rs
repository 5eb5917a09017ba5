//! Experiment plumbing: regret traces, sweeps over horizons and seeds,
//! log-log slope fits, exploration comparisons and parameter reports.

use std::io::{self, Write};

use serde::Serialize;

use crate::degeneracy::{degeneracy_certificate, Degeneracy, SearchMethod};
use crate::domination::{
    gap_report, greedy_dominating_set, integral_delta, integral_zeta, solve_dual, solve_primal,
    GapReport, PackingSolution,
};
use crate::env::EnvSpec;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::osmd::{config_for, make_config, run_episode, PolicyConfig, RunOptions};
use crate::rounding::{degenerate_round, greedy_one_packing};

/// Column header of trace CSV files.
pub const TRACE_HEADER: &str = "seed,t,arm,loss,cum_regret,pseudo_regret";

/// Minimum number of horizons in a sweep.
pub const MIN_GRID: usize = 4;
/// Minimum number of seeds per horizon.
pub const MIN_SEEDS: usize = 30;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundRecord {
    pub t: usize,
    pub arm: usize,
    pub loss: f64,
    /// Learner's cumulative loss minus the best arm's cumulative loss so far.
    pub cum_regret: f64,
    /// Same against the known means, when the environment has them.
    pub pseudo_regret: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegretTrace {
    pub seed: u64,
    pub horizon: usize,
    /// Empty unless rounds were recorded.
    pub rounds: Vec<RoundRecord>,
    pub final_regret: f64,
    pub final_pseudo_regret: Option<f64>,
    /// Rounds played without exploration because the realized graph left a
    /// loop-free arm uncovered.
    pub flagged_rounds: usize,
    /// Average fractional domination number over the rounds' graphs.
    pub mean_delta_star: Option<f64>,
}

impl RegretTrace {
    pub fn new(seed: u64) -> Self {
        RegretTrace {
            seed,
            horizon: 0,
            rounds: Vec::new(),
            final_regret: 0.0,
            final_pseudo_regret: None,
            flagged_rounds: 0,
            mean_delta_star: None,
        }
    }

    /// Appends one CSV row per recorded round, without a header.
    pub fn write_csv_rows<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for r in &self.rounds {
            let pseudo = r.pseudo_regret.map(|p| p.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                self.seed, r.t, r.arm, r.loss, r.cum_regret, pseudo
            )?;
        }
        Ok(())
    }
}

/// Mean and standard error of a sample.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Least-squares fit of `ln y = slope ln x + intercept`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two paired points".into(),
        ));
    }
    if let Some(y) = xs.iter().chain(ys).find(|&&v| !(v > 0.0)) {
        return Err(Error::Contract(format!(
            "log-log fit needs positive values, got {y}"
        )));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("horizons must differ".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub horizon: usize,
    pub seeds: usize,
    pub gamma: f64,
    pub eta: f64,
    pub mean_regret: f64,
    pub se_regret: f64,
    pub mean_pseudo_regret: Option<f64>,
    pub se_pseudo_regret: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingReport {
    pub delta_star: f64,
    pub points: Vec<GridPoint>,
    /// Fit of mean realized regret against the horizon.
    pub slope: f64,
    pub intercept: f64,
    /// Fit of mean pseudo-regret, when every point has one.
    pub pseudo_slope: Option<f64>,
}

fn run_seeds(
    g: &DirectedGraph,
    env: &EnvSpec,
    cfg: &PolicyConfig,
    seeds: &[u64],
) -> Result<Vec<RegretTrace>> {
    let opts = RunOptions {
        record_rounds: false,
        check_variance: false,
    };
    let one = |&seed: &u64| -> Result<RegretTrace> {
        let mut e = env.build(g, cfg.horizon, seed)?;
        run_episode(g, e.as_mut(), cfg, seed, opts)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        seeds.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        seeds.iter().map(one).collect()
    }
}

fn summarize(cfg: &PolicyConfig, traces: &[RegretTrace]) -> GridPoint {
    let finals: Vec<f64> = traces.iter().map(|t| t.final_regret).collect();
    let (mean_regret, se_regret) = mean_and_se(&finals);
    let pseudo: Option<Vec<f64>> = traces.iter().map(|t| t.final_pseudo_regret).collect();
    let pseudo = pseudo.map(|p| mean_and_se(&p));
    GridPoint {
        horizon: cfg.horizon,
        seeds: traces.len(),
        gamma: cfg.gamma,
        eta: cfg.eta,
        mean_regret,
        se_regret,
        mean_pseudo_regret: pseudo.map(|p| p.0),
        se_pseudo_regret: pseudo.map(|p| p.1),
    }
}

/// Runs every `(horizon, seed)` pair and fits regret growth. `sink` sees
/// each horizon's summary and traces as soon as they finish, so partial
/// results survive a later failure.
pub fn sweep(
    g: &DirectedGraph,
    env: &EnvSpec,
    grid: &[usize],
    seeds: &[u64],
    mut sink: impl FnMut(&GridPoint, &[RegretTrace]) -> Result<()>,
) -> Result<ScalingReport> {
    if grid.len() < MIN_GRID || grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] == 0 {
        return Err(Error::InvalidArgument(format!(
            "horizon grid must be strictly increasing, positive, with at least {MIN_GRID} points"
        )));
    }
    if seeds.len() < MIN_SEEDS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SEEDS} seeds, got {}",
            seeds.len()
        )));
    }
    let sol = solve_primal(g)?;
    let mut points = Vec::with_capacity(grid.len());
    for &horizon in grid {
        let cfg = make_config(g, horizon, &sol)?;
        let traces = run_seeds(g, env, &cfg, seeds)?;
        let p = summarize(&cfg, &traces);
        sink(&p, &traces)?;
        points.push(p);
    }
    let xs: Vec<f64> = points.iter().map(|p| p.horizon as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_regret).collect();
    let (slope, intercept) = fit_loglog_slope(&xs, &ys)?;
    let pseudo: Option<Vec<f64>> = points.iter().map(|p| p.mean_pseudo_regret).collect();
    let pseudo_slope = pseudo
        .and_then(|ys| fit_loglog_slope(&xs, &ys).ok())
        .map(|f| f.0);
    Ok(ScalingReport {
        delta_star: sol.value,
        points,
        slope,
        intercept,
        pseudo_slope,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExplorationResult {
    /// Domination value driving `γ` and `η`.
    pub delta: f64,
    /// Vertices with positive exploration probability.
    pub support: Vec<usize>,
    pub mean_regret: f64,
    pub se_regret: f64,
    pub mean_pseudo_regret: Option<f64>,
    pub se_pseudo_regret: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExplorationComparison {
    pub horizon: usize,
    pub seeds: usize,
    /// Exploration from the fractional LP optimum.
    pub fractional: ExplorationResult,
    /// Uniform exploration over an integral dominating set.
    pub integral: ExplorationResult,
    /// False when the integral set is a greedy bound, not a minimum.
    pub integral_exact: bool,
}

/// Paired runs with the LP exploration and with uniform exploration over a
/// minimum integral dominating set, on the same seeds.
pub fn compare_exploration(
    g: &DirectedGraph,
    env: &EnvSpec,
    horizon: usize,
    seeds: &[u64],
) -> Result<ExplorationComparison> {
    if seeds.len() < MIN_SEEDS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SEEDS} seeds, got {}",
            seeds.len()
        )));
    }
    let sol = solve_primal(g)?;
    let frac_cfg = make_config(g, horizon, &sol)?;
    let (set, exact) = match integral_delta(g) {
        Ok(s) => (s.witness, s.exact),
        Err(Error::TooLarge { .. }) => (greedy_dominating_set(g)?, false),
        Err(e) => return Err(e),
    };
    let mut u = vec![0.0; g.n()];
    for &v in &set {
        u[v] = 1.0 / set.len() as f64;
    }
    let int_cfg = config_for(g.n(), horizon, set.len() as f64, u)?;
    let result = |cfg: &PolicyConfig| -> Result<ExplorationResult> {
        let p = summarize(cfg, &run_seeds(g, env, cfg, seeds)?);
        Ok(ExplorationResult {
            delta: cfg.delta_star,
            support: (0..g.n()).filter(|&i| cfg.u[i] > 0.0).collect(),
            mean_regret: p.mean_regret,
            se_regret: p.se_regret,
            mean_pseudo_regret: p.mean_pseudo_regret,
            se_pseudo_regret: p.se_pseudo_regret,
        })
    };
    Ok(ExplorationComparison {
        horizon,
        seeds: seeds.len(),
        fractional: result(&frac_cfg)?,
        integral: result(&int_cfg)?,
        integral_exact: exact,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamsReport {
    #[serde(flatten)]
    pub gaps: GapReport,
    pub n: usize,
    pub edges: usize,
    /// Vertices without a self-loop.
    pub loop_free: Vec<usize>,
    /// `true`/`false` when decided, absent when the search gave up.
    pub one_degenerate: Option<bool>,
    pub degeneracy_method: Option<SearchMethod>,
}

/// Gap report plus observability and 1-degeneracy.
pub fn report_params(g: &DirectedGraph) -> Result<ParamsReport> {
    let gaps = gap_report(g)?;
    let deg = degeneracy_certificate(g);
    let method = match &deg {
        Degeneracy::Certified { method, .. } => Some(*method),
        _ => None,
    };
    Ok(ParamsReport {
        gaps,
        n: g.n(),
        edges: g.edge_count(),
        loop_free: g.self_loop_free_set(),
        one_degenerate: deg.is_degenerate(),
        degeneracy_method: method,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundReport {
    pub zeta_star: f64,
    pub zeta: usize,
    /// Maximum vertex packing set found.
    pub packing: Vec<usize>,
    /// 1-packing independent set extracted from `packing`.
    pub one_packing: Vec<usize>,
    pub one_packing_size: usize,
    /// `ceil(zeta / 3)`, the guaranteed minimum size of `one_packing`.
    pub guaranteed: usize,
    /// Value of the 1-degenerate rounding of the fractional packing, when
    /// the graph is 1-degenerate.
    pub degenerate_rounding: Option<f64>,
    pub exact: bool,
}

/// Runs both roundings on `g`.
pub fn round_report(g: &DirectedGraph) -> Result<RoundReport> {
    let frac = solve_dual(g)?;
    let zeta = integral_zeta(g);
    let packing = PackingSolution::from_set(g, &zeta.witness)?;
    let one = greedy_one_packing(g, &packing)?;
    let degenerate_rounding = match degenerate_round(g, &frac) {
        Ok(r) => Some(r.value),
        Err(Error::NotDegenerate) => None,
        Err(e) => return Err(e),
    };
    Ok(RoundReport {
        zeta_star: frac.value,
        zeta: zeta.value,
        packing: zeta.witness,
        one_packing_size: one.len(),
        one_packing: one.vertices,
        guaranteed: zeta.value.div_ceil(3),
        degenerate_rounding,
        exact: zeta.exact,
    })
}
