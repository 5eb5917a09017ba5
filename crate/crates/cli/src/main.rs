//! `fbandit`: experiments for online learning with feedback graphs.
//!
//! Graph arguments are either a path to an edge-list file or `named:<name>`
//! from the built-in catalogue. Every flag may also come from a JSON file
//! given with `--config`; flags on the command line win.
//!
//! Exit status: 0 on success, 1 on a violated contract (for example a graph
//! that is not weakly observable), 2 on bad input.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use feedback_bandits::domination::solve_primal;
use feedback_bandits::env::EnvSpec;
use feedback_bandits::generators::named;
use feedback_bandits::harness::{
    compare_exploration, report_params, round_report, sweep, ExplorationResult, GridPoint,
    RegretTrace, TRACE_HEADER,
};
use feedback_bandits::osmd::{make_config, run_episode, RunOptions};
use feedback_bandits::{DirectedGraph, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "fbandit",
    version,
    about = "Bandits with graph feedback: parameters, roundings and regret experiments"
)]
struct Cli {
    /// Master seed; `run`, `sweep` and `compare` use consecutive seeds from here.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory for output files instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// JSON file with default values for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Domination and packing numbers, gaps, observability and 1-degeneracy.
    Params { graph: Option<String> },
    /// Maximum vertex packing and its 1-packing rounding.
    Round { graph: Option<String> },
    /// Per-round regret traces, one episode per seed.
    Run {
        #[arg(long)]
        graph: Option<String>,
        /// Environment spec, e.g. `hard:S=8..16,j=9,eps=0.1`.
        #[arg(long)]
        env: Option<String>,
        /// Horizon.
        #[arg(long = "T")]
        horizon: Option<usize>,
        /// Number of seeds.
        #[arg(long)]
        seeds: Option<usize>,
    },
    /// Mean final regret over a horizon grid and its log-log slope.
    Sweep {
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        env: Option<String>,
        /// Comma-separated, strictly increasing horizons.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
        #[arg(long)]
        seeds: Option<usize>,
    },
    /// Fractional versus integral exploration on the same seeds.
    Compare {
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        env: Option<String>,
        #[arg(long = "T")]
        horizon: Option<usize>,
        #[arg(long)]
        seeds: Option<usize>,
    },
}

/// Contents of a `--config` file. Keys mirror the long flag names.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    seed: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    graph: Option<String>,
    env: Option<String>,
    #[serde(rename = "T")]
    horizon: Option<usize>,
    seeds: Option<usize>,
    grid: Option<Vec<usize>>,
}

/// Flags after merging the command line over the config file.
struct Settings {
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
    config: Config,
}

impl Settings {
    fn graph(&self, flag: Option<String>) -> Result<DirectedGraph> {
        let arg = flag
            .or_else(|| self.config.graph.clone())
            .ok_or_else(|| Error::InvalidArgument("missing graph".into()))?;
        load_graph(&arg)
    }

    fn env(&self, flag: Option<String>) -> Result<EnvSpec> {
        let spec = flag
            .or_else(|| self.config.env.clone())
            .ok_or_else(|| Error::InvalidArgument("missing --env".into()))?;
        EnvSpec::parse(&spec)
    }

    fn horizon(&self, flag: Option<usize>) -> Result<usize> {
        match flag.or(self.config.horizon) {
            Some(t) if t > 0 => Ok(t),
            Some(_) => Err(Error::InvalidArgument("--T must be positive".into())),
            None => Err(Error::InvalidArgument("missing --T".into())),
        }
    }

    fn seeds(&self, flag: Option<usize>, default: usize) -> Vec<u64> {
        let k = flag.or(self.config.seeds).unwrap_or(default) as u64;
        (self.seed..self.seed + k).collect()
    }

    /// Standard output, or `<stem>.csv` / `<stem>.json` inside `--out`.
    fn sink(&self, stem: &str) -> Result<Box<dyn Write>> {
        let ext = match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        match &self.out {
            Some(dir) => Ok(Box::new(BufWriter::new(File::create(
                dir.join(format!("{stem}.{ext}")),
            )?))),
            None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        }
    }
}

fn load_graph(arg: &str) -> Result<DirectedGraph> {
    match arg.strip_prefix("named:") {
        Some(name) => named(name),
        None => {
            let text = fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
            DirectedGraph::parse(&text)
        }
    }
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn params(s: &Settings, graph: Option<String>) -> Result<()> {
    let report = report_params(&s.graph(graph)?)?;
    let mut w = s.sink("params")?;
    match s.format {
        Format::Json => write_json(&mut *w, &report)?,
        Format::Csv => {
            let g = &report.gaps;
            writeln!(
                w,
                "delta_star,zeta_star,delta,zeta,primal_gap,dual_gap,observability,one_degenerate"
            )?;
            let deg = report
                .one_degenerate
                .map(|d| d.to_string())
                .unwrap_or_default();
            let obs =
                serde_json::to_value(g.observability).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{deg}",
                g.delta_star,
                g.zeta_star,
                g.delta,
                g.zeta,
                g.primal_gap,
                g.dual_gap,
                obs.as_str().unwrap_or_default()
            )?;
        }
    }
    Ok(w.flush()?)
}

fn round(s: &Settings, graph: Option<String>) -> Result<()> {
    let report = round_report(&s.graph(graph)?)?;
    let mut w = s.sink("round")?;
    match s.format {
        Format::Json => write_json(&mut *w, &report)?,
        Format::Csv => {
            writeln!(
                w,
                "zeta_star,zeta,one_packing_size,guaranteed,degenerate_rounding,one_packing"
            )?;
            let set: Vec<String> = report.one_packing.iter().map(|v| v.to_string()).collect();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                report.zeta_star,
                report.zeta,
                report.one_packing_size,
                report.guaranteed,
                opt(report.degenerate_rounding),
                set.join(" ")
            )?;
        }
    }
    Ok(w.flush()?)
}

fn run(
    s: &Settings,
    graph: Option<String>,
    env: Option<String>,
    horizon: Option<usize>,
    seeds: Option<usize>,
) -> Result<()> {
    let g = s.graph(graph)?;
    let spec = s.env(env)?;
    let horizon = s.horizon(horizon)?;
    let cfg = make_config(&g, horizon, &solve_primal(&g)?)?;
    if cfg.warning {
        eprintln!("warning: T = {horizon} is below the regime where the step sizes are tuned");
    }
    let mut traces = Vec::new();
    let mut w = s.sink("trace")?;
    if s.format == Format::Csv {
        writeln!(w, "{TRACE_HEADER}")?;
    }
    for seed in s.seeds(seeds, 1) {
        let mut e = spec.build(&g, horizon, seed)?;
        let trace = run_episode(&g, e.as_mut(), &cfg, seed, RunOptions::default())?;
        match s.format {
            Format::Csv => trace.write_csv_rows(&mut w)?,
            Format::Json => traces.push(trace),
        }
    }
    if s.format == Format::Json {
        write_json(&mut *w, &traces)?;
    }
    Ok(w.flush()?)
}

const POINT_HEADER: &str =
    "horizon,seeds,gamma,eta,mean_regret,se_regret,mean_pseudo_regret,se_pseudo_regret";

fn point_row(p: &GridPoint) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        p.horizon,
        p.seeds,
        p.gamma,
        p.eta,
        p.mean_regret,
        p.se_regret,
        opt(p.mean_pseudo_regret),
        opt(p.se_pseudo_regret)
    )
}

fn sweep_cmd(
    s: &Settings,
    graph: Option<String>,
    env: Option<String>,
    grid: Option<Vec<usize>>,
    seeds: Option<usize>,
) -> Result<()> {
    let g = s.graph(graph)?;
    let spec = s.env(env)?;
    let grid = grid
        .or_else(|| s.config.grid.clone())
        .ok_or_else(|| Error::InvalidArgument("missing --grid".into()))?;
    let seeds = s.seeds(seeds, 30);

    // With --out, every finished horizon is appended and flushed at once.
    let mut partial = match &s.out {
        Some(dir) => {
            let mut points = File::create(dir.join("sweep_points.csv"))?;
            let mut finals = File::create(dir.join("sweep_finals.csv"))?;
            writeln!(points, "{POINT_HEADER}")?;
            writeln!(finals, "horizon,seed,final_regret,final_pseudo_regret")?;
            Some((points, finals))
        }
        None => None,
    };
    let report = sweep(
        &g,
        &spec,
        &grid,
        &seeds,
        |p: &GridPoint, traces: &[RegretTrace]| {
            if let Some((points, finals)) = partial.as_mut() {
                writeln!(points, "{}", point_row(p))?;
                for t in traces {
                    writeln!(
                        finals,
                        "{},{},{},{}",
                        p.horizon,
                        t.seed,
                        t.final_regret,
                        opt(t.final_pseudo_regret)
                    )?;
                }
                points.sync_data()?;
                finals.sync_data()?;
            }
            Ok(())
        },
    )?;

    let mut w = s.sink("sweep")?;
    match s.format {
        Format::Json => write_json(&mut *w, &report)?,
        Format::Csv => {
            writeln!(w, "{POINT_HEADER}")?;
            for p in &report.points {
                writeln!(w, "{}", point_row(p))?;
            }
            writeln!(
                w,
                "# delta_star={} slope={} intercept={} pseudo_slope={}",
                report.delta_star,
                report.slope,
                report.intercept,
                opt(report.pseudo_slope)
            )?;
        }
    }
    Ok(w.flush()?)
}

fn compare(
    s: &Settings,
    graph: Option<String>,
    env: Option<String>,
    horizon: Option<usize>,
    seeds: Option<usize>,
) -> Result<()> {
    let g = s.graph(graph)?;
    let spec = s.env(env)?;
    let horizon = s.horizon(horizon)?;
    let report = compare_exploration(&g, &spec, horizon, &s.seeds(seeds, 30))?;
    let mut w = s.sink("compare")?;
    match s.format {
        Format::Json => write_json(&mut *w, &report)?,
        Format::Csv => {
            writeln!(w, "exploration,delta,support,mean_regret,se_regret,mean_pseudo_regret,se_pseudo_regret,exact")?;
            let row = |name: &str, r: &ExplorationResult, exact: bool| {
                format!(
                    "{name},{},{},{},{},{},{},{exact}",
                    r.delta,
                    r.support.len(),
                    r.mean_regret,
                    r.se_regret,
                    opt(r.mean_pseudo_regret),
                    opt(r.se_pseudo_regret)
                )
            };
            writeln!(w, "{}", row("fractional", &report.fractional, true))?;
            writeln!(
                w,
                "{}",
                row("integral", &report.integral, report.integral_exact)
            )?;
        }
    }
    Ok(w.flush()?)
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<()> {
    let config = load_config(cli.config.as_deref())?;
    let default_format = match cli.command {
        Command::Params { .. } | Command::Round { .. } | Command::Compare { .. } => Format::Json,
        Command::Run { .. } | Command::Sweep { .. } => Format::Csv,
    };
    let settings = Settings {
        seed: cli.seed.or(config.seed).unwrap_or(0),
        out: cli.out.or_else(|| config.out.clone()),
        format: cli.format.or(config.format).unwrap_or(default_format),
        config,
    };
    if let Some(dir) = &settings.out {
        fs::create_dir_all(dir)?;
    }
    match cli.command {
        Command::Params { graph } => params(&settings, graph),
        Command::Round { graph } => round(&settings, graph),
        Command::Run {
            graph,
            env,
            horizon,
            seeds,
        } => run(&settings, graph, env, horizon, seeds),
        Command::Sweep {
            graph,
            env,
            grid,
            seeds,
        } => sweep_cmd(&settings, graph, env, grid, seeds),
        Command::Compare {
            graph,
            env,
            horizon,
            seeds,
        } => compare(&settings, graph, env, horizon, seeds),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fbandit: {e}");
            ExitCode::from(if e.is_bad_input() { 2 } else { 1 })
        }
    }
}
