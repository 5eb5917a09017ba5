//! Loss environments.
//!
//! Every environment is oblivious: the loss vector of round `t` depends only
//! on `t` and the environment's own random stream, never on the learner's
//! actions. Stochastic environments draw from [`Stream::Environment`] of the
//! episode seed.
//!
//! The command line describes environments with a small spec language:
//!
//! ```text
//! hard:S=8..16,j=8,eps=0.1        hard instance, special arm j inside S
//! hard:S=1,3,5,j=3,eps=ratio      eps = (|S|/(kT))^(1/3)
//! hard:S=1,3,5,j=3,eps=log,k=2    eps = (ln|S|/T)^(1/3), declared k
//! const:0.5,0.2,1                 the same loss vector every round
//! bernoulli:0.5,0.4,0.5           independent Bernoulli losses
//! file:losses.csv                 T rows of n comma-separated losses
//! ```

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::domination::solve_primal;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rng::{stream, Stream, StreamRng};
use crate::rounding::{packing_degree, verify_k_packing};

/// A source of per-round loss vectors.
pub trait Environment {
    fn arms(&self) -> usize;

    /// Writes the losses of round `t` (1-based) into `out`.
    fn losses(&mut self, t: usize, out: &mut [f64]) -> Result<()>;

    /// Mean loss of every arm, when the environment is stochastic with
    /// known means.
    fn means(&self) -> Option<&[f64]> {
        None
    }

    fn descriptor(&self) -> String;
}

/// The same loss vector every round.
#[derive(Clone, Debug)]
pub struct ConstantEnv {
    losses: Vec<f64>,
}

impl ConstantEnv {
    pub fn new(losses: Vec<f64>) -> Result<Self> {
        check_unit(&losses)?;
        Ok(ConstantEnv { losses })
    }
}

impl Environment for ConstantEnv {
    fn arms(&self) -> usize {
        self.losses.len()
    }

    fn losses(&mut self, _t: usize, out: &mut [f64]) -> Result<()> {
        out.copy_from_slice(&self.losses);
        Ok(())
    }

    fn means(&self) -> Option<&[f64]> {
        Some(&self.losses)
    }

    fn descriptor(&self) -> String {
        format!("const:{}", join(&self.losses))
    }
}

/// A fixed loss table, one row per round.
#[derive(Clone, Debug)]
pub struct MatrixEnv {
    rows: Vec<Vec<f64>>,
    source: String,
}

impl MatrixEnv {
    pub fn new(rows: Vec<Vec<f64>>, source: impl Into<String>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::InvalidArgument("loss table is empty".into()));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    line: r + 1,
                    message: format!("expected {n} losses, found {}", row.len()),
                });
            }
            check_unit(row).map_err(|e| Error::Parse {
                line: r + 1,
                message: e.to_string(),
            })?;
        }
        Ok(MatrixEnv {
            rows,
            source: source.into(),
        })
    }

    /// Parses comma-separated rows; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, source: impl Into<String>) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(',')
                .map(|f| {
                    f.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line: i + 1,
                        message: format!("bad loss {:?}", f.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::new(rows, source)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.display().to_string())
    }

    pub fn rounds(&self) -> usize {
        self.rows.len()
    }
}

impl Environment for MatrixEnv {
    fn arms(&self) -> usize {
        self.rows[0].len()
    }

    fn losses(&mut self, t: usize, out: &mut [f64]) -> Result<()> {
        let row = self.rows.get(t - 1).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "loss table has {} rows, round {t} requested",
                self.rows.len()
            ))
        })?;
        out.copy_from_slice(row);
        Ok(())
    }

    fn descriptor(&self) -> String {
        format!("file:{}", self.source)
    }
}

/// Independent Bernoulli losses with fixed means, drawn in arm order.
#[derive(Clone, Debug)]
pub struct BernoulliEnv {
    means: Vec<f64>,
    rng: StreamRng,
}

impl BernoulliEnv {
    pub fn new(means: Vec<f64>, rng: StreamRng) -> Result<Self> {
        check_unit(&means)?;
        Ok(BernoulliEnv { means, rng })
    }
}

impl Environment for BernoulliEnv {
    fn arms(&self) -> usize {
        self.means.len()
    }

    fn losses(&mut self, _t: usize, out: &mut [f64]) -> Result<()> {
        for (o, &p) in out.iter_mut().zip(&self.means) {
            *o = bernoulli(&mut self.rng, p);
        }
        Ok(())
    }

    fn means(&self) -> Option<&[f64]> {
        Some(&self.means)
    }

    fn descriptor(&self) -> String {
        format!("bernoulli:{}", join(&self.means))
    }
}

/// How the gap `eps` of a hard instance is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsSchedule {
    Fixed(f64),
    /// `(|S| / (k T))^(1/3)`
    Ratio,
    /// `(ln |S| / T)^(1/3)`
    Log,
}

impl EpsSchedule {
    pub fn resolve(self, support: usize, k: usize, horizon: usize) -> Result<f64> {
        let t = horizon.max(1) as f64;
        let eps = match self {
            EpsSchedule::Fixed(e) => e,
            EpsSchedule::Ratio => (support as f64 / (k.max(1) as f64 * t)).cbrt(),
            EpsSchedule::Log => ((support as f64).ln() / t).cbrt(),
        };
        if !(0.0..=0.5).contains(&eps) {
            return Err(Error::InvalidArgument(format!(
                "eps {eps} outside [0, 1/2]"
            )));
        }
        Ok(eps)
    }
}

/// A stochastic hard instance supported on a `k`-packing independent set.
///
/// Arms outside `support` always lose 1, the special arm loses with
/// probability `1/2 - eps`, every other arm of the support with probability
/// `1/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardInstance {
    pub support: Vec<usize>,
    pub special: usize,
    pub eps: f64,
    pub k: usize,
}

impl HardInstance {
    /// Validates the support against `g`. Without `k`, the smallest `k` for
    /// which the support is a `k`-packing independent set is used.
    pub fn new(
        g: &DirectedGraph,
        support: Vec<usize>,
        special: usize,
        eps: f64,
        k: Option<usize>,
    ) -> Result<Self> {
        if !support.contains(&special) {
            return Err(Error::InvalidArgument(format!(
                "special arm {special} not in S"
            )));
        }
        if !(0.0..=0.5).contains(&eps) {
            return Err(Error::InvalidArgument(format!(
                "eps {eps} outside [0, 1/2]"
            )));
        }
        let k = match k {
            Some(k) if verify_k_packing(g, &support, k) => k,
            Some(k) => {
                return Err(Error::InvalidArgument(format!(
                    "S is not a {k}-packing independent set"
                )))
            }
            None => packing_degree(g, &support)
                .ok_or_else(|| Error::InvalidArgument("S is not an independent set".into()))?,
        };
        Ok(HardInstance {
            support,
            special,
            eps,
            k,
        })
    }

    pub fn means(&self, n: usize) -> Vec<f64> {
        let mut m = vec![1.0; n];
        for &i in &self.support {
            m[i] = 0.5;
        }
        m[self.special] = 0.5 - self.eps;
        m
    }
}

/// Environment for a [`HardInstance`]. The `p`-th draw of a round belongs to
/// the `p`-th listed support vertex, so relabeling arms permutes losses.
#[derive(Clone, Debug)]
pub struct HardEnv {
    instance: HardInstance,
    means: Vec<f64>,
    rng: StreamRng,
}

impl HardEnv {
    pub fn new(instance: HardInstance, n: usize, rng: StreamRng) -> Self {
        HardEnv {
            means: instance.means(n),
            instance,
            rng,
        }
    }
}

impl Environment for HardEnv {
    fn arms(&self) -> usize {
        self.means.len()
    }

    fn losses(&mut self, _t: usize, out: &mut [f64]) -> Result<()> {
        out.fill(1.0);
        for &i in &self.instance.support {
            out[i] = bernoulli(&mut self.rng, self.means[i]);
        }
        Ok(())
    }

    fn means(&self) -> Option<&[f64]> {
        Some(&self.means)
    }

    fn descriptor(&self) -> String {
        let s: Vec<String> = self
            .instance
            .support
            .iter()
            .map(|v| v.to_string())
            .collect();
        format!(
            "hard:S={},j={},eps={},k={}",
            s.join(","),
            self.instance.special,
            self.instance.eps,
            self.instance.k
        )
    }
}

/// Parsed environment spec; see the module docs for the syntax.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvSpec {
    Hard {
        support: Vec<usize>,
        special: usize,
        eps: EpsSchedule,
        k: Option<usize>,
    },
    Const(Vec<f64>),
    Bernoulli(Vec<f64>),
    File(String),
}

impl EnvSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidArgument(format!("env spec {spec:?}: {m}"));
        let (kind, body) = spec
            .split_once(':')
            .ok_or_else(|| bad("expected <kind>:<params>".into()))?;
        match kind {
            "const" => Ok(EnvSpec::Const(parse_floats(body).map_err(bad)?)),
            "bernoulli" => Ok(EnvSpec::Bernoulli(parse_floats(body).map_err(bad)?)),
            "file" if !body.is_empty() => Ok(EnvSpec::File(body.to_string())),
            "hard" => parse_hard(body).map_err(bad),
            _ => Err(bad("kind must be hard, const, bernoulli or file".into())),
        }
    }

    /// Instantiates the environment for an episode of `horizon` rounds on
    /// `g`, drawing from the environment stream of `seed`.
    pub fn build(
        &self,
        g: &DirectedGraph,
        horizon: usize,
        seed: u64,
    ) -> Result<Box<dyn Environment + Send>> {
        let rng = stream(seed, Stream::Environment);
        let env: Box<dyn Environment + Send> = match self {
            EnvSpec::Hard {
                support,
                special,
                eps,
                k,
            } => {
                let k_eff = match k {
                    Some(k) => *k,
                    None => packing_degree(g, support).ok_or_else(|| {
                        Error::InvalidArgument("S is not an independent set".into())
                    })?,
                };
                let e = eps.resolve(support.len(), k_eff, horizon)?;
                let hi = HardInstance::new(g, support.clone(), *special, e, Some(k_eff))?;
                Box::new(HardEnv::new(hi, g.n(), rng))
            }
            EnvSpec::Const(v) => Box::new(ConstantEnv::new(v.clone())?),
            EnvSpec::Bernoulli(v) => Box::new(BernoulliEnv::new(v.clone(), rng)?),
            EnvSpec::File(path) => {
                let m = MatrixEnv::load(Path::new(path))?;
                if m.rounds() < horizon {
                    return Err(Error::InvalidArgument(format!(
                        "{path}: {} rows, horizon {horizon}",
                        m.rounds()
                    )));
                }
                Box::new(m)
            }
        };
        if env.arms() != g.n() {
            return Err(Error::InvalidArgument(format!(
                "environment has {} arms, graph has {}",
                env.arms(),
                g.n()
            )));
        }
        Ok(env)
    }
}

fn parse_hard(body: &str) -> std::result::Result<EnvSpec, String> {
    let mut support = Vec::new();
    let mut special = None;
    let mut eps = None;
    let mut k = None;
    let mut key = "";
    for tok in body.split(',').map(str::trim) {
        let value = match tok.split_once('=') {
            Some((k, v)) => {
                key = k.trim();
                v.trim()
            }
            None if key == "S" => tok,
            None => return Err(format!("stray token {tok:?}")),
        };
        match key {
            "S" => match value.split_once("..") {
                Some((a, b)) => support.extend(parse_index(a)?..parse_index(b)?),
                None => support.push(parse_index(value)?),
            },
            "j" => special = Some(parse_index(value)?),
            "k" => k = Some(parse_index(value)?),
            "eps" => {
                eps = Some(match value {
                    "ratio" => EpsSchedule::Ratio,
                    "log" => EpsSchedule::Log,
                    v => EpsSchedule::Fixed(v.parse().map_err(|_| format!("bad eps {v:?}"))?),
                })
            }
            other => return Err(format!("unknown key {other:?}")),
        }
    }
    if support.is_empty() {
        return Err("S is empty".into());
    }
    Ok(EnvSpec::Hard {
        support,
        special: special.ok_or("missing j")?,
        eps: eps.ok_or("missing eps")?,
        k,
    })
}

fn parse_index(s: &str) -> std::result::Result<usize, String> {
    s.trim().parse().map_err(|_| format!("bad index {s:?}"))
}

fn parse_floats(body: &str) -> std::result::Result<Vec<f64>, String> {
    body.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number {f:?}"))
        })
        .collect()
}

fn check_unit(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !(0.0..=1.0).contains(x)) {
        Some(i) => Err(Error::InvalidArgument(format!(
            "loss {} of arm {i} outside [0, 1]",
            v[i]
        ))),
        None => Ok(()),
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

pub(crate) fn bernoulli<R: Rng + ?Sized>(rng: &mut R, p: f64) -> f64 {
    if rng.random::<f64>() < p {
        1.0
    } else {
        0.0
    }
}

/// Best-arm-identification instance families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaiFamily {
    /// `n` instances on `n` arms; instance `j` lowers arm `j` to `1/2 - eps`.
    P,
    /// `n + 1` instances on arms `0..=n`. Instance 0 lowers arm 0 to
    /// `1/2 - eps`; instance `j >= 1` lowers arm 0 to `1/2 - eps/2` and arm
    /// `j` to `1/2 - eps`.
    Q,
}

/// Mean vectors of a BAI family, indexed by the instance number.
pub fn bai_instances(n: usize, eps: f64, family: BaiFamily) -> Result<Vec<Vec<f64>>> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "eps {eps} outside (0, 1/2]"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    Ok(match family {
        BaiFamily::P => (0..n)
            .map(|j| {
                let mut m = vec![0.5; n];
                m[j] = 0.5 - eps;
                m
            })
            .collect(),
        BaiFamily::Q => (0..=n)
            .map(|j| {
                let mut m = vec![0.5; n + 1];
                if j == 0 {
                    m[0] = 0.5 - eps;
                } else {
                    m[0] = 0.5 - eps / 2.0;
                    m[j] = 0.5 - eps;
                }
                m
            })
            .collect(),
    })
}

/// Pulls every arm `t` times and returns the arm with the smallest empirical
/// mean, lowest index on ties.
pub fn uniform_pull_bai<R: Rng + ?Sized>(means: &[f64], t: usize, rng: &mut R) -> usize {
    let mut sums = vec![0u64; means.len()];
    for _ in 0..t {
        for (s, &p) in sums.iter_mut().zip(means) {
            *s += bernoulli(rng, p) as u64;
        }
    }
    (0..means.len()).min_by_key(|&i| (sums[i], i)).unwrap_or(0)
}

/// Fraction of `trials` in which [`uniform_pull_bai`] returns `target`.
pub fn bai_success_rate(means: &[f64], target: usize, t: usize, trials: usize, seed: u64) -> f64 {
    let mut rng = stream(seed, Stream::Aux(0));
    let hits = (0..trials)
        .filter(|_| uniform_pull_bai(means, t, &mut rng) == target)
        .count();
    hits as f64 / trials.max(1) as f64
}

/// A graph whose edges are present independently each round.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilisticGraph {
    base: DirectedGraph,
    probs: Vec<f64>,
}

impl ProbabilisticGraph {
    /// `probs[e]` belongs to `base.edges()[e]` and must lie in `(0, 1]`.
    pub fn new(base: DirectedGraph, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != base.edge_count() {
            return Err(Error::InvalidArgument(format!(
                "{} probabilities for {} edges",
                probs.len(),
                base.edge_count()
            )));
        }
        if let Some(p) = probs.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::InvalidArgument(format!(
                "edge probability {p} outside (0, 1]"
            )));
        }
        Ok(ProbabilisticGraph { base, probs })
    }

    pub fn uniform(base: DirectedGraph, p: f64) -> Result<Self> {
        let m = base.edge_count();
        Self::new(base, vec![p; m])
    }

    pub fn base(&self) -> &DirectedGraph {
        &self.base
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Keeps edge `e` when a uniform draw falls below `probs[e]`.
    pub fn realize<R: Rng + ?Sized>(&self, rng: &mut R) -> DirectedGraph {
        let kept: Vec<(usize, usize)> = self
            .base
            .edges()
            .iter()
            .zip(&self.probs)
            .filter(|(_, &p)| rng.random::<f64>() < p)
            .map(|(&e, _)| e)
            .collect();
        DirectedGraph::new(self.base.n(), kept).expect("subgraph of a valid graph")
    }

    /// Exact expectation of the fractional domination number over all
    /// realizations. Fails if some realization with positive probability
    /// leaves a loop-free vertex uncovered.
    pub fn expected_delta_star(&self) -> Result<f64> {
        let m = self.base.edge_count();
        if m > 20 {
            return Err(Error::TooLarge { n: m, limit: 20 });
        }
        let mut total = 0.0;
        for mask in 0u32..(1 << m) {
            let mut weight = 1.0;
            let mut kept = Vec::new();
            for (e, (&edge, &p)) in self.base.edges().iter().zip(&self.probs).enumerate() {
                if mask >> e & 1 == 1 {
                    weight *= p;
                    kept.push(edge);
                } else {
                    weight *= 1.0 - p;
                }
            }
            if weight == 0.0 {
                continue;
            }
            let g = DirectedGraph::new(self.base.n(), kept)?;
            total += weight * solve_primal(&g)?.value;
        }
        Ok(total)
    }

    /// Monte-Carlo estimate of the expected fractional domination number.
    /// Returns the mean over observable realizations and the number of
    /// samples that had an uncovered loop-free vertex.
    pub fn sample_delta_star(&self, samples: usize, seed: u64) -> (f64, usize) {
        let mut rng = stream(seed, Stream::Graph);
        let (mut sum, mut ok, mut skipped) = (0.0, 0usize, 0usize);
        for _ in 0..samples {
            match solve_primal(&self.realize(&mut rng)) {
                Ok(s) => {
                    sum += s.value;
                    ok += 1;
                }
                Err(_) => skipped += 1,
            }
        }
        (if ok > 0 { sum / ok as f64 } else { f64::NAN }, skipped)
    }
}

/// True when the losses form a valid round: right length, all in `[0, 1]`.
pub(crate) fn check_round(t: usize, losses: &[f64]) -> Result<()> {
    match losses.iter().position(|x| !(0.0..=1.0).contains(x)) {
        Some(i) => Err(Error::Contract(format!(
            "round {t}: loss {} of arm {i} outside [0, 1]",
            losses[i]
        ))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_bipartite, revealing_pairs};

    #[test]
    fn bai_families_match_definitions() {
        let p = bai_instances(3, 0.1, BaiFamily::P).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p[1], vec![0.5, 0.4, 0.5]);
        let q = bai_instances(3, 0.1, BaiFamily::Q).unwrap();
        assert_eq!(q.len(), 4);
        assert_eq!(q[0], vec![0.4, 0.5, 0.5, 0.5]);
        assert_eq!(q[1], vec![0.45, 0.4, 0.5, 0.5]);
        assert!(bai_instances(3, 0.0, BaiFamily::P).is_err());
    }

    #[test]
    fn two_arm_bai_exact() {
        // Means (0, 1) at eps = 1/2: the draws never tie.
        let p = bai_instances(2, 0.5, BaiFamily::P).unwrap();
        let mut rng = stream(1, Stream::Aux(0));
        for _ in 0..50 {
            assert_eq!(uniform_pull_bai(&p[0], 1, &mut rng), 0);
        }
    }

    #[test]
    fn hard_instance_losses() {
        let g = revealing_pairs(4).unwrap();
        let hi = HardInstance::new(&g, vec![4, 5, 6, 7], 6, 0.2, None).unwrap();
        assert_eq!(hi.k, 1);
        let mut env = HardEnv::new(hi, 8, stream(3, Stream::Environment));
        let mut out = vec![0.0; 8];
        let mut special = 0.0;
        for t in 1..=2000 {
            env.losses(t, &mut out).unwrap();
            assert!(out[..4].iter().all(|&x| x == 1.0));
            special += out[6];
        }
        assert!((special / 2000.0 - 0.3).abs() < 0.05);
        assert!(HardInstance::new(&g, vec![0, 4], 4, 0.1, None).is_err());
        assert!(HardInstance::new(&g, vec![4, 5], 6, 0.1, None).is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(
            EnvSpec::parse("hard:S=8..11,13,j=9,eps=ratio").unwrap(),
            EnvSpec::Hard {
                support: vec![8, 9, 10, 13],
                special: 9,
                eps: EpsSchedule::Ratio,
                k: None
            }
        );
        assert_eq!(
            EnvSpec::parse("hard:S=1,2,j=2,eps=0.25,k=3").unwrap(),
            EnvSpec::Hard {
                support: vec![1, 2],
                special: 2,
                eps: EpsSchedule::Fixed(0.25),
                k: Some(3)
            }
        );
        assert_eq!(
            EnvSpec::parse("const:0.5, 1").unwrap(),
            EnvSpec::Const(vec![0.5, 1.0])
        );
        for bad in [
            "hard:S=1,j=1",
            "const:x",
            "wat:1",
            "hard:j=1,eps=0.1",
            "file:",
            "nocolon",
        ] {
            assert!(EnvSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn build_checks_arity_and_range() {
        let g = complete_bipartite(1, 2);
        assert!(EnvSpec::Const(vec![0.1, 0.2]).build(&g, 10, 0).is_err());
        assert!(EnvSpec::Const(vec![0.1, 0.2, 1.5])
            .build(&g, 10, 0)
            .is_err());
        assert!(EnvSpec::Const(vec![0.1, 0.2, 0.3]).build(&g, 10, 0).is_ok());
    }

    #[test]
    fn eps_schedules() {
        assert!((EpsSchedule::Ratio.resolve(8, 1, 4096).unwrap() - 0.125).abs() < 1e-12);
        let e = EpsSchedule::Log.resolve(8, 1, 1000).unwrap();
        assert!((e - (8f64.ln() / 1000.0).cbrt()).abs() < 1e-15);
        assert!(EpsSchedule::Ratio.resolve(8, 1, 8).is_err());
    }

    #[test]
    fn matrix_env_parsing() {
        let m = MatrixEnv::parse("# header\n0,1\n0.5, 0.25\n", "mem").unwrap();
        assert_eq!(m.rounds(), 2);
        let err = MatrixEnv::parse("0,1\n0.5\n", "mem").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(MatrixEnv::parse("0,2\n", "mem").is_err());
    }

    #[test]
    fn probabilistic_graph_realizations() {
        let g = complete_bipartite(1, 2);
        let pg = ProbabilisticGraph::uniform(g.clone(), 1.0).unwrap();
        let mut rng = stream(0, Stream::Graph);
        assert_eq!(pg.realize(&mut rng), g);
        assert!(ProbabilisticGraph::uniform(g.clone(), 0.0).is_err());
        assert!(ProbabilisticGraph::new(g, vec![0.5]).is_err());
    }
}
