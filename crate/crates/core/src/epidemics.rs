//! Discrete-time SI and SIS spreading from a single seed node.
//!
//! Updates are synchronous: within a step every node infected at the start of
//! the step attempts to infect each susceptible neighbor, then (SIS only)
//! each node that was infected at the start of the step recovers. Nodes
//! infected during a step neither transmit nor recover until the next one.
//!
//! Random draws are only taken for probabilities strictly between 0 and 1,
//! and always in ascending node order, so that two configurations with the
//! same effective probabilities consume identical random streams.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Model {
    SI,
    SIS,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::SI => "SI",
            Model::SIS => "SIS",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SI" => Ok(Model::SI),
            "SIS" => Ok(Model::SIS),
            _ => Err(Error::param("model", format!("expected SI or SIS, got `{s}`"))),
        }
    }
}

/// How transmission and recovery probabilities depend on degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    /// `beta = c_beta`, `gamma = c_gamma`.
    Plain,
    /// SI: `beta(u->v) = c_beta k_v / k_seed`.
    /// SIS: `beta(u->v) = c_beta k_v`, `gamma(v) = c_gamma k_v / k_seed`.
    /// All clamped to `[0, 1]`.
    Degree,
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(Modulation::Plain),
            "degree" | "degree-modulated" => Ok(Modulation::Degree),
            _ => Err(Error::param(
                "modulation",
                format!("expected `plain` or `degree`, got `{s}`"),
            )),
        }
    }
}

/// Per-run SIS score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SisScoring {
    /// Susceptible-to-infected transitions, the seed's own infection included.
    Events,
    /// Number infected after the last step.
    Prevalence,
}

impl FromStr for SisScoring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "events" => Ok(SisScoring::Events),
            "prevalence" => Ok(SisScoring::Prevalence),
            _ => Err(Error::param(
                "scoring",
                format!("expected `events` or `prevalence`, got `{s}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpidemicConfig {
    pub model: Model,
    pub beta_coeff: f64,
    pub gamma_coeff: f64,
    pub modulation: Modulation,
    pub sis_scoring: SisScoring,
    pub steps: usize,
    pub runs: usize,
    pub rng_seed: u64,
}

impl EpidemicConfig {
    pub const DEFAULT_STEPS: usize = 50;
    pub const DEFAULT_RUNS: usize = 200;

    /// Plain-mode SI with the default step and run counts.
    pub fn si(beta_coeff: f64, rng_seed: u64) -> Self {
        EpidemicConfig {
            model: Model::SI,
            beta_coeff,
            gamma_coeff: 0.0,
            modulation: Modulation::Plain,
            sis_scoring: SisScoring::Events,
            steps: Self::DEFAULT_STEPS,
            runs: Self::DEFAULT_RUNS,
            rng_seed,
        }
    }

    /// Degree-modulated SIS scored by infection events.
    pub fn sis(beta_coeff: f64, gamma_coeff: f64, rng_seed: u64) -> Self {
        EpidemicConfig {
            model: Model::SIS,
            beta_coeff,
            gamma_coeff,
            modulation: Modulation::Degree,
            sis_scoring: SisScoring::Events,
            steps: Self::DEFAULT_STEPS,
            runs: Self::DEFAULT_RUNS,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.beta_coeff.is_finite() || self.beta_coeff < 0.0 {
            return Err(Error::param(
                "beta_coeff",
                format!("must be a finite non-negative number, got {}", self.beta_coeff),
            ));
        }
        if !(0.0..=1.0).contains(&self.gamma_coeff) {
            return Err(Error::param(
                "gamma_coeff",
                format!("must lie in [0, 1], got {}", self.gamma_coeff),
            ));
        }
        if self.steps == 0 {
            return Err(Error::param("steps", "must be at least 1"));
        }
        if self.runs == 0 {
            return Err(Error::param("runs", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadOutcome {
    pub seed: NodeId,
    /// Mean run score.
    pub score: f64,
    /// Standard error of the mean (0 for a single run).
    pub stderr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_run: Option<Vec<f64>>,
}

/// Random stream for one `(seed node, run)` pair.
pub fn run_rng(rng_seed: u64, seed_node: NodeId, run: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&rng_seed.to_le_bytes());
    key[8..16].copy_from_slice(&seed_node.to_le_bytes());
    key[16..24].copy_from_slice(&(run as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn clamp01(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

fn bernoulli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> bool {
    if p <= 0.0 {
        false
    } else if p >= 1.0 {
        true
    } else {
        rng.gen::<f64>() < p
    }
}

struct Trace {
    events: usize,
    final_infected: usize,
    ever_infected: Vec<bool>,
}

fn simulate<R: Rng + ?Sized>(
    g: &Graph,
    seed: usize,
    steps: usize,
    beta: impl Fn(usize) -> f64,
    gamma: impl Fn(usize) -> f64,
    recovers: bool,
    rng: &mut R,
) -> Trace {
    let n = g.num_nodes();
    let mut infected = vec![false; n];
    let mut ever = vec![false; n];
    let mut current = vec![seed];
    infected[seed] = true;
    ever[seed] = true;
    let mut events = 1;
    let mut newly = Vec::new();

    for _ in 0..steps {
        if current.is_empty() {
            break;
        }
        newly.clear();
        for &u in &current {
            for &v in g.neighbors_at(u) {
                if !infected[v] && bernoulli(beta(v), rng) {
                    infected[v] = true;
                    ever[v] = true;
                    newly.push(v);
                }
            }
        }
        events += newly.len();
        if recovers {
            current.retain(|&u| {
                let recovered = bernoulli(gamma(u), rng);
                if recovered {
                    infected[u] = false;
                }
                !recovered
            });
        }
        current.extend_from_slice(&newly);
        current.sort_unstable();
    }
    Trace {
        events,
        final_infected: current.len(),
        ever_infected: ever,
    }
}

fn check_model(cfg: &EpidemicConfig, want: Model) -> Result<()> {
    cfg.validate()?;
    if cfg.model != want {
        return Err(Error::param("model", format!("expected {want}, got {}", cfg.model)));
    }
    Ok(())
}

fn si_trace<R: Rng + ?Sized>(g: &Graph, seed: usize, cfg: &EpidemicConfig, rng: &mut R) -> Trace {
    let k_seed = g.degree_at(seed) as f64;
    let c = cfg.beta_coeff;
    match cfg.modulation {
        Modulation::Plain => simulate(g, seed, cfg.steps, |_| clamp01(c), |_| 0.0, false, rng),
        Modulation::Degree => simulate(
            g,
            seed,
            cfg.steps,
            |v| clamp01(c * g.degree_at(v) as f64 / k_seed),
            |_| 0.0,
            false,
            rng,
        ),
    }
}

fn sis_trace<R: Rng + ?Sized>(g: &Graph, seed: usize, cfg: &EpidemicConfig, rng: &mut R) -> Trace {
    let k_seed = g.degree_at(seed) as f64;
    let (cb, cg) = (cfg.beta_coeff, cfg.gamma_coeff);
    match cfg.modulation {
        Modulation::Plain => simulate(g, seed, cfg.steps, |_| clamp01(cb), |_| cg, true, rng),
        Modulation::Degree => simulate(
            g,
            seed,
            cfg.steps,
            |v| clamp01(cb * g.degree_at(v) as f64),
            |v| clamp01(cg * g.degree_at(v) as f64 / k_seed),
            true,
            rng,
        ),
    }
}

/// One SI run; returns the number infected after `cfg.steps` steps, seed included.
pub fn si_run<R: Rng + ?Sized>(g: &Graph, seed: NodeId, cfg: &EpidemicConfig, rng: &mut R) -> Result<f64> {
    check_model(cfg, Model::SI)?;
    let s = g.require(seed)?;
    Ok(si_trace(g, s, cfg, rng).final_infected as f64)
}

/// One SIS run; returns infection events (or final prevalence, per
/// `cfg.sis_scoring`) over exactly `cfg.steps` steps.
pub fn sis_run<R: Rng + ?Sized>(g: &Graph, seed: NodeId, cfg: &EpidemicConfig, rng: &mut R) -> Result<f64> {
    check_model(cfg, Model::SIS)?;
    let s = g.require(seed)?;
    if g.degree_at(s) == 0 {
        return Ok(1.0);
    }
    let trace = sis_trace(g, s, cfg, rng);
    Ok(match cfg.sis_scoring {
        SisScoring::Events => trace.events as f64,
        SisScoring::Prevalence => trace.final_infected as f64,
    })
}

/// Ids of every node infected at some point during one run.
pub fn ever_infected<R: Rng + ?Sized>(
    g: &Graph,
    seed: NodeId,
    cfg: &EpidemicConfig,
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    cfg.validate()?;
    let s = g.require(seed)?;
    let trace = match cfg.model {
        Model::SI => si_trace(g, s, cfg, rng),
        Model::SIS => sis_trace(g, s, cfg, rng),
    };
    Ok(trace
        .ever_infected
        .iter()
        .enumerate()
        .filter(|(_, &hit)| hit)
        .map(|(i, _)| g.id_at(i))
        .collect())
}

fn run_once(g: &Graph, seed: NodeId, cfg: &EpidemicConfig, run: usize) -> Result<f64> {
    let mut rng = run_rng(cfg.rng_seed, seed, run);
    match cfg.model {
        Model::SI => si_run(g, seed, cfg, &mut rng),
        Model::SIS => sis_run(g, seed, cfg, &mut rng),
    }
}

/// Mean and standard error of the per-run score for every node as seed.
/// Output is in node-id order and independent of thread scheduling.
pub fn spread_scores(g: &Graph, cfg: &EpidemicConfig, keep_runs: bool) -> Result<Vec<SpreadOutcome>> {
    cfg.validate()?;
    g.node_ids()
        .par_iter()
        .map(|&seed| {
            let runs = (0..cfg.runs)
                .map(|run| run_once(g, seed, cfg, run))
                .collect::<Result<Vec<f64>>>()?;
            let (score, stderr) = mean_stderr(&runs);
            Ok(SpreadOutcome {
                seed,
                score,
                stderr,
                per_run: keep_runs.then_some(runs),
            })
        })
        .collect()
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
