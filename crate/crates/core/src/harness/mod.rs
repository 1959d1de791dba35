//! Monte Carlo experiments over random scenarios and their persistence.

mod io;

use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound::{inputs_from_split, optimal_nmax, upper_bound_time, BoundBreakdown, BoundInputs};
use crate::error::{Error, Result};
use crate::scenario::{generate_random_scenario, PursuerPlacement, Rectangle, Scenario, SpeedBounds};
use crate::search::{brute_force_extremes, random_sampling_baseline};
use crate::strategy::{greedy_assignment, seq_grec};

pub use io::{load_config, load_scenario, save_fig4_results, save_results, save_scenario, FIG4_HEADER, RESULTS_HEADER};

fn default_n_values() -> Vec<usize> {
    vec![2, 4, 6, 8, 10]
}
fn default_trials() -> usize {
    50
}
fn default_delta() -> f64 {
    0.1
}
fn default_bounds() -> SpeedBounds {
    SpeedBounds::new_unchecked(0.2, 0.8)
}
fn default_cutoff() -> usize {
    20
}

/// Experiment settings. Every field has a default, so `{}` is a valid
/// config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_n_values")]
    pub n_values: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub rect: Rectangle,
    #[serde(default = "default_bounds")]
    pub bounds: SpeedBounds,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub output_path: Option<String>,
    /// Largest `n` for which the exhaustive optimum is computed.
    #[serde(default = "default_cutoff")]
    pub brute_force_cutoff: usize,
    #[serde(default)]
    pub placement: PursuerPlacement,
    /// Re-order each generated scenario by initial `x` before solving.
    #[serde(default)]
    pub sort_by_x: bool,
    /// Record per-trial wall time. Off by default so output is reproducible.
    #[serde(default)]
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_values: default_n_values(),
            trials: default_trials(),
            delta: default_delta(),
            rect: Rectangle::default(),
            bounds: default_bounds(),
            master_seed: 0,
            output_path: None,
            brute_force_cutoff: default_cutoff(),
            placement: PursuerPlacement::default(),
            sort_by_x: false,
            timing: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.n_values.is_empty() {
            return Err(Error::invalid("n_values must not be empty"));
        }
        if self.n_values.contains(&0) {
            return Err(Error::invalid("every n in n_values must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!("delta {} must lie in (0, 1)", self.delta)));
        }
        Rectangle::new(self.rect.l, self.rect.h)?;
        SpeedBounds::new(self.bounds.u_min, self.bounds.u_max)?;
        Ok(())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one trial. Depends only on its own coordinates, so adding or
/// removing other `n` values or trials leaves it unchanged.
pub fn trial_seed(master_seed: u64, n: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ n as u64) ^ trial as u64)
}

/// Independent stream for the randomized parts of a trial.
fn stream_seed(trial_seed: u64, stream: u64) -> u64 {
    splitmix64(trial_seed ^ splitmix64(stream))
}

const SAMPLING_STREAM: u64 = 1;
const SPLIT_STREAM: u64 = 2;

fn trial_jobs(config: &ExperimentConfig) -> Vec<(usize, usize)> {
    config
        .n_values
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .collect()
}

fn trial_scenario(config: &ExperimentConfig, n: usize, seed: u64) -> Result<Scenario> {
    let s = generate_random_scenario(n, config.rect, config.placement, config.bounds, seed)?;
    Ok(if config.sort_by_x { s.sorted_by_x() } else { s })
}

/// One trial of the strategy comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub seq_grec: f64,
    pub greedy: f64,
    pub sampling: f64,
    pub brute_force: Option<f64>,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig3Summary {
    pub n: usize,
    pub trials: usize,
    pub mean_seq_grec: f64,
    pub mean_greedy: f64,
    pub mean_sampling: f64,
    pub mean_brute_force: Option<f64>,
    /// Mean of `(brute_force - seq_grec) / brute_force`.
    pub mean_relative_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig3Result {
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<Fig3Summary>,
}

fn run_fig3_trial(config: &ExperimentConfig, n: usize, trial: usize) -> Result<ExperimentRow> {
    let started = Instant::now();
    let seed = trial_seed(config.master_seed, n, trial);
    let scenario = trial_scenario(config, n, seed)?;
    let seq = seq_grec(&scenario)?.trace.total_time;
    let greedy = greedy_assignment(&scenario)?.trace.total_time;
    let sampling = random_sampling_baseline(&scenario, config.delta, stream_seed(seed, SAMPLING_STREAM))?.best_time;
    let brute_force = if n <= config.brute_force_cutoff {
        Some(brute_force_extremes(&scenario)?.best_time)
    } else {
        None
    };
    Ok(ExperimentRow {
        n,
        trial,
        seed,
        seq_grec: seq,
        greedy,
        sampling,
        brute_force,
        wall_ms: config.timing.then(|| started.elapsed().as_secs_f64() * 1e3),
    })
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    sum / count as f64
}

/// Sample standard deviation; zero for fewer than two values.
fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs.iter().copied());
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Seq-GreC against greedy, random sampling and (for small `n`) the
/// exhaustive optimum, over `trials` random scenarios per `n`.
pub fn run_experiment_fig3(config: &ExperimentConfig) -> Result<Fig3Result> {
    config.validate()?;
    let mut rows = trial_jobs(config)
        .into_par_iter()
        .map(|(n, t)| run_fig3_trial(config, n, t))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.n, r.trial));

    let summary = config
        .n_values
        .iter()
        .map(|&n| {
            let group: Vec<&ExperimentRow> = rows.iter().filter(|r| r.n == n).collect();
            let exhaustive = group.iter().all(|r| r.brute_force.is_some());
            Fig3Summary {
                n,
                trials: group.len(),
                mean_seq_grec: mean(group.iter().map(|r| r.seq_grec)),
                mean_greedy: mean(group.iter().map(|r| r.greedy)),
                mean_sampling: mean(group.iter().map(|r| r.sampling)),
                mean_brute_force: exhaustive.then(|| mean(group.iter().filter_map(|r| r.brute_force))),
                mean_relative_gap: exhaustive.then(|| {
                    mean(group.iter().map(|r| {
                        let bf = r.brute_force.expect("exhaustive group");
                        (bf - r.seq_grec) / bf
                    }))
                }),
            }
        })
        .collect();
    Ok(Fig3Result { rows, summary })
}

/// One trial of the upper-bound comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig4Row {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    pub n_max: usize,
    /// Capture time with the random split.
    pub realized: f64,
    /// Upper bound at the maximizing split, with this trial's handoff offsets.
    pub bound: f64,
    /// True if any path in the trial came from the heuristic solver.
    pub heuristic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig4Summary {
    pub n: usize,
    pub trials: usize,
    pub n_max_star: usize,
    pub mean_realized: f64,
    pub std_realized: f64,
    pub mean_bound: f64,
    /// Fraction of trials with `realized <= bound`.
    pub fraction_below: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig4Result {
    pub rows: Vec<Fig4Row>,
    pub summary: Vec<Fig4Summary>,
}

fn run_fig4_trial(config: &ExperimentConfig, n: usize, trial: usize) -> Result<Fig4Row> {
    let seed = trial_seed(config.master_seed, n, trial);
    let scenario = trial_scenario(config, n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, SPLIT_STREAM));
    let n_max = rng.gen_range(1..n);
    let mut fast = vec![false; n];
    for i in sample(&mut rng, n, n_max) {
        fast[i] = true;
    }
    let (inputs, capture) = inputs_from_split(&scenario, &fast, config.rect.area())?;
    let star = optimal_nmax(n, config.bounds)?;
    let bound = upper_bound_time(&BoundInputs { n_max: star, ..inputs })?;
    Ok(Fig4Row {
        n,
        trial,
        seed,
        n_max,
        realized: capture.total,
        bound: bound.total,
        heuristic: capture.heuristic,
    })
}

/// Realized capture time under a uniformly random split against the upper
/// bound at the maximizing split.
pub fn run_experiment_fig4(config: &ExperimentConfig) -> Result<Fig4Result> {
    config.validate()?;
    if let Some(&n) = config.n_values.iter().find(|&&n| n < 2) {
        return Err(Error::invalid(format!("splitting needs n >= 2, got {n}")));
    }
    let mut rows = trial_jobs(config)
        .into_par_iter()
        .map(|(n, t)| run_fig4_trial(config, n, t))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.n, r.trial));

    let summary = config
        .n_values
        .iter()
        .map(|&n| {
            let group: Vec<&Fig4Row> = rows.iter().filter(|r| r.n == n).collect();
            let realized: Vec<f64> = group.iter().map(|r| r.realized).collect();
            Ok(Fig4Summary {
                n,
                trials: group.len(),
                n_max_star: optimal_nmax(n, config.bounds)?,
                mean_realized: mean(realized.iter().copied()),
                std_realized: std_dev(&realized),
                mean_bound: mean(group.iter().map(|r| r.bound)),
                fraction_below: group.iter().filter(|r| r.realized <= r.bound).count() as f64 / group.len() as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Fig4Result { rows, summary })
}

/// Bound breakdown for the maximizing split of `n` evaders in `rect`.
pub fn bound_at_optimum(
    n: usize,
    rect: Rectangle,
    delta_x: f64,
    delta_y: f64,
    bounds: SpeedBounds,
) -> Result<BoundBreakdown> {
    let star = optimal_nmax(n, bounds)?;
    upper_bound_time(&BoundInputs::with_area(n, star, rect.area(), delta_x, delta_y, bounds))
}
