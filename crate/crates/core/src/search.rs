//! Baselines for the speed assignment: exhaustive search over the extremes,
//! a uniform grid over the speed interval, and random sampling.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pursuit::{chain_total, next_leg, ChainState};
use crate::scenario::{Scenario, SpeedAssignment};
use crate::strategy::classify_labels;

/// Largest evader count accepted by [`brute_force_extremes`].
pub const MAX_EXHAUSTIVE_EVADERS: usize = 24;
/// Largest number of grid points accepted by [`grid_search`].
pub const MAX_GRID_EVALUATIONS: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMethod {
    Extremes,
    Grid,
    RandomSampling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub best_assignment: SpeedAssignment,
    pub best_time: f64,
    /// Distinct assignments whose total time was evaluated.
    pub evaluations: u64,
    pub method: SearchMethod,
}

fn report(
    scenario: &Scenario,
    speeds: Vec<f64>,
    best_time: f64,
    evaluations: u64,
    method: SearchMethod,
) -> SearchReport {
    let labels = classify_labels(scenario, &speeds);
    SearchReport {
        best_assignment: SpeedAssignment { speeds, labels },
        best_time,
        evaluations,
        method,
    }
}

/// Depth-first maximization over `levels^n`, sharing chain prefixes.
/// Levels are visited in the given order and only strict improvements
/// replace the incumbent, so ties keep the lexicographically first vector.
struct Enumerator<'a> {
    scenario: &'a Scenario,
    levels: &'a [f64],
    current: Vec<f64>,
    best: Vec<f64>,
    best_time: f64,
    leaves: u64,
}

impl Enumerator<'_> {
    fn descend(&mut self, depth: usize, state: ChainState) {
        if depth == self.scenario.len() {
            self.leaves += 1;
            if state.elapsed > self.best_time {
                self.best_time = state.elapsed;
                self.best.clone_from(&self.current);
            }
            return;
        }
        let e = self.scenario.evaders[depth];
        for &v in self.levels {
            self.current[depth] = v;
            let (_, next) = next_leg(&state, e, v);
            self.descend(depth + 1, next);
        }
    }
}

fn enumerate(scenario: &Scenario, levels: &[f64]) -> (Vec<f64>, f64, u64) {
    let n = scenario.len();
    let mut en = Enumerator {
        scenario,
        levels,
        current: vec![levels[0]; n],
        best: vec![levels[0]; n],
        best_time: f64::NEG_INFINITY,
        leaves: 0,
    };
    en.descend(0, ChainState::start(scenario.pursuer));
    (en.best, en.best_time, en.leaves)
}

/// Exact maximum of the total capture time over `{u_min, u_max}^n`.
pub fn brute_force_extremes(scenario: &Scenario) -> Result<SearchReport> {
    scenario.validate()?;
    let n = scenario.len();
    if n > MAX_EXHAUSTIVE_EVADERS {
        return Err(Error::LimitExceeded {
            what: "evader count for exhaustive search",
            requested: n as u128,
            limit: MAX_EXHAUSTIVE_EVADERS as u128,
        });
    }
    let levels = scenario.bounds.extremes();
    let (best, time, evals) = enumerate(scenario, &levels);
    Ok(report(scenario, best, time, evals, SearchMethod::Extremes))
}

/// `points` evenly spaced speeds from `u_min` to `u_max` inclusive.
pub fn speed_grid(scenario: &Scenario, points: usize) -> Vec<f64> {
    let b = scenario.bounds;
    let step = b.spread() / (points - 1) as f64;
    (0..points)
        .map(|j| {
            if j + 1 == points {
                b.u_max
            } else {
                b.u_min + j as f64 * step
            }
        })
        .collect()
}

/// Exact maximum over the uniform speed grid with `points` values per
/// evader.
pub fn grid_search(scenario: &Scenario, points: usize) -> Result<SearchReport> {
    scenario.validate()?;
    if points < 2 {
        return Err(Error::invalid(format!("grid needs at least 2 points, got {points}")));
    }
    let budget = (points as u128).checked_pow(scenario.len() as u32);
    match budget {
        Some(b) if b <= MAX_GRID_EVALUATIONS => {}
        _ => {
            return Err(Error::LimitExceeded {
                what: "grid evaluations",
                requested: budget.unwrap_or(u128::MAX),
                limit: MAX_GRID_EVALUATIONS,
            })
        }
    }
    let levels = speed_grid(scenario, points);
    let (best, time, evals) = enumerate(scenario, &levels);
    Ok(report(scenario, best, time, evals, SearchMethod::Grid))
}

/// `ceil(10 · n · ln(2/δ))`.
pub fn sample_count(n: usize, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta {delta} must lie in (0, 1)")));
    }
    Ok((10.0 * n as f64 * (2.0 / delta).ln()).ceil() as usize)
}

/// Best of `ceil(10 · n · ln(2/δ))` speed vectors drawn uniformly, with
/// replacement, from `{u_min, u_max}^n`.
pub fn random_sampling_baseline(scenario: &Scenario, delta: f64, seed: u64) -> Result<SearchReport> {
    let samples = sample_count(scenario.len(), delta)?;
    random_sampling(scenario, samples, seed, false)
}

/// Best of `samples` draws. Lattice draws pick each speed from
/// `{u_min, u_max}`; `continuous` draws pick uniformly from the interval.
/// A fixed seed yields a fixed draw sequence, so a larger sample count
/// only extends it.
pub fn random_sampling(scenario: &Scenario, samples: usize, seed: u64, continuous: bool) -> Result<SearchReport> {
    scenario.validate()?;
    if samples == 0 {
        return Err(Error::invalid("sample count must be positive"));
    }
    let b = scenario.bounds;
    let n = scenario.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut evaluations = 0u64;

    for _ in 0..samples {
        let speeds: Vec<f64> = if continuous {
            (0..n).map(|_| b.u_min + rng.gen::<f64>() * b.spread()).collect()
        } else {
            let bits: Vec<bool> = (0..n).map(|_| rng.gen::<bool>()).collect();
            let speeds = bits.iter().map(|&hi| if hi { b.u_max } else { b.u_min }).collect();
            // Repeated lattice points cannot change the maximum.
            if !seen.insert(bits) {
                continue;
            }
            speeds
        };
        evaluations += 1;
        let t = chain_total(scenario, &speeds);
        if best.as_ref().is_none_or(|(_, bt)| t > *bt) {
            best = Some((speeds, t));
        }
    }
    let (speeds, time) = best.expect("at least one sample evaluated");
    Ok(report(
        scenario,
        speeds,
        time,
        evaluations,
        SearchMethod::RandomSampling,
    ))
}
