//! Evader speed selection: greedy switching rules, pairwise cooperation
//! tests, and the two-pass Seq-GreC assignment.
//!
//! Every leg time is monotone in the evader's own speed, so each rule only
//! ever picks `u_min` or `u_max`. The switching thresholds are written in
//! terms of the chain state left by the previous capture: the initial `y`
//! and speed of the last captured evader and the cumulative time so far.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pursuit::{chain_total, next_leg, state_after, total_intercept_time, ChainState};
use crate::scenario::{Point2, PursuitTrace, Scenario, SpeedAssignment, SpeedBounds, SpeedLabel};
use crate::EPS;

/// Number of cooperation passes after the greedy pass.
pub const COOPERATION_PASSES: usize = 2;

/// Best speed for a lone evader: `u_min` when it starts below
/// `Y - Δx·V`, `u_max` otherwise (ties go to `u_max`).
pub fn optimal_single(pursuer: Point2, evader: Point2, bounds: SpeedBounds) -> f64 {
    greedy_speed_k(&ChainState::start(pursuer), evader, bounds)
}

/// Initial `y` at which the next evader is indifferent between `u_min` and
/// `u_max` for its own leg.
pub fn greedy_threshold(state: &ChainState, evader: Point2, bounds: SpeedBounds) -> f64 {
    let v = bounds.v_const();
    let dx = (state.position.x - evader.x).abs();
    state.last_evader_initial.y - dx * v + (state.last_evader_speed - v) * state.elapsed
}

/// Speed maximizing the next evader's own leg given the upstream chain.
pub fn greedy_speed_k(state: &ChainState, evader: Point2, bounds: SpeedBounds) -> f64 {
    if evader.y >= greedy_threshold(state, evader, bounds) - EPS {
        bounds.u_max
    } else {
        bounds.u_min
    }
}

/// Which cooperation pattern applies to a pair `(E_{k-1}, E_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `E_{k-1}` slows to `u_min` so it is met head-on; `E_k` runs at `u_max`.
    Case1,
    /// `E_{k-1}` speeds up to `u_max`; `E_k` runs at `u_min`.
    Case2,
    None,
}

/// Quantities evaluated while testing a pair, kept for auditing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CooperationThresholds {
    /// Admissible range of `y_{k-1}` for case 1.
    pub case1_interval: (f64, f64),
    /// Admissible range of `y_{k-1}` for case 2.
    pub case2_interval: (f64, f64),
    /// `y_k - y_{k-1}` must exceed this for case 1.
    pub case1_rhs: f64,
    /// `y_k - y_{k-1}` must stay below this for case 2.
    pub case2_rhs: f64,
    /// `y_k - y_{k-1}` for the pair.
    pub lhs: f64,
    /// Greedy speed of `E_{k-1}` given the current upstream speeds.
    pub greedy_speed: f64,
    /// Cumulative time through `E_{k-1}` at its greedy speed; the sum used
    /// in `case1_rhs` / `case2_rhs`.
    pub cumulative_through_prev: f64,
    /// The same sum extended through `E_k` at its current speed.
    pub cumulative_through_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CooperationCase {
    /// 1-based index `k` of the second evader of the pair.
    pub pair_index: usize,
    pub case: Case,
    pub thresholds: CooperationThresholds,
}

/// Tests whether `E_{k-1}` should cooperate with `E_k` (`2 <= k <= n`,
/// 1-based) given the speeds in `current` for everything upstream.
pub fn cooperation_case(scenario: &Scenario, current: &[f64], k: usize) -> Result<CooperationCase> {
    let n = scenario.len();
    if k < 2 || k > n {
        return Err(Error::invalid(format!("pair index {k} outside 2..={n}")));
    }
    if current.len() != n {
        return Err(Error::invalid(format!("{} speeds for {n} evaders", current.len())));
    }
    Ok(evaluate_pair(scenario, current, k))
}

fn evaluate_pair(scenario: &Scenario, current: &[f64], k: usize) -> CooperationCase {
    let b = scenario.bounds;
    let (u_min, u_max) = (b.u_min, b.u_max);
    let (big_v, big_u) = (b.v_const(), b.u_const());

    // State after E_{k-2}; for k = 2 this is the pursuer start.
    let st = state_after(scenario, current, k - 2);
    let prev = scenario.evaders[k - 2];
    let cur = scenario.evaders[k - 1];
    let y_up = st.last_evader_initial.y;
    let v_up = st.last_evader_speed;
    let s_up = st.elapsed;
    let dx_prev = (st.position.x - prev.x).abs();
    let dx_cur = (prev.x - cur.x).abs();

    let case1_interval = (
        y_up + (v_up - big_v) * s_up - dx_prev * big_v,
        y_up + (v_up - u_min) * s_up - dx_prev * u_min,
    );
    let case2_interval = (y_up + (v_up - u_max) * s_up - dx_prev * u_max, case1_interval.0);

    let greedy = greedy_speed_k(&st, prev, b);
    let (_, after_prev) = next_leg(&st, prev, greedy);
    let through_prev = after_prev.elapsed;
    let (_, after_cur) = next_leg(&after_prev, cur, current[k - 1]);

    let base = -dx_cur * big_v + (greedy - big_v) * through_prev;
    let rise = prev.y - y_up;
    let case1_rhs = base + big_u * (u_min * dx_prev + rise - (v_up - u_min) * s_up);
    let case2_rhs = base + big_u * (u_max * dx_prev + rise - (v_up - u_max) * s_up);
    let lhs = cur.y - prev.y;

    let within = |(lo, hi): (f64, f64)| prev.y >= lo && prev.y <= hi;
    let case = if within(case1_interval) && lhs > case1_rhs + EPS {
        Case::Case1
    } else if within(case2_interval)
        && if k == 2 {
            lhs <= case2_rhs
        } else {
            lhs < case2_rhs - EPS
        }
    {
        Case::Case2
    } else {
        Case::None
    };

    CooperationCase {
        pair_index: k,
        case,
        thresholds: CooperationThresholds {
            case1_interval,
            case2_interval,
            case1_rhs,
            case2_rhs,
            lhs,
            greedy_speed: greedy,
            cumulative_through_prev: through_prev,
            cumulative_through_k: after_cur.elapsed,
        },
    }
}

/// Speed of the cooperating (first) evader of a pair.
pub fn cooperative_speed(case: &CooperationCase, bounds: SpeedBounds) -> Result<f64> {
    match case.case {
        Case::Case1 => Ok(bounds.u_min),
        Case::Case2 => Ok(bounds.u_max),
        Case::None => Err(Error::invalid(format!("pair {} does not cooperate", case.pair_index))),
    }
}

/// Speed the second evader of a cooperating pair runs at.
fn partner_speed(case: Case, bounds: SpeedBounds) -> f64 {
    match case {
        Case::Case2 => bounds.u_min,
        _ => bounds.u_max,
    }
}

/// What happened to one pair during a cooperation pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairOutcome {
    /// Conditions failed; speeds untouched.
    NotQualified,
    /// The pair switched to its cooperative speeds.
    Cooperated,
    /// The pair qualified but switching would have shortened the total
    /// capture time, so it was left alone.
    NoGain,
    /// `E_{k-1}` also cooperated with `E_{k-2}` in this pass and therefore
    /// reverted to its greedy speed.
    Sandwiched,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDecision {
    pub evaluation: CooperationCase,
    pub outcome: PairOutcome,
    pub total_before: f64,
    pub total_after: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassRecord {
    /// 0 is the greedy pass; cooperation passes are numbered from 1.
    pub pass: usize,
    pub total_after: f64,
    pub decisions: Vec<PairDecision>,
}

impl PassRecord {
    /// 1-based indices `k` of the pairs that cooperated.
    pub fn cooperating_pairs(&self) -> Vec<usize> {
        self.pairs_with(PairOutcome::Cooperated)
    }

    /// 1-based indices of evaders reverted to greedy by the sandwich rule.
    pub fn reverted_evaders(&self) -> Vec<usize> {
        self.pairs_with(PairOutcome::Sandwiched)
            .into_iter()
            .map(|k| k - 1)
            .collect()
    }

    fn pairs_with(&self, outcome: PairOutcome) -> Vec<usize> {
        self.decisions
            .iter()
            .filter(|d| d.outcome == outcome)
            .map(|d| d.evaluation.pair_index)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyResult {
    pub assignment: SpeedAssignment,
    pub trace: PursuitTrace,
    pub pass_log: Vec<PassRecord>,
}

fn finish(scenario: &Scenario, assignment: SpeedAssignment, pass_log: Vec<PassRecord>) -> Result<StrategyResult> {
    let trace = total_intercept_time(scenario, &assignment)?;
    Ok(StrategyResult {
        assignment,
        trace,
        pass_log,
    })
}

fn greedy_speeds(scenario: &Scenario) -> Vec<f64> {
    let mut state = ChainState::start(scenario.pursuer);
    scenario
        .evaders
        .iter()
        .map(|e| {
            let v = greedy_speed_k(&state, *e, scenario.bounds);
            state = next_leg(&state, *e, v).1;
            v
        })
        .collect()
}

/// Every evader maximizes its own leg, front to back.
pub fn greedy_assignment(scenario: &Scenario) -> Result<StrategyResult> {
    scenario.validate()?;
    let speeds = greedy_speeds(scenario);
    let total = chain_total(scenario, &speeds);
    let log = vec![PassRecord {
        pass: 0,
        total_after: total,
        decisions: Vec::new(),
    }];
    finish(
        scenario,
        SpeedAssignment::uniform_label(speeds, SpeedLabel::Greedy),
        log,
    )
}

/// Greedy pass followed by two left-to-right cooperation passes over the
/// consecutive pairs.
///
/// A qualifying pair `(E_{k-1}, E_k)` is switched to its cooperative speeds
/// unless that would shorten the total capture time. If `E_{k-1}` already
/// cooperated with `E_{k-2}` in the same pass it is sandwiched and falls
/// back to its greedy speed instead.
pub fn seq_grec(scenario: &Scenario) -> Result<StrategyResult> {
    scenario.validate()?;
    let b = scenario.bounds;
    let n = scenario.len();
    let mut speeds = greedy_speeds(scenario);
    let mut labels = vec![SpeedLabel::Greedy; n];
    let mut total = chain_total(scenario, &speeds);
    let mut pass_log = vec![PassRecord {
        pass: 0,
        total_after: total,
        decisions: Vec::new(),
    }];

    for pass in 1..=COOPERATION_PASSES {
        let mut decisions = Vec::with_capacity(n.saturating_sub(1));
        let mut prev_cooperated = false;
        for k in 2..=n {
            let evaluation = evaluate_pair(scenario, &speeds, k);
            let total_before = total;
            let outcome = if evaluation.case == Case::None {
                PairOutcome::NotQualified
            } else if prev_cooperated {
                let st = state_after(scenario, &speeds, k - 2);
                speeds[k - 2] = greedy_speed_k(&st, scenario.evaders[k - 2], b);
                labels[k - 2] = SpeedLabel::Greedy;
                total = chain_total(scenario, &speeds);
                PairOutcome::Sandwiched
            } else {
                let mut candidate = speeds.clone();
                candidate[k - 2] = cooperative_speed(&evaluation, b)?;
                candidate[k - 1] = partner_speed(evaluation.case, b);
                let candidate_total = chain_total(scenario, &candidate);
                if candidate_total >= total {
                    speeds = candidate;
                    labels[k - 2] = SpeedLabel::Cooperative;
                    labels[k - 1] = SpeedLabel::Greedy;
                    total = candidate_total;
                    PairOutcome::Cooperated
                } else {
                    PairOutcome::NoGain
                }
            };
            prev_cooperated = outcome == PairOutcome::Cooperated;
            decisions.push(PairDecision {
                evaluation,
                outcome,
                total_before,
                total_after: total,
            });
        }
        pass_log.push(PassRecord {
            pass,
            total_after: total,
            decisions,
        });
    }

    finish(scenario, SpeedAssignment::new(speeds, labels)?, pass_log)
}

/// Labels each speed `Greedy` when it equals the greedy response to the
/// upstream speeds of the same assignment, `Cooperative` otherwise.
pub fn classify_labels(scenario: &Scenario, speeds: &[f64]) -> Vec<SpeedLabel> {
    let mut state = ChainState::start(scenario.pursuer);
    scenario
        .evaders
        .iter()
        .zip(speeds)
        .map(|(e, &v)| {
            let g = greedy_speed_k(&state, *e, scenario.bounds);
            state = next_leg(&state, *e, v).1;
            if g == v {
                SpeedLabel::Greedy
            } else {
                SpeedLabel::Cooperative
            }
        })
        .collect()
}

/// One row of the per-evader summary printed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaderRow {
    /// 1-based capture index.
    pub index: usize,
    /// Greedy switching threshold for this evader's initial `y`.
    pub y_threshold: f64,
    /// Case of the pair this evader leads in the final pass, if any.
    pub case: Option<Case>,
    pub speed: f64,
    pub label: SpeedLabel,
}

pub fn evader_table(scenario: &Scenario, result: &StrategyResult) -> Vec<EvaderRow> {
    let speeds = &result.assignment.speeds;
    let last_pass = result.pass_log.last();
    let mut state = ChainState::start(scenario.pursuer);
    scenario
        .evaders
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let y_threshold = greedy_threshold(&state, *e, scenario.bounds);
            state = next_leg(&state, *e, speeds[i]).1;
            let case = last_pass.and_then(|p| {
                p.decisions
                    .iter()
                    .find(|d| d.evaluation.pair_index == i + 2)
                    .map(|d| d.evaluation.case)
            });
            EvaderRow {
                index: i + 1,
                y_threshold,
                case,
                speed: speeds[i],
                label: result.assignment.labels[i],
            }
        })
        .collect()
}
