//! Intercept times for Manhattan pursuit along a capture chain.
//!
//! The pursuer first moves along `x` until it shares the target's abscissa,
//! then along `y` until it meets the target. Evaders translate in `+y` from
//! `t = 0`, so the target of leg `k` has already moved for the whole time
//! spent on legs `1..k`.

mod simulate;

pub use simulate::step_simulate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{Branch, InterceptRecord, Point2, PursuitTrace, Scenario, SpeedAssignment};

/// Pursuer state after the most recent capture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    /// Pursuer location, i.e. the last intercept point.
    pub position: Point2,
    /// Total time spent on all previous legs.
    pub elapsed: f64,
    /// Speed of the last captured evader (0 before the first capture).
    pub last_evader_speed: f64,
    /// Initial location of the last captured evader (the pursuer start
    /// before the first capture).
    pub last_evader_initial: Point2,
}

impl ChainState {
    pub fn start(pursuer: Point2) -> Self {
        ChainState {
            position: pursuer,
            elapsed: 0.0,
            last_evader_speed: 0.0,
            last_evader_initial: pursuer,
        }
    }

    /// Horizontal distance to `evader` and the signed vertical gap
    /// (evader minus pursuer) at the moment the abscissae match.
    pub fn alignment_gap(&self, evader: Point2, v: f64) -> (f64, f64) {
        let dx = (self.position.x - evader.x).abs();
        let gap = evader.y + v * (self.elapsed + dx) - self.position.y;
        (dx, gap)
    }
}

fn check_speed(v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("evader speed {v} must lie in (0, 1)")))
    }
}

/// Time for the first capture, starting from the pursuer's initial location.
pub fn intercept_time_first(pursuer: Point2, evader: Point2, v: f64) -> Result<InterceptRecord> {
    intercept_time_next(&ChainState::start(pursuer), evader, v).map(|(r, _)| r)
}

/// Time to capture the next evader (initially at `evader`, speed `v`) from
/// `state`, together with the state after that capture.
pub fn intercept_time_next(state: &ChainState, evader: Point2, v: f64) -> Result<(InterceptRecord, ChainState)> {
    check_speed(v)?;
    Ok(next_leg(state, evader, v))
}

pub(crate) fn next_leg(state: &ChainState, evader: Point2, v: f64) -> (InterceptRecord, ChainState) {
    let (dx, gap) = state.alignment_gap(evader, v);
    let (leg_time, branch) = if gap > 0.0 {
        // Chasing upward: closing speed 1 - v.
        (dx + gap / (1.0 - v), Branch::Above)
    } else {
        // Meeting head-on (or already level): closing speed 1 + v.
        (dx - gap / (1.0 + v), Branch::Below)
    };
    let elapsed = state.elapsed + leg_time;
    let intercept_point = evader.advanced(v, elapsed);
    let record = InterceptRecord {
        leg_time,
        cumulative_time: elapsed,
        intercept_point,
        branch,
    };
    let next = ChainState {
        position: intercept_point,
        elapsed,
        last_evader_speed: v,
        last_evader_initial: evader,
    };
    (record, next)
}

/// Chain state after capturing the first `k` evaders at `speeds[..k]`.
pub(crate) fn state_after(scenario: &Scenario, speeds: &[f64], k: usize) -> ChainState {
    scenario.evaders[..k]
        .iter()
        .zip(speeds)
        .fold(ChainState::start(scenario.pursuer), |s, (e, v)| next_leg(&s, *e, *v).1)
}

/// Total capture time for raw speeds. No validation.
pub(crate) fn chain_total(scenario: &Scenario, speeds: &[f64]) -> f64 {
    state_after(scenario, speeds, scenario.len()).elapsed
}

/// Folds the capture chain over every evader in order.
pub fn total_intercept_time(scenario: &Scenario, speeds: &SpeedAssignment) -> Result<PursuitTrace> {
    speeds.check_for(scenario)?;
    for v in &speeds.speeds {
        check_speed(*v)?;
    }
    let mut state = ChainState::start(scenario.pursuer);
    let mut legs = Vec::with_capacity(scenario.len());
    let mut total_time = 0.0;
    for (e, v) in scenario.evaders.iter().zip(&speeds.speeds) {
        let (record, next) = next_leg(&state, *e, *v);
        total_time += record.leg_time;
        legs.push(record);
        state = next;
    }
    Ok(PursuitTrace { legs, total_time })
}

/// Capture time of a single evader when the pursuer heads straight for the
/// interception point instead of moving axis by axis.
pub fn euclidean_intercept_time(pursuer: Point2, evader: Point2, v: f64) -> Result<f64> {
    check_speed(v)?;
    Ok(euclidean_time_unchecked(pursuer, evader, v))
}

pub(crate) fn euclidean_time_unchecked(pursuer: Point2, evader: Point2, v: f64) -> f64 {
    let s = 1.0 - v * v;
    let dx = pursuer.x - evader.x;
    let dy = pursuer.y - evader.y;
    (evader.y - pursuer.y) * v / s + (dx * dx / s + dy * dy / (s * s)).sqrt()
}
