//! Fixed-step kinematic simulation of Manhattan pursuit.
//!
//! Independent of the closed forms: each step moves the pursuer by `dt` along
//! one axis and every evader by `v * dt` along `+y`. Motion is linear inside
//! a step, so the alignment and capture instants are located exactly within
//! the step in which they occur rather than snapped to the grid.

use crate::error::{Error, Result};
use crate::scenario::{Branch, InterceptRecord, Point2, PursuitTrace, Scenario, SpeedAssignment};

/// Vertical separation treated as coincident at the start of the closing stage.
const COINCIDENT: f64 = 1e-12;

pub fn step_simulate(scenario: &Scenario, speeds: &SpeedAssignment, dt: f64) -> Result<PursuitTrace> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("time step {dt} must be positive")));
    }
    speeds.check_for(scenario)?;

    let mut t = 0.0_f64;
    let mut pos = scenario.pursuer;
    let mut legs = Vec::with_capacity(scenario.len());
    let mut total_time = 0.0;

    for (e0, &v) in scenario.evaders.iter().zip(&speeds.speeds) {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::invalid(format!("evader speed {v} must lie in (0, 1)")));
        }
        let leg_start = t;

        // Stage 1: move along x until aligned.
        let dir = (e0.x - pos.x).signum();
        let mut remaining = (e0.x - pos.x).abs();
        while remaining > 0.0 {
            let h = dt.min(remaining);
            pos.x += dir * h;
            remaining -= h;
            t += h;
        }
        pos.x = e0.x;

        // Stage 2: close along y.
        let evader_y = |t: f64| e0.y + v * t;
        let initial_gap = evader_y(t) - pos.y;
        let branch = if initial_gap > 0.0 {
            Branch::Above
        } else {
            Branch::Below
        };
        if initial_gap.abs() > COINCIDENT {
            let up = initial_gap > 0.0;
            let step_dir = if up { 1.0 } else { -1.0 };
            let closing = if up { 1.0 - v } else { 1.0 + v };
            loop {
                let gap = (evader_y(t) - pos.y).abs();
                if gap <= closing * dt {
                    // Contact inside this step.
                    let tau = gap / closing;
                    t += tau;
                    pos.y += step_dir * tau;
                    break;
                }
                t += dt;
                pos.y += step_dir * dt;
            }
        }
        pos.y = evader_y(t);

        let leg_time = t - leg_start;
        total_time += leg_time;
        legs.push(InterceptRecord {
            leg_time,
            cumulative_time: t,
            intercept_point: Point2::new(e0.x, pos.y),
            branch,
        });
    }
    Ok(PursuitTrace { legs, total_time })
}
