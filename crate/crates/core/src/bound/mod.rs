//! Fundamental limits on total capture time: the conversion map, minimum
//! Hamiltonian paths for static and translating points, and the upper bound
//! on capture time as a function of how many evaders move at `u_max`.

mod emhp;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pursuit::euclidean_time_unchecked;
pub use crate::scenario::Rectangle;
use crate::scenario::{Point2, Scenario, SpeedBounds};

pub use emhp::{
    emhp_exact, emhp_heuristic, emhp_path, path_length, HamiltonianPath, PathEnd, EXACT_EMHP_LIMIT, MAX_EXACT_POINTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundInputs {
    pub n: usize,
    pub n_max: usize,
    pub area_max: f64,
    pub area_min: f64,
    pub delta_x: f64,
    pub delta_y: f64,
    pub bounds: SpeedBounds,
}

impl BoundInputs {
    /// Worst case: both groups spread over the whole area `area`.
    pub fn with_area(n: usize, n_max: usize, area: f64, delta_x: f64, delta_y: f64, bounds: SpeedBounds) -> Self {
        BoundInputs {
            n,
            n_max,
            area_max: area,
            area_min: area,
            delta_x,
            delta_y,
            bounds,
        }
    }

    pub fn n_min(&self) -> usize {
        self.n - self.n_max
    }

    fn check(&self) -> Result<()> {
        SpeedBounds::new(self.bounds.u_min, self.bounds.u_max)?;
        if self.n_max < 1 || self.n_max >= self.n {
            return Err(Error::invalid(format!(
                "need 1 <= n_max <= n - 1, got n = {}, n_max = {}",
                self.n, self.n_max
            )));
        }
        for (name, a) in [("area_max", self.area_max), ("area_min", self.area_min)] {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(Error::invalid(format!(
                    "{name} = {a} must be a finite non-negative area"
                )));
            }
        }
        if !(self.delta_x.is_finite() && self.delta_y.is_finite()) {
            return Err(Error::invalid("handoff offsets must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundBreakdown {
    pub t_nmax: f64,
    pub t_handoff: f64,
    pub t_nmin: f64,
    pub total: f64,
}

impl BoundBreakdown {
    fn from_parts(t_nmax: f64, t_handoff: f64, t_nmin: f64) -> Self {
        BoundBreakdown {
            t_nmax,
            t_handoff,
            t_nmin,
            total: t_nmax + t_handoff + t_nmin,
        }
    }
}

fn check_translation_speed(v: f64) -> Result<()> {
    if !(0.0..1.0).contains(&v) {
        return Err(Error::invalid(format!("speed {v} must lie in [0, 1)")));
    }
    Ok(())
}

/// `C_v(x, y) = (x / sqrt(1 - v²), y / (1 - v²))`.
pub fn convert_point(p: Point2, v: f64) -> Result<Point2> {
    check_translation_speed(v)?;
    Ok(convert_unchecked(p, v))
}

fn convert_unchecked(p: Point2, v: f64) -> Point2 {
    let s = 1.0 - v * v;
    Point2::new(p.x / s.sqrt(), p.y / s)
}

/// `sqrt(2·l·h·m) + h + 2.5`.
pub fn fews_bound(rect: Rectangle, m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::invalid("point count must be at least 1"));
    }
    Ok((2.0 * rect.l * rect.h * m as f64).sqrt() + rect.h + 2.5)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TmhpTour {
    /// Capture order as indices into the input points.
    pub order: Vec<usize>,
    pub time: f64,
    /// Hamiltonian path length in converted coordinates.
    pub converted_length: f64,
    pub heuristic: bool,
}

/// Minimum time to capture points that all translate along `+y` at speed
/// `v`, visiting them in one order with straight-line intercepts.
pub fn tmhp_time(start: Point2, points: &[Point2], v: f64) -> Result<TmhpTour> {
    check_translation_speed(v)?;
    let converted: Vec<Point2> = points.iter().map(|&p| convert_unchecked(p, v)).collect();
    let path = emhp_path(convert_unchecked(start, v), &converted, PathEnd::Free)?;
    let last = points[*path.order.last().expect("non-empty order")];
    let time = v * (last.y - start.y) / (1.0 - v * v) + path.length;
    Ok(TmhpTour {
        order: path.order,
        time,
        converted_length: path.length,
        heuristic: path.heuristic,
    })
}

/// Intercept time for a target offset by `(dx, q)` from the pursuer and
/// moving at `v`.
fn handoff_time(dx: f64, q: f64, v: f64) -> f64 {
    euclidean_time_unchecked(Point2::new(0.0, 0.0), Point2::new(dx, q), v)
}

fn group_time(area: f64, count: f64, v: f64) -> f64 {
    (2.0 * area * count / (1.0 - v * v).powf(1.5)).sqrt()
}

/// Upper bound on total capture time when the `u_max` group is captured
/// first, then the handoff intercept, then the rest of the `u_min` group.
pub fn upper_bound_time(inputs: &BoundInputs) -> Result<BoundBreakdown> {
    inputs.check()?;
    let SpeedBounds { u_min, u_max } = inputs.bounds;
    let t_nmax = group_time(inputs.area_max, inputs.n_max as f64, u_max);
    let q = inputs.delta_y + (u_min - u_max) * t_nmax;
    let t_handoff = handoff_time(inputs.delta_x, q, u_min);
    let t_nmin = group_time(inputs.area_min, (inputs.n_min() - 1) as f64, u_min);
    Ok(BoundBreakdown::from_parts(t_nmax, t_handoff, t_nmin))
}

/// The same decomposition with the `u_min` group captured first. The
/// fields keep their group meaning: `t_nmin` is the first stage here and
/// `t_nmax` the last, and the handoff is flown at `u_max`.
pub fn upper_bound_time_min_first(inputs: &BoundInputs) -> Result<BoundBreakdown> {
    inputs.check()?;
    let SpeedBounds { u_min, u_max } = inputs.bounds;
    let t_nmin = group_time(inputs.area_min, inputs.n_min() as f64, u_min);
    let q = -inputs.delta_y + (u_max - u_min) * t_nmin;
    let t_handoff = handoff_time(inputs.delta_x, q, u_max);
    let t_nmax = group_time(inputs.area_max, (inputs.n_max - 1) as f64, u_max);
    Ok(BoundBreakdown::from_parts(t_nmax, t_handoff, t_nmin))
}

fn check_split_count(n: usize, bounds: SpeedBounds) -> Result<()> {
    SpeedBounds::new(bounds.u_min, bounds.u_max)?;
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 evaders to split, got {n}")));
    }
    Ok(())
}

/// Maximizing `n_max` in the large-`n` regime, rounded and clamped to
/// `[1, n - 1]`.
pub fn optimal_nmax(n: usize, bounds: SpeedBounds) -> Result<usize> {
    check_split_count(n, bounds)?;
    let SpeedBounds { u_min, u_max } = bounds;
    let du2 = (u_min - u_max).powi(2);
    let denom = (1.0 - u_min * u_min).sqrt() * (1.0 - u_max * u_max).powf(1.5) + du2;
    let raw = (du2 * n as f64 / denom).round();
    Ok((raw.max(1.0) as usize).min(n - 1))
}

/// Stationary point of the bound before the `Δx²` term is dropped, as a
/// real number (no rounding or clamping).
pub fn optimal_nmax_unsimplified(n: usize, bounds: SpeedBounds, area: f64, delta_x: f64) -> Result<f64> {
    check_split_count(n, bounds)?;
    let SpeedBounds { u_min, u_max } = bounds;
    let du2 = (u_min - u_max).powi(2);
    let smin = 1.0 - u_min * u_min;
    let smax = 1.0 - u_max * u_max;
    let num = 2.0 * du2 * du2 * area * n as f64 - smin.powf(1.5) * delta_x * delta_x * smax.powi(3);
    let den = 2.0 * du2 * area * (smin.sqrt() * smax.powf(1.5) + du2);
    Ok(num / den)
}

/// Bound for every `n_max` in `[1, n - 1]`, in increasing order.
pub fn upper_bound_sweep(template: &BoundInputs) -> Result<Vec<(usize, BoundBreakdown)>> {
    if template.n < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 evaders to sweep, got {}",
            template.n
        )));
    }
    (1..template.n)
        .into_par_iter()
        .map(|n_max| upper_bound_time(&BoundInputs { n_max, ..*template }).map(|b| (n_max, b)))
        .collect()
}

/// `n_max` with the largest total; ties go to the smallest `n_max`.
pub fn sweep_argmax(sweep: &[(usize, BoundBreakdown)]) -> Option<usize> {
    sweep
        .iter()
        .fold(None::<(usize, f64)>, |best, &(k, b)| match best {
            Some((_, t)) if b.total <= t => best,
            _ => Some((k, b.total)),
        })
        .map(|(k, _)| k)
}

/// Smallest axis-aligned rectangle area enclosing `points`.
pub fn bounding_area(points: &[Point2]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    (x1 - x0) * (y1 - y0)
}

/// Realized capture of a split scenario: the `u_max` group by its
/// translational path, a straight intercept of the first `u_min` evader,
/// then the remaining `u_min` group by its translational path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitCapture {
    pub t_nmax: f64,
    pub t_handoff: f64,
    pub t_nmin: f64,
    pub total: f64,
    /// Scenario index of the last `u_max` evader captured.
    pub last_fast: Option<usize>,
    /// Scenario index of the first `u_min` evader captured.
    pub first_slow: Option<usize>,
    pub heuristic: bool,
}

/// Capture all evaders with `fast[i]` set first (moving at `u_max`), then
/// the others (moving at `u_min`).
pub fn split_capture(scenario: &Scenario, fast: &[bool]) -> Result<SplitCapture> {
    scenario.validate()?;
    if fast.len() != scenario.len() {
        return Err(Error::invalid(format!(
            "group mask has {} entries for {} evaders",
            fast.len(),
            scenario.len()
        )));
    }
    let SpeedBounds { u_min, u_max } = scenario.bounds;
    let fast_idx: Vec<usize> = (0..fast.len()).filter(|&i| fast[i]).collect();
    let slow_idx: Vec<usize> = (0..fast.len()).filter(|&i| !fast[i]).collect();
    let mut heuristic = false;

    let mut pos = scenario.pursuer;
    let mut t_nmax = 0.0;
    let mut last_fast = None;
    if !fast_idx.is_empty() {
        let pts: Vec<Point2> = fast_idx.iter().map(|&i| scenario.evaders[i]).collect();
        let tour = tmhp_time(pos, &pts, u_max)?;
        heuristic |= tour.heuristic;
        t_nmax = tour.time;
        let last = fast_idx[*tour.order.last().expect("non-empty tour")];
        pos = scenario.evaders[last].advanced(u_max, t_nmax);
        last_fast = Some(last);
    }

    let (mut t_handoff, mut t_nmin, mut first_slow) = (0.0, 0.0, None);
    if !slow_idx.is_empty() {
        let at: Vec<Point2> = slow_idx
            .iter()
            .map(|&i| scenario.evaders[i].advanced(u_min, t_nmax))
            .collect();
        let tour = tmhp_time(pos, &at, u_min)?;
        heuristic |= tour.heuristic;
        let head = tour.order[0];
        first_slow = Some(slow_idx[head]);
        t_handoff = euclidean_time_unchecked(pos, at[head], u_min);
        let caught = at[head].advanced(u_min, t_handoff);
        let rest: Vec<Point2> = (0..at.len())
            .filter(|&j| j != head)
            .map(|j| at[j].advanced(u_min, t_handoff))
            .collect();
        if !rest.is_empty() {
            let tour = tmhp_time(caught, &rest, u_min)?;
            heuristic |= tour.heuristic;
            t_nmin = tour.time;
        }
    }

    Ok(SplitCapture {
        t_nmax,
        t_handoff,
        t_nmin,
        total: t_nmax + t_handoff + t_nmin,
        last_fast,
        first_slow,
        heuristic,
    })
}

/// Bound inputs for a concrete split: `Δx`, `Δy` run from the last captured
/// `u_max` evader to the first captured `u_min` evader (initial positions),
/// and both areas are set to `area`.
pub fn inputs_from_split(scenario: &Scenario, fast: &[bool], area: f64) -> Result<(BoundInputs, SplitCapture)> {
    let capture = split_capture(scenario, fast)?;
    let (Some(a), Some(b)) = (capture.last_fast, capture.first_slow) else {
        return Err(Error::invalid("both speed groups must be non-empty"));
    };
    let (ea, eb) = (scenario.evaders[a], scenario.evaders[b]);
    let inputs = BoundInputs::with_area(
        scenario.len(),
        fast.iter().filter(|&&f| f).count(),
        area,
        (eb.x - ea.x).abs(),
        eb.y - ea.y,
        scenario.bounds,
    );
    Ok((inputs, capture))
}
