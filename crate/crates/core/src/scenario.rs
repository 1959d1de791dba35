//! Game instances and the value types shared by every other module.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A location in the plane. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Position after translating in `+y` at `speed` for `time`.
    pub fn advanced(&self, speed: f64, time: f64) -> Point2 {
        Point2::new(self.x, self.y + speed * time)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The admissible evader speed interval `[u_min, u_max]`, with
/// `0 < u_min < u_max < 1` (the pursuer has unit speed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedBounds {
    pub u_min: f64,
    pub u_max: f64,
}

impl SpeedBounds {
    /// Checked constructor.
    pub fn new(u_min: f64, u_max: f64) -> Result<Self> {
        let b = SpeedBounds { u_min, u_max };
        match b.violations().first() {
            None => Ok(b),
            Some(v) => Err(Error::invalid(format!("speed bounds ({u_min}, {u_max}): {v}"))),
        }
    }

    /// Builds bounds without checking them; see [`validate_scenario`].
    pub const fn new_unchecked(u_min: f64, u_max: f64) -> Self {
        SpeedBounds { u_min, u_max }
    }

    /// `V = (u_min + u_max) / (2 + u_min - u_max)`, the threshold slope of
    /// every greedy switching rule.
    pub fn v_const(&self) -> f64 {
        (self.u_min + self.u_max) / self.denominator()
    }

    /// `U = 2 / (2 + u_min - u_max)`.
    pub fn u_const(&self) -> f64 {
        2.0 / self.denominator()
    }

    pub fn spread(&self) -> f64 {
        self.u_max - self.u_min
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.u_min && v <= self.u_max
    }

    pub fn extremes(&self) -> [f64; 2] {
        [self.u_min, self.u_max]
    }

    fn denominator(&self) -> f64 {
        2.0 + self.u_min - self.u_max
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(self.u_min.is_finite() && self.u_max.is_finite()) {
            out.push(Violation::NonFiniteBounds);
            return out;
        }
        if self.u_min <= 0.0 {
            out.push(Violation::MinSpeedNotPositive);
        }
        if self.u_min >= self.u_max {
            out.push(Violation::BoundsNotOrdered);
        }
        if self.u_max >= 1.0 {
            out.push(Violation::MaxSpeedNotBelowOne);
        }
        if out.is_empty() {
            let v = self.v_const();
            if !(self.u_min < v && v < self.u_max) {
                out.push(Violation::VOutsideBounds);
            }
            let u = self.u_const();
            if !(1.0 < u && u < 2.0) {
                out.push(Violation::UOutsideRange);
            }
        }
        out
    }
}

/// An axis-aligned `l × h` region anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub l: f64,
    pub h: f64,
}

impl Rectangle {
    pub fn new(l: f64, h: f64) -> Result<Self> {
        if !(l > 0.0 && h > 0.0 && l.is_finite() && h.is_finite()) {
            return Err(Error::invalid(format!("rectangle {l} x {h} must have l > 0, h > 0")));
        }
        Ok(Rectangle { l, h })
    }

    pub fn area(&self) -> f64 {
        self.l * self.h
    }

    pub fn contains(&self, p: &Point2) -> bool {
        (0.0..=self.l).contains(&p.x) && (0.0..=self.h).contains(&p.y)
    }
}

impl Default for Rectangle {
    fn default() -> Self {
        Rectangle { l: 1.0, h: 1.0 }
    }
}

/// A complete game instance. The order of `evaders` is the capture order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioFile", into = "ScenarioFile")]
pub struct Scenario {
    pub pursuer: Point2,
    pub evaders: Vec<Point2>,
    pub bounds: SpeedBounds,
}

impl Scenario {
    pub fn new(pursuer: Point2, evaders: Vec<Point2>, bounds: SpeedBounds) -> Self {
        Scenario {
            pursuer,
            evaders,
            bounds,
        }
    }

    pub fn len(&self) -> usize {
        self.evaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.evaders.is_empty()
    }

    /// Errors with every violated invariant.
    pub fn validate(&self) -> Result<()> {
        let v = validate_scenario(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(v))
        }
    }

    /// Same game with the capture order re-sorted by initial `x`
    /// (stable, so equal abscissae keep their relative order).
    pub fn sorted_by_x(&self) -> Scenario {
        let mut evaders = self.evaders.clone();
        evaders.sort_by(|a, b| a.x.total_cmp(&b.x));
        Scenario {
            evaders,
            ..self.clone()
        }
    }
}

/// On-disk scenario layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub pursuer: [f64; 2],
    pub evaders: Vec<[f64; 2]>,
    pub u_min: f64,
    pub u_max: f64,
}

impl TryFrom<ScenarioFile> for Scenario {
    type Error = String;

    fn try_from(f: ScenarioFile) -> std::result::Result<Self, String> {
        Ok(Scenario {
            pursuer: f.pursuer.into(),
            evaders: f.evaders.into_iter().map(Point2::from).collect(),
            bounds: SpeedBounds::new_unchecked(f.u_min, f.u_max),
        })
    }
}

impl From<Scenario> for ScenarioFile {
    fn from(s: Scenario) -> Self {
        ScenarioFile {
            pursuer: s.pursuer.into(),
            evaders: s.evaders.into_iter().map(Into::into).collect(),
            u_min: s.bounds.u_min,
            u_max: s.bounds.u_max,
        }
    }
}

/// Which rule produced an evader's speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpeedLabel {
    Greedy,
    Cooperative,
}

impl fmt::Display for SpeedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpeedLabel::Greedy => f.write_str("greedy"),
            SpeedLabel::Cooperative => f.write_str("cooperative"),
        }
    }
}

/// One speed per evader, in capture order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedAssignment {
    pub speeds: Vec<f64>,
    pub labels: Vec<SpeedLabel>,
}

impl SpeedAssignment {
    pub fn new(speeds: Vec<f64>, labels: Vec<SpeedLabel>) -> Result<Self> {
        if speeds.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} speeds but {} labels",
                speeds.len(),
                labels.len()
            )));
        }
        Ok(SpeedAssignment { speeds, labels })
    }

    /// Every evader labelled the same.
    pub fn uniform_label(speeds: Vec<f64>, label: SpeedLabel) -> Self {
        let labels = vec![label; speeds.len()];
        SpeedAssignment { speeds, labels }
    }

    pub fn len(&self) -> usize {
        self.speeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.speeds.is_empty()
    }

    /// Checks length and range against `scenario`.
    pub fn check_for(&self, scenario: &Scenario) -> Result<()> {
        if self.speeds.len() != scenario.len() || self.labels.len() != scenario.len() {
            return Err(Error::invalid(format!(
                "assignment has {} speeds for {} evaders",
                self.speeds.len(),
                scenario.len()
            )));
        }
        let b = scenario.bounds;
        if let Some((i, v)) = self.speeds.iter().enumerate().find(|(_, v)| !b.contains(**v)) {
            return Err(Error::invalid(format!(
                "speed {v} of evader {} outside [{}, {}]",
                i + 1,
                b.u_min,
                b.u_max
            )));
        }
        Ok(())
    }
}

/// Which closed-form case produced a leg: the evader was strictly above
/// the pursuer when their abscissae matched, or at/below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Above,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "LegRecord", from = "LegRecord")]
pub struct InterceptRecord {
    pub leg_time: f64,
    pub cumulative_time: f64,
    pub intercept_point: Point2,
    pub branch: Branch,
}

#[derive(Serialize, Deserialize)]
struct LegRecord {
    t: f64,
    cum: f64,
    x: f64,
    y: f64,
    branch: Branch,
}

impl From<InterceptRecord> for LegRecord {
    fn from(r: InterceptRecord) -> Self {
        LegRecord {
            t: r.leg_time,
            cum: r.cumulative_time,
            x: r.intercept_point.x,
            y: r.intercept_point.y,
            branch: r.branch,
        }
    }
}

impl From<LegRecord> for InterceptRecord {
    fn from(r: LegRecord) -> Self {
        InterceptRecord {
            leg_time: r.t,
            cumulative_time: r.cum,
            intercept_point: Point2::new(r.x, r.y),
            branch: r.branch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PursuitTrace {
    pub legs: Vec<InterceptRecord>,
    #[serde(rename = "total")]
    pub total_time: f64,
}

/// A broken scenario invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NoEvaders,
    NonFinitePursuer,
    NonFiniteEvader(usize),
    NonFiniteBounds,
    MinSpeedNotPositive,
    BoundsNotOrdered,
    MaxSpeedNotBelowOne,
    VOutsideBounds,
    UOutsideRange,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoEvaders => f.write_str("evader list non-empty"),
            Violation::NonFinitePursuer => f.write_str("pursuer coordinates finite"),
            Violation::NonFiniteEvader(i) => write!(f, "evader {} coordinates finite", i + 1),
            Violation::NonFiniteBounds => f.write_str("speed bounds finite"),
            Violation::MinSpeedNotPositive => f.write_str("0 < u_min"),
            Violation::BoundsNotOrdered => f.write_str("u_min < u_max"),
            Violation::MaxSpeedNotBelowOne => f.write_str("u_max < 1"),
            Violation::VOutsideBounds => f.write_str("u_min < V < u_max"),
            Violation::UOutsideRange => f.write_str("1 < U < 2"),
        }
    }
}

/// Lists every violated invariant; empty means the scenario is valid.
pub fn validate_scenario(scenario: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    if scenario.evaders.is_empty() {
        out.push(Violation::NoEvaders);
    }
    if !scenario.pursuer.is_finite() {
        out.push(Violation::NonFinitePursuer);
    }
    out.extend(
        scenario
            .evaders
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_finite())
            .map(|(i, _)| Violation::NonFiniteEvader(i)),
    );
    out.extend(scenario.bounds.violations());
    out
}

/// Where a generated pursuer starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PursuerPlacement {
    /// Uniform over the rectangle.
    #[default]
    InRect,
    /// Uniform `x` on the top edge `y = h`.
    AboveRect,
}

/// Draws `n` evaders i.i.d. uniform in `rect` and a pursuer per `placement`.
/// The same seed always yields the same scenario.
pub fn generate_random_scenario(
    n: usize,
    rect: Rectangle,
    placement: PursuerPlacement,
    bounds: SpeedBounds,
    seed: u64,
) -> Result<Scenario> {
    if n == 0 {
        return Err(Error::invalid("evader count must be at least 1"));
    }
    let rect = Rectangle::new(rect.l, rect.h)?;
    let bounds = SpeedBounds::new(bounds.u_min, bounds.u_max)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pursuer = match placement {
        PursuerPlacement::InRect => Point2::new(rng.gen::<f64>() * rect.l, rng.gen::<f64>() * rect.h),
        PursuerPlacement::AboveRect => Point2::new(rng.gen::<f64>() * rect.l, rect.h),
    };
    let evaders = (0..n)
        .map(|_| Point2::new(rng.gen::<f64>() * rect.l, rng.gen::<f64>() * rect.h))
        .collect();
    Ok(Scenario::new(pursuer, evaders, bounds))
}
