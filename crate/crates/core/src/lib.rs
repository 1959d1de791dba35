//! Single-pursuer, multi-evader Manhattan pursuit.
//!
//! A pursuer with unit speed captures evaders in a fixed order, first
//! matching the target's `x` coordinate and then closing along `y`. Each
//! evader moves in `+y` at a constant speed drawn from `[u_min, u_max]` and
//! the evaders jointly pick speeds to make the total capture time as long as
//! possible.
//!
//! * [`scenario`]: domain types, validation and seeded scenario generation.
//! * [`pursuit`]: closed-form intercept times along a capture chain, the
//!   Euclidean variant, and a time-stepped simulator used as an oracle.
//! * [`strategy`]: greedy and cooperative speed rules and the two-pass
//!   Seq-GreC assignment.
//! * [`search`]: exhaustive, grid and random-sampling baselines.
//! * [`bound`]: Hamiltonian-path machinery and the large-`n` upper bound on
//!   total capture time.
//! * [`harness`]: Monte Carlo experiments and file formats.

pub mod bound;
pub mod error;
pub mod harness;
pub mod pursuit;
pub mod scenario;
pub mod search;
pub mod strategy;

pub use error::{Error, Result};
pub use scenario::{
    Branch, InterceptRecord, Point2, PursuerPlacement, PursuitTrace, Rectangle, Scenario, SpeedAssignment, SpeedBounds,
    SpeedLabel,
};

/// Absolute tolerance for geometric and threshold comparisons.
pub const EPS: f64 = 1e-9;
