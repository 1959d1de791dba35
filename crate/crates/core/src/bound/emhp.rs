//! Euclidean minimum Hamiltonian paths from a fixed start point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::Point2;

/// Point counts up to this are solved exactly by [`emhp_path`].
pub const EXACT_EMHP_LIMIT: usize = 12;
/// Hard cap for [`emhp_exact`] (table size is `m · 2^m`).
pub const MAX_EXACT_POINTS: usize = 20;
/// 2-opt sweeps per point before the heuristic stops.
const TWO_OPT_PASSES_PER_POINT: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PathEnd {
    Free,
    Fixed(Point2),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianPath {
    /// Visit order as indices into the input points.
    pub order: Vec<usize>,
    pub length: f64,
    /// True when produced by the heuristic rather than the exact solver.
    pub heuristic: bool,
}

/// Length of the path `start -> points[order] (-> end)`.
pub fn path_length(start: Point2, points: &[Point2], order: &[usize], end: PathEnd) -> f64 {
    let mut len = 0.0;
    let mut at = start;
    for &i in order {
        len += at.distance(&points[i]);
        at = points[i];
    }
    if let PathEnd::Fixed(f) = end {
        len += at.distance(&f);
    }
    len
}

fn check_points(points: &[Point2]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::invalid("hamiltonian path needs at least one point"));
    }
    Ok(())
}

/// Shortest path from `start` through every point once: exact for
/// `m <= 12`, nearest neighbour plus 2-opt above that.
pub fn emhp_path(start: Point2, points: &[Point2], end: PathEnd) -> Result<HamiltonianPath> {
    check_points(points)?;
    if points.len() <= EXACT_EMHP_LIMIT {
        emhp_exact(start, points, end)
    } else {
        emhp_heuristic(start, points, end)
    }
}

/// Held-Karp dynamic program over visited subsets.
pub fn emhp_exact(start: Point2, points: &[Point2], end: PathEnd) -> Result<HamiltonianPath> {
    check_points(points)?;
    let m = points.len();
    if m > MAX_EXACT_POINTS {
        return Err(Error::LimitExceeded {
            what: "points for exact hamiltonian path",
            requested: m as u128,
            limit: MAX_EXACT_POINTS as u128,
        });
    }
    let full = (1usize << m) - 1;
    let idx = |mask: usize, j: usize| mask * m + j;
    let mut cost = vec![f64::INFINITY; (full + 1) * m];
    let mut parent = vec![usize::MAX; (full + 1) * m];
    let dist: Vec<f64> = (0..m * m).map(|k| points[k / m].distance(&points[k % m])).collect();

    for j in 0..m {
        cost[idx(1 << j, j)] = start.distance(&points[j]);
    }
    for mask in 1..=full {
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let here = cost[idx(mask, j)];
            if !here.is_finite() {
                continue;
            }
            for nxt in 0..m {
                if mask & (1 << nxt) != 0 {
                    continue;
                }
                let nm = mask | (1 << nxt);
                let c = here + dist[j * m + nxt];
                if c < cost[idx(nm, nxt)] {
                    cost[idx(nm, nxt)] = c;
                    parent[idx(nm, nxt)] = j;
                }
            }
        }
    }

    let closing = |j: usize| match end {
        PathEnd::Free => 0.0,
        PathEnd::Fixed(f) => points[j].distance(&f),
    };
    let (mut last, _) = (0..m)
        .map(|j| (j, cost[idx(full, j)] + closing(j)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });

    let mut order = Vec::with_capacity(m);
    let mut mask = full;
    loop {
        order.push(last);
        let p = parent[idx(mask, last)];
        mask &= !(1 << last);
        if p == usize::MAX {
            break;
        }
        last = p;
    }
    order.reverse();
    let length = path_length(start, points, &order, end);
    Ok(HamiltonianPath {
        order,
        length,
        heuristic: false,
    })
}

/// Nearest-neighbour construction refined by 2-opt segment reversals.
pub fn emhp_heuristic(start: Point2, points: &[Point2], end: PathEnd) -> Result<HamiltonianPath> {
    check_points(points)?;
    let m = points.len();

    let mut order = Vec::with_capacity(m);
    let mut used = vec![false; m];
    let mut at = start;
    for _ in 0..m {
        let next = (0..m)
            .filter(|&j| !used[j])
            .min_by(|&a, &b| at.distance(&points[a]).total_cmp(&at.distance(&points[b])))
            .expect("unvisited point remains");
        used[next] = true;
        order.push(next);
        at = points[next];
    }

    let end_point = match end {
        PathEnd::Free => None,
        PathEnd::Fixed(f) => Some(f),
    };
    let before = |order: &[usize], i: usize| if i == 0 { start } else { points[order[i - 1]] };
    let after = |order: &[usize], j: usize| {
        if j + 1 < m {
            Some(points[order[j + 1]])
        } else {
            end_point
        }
    };

    for _ in 0..TWO_OPT_PASSES_PER_POINT * m {
        let mut improved = false;
        for i in 0..m {
            for j in i + 1..m {
                let a = before(&order, i);
                let b = points[order[i]];
                let c = points[order[j]];
                let old_tail = after(&order, j).map_or(0.0, |d| c.distance(&d));
                let new_tail = after(&order, j).map_or(0.0, |d| b.distance(&d));
                let delta = a.distance(&c) + new_tail - a.distance(&b) - old_tail;
                if delta < -1e-12 {
                    order[i..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }

    let length = path_length(start, points, &order, end);
    Ok(HamiltonianPath {
        order,
        length,
        heuristic: true,
    })
}
