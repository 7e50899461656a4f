//! Wrapped phase-difference patterns over a sine-space grid, DOA estimation
//! by circular grid matching, and a brute-force pattern-collision oracle.
//!
//! The pattern lives in sine space because the per-pair phase is linear in
//! `sin(theta)`: uniform sine grids keep ambiguity offsets representable and
//! make the collision tolerance analysis clean. The oracle deliberately
//! stays a quantifier-level brute force over all grid-point pairs; it is the
//! independent check that the analytic verdict has to agree with.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::PairDistances;
use crate::phasewrap::{circular_distance, wrap, WrappedPhase};

/// Largest accepted grid size (memory guard).
pub const GRID_SIZE_LIMIT: usize = 10_000_000;

/// Largest accepted `grid_size^2 * pair_count` for the collision oracle.
pub const COLLISION_BUDGET: u128 = 1_000_000_000;

/// Cost slack (rad^2) below which grid points join the candidate set.
pub const DEFAULT_CANDIDATE_TOLERANCE: f64 = 1e-6;

/// Wrapped phase-difference pattern: a strictly increasing, uniformly spaced
/// sine grid inside (-1, 1) and one wrapped phase per grid point and pair.
#[derive(Debug, Clone)]
pub struct WpdpGrid {
    sine_grid: Vec<f64>,
    pattern: Vec<WrappedPhase>, // row-major, len = grid * pairs
    distances: PairDistances,
}

impl WpdpGrid {
    /// Default grid: `grid_size` points spanning `[-1+eps, 1-eps]` with
    /// `eps = 1/(2*grid_size)`. Points are computed as exact integer
    /// multiples of the half-step so the grid is exactly antisymmetric.
    pub fn build(distances: &PairDistances, grid_size: usize) -> Result<Self> {
        if grid_size < 2 {
            return Err(Error::GridTooSmall(grid_size));
        }
        if grid_size > GRID_SIZE_LIMIT {
            return Err(Error::GridTooLarge {
                got: grid_size,
                limit: GRID_SIZE_LIMIT,
            });
        }
        let eps = 1.0 / (2.0 * grid_size as f64);
        let half_step = (1.0 - eps) / (grid_size as f64 - 1.0);
        let top = grid_size as i64 - 1;
        let sine_grid = (0..grid_size as i64)
            .map(|g| (2 * g - top) as f64 * half_step)
            .collect();
        Self::from_sine_grid(distances, sine_grid)
    }

    /// Symmetric grid `{-half_count*step, ..., -step, 0, step, ...}` with
    /// `2*half_count + 1` points. Handy when an exact rational sine (an
    /// ambiguity offset, say) must land on the grid.
    pub fn symmetric(distances: &PairDistances, step: f64, half_count: usize) -> Result<Self> {
        if step <= 0.0 || !step.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid step must be positive and finite, got {step}"
            )));
        }
        if half_count == 0 {
            return Err(Error::GridTooSmall(1));
        }
        if half_count as f64 * step >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "grid reaches |sine| = {} >= 1",
                half_count as f64 * step
            )));
        }
        let j = half_count as i64;
        let sine_grid = (-j..=j).map(|g| g as f64 * step).collect();
        Self::from_sine_grid(distances, sine_grid)
    }

    /// Build the pattern over an explicit sine grid. The grid must have at
    /// least two points, stay strictly inside (-1, 1), increase strictly,
    /// and be uniformly spaced.
    pub fn from_sine_grid(distances: &PairDistances, sine_grid: Vec<f64>) -> Result<Self> {
        if sine_grid.len() < 2 {
            return Err(Error::GridTooSmall(sine_grid.len()));
        }
        if sine_grid.len() > GRID_SIZE_LIMIT {
            return Err(Error::GridTooLarge {
                got: sine_grid.len(),
                limit: GRID_SIZE_LIMIT,
            });
        }
        if sine_grid.iter().any(|s| !s.is_finite() || s.abs() >= 1.0) {
            return Err(Error::InvalidParameter(
                "sine grid must lie strictly inside (-1, 1)".to_string(),
            ));
        }
        let step = sine_grid[1] - sine_grid[0];
        if step <= 0.0 {
            return Err(Error::InvalidParameter(
                "sine grid must increase strictly".to_string(),
            ));
        }
        for w in sine_grid.windows(2) {
            let delta = w[1] - w[0];
            if (delta - step).abs() > 1e-9 * step.max(1e-12) {
                return Err(Error::InvalidParameter(
                    "sine grid must be uniformly spaced".to_string(),
                ));
            }
        }
        let ds = distances.distances_f64();
        let mut pattern = Vec::with_capacity(sine_grid.len() * ds.len());
        for &s in &sine_grid {
            for &d in &ds {
                pattern.push(wrap(PI * d * s));
            }
        }
        Ok(Self {
            sine_grid,
            pattern,
            distances: distances.clone(),
        })
    }

    pub fn grid_len(&self) -> usize {
        self.sine_grid.len()
    }

    pub fn pair_count(&self) -> usize {
        self.distances.pair_count()
    }

    pub fn sine_grid(&self) -> &[f64] {
        &self.sine_grid
    }

    pub fn grid_step(&self) -> f64 {
        self.sine_grid[1] - self.sine_grid[0]
    }

    pub fn distances(&self) -> &PairDistances {
        &self.distances
    }

    /// Pattern row for one grid point: one wrapped phase per pair.
    pub fn row(&self, g: usize) -> &[WrappedPhase] {
        let m = self.pair_count();
        &self.pattern[g * m..(g + 1) * m]
    }

    /// Index of the grid point closest to `sine`.
    pub fn nearest_index(&self, sine: f64) -> usize {
        let i = self.sine_grid.partition_point(|&s| s < sine);
        if i == 0 {
            return 0;
        }
        if i == self.sine_grid.len() {
            return i - 1;
        }
        if (self.sine_grid[i] - sine).abs() < (sine - self.sine_grid[i - 1]).abs() {
            i
        } else {
            i - 1
        }
    }
}

/// Build the default wrapped phase-difference pattern (see [`WpdpGrid::build`]).
pub fn build_wpdp(distances: &PairDistances, grid_size: usize) -> Result<WpdpGrid> {
    WpdpGrid::build(distances, grid_size)
}

/// A grid-matching DOA estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct DoaEstimate {
    /// `asin` of the best-matching grid sine.
    pub theta_hat: f64,
    /// Circular squared-error cost at the best match.
    pub cost: f64,
    /// All grid indices within [`DEFAULT_CANDIDATE_TOLERANCE`] of the best
    /// cost. Ambiguous layouts show up here as clusters at several sines.
    pub candidates: Vec<usize>,
}

/// Match an observed wrapped phase vector against the pattern.
///
/// The cost at grid point `g` is the sum over pairs of the squared circular
/// residual `wrap(psi_obs - pattern[g])^2`. Ties on the minimal cost break
/// toward the smallest `|sine|`, then the smaller index.
pub fn match_doa(psi_observed: &[WrappedPhase], grid: &WpdpGrid) -> Result<DoaEstimate> {
    match_doa_with_tolerance(psi_observed, grid, DEFAULT_CANDIDATE_TOLERANCE)
}

pub fn match_doa_with_tolerance(
    psi_observed: &[WrappedPhase],
    grid: &WpdpGrid,
    candidate_tolerance: f64,
) -> Result<DoaEstimate> {
    if psi_observed.len() != grid.pair_count() {
        return Err(Error::LengthMismatch {
            got: psi_observed.len(),
            expected: grid.pair_count(),
        });
    }
    let costs: Vec<f64> = (0..grid.grid_len())
        .map(|g| {
            grid.row(g)
                .iter()
                .zip(psi_observed)
                .map(|(p, o)| {
                    let r = wrap(o.radians() - p.radians()).radians();
                    r * r
                })
                .sum()
        })
        .collect();
    let mut best = 0usize;
    for (g, &c) in costs.iter().enumerate() {
        let better = c < costs[best]
            || (c == costs[best]
                && grid.sine_grid[g].abs() < grid.sine_grid[best].abs());
        if better {
            best = g;
        }
    }
    let min_cost = costs[best];
    let candidates = costs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c <= min_cost + candidate_tolerance)
        .map(|(g, _)| g)
        .collect();
    Ok(DoaEstimate {
        theta_hat: grid.sine_grid[best].asin(),
        cost: min_cost,
        candidates,
    })
}

/// Brute-force scan for colliding pattern rows: every index pair
/// `(g1, g2)` with `g1 < g2` whose rows agree elementwise within the
/// (circular) tolerance. An empty result means no grid-resolved ambiguity.
///
/// The default tolerance is half the worst-case per-step pattern movement,
/// `0.5 * pi * max(d) * grid_step`, which makes reported collisions robust
/// to grid placement without flagging mere neighbours.
pub fn collision_scan(grid: &WpdpGrid, tolerance: Option<f64>) -> Result<Vec<(usize, usize)>> {
    let g_len = grid.grid_len() as u128;
    let comparisons = g_len * g_len * grid.pair_count() as u128;
    if comparisons > COLLISION_BUDGET {
        return Err(Error::BudgetExceeded {
            comparisons,
            budget: COLLISION_BUDGET,
        });
    }
    let tol = tolerance
        .unwrap_or_else(|| 0.5 * PI * grid.distances.max_distance_f64() * grid.grid_step());
    let mut collisions = Vec::new();
    for g1 in 0..grid.grid_len() {
        let row1 = grid.row(g1);
        for g2 in (g1 + 1)..grid.grid_len() {
            let row2 = grid.row(g2);
            if row1
                .iter()
                .zip(row2)
                .all(|(a, b)| circular_distance(*a, *b) <= tol)
            {
                collisions.push((g1, g2));
            }
        }
    }
    Ok(collisions)
}

/// Collision scan over the default grid of `grid_size` points.
pub fn collision_oracle(
    distances: &PairDistances,
    grid_size: usize,
    tolerance: Option<f64>,
) -> Result<Vec<(usize, usize)>> {
    collision_scan(&WpdpGrid::build(distances, grid_size)?, tolerance)
}
