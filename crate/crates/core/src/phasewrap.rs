//! Wrapping arithmetic for phase differences: principal values in
//! [-pi, pi), integer cycle counts, and their decomposition.
//!
//! For a pair distance `d` (half-wavelength units) and a source direction
//! `theta`, the true phase difference is `pi * d * sin(theta)`. Only its
//! principal value is observable; the integer number of lost 2*pi cycles is
//! what makes wide layouts ambiguous.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::PairDistances;

/// A phase in the principal interval [-pi, pi). The +pi endpoint never
/// occurs; the boundary maps to -pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedPhase(f64);

impl WrappedPhase {
    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Reduce a finite phase to its principal value.
///
/// This is the floored modulus `mod(phi + pi, 2*pi) - pi`, evaluated
/// remainder-first so the reduction is exact even for arguments millions of
/// cycles out: `rem_euclid` computes an exact remainder, and the single
/// recentring subtraction `(m - 2*pi)` is exact at the boundary because the
/// float `TAU` is exactly twice the float `PI`.
pub fn wrap(phi: f64) -> WrappedPhase {
    assert!(phi.is_finite(), "wrap requires a finite phase, got {phi}");
    let m = phi.rem_euclid(TAU);
    WrappedPhase(if m >= PI { m - TAU } else { m })
}

/// Absolute circular distance between two principal phases, in [0, pi].
pub fn circular_distance(a: WrappedPhase, b: WrappedPhase) -> f64 {
    wrap(a.radians() - b.radians()).radians().abs()
}

fn check_direction(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta.abs() >= FRAC_PI_2 {
        return Err(Error::DomainError(theta));
    }
    Ok(())
}

/// True (unwrapped) phase difference `pi * d * sin(theta)` across a pair at
/// distance `d`.
pub fn true_phase(distance: f64, theta: f64) -> Result<f64> {
    assert!(
        distance > 0.0 && distance.is_finite(),
        "pair distance must be positive and finite, got {distance}"
    );
    check_direction(theta)?;
    Ok(PI * distance * theta.sin())
}

/// Number of whole 2*pi cycles lost when the true phase difference is
/// reduced to its principal value.
///
/// Computed as `round((phi - wrap(phi)) / (2*pi))` so that the wrap and the
/// cycle count stay mutually consistent bit-for-bit, including at half-cycle
/// boundaries where a bare `round(d*sin(theta)/2)` would be ambiguous.
pub fn cycle_count(distance: f64, theta: f64) -> Result<i64> {
    let phi = true_phase(distance, theta)?;
    let psi = wrap(phi);
    Ok(((phi - psi.radians()) / TAU).round() as i64)
}

/// A true phase difference split into principal value and cycle count, with
/// `true_phase = principal + 2*pi*cycles`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseDecomposition {
    pub true_phase: f64,
    pub cycles: i64,
    pub principal: WrappedPhase,
}

pub fn decompose(distance: f64, theta: f64) -> Result<PhaseDecomposition> {
    let phi = true_phase(distance, theta)?;
    let psi = wrap(phi);
    Ok(PhaseDecomposition {
        true_phase: phi,
        cycles: ((phi - psi.radians()) / TAU).round() as i64,
        principal: psi,
    })
}

/// Principal phase differences for every pair in `distances` at direction
/// `theta`: element i is `wrap(pi * d_i * sin(theta))`.
pub fn wrapped_vector(distances: &PairDistances, theta: f64) -> Result<Vec<WrappedPhase>> {
    check_direction(theta)?;
    let s = theta.sin();
    Ok(distances
        .distances_f64()
        .iter()
        .map(|d| wrap(PI * d * s))
        .collect())
}
