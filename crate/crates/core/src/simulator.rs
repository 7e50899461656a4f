//! Single-snapshot array observations, principal phase extraction, and
//! Monte Carlo accuracy sweeps.
//!
//! The observation model is `x = a(theta0) * s(t) + w` with a complex
//! sinusoidal source `s(t) = A * exp(-j*2*pi*f*t)`, the steering vector
//! `a_k = exp(-j*pi*r_k*sin(theta0))`, and circularly symmetric complex
//! Gaussian noise. SNR is defined per sensor as `A^2 / sigma^2` where
//! `sigma^2` is the total complex noise variance (real and imaginary parts
//! carry `sigma^2 / 2` each).
//!
//! Randomness comes from the seedable, portable ChaCha8 generator; all
//! sweeps derive one seed per (SNR point, trial) with a splitmix64-based
//! rule, so serial and parallel execution orders would give identical
//! aggregates.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::estimator::{match_doa, WpdpGrid};
use crate::geometry::{pair_distances, SensorLayout};
use crate::phasewrap::{wrap, WrappedPhase};

/// A single far-field complex sinusoidal source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceConfig {
    pub amplitude: f64,
    pub frequency: f64,
    /// Source direction in radians, inside (-pi/2, pi/2).
    pub theta0: f64,
    /// Observation instant; the source phase it induces is common to all
    /// sensors and cancels in every pairwise product.
    pub time: f64,
}

impl SourceConfig {
    pub fn new(amplitude: f64, frequency: f64, theta0: f64) -> Result<Self> {
        if amplitude <= 0.0 || !amplitude.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "amplitude must be positive and finite, got {amplitude}"
            )));
        }
        if frequency <= 0.0 || !frequency.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "frequency must be positive and finite, got {frequency}"
            )));
        }
        if !theta0.is_finite() || theta0.abs() >= FRAC_PI_2 {
            return Err(Error::DomainError(theta0));
        }
        Ok(Self {
            amplitude,
            frequency,
            theta0,
            time: 0.0,
        })
    }

    pub fn at_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    fn signal(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, -TAU * self.frequency * self.time)
    }
}

/// Complex observations of all sensors at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub observations: Vec<Complex64>,
    /// Standard deviation of the total complex noise per sensor.
    pub noise_sigma: f64,
}

/// Steering vector at direction `theta`: element k is
/// `exp(-j*pi*r_k*sin(theta))`, unit magnitude, with element 0 equal to 1.
pub fn steering_vector(layout: &SensorLayout, theta: f64) -> Result<Vec<Complex64>> {
    if !theta.is_finite() || theta.abs() >= FRAC_PI_2 {
        return Err(Error::DomainError(theta));
    }
    let s = theta.sin();
    Ok(layout
        .positions_f64()
        .iter()
        .map(|&r| Complex64::from_polar(1.0, -PI * r * s))
        .collect())
}

/// Generate one snapshot at the given per-sensor SNR (dB). `f64::INFINITY`
/// produces a noise-free snapshot. Deterministic for a fixed seed.
pub fn generate_snapshot(
    layout: &SensorLayout,
    source: &SourceConfig,
    snr_db: f64,
    seed: u64,
) -> Result<Snapshot> {
    if snr_db.is_nan() {
        return Err(Error::InvalidParameter("snr_db must not be NaN".to_string()));
    }
    let steering = steering_vector(layout, source.theta0)?;
    let signal = source.signal();
    let sigma = if snr_db == f64::INFINITY {
        0.0
    } else {
        source.amplitude * 10f64.powf(-snr_db / 20.0)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let component_sigma = sigma / std::f64::consts::SQRT_2;
    let observations = steering
        .iter()
        .map(|a| {
            let mut x = a * signal;
            if sigma > 0.0 {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                x += Complex64::new(re, im) * component_sigma;
            }
            x
        })
        .collect();
    Ok(Snapshot {
        observations,
        noise_sigma: sigma,
    })
}

/// Principal phase differences observed across the given sensor pairs:
/// element i is `angle(x_u * conj(x_v))` reduced to [-pi, pi).
pub fn principal_phases(
    snapshot: &Snapshot,
    pairs: &[(usize, usize)],
) -> Result<Vec<WrappedPhase>> {
    let n = snapshot.observations.len();
    let mut phases = Vec::with_capacity(pairs.len());
    for &(u, v) in pairs {
        if u >= n || v >= n {
            return Err(Error::InvalidPair(format!(
                "({u}, {v}) is out of range for {n} observations"
            )));
        }
        let product = snapshot.observations[u] * snapshot.observations[v].conj();
        if product.norm() < 1e-300 {
            return Err(Error::ZeroMagnitude { u, v });
        }
        phases.push(wrap(product.im.atan2(product.re)));
    }
    Ok(phases)
}

/// One point of an SNR sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub rmse_rad: f64,
    pub trials_failed: usize,
}

/// Seed for one (SNR point, trial) cell: `seed ^ splitmix64(snr << 32 ^ trial)`.
pub fn trial_seed(seed: u64, snr_index: usize, trial_index: usize) -> u64 {
    seed ^ splitmix64(((snr_index as u64) << 32) ^ trial_index as u64)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Monte Carlo RMSE of the snapshot -> principal-phase -> grid-match
/// pipeline, per SNR point. Deterministic for a fixed seed; trials whose
/// pipeline fails are counted, not averaged.
pub fn monte_carlo_rmse(
    layout: &SensorLayout,
    theta0: f64,
    snr_db_list: &[f64],
    trials: usize,
    grid_size: usize,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "trials must be at least 1".to_string(),
        ));
    }
    let source = SourceConfig::new(1.0, 1.0, theta0)?;
    let distances = pair_distances(layout);
    let grid = WpdpGrid::build(&distances, grid_size)?;
    let mut sweep = Vec::with_capacity(snr_db_list.len());
    for (snr_index, &snr_db) in snr_db_list.iter().enumerate() {
        let mut sum_sq = 0.0;
        let mut failed = 0usize;
        for trial in 0..trials {
            let snapshot = generate_snapshot(
                layout,
                &source,
                snr_db,
                trial_seed(seed, snr_index, trial),
            )?;
            let estimate = principal_phases(&snapshot, distances.pairs())
                .and_then(|psi| match_doa(&psi, &grid));
            match estimate {
                Ok(est) => {
                    let err = est.theta_hat - theta0;
                    sum_sq += err * err;
                }
                Err(_) => failed += 1,
            }
        }
        let ok = trials - failed;
        sweep.push(SweepPoint {
            snr_db,
            rmse_rad: if ok > 0 {
                (sum_sq / ok as f64).sqrt()
            } else {
                f64::NAN
            },
            trials_failed: failed,
        });
    }
    Ok(sweep)
}
