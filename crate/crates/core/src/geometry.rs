//! Sensor layouts on a line, pairwise distance vectors, and their exact
//! reduction to a primitive integer vector with a common rational scale.
//!
//! Positions are in half-wavelength units (physical distance divided by
//! lambda/2). Layouts are normalised on construction: sorted ascending and
//! translated so the first sensor sits at 0, since everything downstream
//! depends only on pairwise distances.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{approx_from_f64, format_rational, parse_rational, rational_to_f64};

/// Ordered sensor positions on a line, in half-wavelength units.
///
/// Invariants: at least two sensors, strictly increasing positions, first
/// position 0. `exact` records whether the positions came in as exact
/// rationals or through a float-to-rational approximation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensorLayout {
    positions: Vec<BigRational>,
    exact: bool,
}

impl SensorLayout {
    /// Build a layout from exact rational positions. The list is sorted and
    /// translated so the first position is 0.
    pub fn new(positions: Vec<BigRational>) -> Result<Self> {
        Self::with_exactness(positions, true)
    }

    /// Build a layout from rational literals (`"3.6"`, `"18/5"`, ...).
    pub fn from_strs<S: AsRef<str>>(positions: &[S]) -> Result<Self> {
        let parsed = positions
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parsed)
    }

    /// Build a layout from raw floats. Each position is replaced by its best
    /// rational approximation with denominator at most `max_denominator`, and
    /// the layout is marked inexact.
    pub fn from_f64s(positions: &[f64], max_denominator: u64) -> Result<Self> {
        let approximated = positions
            .iter()
            .map(|&p| approx_from_f64(p, max_denominator))
            .collect::<Result<Vec<_>>>()?;
        Self::with_exactness(approximated, false)
    }

    fn with_exactness(mut positions: Vec<BigRational>, exact: bool) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::TooFewSensors(positions.len()));
        }
        positions.sort();
        for w in positions.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePosition(format_rational(&w[0])));
            }
        }
        let origin = positions[0].clone();
        if !origin.is_zero() {
            for p in &mut positions {
                *p -= &origin;
            }
        }
        Ok(Self { positions, exact })
    }

    pub fn positions(&self) -> &[BigRational] {
        &self.positions
    }

    pub fn positions_f64(&self) -> Vec<f64> {
        self.positions.iter().map(rational_to_f64).collect()
    }

    pub fn sensor_count(&self) -> usize {
        self.positions.len()
    }

    /// Distance from the first to the last sensor.
    pub fn aperture(&self) -> &BigRational {
        self.positions.last().expect("layout has sensors")
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// The same geometry scaled by a positive rational factor.
    pub fn scaled(&self, factor: &BigRational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be positive, got {}",
                format_rational(factor)
            )));
        }
        Ok(Self {
            positions: self.positions.iter().map(|p| p * factor).collect(),
            exact: self.exact,
        })
    }
}

/// Pairwise sensor distances: index pairs `(u, v)` with `u < v` and the
/// positive rational distance for each pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairDistances {
    pairs: Vec<(usize, usize)>,
    distances: Vec<BigRational>,
    exact: bool,
}

impl PairDistances {
    /// 0-based index pairs, lexicographically ordered for the full set.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn distances(&self) -> &[BigRational] {
        &self.distances
    }

    pub fn distances_f64(&self) -> Vec<f64> {
        self.distances.iter().map(rational_to_f64).collect()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn max_distance_f64(&self) -> f64 {
        self.distances
            .iter()
            .max()
            .map(rational_to_f64)
            .unwrap_or(0.0)
    }
}

/// All unordered sensor pairs of a layout in lexicographic order
/// (0,1), (0,2), ..., (1,2), ... with their distances.
pub fn pair_distances(layout: &SensorLayout) -> PairDistances {
    let n = layout.sensor_count();
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    let mut distances = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            pairs.push((u, v));
            distances.push(&layout.positions()[v] - &layout.positions()[u]);
        }
    }
    PairDistances {
        pairs,
        distances,
        exact: layout.is_exact(),
    }
}

/// Distances for an explicit subset of sensor pairs (0-based, `u < v`).
pub fn pair_distances_subset(
    layout: &SensorLayout,
    pairs: &[(usize, usize)],
) -> Result<PairDistances> {
    if pairs.is_empty() {
        return Err(Error::InvalidPair("pair list is empty".to_string()));
    }
    let n = layout.sensor_count();
    let mut seen = std::collections::HashSet::new();
    let mut distances = Vec::with_capacity(pairs.len());
    for &(u, v) in pairs {
        if u >= v {
            return Err(Error::InvalidPair(format!("({u}, {v}) must have u < v")));
        }
        if v >= n {
            return Err(Error::InvalidPair(format!(
                "({u}, {v}) is out of range for {n} sensors"
            )));
        }
        if !seen.insert((u, v)) {
            return Err(Error::InvalidPair(format!("({u}, {v}) listed twice")));
        }
        distances.push(&layout.positions()[v] - &layout.positions()[u]);
    }
    Ok(PairDistances {
        pairs: pairs.to_vec(),
        distances,
        exact: layout.is_exact(),
    })
}

/// A distance vector reduced to primitive integer form: positive integers
/// with gcd 1 and a positive rational scale such that
/// `distance[i] = scale * primitive[i]` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalReduction {
    /// Primitive integer distance vector (gcd 1), one entry per pair.
    pub primitive: Vec<BigUint>,
    /// Common rational scale; the reciprocal of the integer-making multiplier.
    pub scale: BigRational,
    /// True when the inputs were exact rationals.
    pub exact: bool,
    /// Denominator bound that was in force when `exact` is false.
    pub approx_denominator_limit: Option<u64>,
}

impl RationalReduction {
    /// The multiplier that turns every distance into an integer (1/scale).
    pub fn multiplier(&self) -> BigRational {
        self.scale.clone().recip()
    }
}

/// Reduce pairwise distances to primitive integer form.
///
/// Exact rational inputs always reduce. Inputs that came through a float
/// approximation are rejected as incommensurable when expressing all of them
/// on a common rational scale would need a denominator beyond
/// `approx_denominator_limit`; the caller turns that into an identifiability
/// verdict rather than a failure.
pub fn reduce_to_primitive(
    d: &PairDistances,
    approx_denominator_limit: u64,
) -> Result<RationalReduction> {
    debug_assert!(d.distances().iter().all(|x| x.is_positive()));
    let mut common_denominator = BigInt::one();
    for dist in d.distances() {
        common_denominator = common_denominator.lcm(dist.denom());
    }
    if !d.is_exact() && common_denominator > BigInt::from(approx_denominator_limit) {
        return Err(Error::IncommensurableDistances {
            limit: approx_denominator_limit,
        });
    }
    let scaled: Vec<BigInt> = d
        .distances()
        .iter()
        .map(|dist| dist.numer() * (&common_denominator / dist.denom()))
        .collect();
    let mut g = BigInt::zero();
    for n in &scaled {
        g = g.gcd(n);
    }
    let primitive = scaled
        .iter()
        .map(|n| (n / &g).to_biguint().expect("positive by construction"))
        .collect();
    Ok(RationalReduction {
        primitive,
        scale: BigRational::new(g, common_denominator),
        exact: d.is_exact(),
        approx_denominator_limit: (!d.is_exact()).then_some(approx_denominator_limit),
    })
}
