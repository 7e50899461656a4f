//! The identifiability verdict: whether a layout admits two distinct
//! directions with identical wrapped phase-difference vectors, with explicit
//! witnesses when it does, and a lattice search for identifiable layouts.
//!
//! Two directions collide exactly when `s * d_i = 2 * q_i` holds for every
//! pair, where `s = sin(theta1) - sin(theta2)` and the `q_i` are positive
//! integers bounded by the per-pair wrap capacity. Writing the distances as
//! `d = scale * primitive` with a primitive integer vector, such a `q` exists
//! iff `q = k * primitive` for a positive integer `k`, which needs
//! `s = 2k / scale < 2`. The whole verdict therefore reads off the scale:
//!
//! * `scale > 1`: unidentifiable, minimal witness `q = primitive`;
//! * `scale = 1`: ambiguity only at the unreachable `s = 2` endpoint;
//! * `scale < 1`: identifiable (this covers every layout with a pair at or
//!   below half wavelength);
//! * no bounded common scale: identifiable by incommensurability.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{
    pair_distances, reduce_to_primitive, PairDistances, RationalReduction, SensorLayout,
};
/// Largest number of lattice cells `search_identifiable_layouts` accepts.
pub const SEARCH_CELL_LIMIT: u64 = 10_000;

/// Per-pair upper bound on the wrap-cycle difference between two directions.
///
/// Directions live in the open interval (-pi/2, pi/2), so
/// `sin(theta1) - sin(theta2) < 2` strictly: the bound is `floor(d_i)` for
/// fractional distances but `d_i - 1` when `d_i` is an exact integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMaxVector {
    bounds: Vec<BigUint>,
}

impl QMaxVector {
    pub fn bounds(&self) -> &[BigUint] {
        &self.bounds
    }
}

pub fn q_max_vector(d: &PairDistances) -> QMaxVector {
    let bounds = d
        .distances()
        .iter()
        .map(|dist| {
            let q = if dist.is_integer() {
                dist.numer() - BigInt::one()
            } else {
                dist.floor().to_integer()
            };
            q.to_biguint().unwrap_or_default()
        })
        .collect();
    QMaxVector { bounds }
}

/// Identifiability verdict for a layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No two directions share a wrapped phase-difference vector.
    Identifiable,
    /// Distinct directions with identical wrapped vectors exist.
    Unidentifiable,
    /// Commensurate with scale exactly 1: the only colliding offset is the
    /// unreachable endpoint `sin(theta1) - sin(theta2) = 2`.
    BoundaryIdentifiable,
    /// No common rational scale within the denominator bound exists, so no
    /// finite integer relation can produce a collision.
    IdentifiableByIncommensurability,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Identifiable => "identifiable",
            Verdict::Unidentifiable => "unidentifiable",
            Verdict::BoundaryIdentifiable => "boundary_identifiable",
            Verdict::IdentifiableByIncommensurability => "identifiable_by_incommensurability",
        }
    }

    /// True for every verdict except `Unidentifiable`.
    pub fn is_identifiable(self) -> bool {
        !matches!(self, Verdict::Unidentifiable)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict plus everything needed to audit it: the reduction, the per-pair
/// cycle bounds, and explicit ambiguity witnesses when they exist.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentifiabilityReport {
    pub verdict: Verdict,
    pub distances: PairDistances,
    pub q_max: QMaxVector,
    /// Absent only for `IdentifiableByIncommensurability`.
    pub reduction: Option<RationalReduction>,
    /// Minimal colliding cycle vector (the primitive vector itself); present
    /// iff the verdict is `Unidentifiable`.
    pub witness_q: Option<Vec<BigUint>>,
    /// All values of `sin(theta1) - sin(theta2)` in (0, 2) at which wrapped
    /// vectors coincide, ascending; empty unless `Unidentifiable`.
    pub ambiguous_sine_offsets: Vec<BigRational>,
}

/// Run the quick identifiability check on a full layout.
pub fn check_identifiability(
    layout: &SensorLayout,
    approx_denominator_limit: u64,
) -> IdentifiabilityReport {
    check_distances(&pair_distances(layout), approx_denominator_limit)
}

/// Run the quick identifiability check on an explicit pair-distance set.
pub fn check_distances(
    d: &PairDistances,
    approx_denominator_limit: u64,
) -> IdentifiabilityReport {
    let q_max = q_max_vector(d);
    let reduction = match reduce_to_primitive(d, approx_denominator_limit) {
        Ok(r) => r,
        Err(_) => {
            return IdentifiabilityReport {
                verdict: Verdict::IdentifiableByIncommensurability,
                distances: d.clone(),
                q_max,
                reduction: None,
                witness_q: None,
                ambiguous_sine_offsets: Vec::new(),
            }
        }
    };
    let one = BigRational::one();
    let (verdict, witness_q, offsets) = if reduction.scale > one {
        let offsets = ambiguous_offsets(&reduction.scale);
        (
            Verdict::Unidentifiable,
            Some(reduction.primitive.clone()),
            offsets,
        )
    } else if reduction.scale == one {
        (Verdict::BoundaryIdentifiable, None, Vec::new())
    } else {
        (Verdict::Identifiable, None, Vec::new())
    };
    IdentifiabilityReport {
        verdict,
        distances: d.clone(),
        q_max,
        reduction: Some(reduction),
        witness_q,
        ambiguous_sine_offsets: offsets,
    }
}

/// All offsets `2k/scale` in (0, 2) for positive integers `k`, ascending.
fn ambiguous_offsets(scale: &BigRational) -> Vec<BigRational> {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut offsets = Vec::new();
    let mut k = BigInt::one();
    loop {
        let offset = &two * BigRational::from_integer(k.clone()) / scale;
        if offset >= two {
            break;
        }
        offsets.push(offset);
        k += BigInt::one();
    }
    offsets
}

/// Construct up to `count` direction pairs `(theta1, theta2)` whose wrapped
/// phase-difference vectors coincide, one per ambiguous sine offset in
/// ascending order. Pairs are symmetric about broadside:
/// `sin(theta1) = s/2`, `sin(theta2) = -s/2`.
pub fn ambiguous_direction_pairs(
    report: &IdentifiabilityReport,
    count: usize,
) -> Result<Vec<(f64, f64)>> {
    if report.verdict != Verdict::Unidentifiable {
        return Err(Error::NotAmbiguous(report.verdict.to_string()));
    }
    if count == 0 {
        return Err(Error::InvalidParameter(
            "count must be at least 1".to_string(),
        ));
    }
    Ok(report
        .ambiguous_sine_offsets
        .iter()
        .take(count)
        .map(|s| {
            let half = crate::rational::rational_to_f64(s) / 2.0;
            let theta = half.asin();
            (theta, -theta)
        })
        .collect())
}

/// Enumerate layouts with `n_sensors` positions on the lattice
/// `{0, step, 2*step, ...}` up to `max_aperture`, keep those whose verdict is
/// not `Unidentifiable`, and return up to `max_results` of them sorted by
/// descending aperture with a lexicographic tie-break on positions.
pub fn search_identifiable_layouts(
    n_sensors: usize,
    max_aperture: &BigRational,
    step: &BigRational,
    max_results: usize,
) -> Result<Vec<(SensorLayout, BigRational)>> {
    if n_sensors < 2 {
        return Err(Error::TooFewSensors(n_sensors));
    }
    if !step.is_positive() || !max_aperture.is_positive() {
        return Err(Error::InvalidParameter(
            "step and max_aperture must be positive".to_string(),
        ));
    }
    if max_results == 0 {
        return Err(Error::InvalidParameter(
            "max_results must be at least 1".to_string(),
        ));
    }
    let cells = (max_aperture / step)
        .floor()
        .to_integer()
        .to_u64()
        .unwrap_or(u64::MAX);
    if cells > SEARCH_CELL_LIMIT {
        return Err(Error::SearchSpaceTooLarge {
            cells,
            limit: SEARCH_CELL_LIMIT,
        });
    }

    let lattice = |i: u64| step * BigRational::from_integer(BigInt::from(i));
    let mut results = Vec::new();
    let inner = n_sensors - 2;
    for aperture_idx in (n_sensors as u64 - 1..=cells).rev() {
        for middle in (1..aperture_idx).combinations(inner) {
            let mut positions = Vec::with_capacity(n_sensors);
            positions.push(BigRational::zero());
            positions.extend(middle.iter().map(|&i| lattice(i)));
            positions.push(lattice(aperture_idx));
            let layout = SensorLayout::new(positions).expect("lattice positions are valid");
            let report = check_identifiability(&layout, crate::rational::DEFAULT_DENOMINATOR_LIMIT);
            if report.verdict.is_identifiable() {
                results.push((layout, lattice(aperture_idx)));
                if results.len() == max_results {
                    return Ok(results);
                }
            }
        }
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pair_distances_subset;
    use crate::phasewrap::{circular_distance, wrapped_vector};
    use proptest::prelude::*;

    const LIMIT: u64 = 1_000_000;

    fn layout(strs: &[&str]) -> SensorLayout {
        SensorLayout::from_strs(strs).unwrap()
    }

    fn big(values: &[u64]) -> Vec<BigUint> {
        values.iter().map(|&v| BigUint::from(v)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn q_max_uses_the_strict_open_domain_bound() {
        let d = pair_distances(&layout(&["0", "1.2", "6"]));
        // The integer entry d = 6 gets 6 - 1 = 5, not floor(6) = 6: the open
        // direction domain cannot reach sin-offset 2.
        assert_eq!(q_max_vector(&d).bounds(), &big(&[1, 5, 4])[..]);

        let d = pair_distances(&layout(&["0", "3.6", "8.1"]));
        assert_eq!(q_max_vector(&d).bounds(), &big(&[3, 8, 4])[..]);

        let d = pair_distances(&layout(&["0", "0.5"]));
        assert_eq!(q_max_vector(&d).bounds(), &big(&[0])[..]);
    }

    #[test]
    fn unidentifiable_three_sensor_case() {
        let report = check_identifiability(&layout(&["0", "1.2", "6"]), LIMIT);
        assert_eq!(report.verdict, Verdict::Unidentifiable);
        assert_eq!(report.witness_q, Some(big(&[1, 5, 4])));
        assert_eq!(report.ambiguous_sine_offsets, vec![rat(5, 3)]);
        let r = report.reduction.unwrap();
        assert_eq!(r.primitive, big(&[1, 5, 4]));
        assert_eq!(r.scale, rat(6, 5));
    }

    #[test]
    fn identifiable_three_sensor_case() {
        let report = check_identifiability(&layout(&["0", "3.6", "8.1"]), LIMIT);
        assert_eq!(report.verdict, Verdict::Identifiable);
        assert_eq!(report.witness_q, None);
        assert!(report.ambiguous_sine_offsets.is_empty());
        assert_eq!(report.reduction.unwrap().scale, rat(9, 10));
    }

    #[test]
    fn sub_half_wavelength_layout_is_identifiable() {
        let report = check_identifiability(&layout(&["0", "0.5", "0.9"]), LIMIT);
        assert_eq!(report.verdict, Verdict::Identifiable);
    }

    #[test]
    fn unit_scale_layout_is_boundary_identifiable() {
        let report = check_identifiability(&layout(&["0", "1"]), LIMIT);
        assert_eq!(report.verdict, Verdict::BoundaryIdentifiable);
        assert!(report.verdict.is_identifiable());
        assert_eq!(report.witness_q, None);
    }

    #[test]
    fn witness_satisfies_the_cycle_bounds() {
        let report = check_identifiability(&layout(&["0", "1.2", "6"]), LIMIT);
        let witness = report.witness_q.as_ref().unwrap();
        for (w, bound) in witness.iter().zip(report.q_max.bounds()) {
            assert!(w <= bound, "witness exceeds cycle bound");
        }
    }

    #[test]
    fn incommensurable_floats_get_their_own_verdict() {
        let l = SensorLayout::from_f64s(&[0.0, 1.0, 1.0 + std::f64::consts::SQRT_2], 999_983)
            .unwrap();
        let report = check_distances(&pair_distances(&l), 100);
        assert_eq!(report.verdict, Verdict::IdentifiableByIncommensurability);
        assert!(report.reduction.is_none());
        assert!(report.witness_q.is_none());
    }

    #[test]
    fn direction_pairs_for_the_minimal_offset() {
        let report = check_identifiability(&layout(&["0", "1.2", "6"]), LIMIT);
        let pairs = ambiguous_direction_pairs(&report, 1).unwrap();
        assert_eq!(pairs.len(), 1);
        let (t1, t2) = pairs[0];
        assert!((t1 - (5.0f64 / 6.0).asin()).abs() < 1e-15);
        assert!((t2 + (5.0f64 / 6.0).asin()).abs() < 1e-15);
        let a = wrapped_vector(&report.distances, t1).unwrap();
        let b = wrapped_vector(&report.distances, t2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(circular_distance(*x, *y) <= 1e-9);
        }
    }

    #[test]
    fn direction_pairs_reject_identifiable_reports() {
        let report = check_identifiability(&layout(&["0", "3.6", "8.1"]), LIMIT);
        assert_eq!(
            ambiguous_direction_pairs(&report, 1),
            Err(Error::NotAmbiguous("identifiable".to_string()))
        );
    }

    #[test]
    fn wide_single_pair_has_three_offsets() {
        let report = check_identifiability(&layout(&["0", "4"]), LIMIT);
        assert_eq!(report.verdict, Verdict::Unidentifiable);
        assert_eq!(
            report.ambiguous_sine_offsets,
            vec![rat(1, 2), rat(1, 1), rat(3, 2)]
        );
        let pairs = ambiguous_direction_pairs(&report, 3).unwrap();
        assert_eq!(pairs.len(), 3);
        for (t1, t2) in pairs {
            let a = wrapped_vector(&report.distances, t1).unwrap();
            let b = wrapped_vector(&report.distances, t2).unwrap();
            assert!(circular_distance(a[0], b[0]) <= 1e-9);
        }
    }

    #[test]
    fn search_orders_by_descending_aperture() {
        let results =
            search_identifiable_layouts(3, &rat(81, 10), &rat(9, 10), usize::MAX).unwrap();
        assert!(!results.is_empty());
        // Apertures never increase along the result list.
        for w in results.windows(2) {
            assert!(w[0].1 >= w[1].1);
        }
        // The widest identifiable layouts sit at aperture 8.1; 0+3.6+8.1 is
        // among them, while the first lexicographically is [0, 0.9, 8.1].
        let top: Vec<_> = results.iter().filter(|(_, a)| *a == rat(81, 10)).collect();
        assert_eq!(top[0].0, layout(&["0", "0.9", "8.1"]));
        assert!(top.iter().any(|(l, _)| *l == layout(&["0", "3.6", "8.1"])));
    }

    #[test]
    fn search_two_sensor_lattice() {
        let results = search_identifiable_layouts(2, &rat(1, 1), &rat(1, 2), 10).unwrap();
        let layouts: Vec<_> = results.iter().map(|(l, _)| l.clone()).collect();
        assert_eq!(layouts, vec![layout(&["0", "1"]), layout(&["0", "0.5"])]);
    }

    #[test]
    fn search_excludes_unidentifiable_layouts() {
        let results = search_identifiable_layouts(3, &rat(6, 1), &rat(6, 5), usize::MAX).unwrap();
        assert!(results.iter().all(|(l, _)| *l != layout(&["0", "1.2", "6"])));
    }

    #[test]
    fn search_guards_the_lattice_size() {
        let err = search_identifiable_layouts(2, &rat(100_000, 1), &rat(1, 1), 1).unwrap_err();
        assert!(matches!(err, Error::SearchSpaceTooLarge { .. }));
    }

    // Random commensurate 3-sensor layout on the lattice {unit/den}.
    prop_compose! {
        fn arb_commensurate()(den in 1i64..=10, a in 1u32..=30, b in 1u32..=30) -> (SensorLayout, i64, u32, u32) {
            let p1 = BigRational::new(BigInt::from(a), BigInt::from(den));
            let p2 = BigRational::new(BigInt::from(a + b), BigInt::from(den));
            (SensorLayout::new(vec![BigRational::zero(), p1, p2]).unwrap(), den, a, b)
        }
    }

    proptest! {
        /// The scale rule must agree with the elementwise test
        /// `primitive[i] <= q_max[i]` over all pairs.
        #[test]
        fn scale_rule_matches_elementwise_rule((l, _den, _a, _b) in arb_commensurate()) {
            let d = pair_distances(&l);
            let report = check_distances(&d, LIMIT);
            let r = report.reduction.as_ref().unwrap();
            let elementwise = r
                .primitive
                .iter()
                .zip(report.q_max.bounds())
                .all(|(p, q)| p <= q);
            prop_assert_eq!(report.verdict == Verdict::Unidentifiable, elementwise);
        }

        /// Every advertised sine offset really collides, checked through the
        /// wrapped vectors themselves.
        #[test]
        fn witnesses_are_sound((l, _den, _a, _b) in arb_commensurate()) {
            let report = check_identifiability(&l, LIMIT);
            if report.verdict == Verdict::Unidentifiable {
                let pairs = ambiguous_direction_pairs(&report, usize::MAX).unwrap();
                prop_assert_eq!(pairs.len(), report.ambiguous_sine_offsets.len());
                for (t1, t2) in pairs {
                    let a = wrapped_vector(&report.distances, t1).unwrap();
                    let b = wrapped_vector(&report.distances, t2).unwrap();
                    for (x, y) in a.iter().zip(&b) {
                        prop_assert!(circular_distance(*x, *y) <= 1e-9);
                    }
                }
            }
        }

        /// Scaling a layout by an integer m multiplies the scale by m and
        /// leaves the primitive vector alone, so the verdict follows the new
        /// scale alone.
        #[test]
        fn verdict_depends_only_on_the_scale((l, _den, _a, _b) in arb_commensurate(), m in 2i64..=5) {
            let factor = BigRational::from_integer(BigInt::from(m));
            let scaled = l.scaled(&factor).unwrap();
            let base = check_identifiability(&l, LIMIT);
            let wide = check_identifiability(&scaled, LIMIT);
            let base_scale = base.reduction.as_ref().unwrap().scale.clone();
            let wide_scale = wide.reduction.as_ref().unwrap().scale.clone();
            prop_assert_eq!(wide_scale, base_scale * factor);
            let expected = if wide.reduction.as_ref().unwrap().scale > BigRational::one() {
                Verdict::Unidentifiable
            } else if wide.reduction.as_ref().unwrap().scale == BigRational::one() {
                Verdict::BoundaryIdentifiable
            } else {
                Verdict::Identifiable
            };
            prop_assert_eq!(wide.verdict, expected);
        }

        /// For 3 sensors, dropping any single pair leaves the primitive
        /// vector's gcd at 1 (the distances are a, b, a+b), so the verdict is
        /// unchanged; in particular an identifiable layout never turns
        /// unidentifiable by ignoring one pair.
        #[test]
        fn dropping_one_pair_of_three_preserves_the_verdict((l, _den, _a, _b) in arb_commensurate()) {
            let full = check_identifiability(&l, LIMIT);
            let all_pairs = [(0usize, 1usize), (0, 2), (1, 2)];
            for drop in 0..3 {
                let kept: Vec<_> = all_pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != drop)
                    .map(|(_, p)| *p)
                    .collect();
                let d = pair_distances_subset(&l, &kept).unwrap();
                let sub = check_distances(&d, LIMIT);
                prop_assert_eq!(sub.verdict, full.verdict);
            }
        }
    }
}
