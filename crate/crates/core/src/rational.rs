//! Exact rational helpers: parsing, canonical formatting, and conversion of
//! binary floats to bounded-denominator rationals.
//!
//! Identifiability verdicts are discontinuous in the pairwise distances, so
//! exactness has to be explicit. Decimal literals and `p/q` strings parse to
//! exact rationals; raw `f64` values go through a best rational approximation
//! with a caller-supplied denominator bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default denominator bound for float-to-rational conversion.
pub const DEFAULT_DENOMINATOR_LIMIT: u64 = 1_000_000;

/// Parse a rational literal: either `p/q` (`"18/5"`) or a plain decimal
/// (`"8"`, `"3.6"`, `"-0.25"`). Both forms parse exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRational(text.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRational(text.to_string()))?;
        if d.is_zero() {
            return Err(Error::InvalidRational(text.to_string()));
        }
        Ok(BigRational::new(n, d))
    } else {
        parse_decimal(t).ok_or_else(|| Error::InvalidRational(text.to_string()))
    }
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (negative, rest) = match text.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut digits = String::with_capacity(int_part.len() + frac_part.len());
    digits.push_str(int_part);
    digits.push_str(frac_part);
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    if negative {
        numer = -numer;
    }
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(numer, denom))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise, always in
/// lowest terms. `parse_rational(format_rational(x)) == x` holds exactly.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Nearest `f64` to the rational (rounding is unavoidable here).
pub fn rational_to_f64(value: &BigRational) -> f64 {
    value
        .to_f64()
        .unwrap_or_else(|| value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN))
}

/// Best rational approximation of a finite float with denominator bounded by
/// `max_denominator`, found by walking the continued-fraction convergents and
/// the final semiconvergent. The comparison against the exact dyadic value of
/// the float is done in rational arithmetic, so the result truly minimises
/// the approximation error among all denominators within the bound.
pub fn approx_from_f64(x: f64, max_denominator: u64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "cannot approximate non-finite value {x}"
        )));
    }
    if max_denominator == 0 {
        return Err(Error::InvalidParameter(
            "denominator limit must be positive".to_string(),
        ));
    }
    let exact = BigRational::from_float(x).expect("finite float has an exact rational value");
    if exact.is_negative() {
        return Ok(-approx_from_f64(-x, max_denominator)?);
    }
    let limit = BigInt::from(max_denominator);
    if exact.denom() <= &limit {
        return Ok(exact);
    }

    // Convergent recurrence h_k = a_k h_{k-1} + h_{k-2}, same for k.
    let (mut h_prev2, mut h_prev) = (BigInt::one(), exact.to_integer());
    let (mut k_prev2, mut k_prev) = (BigInt::zero(), BigInt::one());
    let mut tail = &exact - BigRational::from_integer(h_prev.clone());

    loop {
        if tail.is_zero() {
            return Ok(BigRational::new(h_prev, k_prev));
        }
        tail = tail.recip();
        let a = tail.to_integer();
        tail -= BigRational::from_integer(a.clone());
        let h = &a * &h_prev + &h_prev2;
        let k = &a * &k_prev + &k_prev2;
        if k > limit {
            // Largest admissible semiconvergent coefficient.
            let a_cut = (&limit - &k_prev2) / &k_prev;
            let convergent = BigRational::new(h_prev.clone(), k_prev.clone());
            if a_cut.is_zero() {
                return Ok(convergent);
            }
            let semi = BigRational::new(&a_cut * &h_prev + &h_prev2, &a_cut * &k_prev + &k_prev2);
            let err_semi = (&semi - &exact).abs();
            let err_conv = (&convergent - &exact).abs();
            return Ok(if err_semi < err_conv { semi } else { convergent });
        }
        h_prev2 = std::mem::replace(&mut h_prev, h);
        k_prev2 = std::mem::replace(&mut k_prev, k);
    }
}
