//! Recovering small rationals from floating-point values.

use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest denominator bound accepted by [`rational_reconstruct`].
pub const MAX_DENOM_BOUND: u64 = 1 << 20;

/// The unique `a/b` with `b <= denom_bound` and `|x - a/b| <= err`.
///
/// Every denominator up to the bound is tried, so ambiguity is detected
/// exactly rather than assumed away.
pub fn rational_reconstruct(x: f64, err: f64, denom_bound: u64) -> Result<Ratio<i64>> {
    if !x.is_finite() || !(err >= 0.0) {
        return Err(Error::InvalidInput("non-finite value or error".into()));
    }
    if denom_bound == 0 || denom_bound > MAX_DENOM_BOUND {
        return Err(Error::InvalidInput("denominator bound out of range".into()));
    }
    let mut found: Vec<(i64, i64)> = Vec::new();
    for b in 1..=denom_bound as i64 {
        let a = libm::round(x * b as f64);
        if libm::fabs(x - a / b as f64) > err {
            continue;
        }
        let a = a as i64;
        if a.gcd(&b) != 1 {
            continue;
        }
        if !found.contains(&(a, b)) {
            found.push((a, b));
        }
        for a2 in [a - 1, a + 1] {
            if libm::fabs(x - a2 as f64 / b as f64) <= err && a2.gcd(&b) == 1 {
                found.push((a2, b));
            }
        }
    }
    match found.len() {
        0 => Err(Error::NoCandidate),
        1 => Ok(Ratio::new(found[0].0, found[0].1)),
        _ => Err(Error::Ambiguous),
    }
}

/// Reconstruction with the denominator bound doubled until a unique
/// candidate appears, the tolerance shrinking to stay below `1/(2B^2)`.
pub fn rational_reconstruct_adaptive(x: f64, err: f64, denom_bound: u64, max_bound: u64) -> Result<Ratio<i64>> {
    let mut b = denom_bound.max(1);
    loop {
        let e = err.min(0.25 / (b as f64 * b as f64));
        match rational_reconstruct(x, e, b) {
            Ok(r) => return Ok(r),
            Err(Error::NoCandidate) if b < max_bound => b = (b * 2).min(max_bound),
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_one_third() {
        assert_eq!(rational_reconstruct(0.3333333333, 1e-9, 10).unwrap(), Ratio::new(1, 3));
    }

    #[test]
    fn no_candidate_for_generic_float() {
        assert_eq!(rational_reconstruct(0.1234567, 1e-9, 10), Err(Error::NoCandidate));
    }

    #[test]
    fn loose_tolerance_is_ambiguous() {
        assert_eq!(rational_reconstruct(0.3, 0.05, 10), Err(Error::Ambiguous));
    }

    #[test]
    fn negative_and_integral_values() {
        assert_eq!(rational_reconstruct(-1.3, 1e-9, 256).unwrap(), Ratio::new(-13, 10));
        assert_eq!(rational_reconstruct(2.0, 1e-9, 256).unwrap(), Ratio::new(2, 1));
    }
}
