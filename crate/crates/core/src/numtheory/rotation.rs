use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Maximum number of convergents: beyond this the double-precision input no
/// longer determines the expansion of the intended irrational.
pub const MAX_CONVERGENTS: usize = 40;

/// A partial quotient this large means the remainder has underflowed: the
/// input is numerically rational at this depth.
const REMAINDER_UNDERFLOW_QUOTIENT: u64 = 1_000_000_000;

/// `p/q` with the index of the convergent and its partial quotient `a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub p: i64,
    pub q: i64,
    pub index: usize,
    pub quotient: u64,
}

/// The golden rotation number `(√5 − 1)/2`.
pub fn golden_theta() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// First `count` continued-fraction convergents of `theta ∈ (0, 1)`.
///
/// The expansion is computed exactly on the binary rational that `theta`
/// holds, so every emitted `p/q` really is a convergent of the input and
/// satisfies `|θ − p/q| < 1/q²`.
pub fn convergents(theta: f64, count: usize) -> Result<Vec<Convergent>> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::param(format!("theta must lie in (0, 1), got {theta}")));
    }
    if count == 0 || count > MAX_CONVERGENTS {
        return Err(Error::param(format!(
            "count must be in 1..={MAX_CONVERGENTS}, got {count}"
        )));
    }
    let (mantissa, exponent, _) = theta.integer_decode();
    debug_assert!(exponent < 0);
    let mut num = BigInt::from(mantissa);
    let mut den = BigInt::from(1) << (-exponent) as usize;

    // (p2, p1) = (p_{i-2}, p_{i-1}), seeded with p_{-2} = 0, p_{-1} = 1.
    let (mut p2, mut p1) = (0i64, 1i64);
    let (mut q2, mut q1) = (1i64, 0i64);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if den.is_zero() {
            return Err(Error::param(format!(
                "theta = {theta} is rational: expansion terminates after {} terms",
                out.len()
            )));
        }
        let (a, rem) = num.div_rem(&den);
        // a_0 = 0 for theta in (0, 1); later quotients flag underflow.
        let a = a
            .to_u64()
            .filter(|&a| a < REMAINDER_UNDERFLOW_QUOTIENT)
            .ok_or_else(|| {
                Error::param(format!(
                    "theta = {theta} is numerically rational (remainder underflow at term {})",
                    out.len()
                ))
            })?;
        let ai = a as i64;
        let p = ai
            .checked_mul(p1)
            .and_then(|v| v.checked_add(p2))
            .ok_or_else(|| Error::Overflow("convergent numerator".into()))?;
        let q = ai
            .checked_mul(q1)
            .and_then(|v| v.checked_add(q2))
            .ok_or_else(|| Error::Overflow("convergent denominator".into()))?;
        (p2, p1) = (p1, p);
        (q2, q1) = (q1, q);
        out.push(Convergent {
            p,
            q,
            index: out.len(),
            quotient: a,
        });
        num = den;
        den = rem;
    }
    Ok(out)
}

/// Sorted positions `{kθ mod 1 : 0 ≤ k < k_max}` and the circular gaps
/// between consecutive positions (the last gap wraps through 0).
pub fn rotation_gaps(theta: f64, k_max: usize) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(Error::param("k_max must be at least 1"));
    }
    let mut pts: Vec<f64> = (0..k_max)
        .map(|k| (k as f64 * theta).rem_euclid(1.0))
        .map(|v| if v >= 1.0 { 0.0 } else { v })
        .collect();
    pts.sort_by(f64::total_cmp);
    let mut gaps: Vec<f64> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(1.0 - pts[k_max - 1] + pts[0]);
    Ok(gaps)
}

/// Covering radius (half the largest gap) of the first `k_max` points of the
/// rotation orbit of 0.
pub fn rotation_density(theta: f64, k_max: usize) -> Result<f64> {
    let gaps = rotation_gaps(theta, k_max)?;
    Ok(gaps.iter().copied().fold(0.0, f64::max) / 2.0)
}

/// Distinct gap lengths, merging values closer than `tol`.
pub fn distinct_gaps(gaps: &[f64], tol: f64) -> Vec<f64> {
    let mut g = gaps.to_vec();
    g.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for v in g {
        if out.last().map_or(true, |&last| v - last > tol) {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_convergents_are_fibonacci_ratios() {
        let c = convergents(golden_theta(), 5).unwrap();
        let pq: Vec<(i64, i64)> = c.iter().map(|c| (c.p, c.q)).collect();
        assert_eq!(pq, vec![(0, 1), (1, 1), (1, 2), (2, 3), (3, 5)]);
    }

    #[test]
    fn rational_rejected() {
        assert!(convergents(0.5, 5).is_err());
        assert!(convergents(0.1, 10).is_err());
        assert!(convergents(0.0, 3).is_err());
        assert!(convergents(1.0, 3).is_err());
    }

    #[test]
    fn sqrt2_expansion() {
        // 1/√2 = [0; 1, 2, 2, 2, …]
        let c = convergents(std::f64::consts::FRAC_1_SQRT_2, 8).unwrap();
        let a: Vec<u64> = c.iter().map(|c| c.quotient).collect();
        assert_eq!(a, vec![0, 1, 2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn single_point_density() {
        assert_eq!(rotation_density(golden_theta(), 1).unwrap(), 0.5);
    }

    #[test]
    fn gaps_sum_to_one() {
        let g = rotation_gaps(golden_theta(), 100).unwrap();
        assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
