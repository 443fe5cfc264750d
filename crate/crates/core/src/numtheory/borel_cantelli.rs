use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{random_point, MapKind, MapSpec};
use crate::error::{Error, Result};
use crate::recurrence::{tau_ball_sample, Ball};
use crate::seeds::derive_seed;

/// Candidates per ball when certifying `τ ≤ n`.
const SAMPLES_PER_BALL: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BorelCantelliRow {
    pub n: usize,
    pub radius: f64,
    /// Fraction of trial centers with a certified `τ(B(x, aⁿ)) ≤ n`.
    pub empirical_freq: f64,
    /// `(1+2/c)²·(det A/(det A−1))·(a² det A)ⁿ`.
    pub envelope: f64,
    /// `aⁿ ≥ 1/4`: every ball is too large to be a proper ball; reported as
    /// frequency 1 without sampling.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BorelCantelliReport {
    pub a: f64,
    /// `c = 1 − ‖A⁻¹‖` with the Euclidean operator norm.
    pub c: f64,
    pub det: i64,
    pub trials: usize,
    pub rows: Vec<BorelCantelliRow>,
}

/// Monte-Carlo frequency of `{x : τ(B(x, aⁿ)) ≤ n}` for `n = 1..=n_max`
/// against the summable envelope from periodic-point counting.
///
/// `τ ≤ n` is certified by [`tau_ball_sample`] with horizon `n`, so the
/// frequencies can only undercount.
pub fn borel_cantelli_lower(
    map: &MapSpec,
    a: f64,
    n_max: usize,
    trials: usize,
    seed: u64,
) -> Result<BorelCantelliReport> {
    if map.kind() != MapKind::ToralEndo2d {
        return Err(Error::Unsupported(format!(
            "Borel–Cantelli bound is for toral_endo_2d maps, got {}",
            map.id()
        )));
    }
    let m = map.matrix().expect("linear");
    let det = m.det().abs();
    if det < 2 {
        return Err(Error::InvalidMap("need |det A| ≥ 2".into()));
    }
    let a_max = (det as f64).powf(-0.5);
    if !(a > 0.0 && a < a_max) {
        return Err(Error::param(format!(
            "a must lie in (0, (det A)^(-1/2)) = (0, {a_max}), got {a}"
        )));
    }
    if n_max == 0 || trials == 0 {
        return Err(Error::param("n_max and trials must be positive"));
    }
    // ‖A⁻¹‖ = 1/σ_min(A) = σ_max(A)/|det A|.
    let c = 1.0 - m.operator_norm() / det as f64;
    if c <= 0.0 {
        return Err(Error::InvalidMap(format!("1 − ‖A⁻¹‖ = {c} is not positive")));
    }
    let d = det as f64;
    let prefactor = (1.0 + 2.0 / c).powi(2) * d / (d - 1.0);
    let rows = (1..=n_max)
        .map(|n| -> Result<BorelCantelliRow> {
            let radius = a.powi(n as i32);
            let envelope = prefactor * (a * a * d).powi(n as i32);
            if radius >= 0.25 {
                return Ok(BorelCantelliRow {
                    n,
                    radius,
                    empirical_freq: 1.0,
                    envelope,
                    trivial: true,
                });
            }
            let hits = (0..trials)
                .into_par_iter()
                .map(|t| -> Result<bool> {
                    let s = derive_seed(seed, ((n as u64) << 32) | t as u64);
                    let mut rng = ChaCha8Rng::seed_from_u64(s);
                    let x = random_point(2, &mut rng);
                    let res = tau_ball_sample(map, &Ball::new(x, radius)?, n, SAMPLES_PER_BALL, s)?;
                    Ok(res.tau.is_some())
                })
                .collect::<Result<Vec<bool>>>()?;
            let count = hits.iter().filter(|&&h| h).count();
            Ok(BorelCantelliRow {
                n,
                radius,
                empirical_freq: count as f64 / trials as f64,
                envelope,
                trivial: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BorelCantelliReport {
        a,
        c,
        det: m.det(),
        trials,
        rows,
    })
}
