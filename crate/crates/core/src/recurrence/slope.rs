//! Radius sweeps of `τ(B(x, r)) / (−log r)`.

use rayon::prelude::*;
use serde::Serialize;

use super::{default_k_max, Ball, Method, TauMethod};
use crate::dynamics::{MapSpec, TorusPoint};
use crate::error::{Error, Result};
use crate::seeds::derive_seed;
use crate::stats::linear_fit;

/// An ambiguous exact result is recomputed at `r·RETRY_FACTOR`.
pub const RETRY_FACTOR: f64 = 1.0 + 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopePoint {
    pub r: f64,
    pub tau: Option<usize>,
    pub ratio: Option<f64>,
    pub method: Method,
    pub censored: bool,
    /// The exact test stayed ambiguous after the retry.
    pub ambiguous: bool,
    /// The radius was perturbed by [`RETRY_FACTOR`].
    pub retried: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeSummary {
    /// Min of `τ/(−log r)` over the smaller-radius half of the grid.
    pub liminf_est: Option<f64>,
    /// Max over the same window.
    pub limsup_est: Option<f64>,
    /// Least-squares slope of `τ` against `−log r`.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r2: Option<f64>,
    pub censored: usize,
    pub partial: bool,
    /// `x` is a fixed point (a measure-zero exception for the asymptotics).
    pub fixed_point_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeSeries {
    pub points: Vec<SlopePoint>,
    pub summary: SlopeSummary,
}

/// `τ` on the geometric grid `r_j = r_max·(r_min/r_max)^{j/(grid−1)}`.
///
/// `k_max = None` uses [`default_k_max`] per radius. Censored radii are
/// excluded from the summary statistics.
#[allow(clippy::too_many_arguments)]
pub fn slope_series(
    map: &MapSpec,
    x: &TorusPoint,
    r_min: f64,
    r_max: f64,
    grid: usize,
    method: TauMethod,
    k_max: Option<usize>,
    seed: u64,
) -> Result<SlopeSeries> {
    map.check_dim(x)?;
    if !(r_min > 0.0 && r_min < r_max && r_max < 0.25) {
        return Err(Error::param(format!(
            "need 0 < r_min < r_max < 1/4, got r_min = {r_min}, r_max = {r_max}"
        )));
    }
    if grid < 4 {
        return Err(Error::param(format!("grid must be at least 4, got {grid}")));
    }
    let radii: Vec<f64> = (0..grid)
        .map(|j| r_max * (r_min / r_max).powf(j as f64 / (grid - 1) as f64))
        .collect();
    let points = radii
        .par_iter()
        .enumerate()
        .map(|(j, &r)| -> Result<SlopePoint> {
            let horizon = match k_max {
                Some(k) => k,
                None => default_k_max(map, r)?,
            };
            let seed = derive_seed(seed, j as u64);
            let mut res = method.tau(map, &Ball::new(*x, r)?, horizon, seed)?;
            let mut retried = false;
            if res.is_ambiguous() {
                retried = true;
                res = method.tau(map, &Ball::new(*x, r * RETRY_FACTOR)?, horizon, seed)?;
            }
            Ok(SlopePoint {
                r,
                tau: res.tau,
                ratio: res.tau.map(|t| t as f64 / -r.ln()),
                method: res.method,
                censored: res.tau.is_none(),
                ambiguous: res.is_ambiguous(),
                retried,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let fixed = map.step(x).distance(x) < 1e-12;
    let summary = summarize(&points, fixed);
    Ok(SlopeSeries { points, summary })
}

fn summarize(points: &[SlopePoint], fixed: bool) -> SlopeSummary {
    let grid = points.len();
    // Radii decrease along the grid, so the small-radius half is the tail.
    let window: Vec<f64> = points[grid / 2..].iter().filter_map(|p| p.ratio).collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter_map(|p| p.tau.map(|t| (-p.r.ln(), t as f64)))
        .unzip();
    let fit = linear_fit(&xs, &ys);
    let censored = points.iter().filter(|p| p.censored).count();
    let all_one = points.iter().all(|p| p.tau == Some(1));
    SlopeSummary {
        liminf_est: window.iter().copied().reduce(f64::min),
        limsup_est: window.iter().copied().reduce(f64::max),
        slope: fit.map(|f| f.slope),
        intercept: fit.map(|f| f.intercept),
        r2: fit.map(|f| f.r2),
        censored,
        partial: censored > 0,
        fixed_point_warning: fixed || all_one,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_series() {
        let x = TorusPoint::new(&[0.0, 0.0]).unwrap();
        let s = slope_series(&MapSpec::cat_map(), &x, 1e-4, 1e-2, 6, TauMethod::Exact, None, 0).unwrap();
        assert!(s.points.iter().all(|p| p.tau == Some(1)));
        assert!(s.summary.slope.unwrap().abs() < 1e-12);
        assert!(s.summary.fixed_point_warning);
    }

    #[test]
    fn grid_and_radius_validation() {
        let x = TorusPoint::new(&[0.1, 0.2]).unwrap();
        let m = MapSpec::cat_map();
        assert!(slope_series(&m, &x, 1e-4, 1e-2, 3, TauMethod::Exact, None, 0).is_err());
        assert!(slope_series(&m, &x, 1e-2, 1e-4, 6, TauMethod::Exact, None, 0).is_err());
        assert!(slope_series(&m, &x, 1e-4, 0.3, 6, TauMethod::Exact, None, 0).is_err());
    }

    #[test]
    fn censoring_is_flagged() {
        let x = TorusPoint::new(&[0.3371, 0.5213]).unwrap();
        let s = slope_series(&MapSpec::cat_map(), &x, 1e-5, 1e-3, 5, TauMethod::Exact, Some(2), 0).unwrap();
        assert!(s.summary.partial);
        assert!(s.points.iter().any(|p| p.censored));
    }
}
