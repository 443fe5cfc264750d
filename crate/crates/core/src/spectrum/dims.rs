use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::EmpiricalMeasure;
use crate::dynamics::{MapKind, MapSpec, TorusPoint};
use crate::error::{Error, Result};
use crate::lyapunov::ExponentSpectrum;
use crate::recurrence::{default_k_max, tau_ball_exact, Ball};
use crate::stats::{linear_fit, median, percentile, LinearFit};

/// Fewer usable radii than this make a pointwise dimension an error.
pub const MIN_USABLE_RADII: usize = 4;
/// Percentile standing in for the μ-essential supremum.
pub const ESS_SUP_PERCENTILE: f64 = 90.0;
/// Least number of sampled points for a spectrum.
pub const MIN_SPECTRUM_POINTS: usize = 20;
/// Box counts above `N / SATURATION_DIVISOR` are excluded from the fit.
pub const SATURATION_DIVISOR: usize = 16;

/// Masses and return times of `B(x, r)` over a radius grid.
///
/// Every `d_{μ,q}(x)` is read off the same profile, so dimensions at different
/// `q` are computed from identical data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointProfile {
    pub x: TorusPoint,
    pub radii: Vec<f64>,
    pub masses: Vec<f64>,
    /// `None` where the exact search was censored or stayed ambiguous.
    pub taus: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseDim {
    pub d: f64,
    pub r2: f64,
    pub usable: usize,
    pub dropped: usize,
}

impl PointProfile {
    /// Slope of `log μ(B(x,r)) + q·τ(B(x,r))` against `log r`.
    pub fn dimension(&self, q: f64) -> Result<PointwiseDim> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for ((&r, &m), &t) in self.radii.iter().zip(&self.masses).zip(&self.taus) {
            if m <= 0.0 {
                continue;
            }
            let tau_term = if q == 0.0 {
                0.0
            } else {
                match t {
                    Some(t) => q * t as f64,
                    None => continue,
                }
            };
            xs.push(r.ln());
            ys.push(m.ln() + tau_term);
        }
        if xs.len() < MIN_USABLE_RADII {
            return Err(Error::InsufficientData {
                usable: xs.len(),
                required: MIN_USABLE_RADII,
            });
        }
        let fit = linear_fit(&xs, &ys).ok_or_else(|| Error::NumericalDegeneracy("constant radius grid".into()))?;
        Ok(PointwiseDim {
            d: fit.slope,
            r2: fit.r2,
            usable: xs.len(),
            dropped: self.radii.len() - xs.len(),
        })
    }
}

/// Measures `μ(B(x, r))` and the exact `τ(B(x, r))` at every radius.
///
/// The infimum over `y ∈ B(x, r)` is replaced by the value at `y = x`.
/// `need_tau = false` skips the return times (only `q = 0` is then usable).
pub fn point_profile(
    map: &MapSpec,
    measure: &EmpiricalMeasure,
    x: &TorusPoint,
    r_grid: &[f64],
    k_max: Option<usize>,
    need_tau: bool,
) -> Result<PointProfile> {
    map.check_dim(x)?;
    if measure.dim() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            got: measure.dim(),
        });
    }
    let mut masses = Vec::with_capacity(r_grid.len());
    let mut taus = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let ball = Ball::new(*x, r)?;
        masses.push(measure.ball_mass(&ball));
        let tau = if need_tau {
            let horizon = match k_max {
                Some(k) => k,
                None => default_k_max(map, r)?,
            };
            let res = tau_ball_exact(map, &ball, horizon)?;
            if res.is_ambiguous() { None } else { res.tau }
        } else {
            None
        };
        taus.push(tau);
    }
    Ok(PointProfile {
        x: *x,
        radii: r_grid.to_vec(),
        masses,
        taus,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn pointwise_dim(
    map: &MapSpec,
    measure: &EmpiricalMeasure,
    x: &TorusPoint,
    q: f64,
    r_grid: &[f64],
    k_max: Option<usize>,
) -> Result<PointwiseDim> {
    point_profile(map, measure, x, r_grid, k_max, q != 0.0)?.dimension(q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QDiagnostics {
    pub q: f64,
    /// Points whose dimension could be computed.
    pub n_points: usize,
    pub failed: usize,
    /// Median regression R² over those points.
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumCurve {
    pub q_values: Vec<f64>,
    pub alpha_values: Vec<f64>,
    pub per_q: Vec<QDiagnostics>,
    /// Requested values of `q` with more than half of the points failing.
    pub dropped_q: Vec<f64>,
}

impl SpectrumCurve {
    /// Least-squares line through `(q, α(q))`.
    pub fn affine_fit(&self) -> Option<LinearFit> {
        linear_fit(&self.q_values, &self.alpha_values)
    }
}

/// `α(q)` as the [`ESS_SUP_PERCENTILE`]th percentile of `d_{μ,q}` over
/// `sample_points` orbit points chosen uniformly with the given seed.
pub fn spectrum_curve(
    map: &MapSpec,
    measure: &EmpiricalMeasure,
    q_list: &[f64],
    sample_points: usize,
    r_grid: &[f64],
    k_max: Option<usize>,
    seed: u64,
) -> Result<SpectrumCurve> {
    if sample_points < MIN_SPECTRUM_POINTS {
        return Err(Error::param(format!(
            "spectrum needs at least {MIN_SPECTRUM_POINTS} sample points, got {sample_points}"
        )));
    }
    if q_list.is_empty() || q_list.iter().any(|q| !q.is_finite()) {
        return Err(Error::param("q list must be nonempty and finite"));
    }
    let pts: Vec<TorusPoint> = measure.points().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: Vec<TorusPoint> = (0..sample_points).map(|_| pts[rng.gen_range(0..pts.len())]).collect();
    let need_tau = q_list.iter().any(|&q| q != 0.0);
    let profiles = chosen
        .par_iter()
        .map(|x| point_profile(map, measure, x, r_grid, k_max, need_tau))
        .collect::<Result<Vec<_>>>()?;

    let mut curve = SpectrumCurve {
        q_values: Vec::new(),
        alpha_values: Vec::new(),
        per_q: Vec::new(),
        dropped_q: Vec::new(),
    };
    for &q in q_list {
        let dims: Vec<PointwiseDim> = profiles.iter().filter_map(|p| p.dimension(q).ok()).collect();
        let failed = profiles.len() - dims.len();
        if 2 * failed > profiles.len() {
            curve.dropped_q.push(q);
            continue;
        }
        let ds: Vec<f64> = dims.iter().map(|d| d.d).collect();
        let r2s: Vec<f64> = dims.iter().map(|d| d.r2).collect();
        let alpha = percentile(&ds, ESS_SUP_PERCENTILE).expect("nonempty");
        if !alpha.is_finite() {
            return Err(Error::NumericalDegeneracy(format!("α({q}) is not finite")));
        }
        curve.q_values.push(q);
        curve.alpha_values.push(alpha);
        curve.per_q.push(QDiagnostics {
            q,
            n_points: dims.len(),
            failed,
            r2: median(&r2s).expect("nonempty"),
        });
    }
    if curve.q_values.is_empty() {
        return Err(Error::InsufficientData {
            usable: 0,
            required: 1,
        });
    }
    Ok(curve)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxDimension {
    pub dim: f64,
    pub r2: f64,
    /// Scales kept in the fit.
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    /// Scales dropped because their box count was saturated.
    pub saturated: Vec<f64>,
}

/// Slope of `log #(occupied boxes)` against `−log ε`.
///
/// Boxes are cells of the grid with `⌈1/ε⌉` cells per axis. A scale is
/// dropped when its count exceeds `N /` [`SATURATION_DIVISOR`].
pub fn box_dimension(measure: &EmpiricalMeasure, scales: &[f64]) -> Result<BoxDimension> {
    if scales.len() < 5 {
        return Err(Error::param(format!("need at least 5 scales, got {}", scales.len())));
    }
    if scales.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::param("scales must lie in (0, 1]"));
    }
    let dim = measure.dim();
    let limit = measure.len() / SATURATION_DIVISOR;
    let mut out = BoxDimension {
        dim: 0.0,
        r2: 1.0,
        scales: Vec::new(),
        counts: Vec::new(),
        saturated: Vec::new(),
    };
    for &eps in scales {
        let cells = (1.0 / eps).ceil();
        if cells.powi(dim as i32) >= 2f64.powi(127) {
            return Err(Error::param(format!("scale {eps} is too fine")));
        }
        let cells = cells as u128;
        let occupied: HashSet<u128> = measure
            .points()
            .map(|p| {
                p.coords().iter().fold(0u128, |key, &c| {
                    key * cells + ((c * cells as f64).floor() as u128).min(cells - 1)
                })
            })
            .collect();
        if occupied.len() > limit {
            out.saturated.push(eps);
        } else {
            out.scales.push(eps);
            out.counts.push(occupied.len());
        }
    }
    if out.scales.len() < 2 {
        return Err(Error::InsufficientData {
            usable: out.scales.len(),
            required: 2,
        });
    }
    let xs: Vec<f64> = out.scales.iter().map(|e| -e.ln()).collect();
    let ys: Vec<f64> = out.counts.iter().map(|&c| (c as f64).ln()).collect();
    let fit = linear_fit(&xs, &ys).ok_or_else(|| Error::NumericalDegeneracy("repeated scales".into()))?;
    out.dim = fit.slope;
    out.r2 = fit.r2;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YoungsReport {
    pub entropy: f64,
    pub lambda_u: f64,
    pub lambda_s: f64,
    /// `h (1/λᵘ − 1/λˢ)`.
    pub predicted: f64,
    pub estimate: f64,
    /// `|estimate − predicted| / predicted`, or the absolute error when the
    /// prediction is 0.
    pub rel_error: f64,
}

/// Compares a dimension estimate with Young's formula for a surface map.
pub fn youngs_check(spec: &ExponentSpectrum, entropy: f64, dim_est: f64) -> Result<YoungsReport> {
    let ex = spec.exponents();
    if ex.len() != 2 {
        return Err(Error::Unsupported(format!(
            "Young's formula needs a surface map, got {} exponents",
            ex.len()
        )));
    }
    let (lambda_s, lambda_u) = match (spec.lambda_s_max(), spec.lambda_u_min()) {
        (Some(s), Some(u)) => (s, u),
        _ => {
            return Err(Error::Unsupported(
                "Young's formula needs one positive and one negative exponent".into(),
            ))
        }
    };
    if !(entropy >= 0.0 && entropy.is_finite()) {
        return Err(Error::param(format!("entropy must be finite and nonnegative, got {entropy}")));
    }
    let predicted = entropy * (1.0 / lambda_u - 1.0 / lambda_s);
    let err = (dim_est - predicted).abs();
    Ok(YoungsReport {
        entropy,
        lambda_u,
        lambda_s,
        predicted,
        estimate: dim_est,
        rel_error: if predicted > 0.0 { err / predicted } else { err },
    })
}

/// Entropy of the reference measure of a built-in linear map: the sum of
/// positive exponents.
pub fn linear_entropy(map: &MapSpec) -> f64 {
    let spec = crate::lyapunov::exact_exponents(map);
    match map.kind() {
        MapKind::Doubling1d => 2f64.ln(),
        _ => spec.exponents().iter().filter(|&&l| l > 0.0).sum(),
    }
}

/// `n` radii from `r_max` down to `r_min`, geometrically spaced.
pub fn geometric_grid(r_min: f64, r_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_min < r_max) || n < 2 {
        return Err(Error::param("need 0 < r_min < r_max and at least 2 points"));
    }
    Ok((0..n)
        .map(|j| r_max * (r_min / r_max).powf(j as f64 / (n - 1) as f64))
        .collect())
}
