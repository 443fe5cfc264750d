use serde::Serialize;

use super::rotation::{golden_theta, rotation_density};
use crate::dynamics::MapSpec;
use crate::error::{Error, Result};
use crate::lyapunov::exact_exponents;

/// `c = 1/√(1+θ²)` for the golden `θ`: the cosine between the strong
/// unstable direction `(1, θ)` and the horizontal axis.
pub const COVERING_CONSTANT: f64 = 0.850_650_808_352_039_9;

/// Largest rotation orbit we are willing to sort while searching.
const MAX_ORBIT: f64 = 5.0e7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringCertificate {
    pub r: f64,
    /// `⌈(−2 log r + log(4c/3)) / (Λᵘ + λᵘ)⌉`.
    pub n_formula: usize,
    /// Least `n` at which the strip wrap is verified dense; `None` if the
    /// search gave up.
    pub n_observed: Option<usize>,
    /// Covering radius of the rotation orbit at `n_observed`.
    pub density_gap: f64,
    /// The density it had to beat, `c·e^{λᵘ n}·r`.
    pub threshold: f64,
    /// Rotation orbit length `⌊e^{Λᵘ n} r⌋` at `n_observed`.
    pub wraps: usize,
}

impl CoveringCertificate {
    pub fn validates(&self) -> bool {
        self.n_observed.is_some_and(|n| n <= self.n_formula)
    }
}

/// `‖vᵘ‖ + ‖Vᵘ‖` for the eigenvectors `(1, −(1+√5)/2)` and `(1, (√5−1)/2)`
/// of the expanding example: `L(r) ⊂ B(0, m·r)`.
pub fn fiber_norm_factor() -> f64 {
    let s5 = 5f64.sqrt();
    (1.0 + ((1.0 + s5) / 2.0).powi(2)).sqrt() + (1.0 + ((s5 - 1.0) / 2.0).powi(2)).sqrt()
}

/// Covering time of the strip `L(r)` under the expanding map
/// `[[6,3],[3,3]]`.
///
/// `Aⁿ L(r)` contains the points `(0, kθ)` for `0 ≤ k < ⌊e^{Λᵘn} r⌋`, each
/// carrying a vertical segment of half-height `e^{λᵘn} r`; once that orbit is
/// `c·e^{λᵘn} r`-dense in the circle the strip covers the torus.
pub fn covering_time(r: f64) -> Result<CoveringCertificate> {
    if !(r > 0.0 && r < 0.05) {
        return Err(Error::param(format!("covering radius r must lie in (0, 0.05), got {r}")));
    }
    let spec = exact_exponents(&MapSpec::expanding_example());
    let big = spec.lambda_u_max().expect("expanding");
    let small = spec.lambda_u_min().expect("expanding");
    let c = COVERING_CONSTANT;
    let n_formula = ((-2.0 * r.ln() + (4.0 * c / 3.0).ln()) / (big + small)).ceil() as usize;

    let theta = golden_theta();
    let mut cert = CoveringCertificate {
        r,
        n_formula,
        n_observed: None,
        density_gap: f64::NAN,
        threshold: f64::NAN,
        wraps: 0,
    };
    for n in 1.. {
        let wraps = ((big * n as f64).exp() * r).floor();
        if wraps > MAX_ORBIT {
            break;
        }
        if wraps < 1.0 {
            continue;
        }
        let threshold = c * (small * n as f64).exp() * r;
        let gap = rotation_density(theta, wraps as usize)?;
        if gap < threshold {
            cert.n_observed = Some(n);
            cert.density_gap = gap;
            cert.threshold = threshold;
            cert.wraps = wraps as usize;
            break;
        }
    }
    Ok(cert)
}
