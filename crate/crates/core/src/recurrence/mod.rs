//! Return times `τ(A) = min{k > 0 : fᵏ(A) ∩ A ≠ ∅}` of balls (exact and
//! sampled), cylinders and Bowen balls, plus radius sweeps of the recurrence
//! slope `τ(B(x, r)) / (−log r)`.

mod bowen;
mod exact;
pub(crate) mod fixed;
mod sample;
mod slope;
mod word;

use serde::{Deserialize, Serialize};

pub use bowen::{tau_bowen_sample, BowenBallSpec, MIN_BOWEN_MEMBERS};
pub use exact::{tau_ball_exact, AMBIGUITY_MARGIN};
pub use sample::{fiber_count, tau_ball_sample};
pub use slope::{slope_series, SlopePoint, SlopeSeries, SlopeSummary, RETRY_FACTOR};
pub use word::{itinerary, tau_word, Itinerary, Partition, Word, BOUNDARY_TOL};

use crate::dynamics::{MapSpec, TorusPoint};
use crate::error::{Error, Result};
use crate::lyapunov::exact_exponents;

/// Closed max-norm ball `B(center, radius)` on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ball {
    center: TorusPoint,
    radius: f64,
}

impl Ball {
    /// `radius` must lie in `(0, 1/4)` so the ball lifts injectively.
    pub fn new(center: TorusPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 0.25) {
            return Err(Error::param(format!(
                "ball radius must lie in (0, 1/4), got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &TorusPoint {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, p: &TorusPoint) -> bool {
        self.center.distance(p) <= self.radius
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactLattice,
    IntervalExact,
    MonteCarlo,
    WordOverlap,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ExactLattice => "exact_lattice",
            Method::IntervalExact => "interval_exact",
            Method::MonteCarlo => "monte_carlo",
            Method::WordOverlap => "word_overlap",
        }
    }
}

/// Evidence that `fᵏ(A) ∩ A ≠ ∅`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// `y ∈ A` with `z = fᵏ(y) ∈ A`.
    Pair { y: TorusPoint, z: TorusPoint },
    /// A lattice vector `n` (one block of coordinates per factor) with
    /// `n − c_k` inside the Minkowski sum `Aᵏ B₀ ⊕ B₀`; `slack` is the
    /// distance of `n − c_k` from its boundary.
    Lattice { translate: Vec<i64>, slack: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnTimeResult {
    /// `None` when no return was found up to `cutoff`.
    pub tau: Option<usize>,
    pub cutoff: usize,
    pub witness: Option<Witness>,
    pub method: Method,
    /// First `k` at which the exact test fell inside the indeterminacy band,
    /// if any. `tau` is then only certified as an upper bound.
    pub ambiguous_at: Option<usize>,
}

impl ReturnTimeResult {
    pub fn is_censored(&self) -> bool {
        self.tau.is_none()
    }

    pub fn is_ambiguous(&self) -> bool {
        self.ambiguous_at.is_some()
    }
}

/// How `τ` of a ball is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum TauMethod {
    Exact,
    Sample { samples: usize },
}

impl TauMethod {
    pub fn tau(&self, map: &MapSpec, ball: &Ball, k_max: usize, seed: u64) -> Result<ReturnTimeResult> {
        match *self {
            TauMethod::Exact => tau_ball_exact(map, ball, k_max),
            TauMethod::Sample { samples } => tau_ball_sample(map, ball, k_max, samples, seed),
        }
    }
}

/// Search horizon `⌈4·(−log r)/λᵘ⌉`, where `λᵘ` is the smallest positive
/// exponent of the map.
pub fn default_k_max(map: &MapSpec, r: f64) -> Result<usize> {
    let lu = exact_exponents(map)
        .lambda_u_min()
        .ok_or(Error::UndefinedBounds)?;
    Ok(((4.0 * -r.ln() / lu).ceil() as usize).max(1))
}

pub(crate) fn check_common(map: &MapSpec, ball: &Ball, k_max: usize) -> Result<()> {
    map.check_dim(ball.center())?;
    if k_max == 0 {
        return Err(Error::param("k_max must be at least 1"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_radius_bounds() {
        let c = TorusPoint::new(&[0.1, 0.2]).unwrap();
        assert!(Ball::new(c, 0.25).is_err());
        assert!(Ball::new(c, 0.0).is_err());
        assert!(Ball::new(c, f64::NAN).is_err());
        assert!(Ball::new(c, 0.2).is_ok());
    }

    #[test]
    fn horizon() {
        let k = default_k_max(&MapSpec::doubling(), 0.01).unwrap();
        assert_eq!(k, (4.0 * 100f64.ln() / 2f64.ln()).ceil() as usize);
    }
}
