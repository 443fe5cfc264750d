//! Torus arithmetic, the map zoo, orbits and the tangent cocycle.
//!
//! All maps are linear, so the derivative cocycle is constant. Orbits are
//! iterated point by point modulo 1; exact rational orbits are available for
//! cross-checks through [`RationalPoint`].

mod map;
mod matrix;
mod rational;
mod tangent;
mod torus;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use map::{MapKind, MapSpec};
pub use matrix::IntMatrix;
pub use rational::{is_canonical, is_origin, RationalPoint};
pub use tangent::TangentFrame;
pub(crate) use tangent::tangent_push;
pub use torus::{circle_distance, circle_offset, wrap, TorusPoint, MAX_DIM};

use crate::error::{Error, Result};

/// A finite forward orbit; `points[0]` is the starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    points: Vec<TorusPoint>,
}

impl Orbit {
    pub(crate) fn from_points(points: Vec<TorusPoint>) -> Self {
        debug_assert!(!points.is_empty());
        Self { points }
    }

    /// An orbit sitting at one point forever (a Dirac measure's support).
    pub fn constant(p: TorusPoint, len: usize) -> Self {
        Self {
            points: vec![p; len.max(1)],
        }
    }

    pub fn start(&self) -> &TorusPoint {
        &self.points[0]
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    /// Number of steps taken (one less than the number of points).
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.points.len() <= 1
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }
}

/// Uniform random point of `T^dim`.
pub fn random_point<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> TorusPoint {
    let c: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    TorusPoint::new(&c).expect("valid dimension")
}

/// A Lebesgue-typical orbit of length `n` started from a seeded random
/// point.
///
/// Doubling in binary floating point loses one bit per step and reaches 0
/// after about 53 iterations, so for `doubling_1d` the orbit is read off an
/// infinite random binary expansion: point `k` is the 53-bit truncation of
/// `0.b_{k+1} b_{k+2} …`. The truncation error is below `2^-53` at every
/// step.
pub fn typical_orbit(map: &MapSpec, n: usize, seed: u64) -> Result<Orbit> {
    if n == 0 {
        return Err(Error::param("orbit length n must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if map.kind() != MapKind::Doubling1d {
        let x = random_point(map.dim(), &mut rng);
        return map.orbit(&x, n);
    }
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    let mut window = rng.next_u64();
    let mut fresh = rng.next_u64();
    let mut fresh_left = 64;
    let mut points = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        points.push(TorusPoint::from_raw([(window >> 11) as f64 * SCALE, 0.0, 0.0, 0.0], 1));
        if fresh_left == 0 {
            fresh = rng.next_u64();
            fresh_left = 64;
        }
        window = (window << 1) | (fresh >> 63);
        fresh <<= 1;
        fresh_left -= 1;
    }
    Ok(Orbit::from_points(points))
}
