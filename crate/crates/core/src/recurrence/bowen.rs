//! Sampled return times of Bowen balls
//! `B_m^n(x, ε) = {y : d(fʲy, fʲx) ≤ ε for −m ≤ j ≤ n}`.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fixed::{displace, fixed_to_point, point_to_fixed, snap, Fixed, FixedBall, FixedMap};
use super::{tau_ball_sample, Ball, Method, ReturnTimeResult, Witness};
use crate::dynamics::{MapSpec, TorusPoint};
use crate::error::{Error, Result};

/// Rejection sampling must find at least this many members.
pub const MIN_BOWEN_MEMBERS: usize = 10;
const PROPOSALS_PER_SAMPLE: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BowenBallSpec {
    pub center: TorusPoint,
    /// Backward depth.
    pub m: usize,
    /// Forward depth.
    pub n: usize,
    pub eps: f64,
}

struct Membership {
    forward: FixedMap,
    backward: Option<FixedMap>,
    /// Balls around `fʲx`, `j = 0..=n`.
    ahead: Vec<FixedBall>,
    /// Balls around `f^{−j}x`, `j = 1..=m`.
    behind: Vec<FixedBall>,
}

impl Membership {
    fn contains(&self, y: &Fixed) -> bool {
        let mut p = *y;
        for (j, b) in self.ahead.iter().enumerate() {
            if j > 0 {
                self.forward.step(&mut p);
            }
            if !b.contains(&p) {
                return false;
            }
        }
        if let Some(inv) = &self.backward {
            let mut p = *y;
            for b in &self.behind {
                inv.step(&mut p);
                if !b.contains(&p) {
                    return false;
                }
            }
        }
        true
    }
}

/// Upper-bound certificate for `τ(B_m^n(x, ε))`.
///
/// Members are drawn by rejection from the `ε`-ball around `x` (the center is
/// always the first member), then each member is iterated until it lands
/// back in the Bowen ball. With `m = n = 0` this is [`tau_ball_sample`] with
/// radius `ε`.
pub fn tau_bowen_sample(
    map: &MapSpec,
    spec: &BowenBallSpec,
    k_max: usize,
    samples: usize,
    seed: u64,
) -> Result<ReturnTimeResult> {
    let ball = Ball::new(spec.center, spec.eps)?;
    if spec.m == 0 && spec.n == 0 {
        return tau_ball_sample(map, &ball, k_max, samples, seed);
    }
    map.check_dim(&spec.center)?;
    if k_max == 0 {
        return Err(Error::param("k_max must be at least 1"));
    }
    if samples == 0 {
        return Err(Error::param("samples must be at least 1"));
    }
    let backward = FixedMap::inverse(map);
    if spec.m > 0 && backward.is_none() {
        return Err(Error::Unsupported(format!(
            "backward depth m = {} needs an invertible map, {} is not",
            spec.m,
            map.id()
        )));
    }
    let dim = map.dim();
    let forward = FixedMap::forward(map);
    let snap_all = |mut y: Fixed| {
        for v in y.iter_mut().take(dim) {
            *v = snap(*v);
        }
        y
    };
    let center = snap_all(point_to_fixed(&spec.center));
    let ball_at = |c: &Fixed| FixedBall {
        center: *c,
        radius: FixedBall::new(&spec.center, spec.eps).radius,
        dim,
    };
    let mut ahead = Vec::with_capacity(spec.n + 1);
    let mut p = center;
    for j in 0..=spec.n {
        if j > 0 {
            forward.step(&mut p);
        }
        ahead.push(ball_at(&p));
    }
    let mut behind = Vec::with_capacity(spec.m);
    if let Some(inv) = &backward {
        let mut p = center;
        for _ in 0..spec.m {
            inv.step(&mut p);
            behind.push(ball_at(&p));
        }
    }
    let member = Membership {
        forward,
        backward,
        ahead,
        behind,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = PROPOSALS_PER_SAMPLE * samples;
    let mut members = vec![center];
    let mut proposals = 1;
    while members.len() < samples && proposals < budget {
        proposals += 1;
        let mut y = center;
        for v in y.iter_mut().take(dim) {
            *v = displace(*v, spec.eps * (2.0 * rng.gen::<f64>() - 1.0));
        }
        let y = snap_all(y);
        if member.contains(&y) {
            members.push(y);
        }
    }
    if members.len() < MIN_BOWEN_MEMBERS.min(samples) {
        return Err(Error::InsufficientSampling {
            found: members.len(),
            proposals,
            required: MIN_BOWEN_MEMBERS.min(samples),
        });
    }

    let best = AtomicUsize::new(k_max);
    let hits: Vec<Option<(usize, Fixed, Fixed)>> = members
        .par_iter()
        .map(|&y| {
            let mut z = y;
            let mut k = 0;
            while k < best.load(Ordering::Relaxed) {
                k += 1;
                member.forward.step(&mut z);
                if member.contains(&z) {
                    best.fetch_min(k, Ordering::Relaxed);
                    return Some((k, y, z));
                }
            }
            None
        })
        .collect();
    let winner = hits.into_iter().flatten().min_by_key(|h| h.0);
    Ok(ReturnTimeResult {
        tau: winner.map(|h| h.0),
        cutoff: k_max,
        witness: winner.map(|(_, y, z)| Witness::Pair {
            y: fixed_to_point(&y, dim),
            z: fixed_to_point(&z, dim),
        }),
        method: Method::MonteCarlo,
        ambiguous_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_bowen_ball_is_a_ball() {
        let c = TorusPoint::new(&[0.3, 0.7]).unwrap();
        let spec = BowenBallSpec { center: c, m: 0, n: 0, eps: 0.01 };
        let a = tau_bowen_sample(&MapSpec::cat_map(), &spec, 40, 500, 4).unwrap();
        let b = tau_ball_sample(&MapSpec::cat_map(), &Ball::new(c, 0.01).unwrap(), 40, 500, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn backward_depth_needs_inverse() {
        let c = TorusPoint::new(&[0.3, 0.7]).unwrap();
        let spec = BowenBallSpec { center: c, m: 2, n: 2, eps: 0.05 };
        assert!(matches!(
            tau_bowen_sample(&MapSpec::expanding_example(), &spec, 10, 100, 0),
            Err(Error::Unsupported(_))
        ));
    }
}
