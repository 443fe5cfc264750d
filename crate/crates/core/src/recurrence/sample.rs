//! Sampled return times: an upper-bound certificate for `τ`.
//!
//! Candidates are the center, a shifted Kronecker (R_d) point set in the
//! ball, and, for planar factors with a dominant real eigenvalue, segments of
//! unstable fibers `y₀ + t·v`. A fiber's image is again a segment,
//! `fᵏ(y₀) + t·μᵏ·v`, so the times at which it crosses the ball are found by
//! a one-dimensional lattice scan. Every hit, from points or fibers, is
//! confirmed by iterating the returning point exactly on the dyadic grid, so
//! a reported `τ` always comes with a genuine witness pair.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fixed::{displace, fixed_to_point, offset, point_to_fixed, snap, Fixed, FixedBall, FixedMap};
use super::{check_common, Ball, Method, ReturnTimeResult, Witness};
use crate::dynamics::{IntMatrix, MapKind, MapSpec, MAX_DIM};
use crate::error::{Error, Result};

const MAX_FIBERS: usize = 1024;
const SAMPLES_PER_FIBER: usize = 16;
/// Lattice columns a single fiber probe may scan at one time step.
const MAX_FIBER_COLUMNS: f64 = 4.0e6;

/// Number of the `samples` candidates spent on unstable fibers.
pub fn fiber_count(map: &MapSpec, samples: usize) -> usize {
    let planes: Vec<&IntMatrix> = match map.kind() {
        MapKind::Doubling1d => return 0,
        MapKind::ToralAuto2d | MapKind::ToralEndo2d => vec![map.matrix().expect("linear")],
        MapKind::Product4d => map
            .factors()
            .expect("product")
            .iter()
            .map(|f| f.matrix().expect("factor"))
            .collect(),
    };
    if planes.iter().any(|m| unstable_direction(m).is_none()) {
        return 0;
    }
    (samples / SAMPLES_PER_FIBER).min(MAX_FIBERS)
}

/// Dominant real eigenvalue `μ` (`|μ| > 1`, strictly dominant) and its unit
/// eigenvector.
fn unstable_direction(m: &IntMatrix) -> Option<(f64, [f64; 2])> {
    let [small, big] = m.real_eigenvalues()?;
    if big.abs() <= 1.0 || big.abs() <= small.abs() * (1.0 + 1e-9) {
        return None;
    }
    Some((big, m.eigenvector(big)))
}

/// Positive root of `x^(d+1) = x + 1`.
fn kronecker_base(d: usize) -> f64 {
    let mut x: f64 = 2.0;
    for _ in 0..100 {
        let f = x.powi(d as i32 + 1) - x - 1.0;
        let df = (d as f64 + 1.0) * x.powi(d as i32) - 1.0;
        x -= f / df;
    }
    x
}

/// A fiber segment in one planar factor, in coordinates `lo..lo+2`.
#[derive(Debug, Clone, Copy)]
struct Fiber {
    lo: usize,
    map: FixedMap,
    mu: f64,
    v: [f64; 2],
    t0: f64,
    t1: f64,
}

impl Fiber {
    /// Fiber `j` of `count`, offset `w` across the ball. Returns the segment
    /// and writes its base point into `y0`.
    fn build(
        lo: usize,
        m: &IntMatrix,
        ball: &FixedBall,
        r: f64,
        frac: f64,
        y0: &mut Fixed,
    ) -> Option<Fiber> {
        let (mu, v) = unstable_direction(m)?;
        let perp = [-v[1], v[0]];
        let w = r * (v[0].abs() + v[1].abs()) * (2.0 * frac - 1.0);
        let b = [w * perp[0], w * perp[1]];
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..2 {
            if v[i].abs() < 1e-15 {
                if b[i].abs() > r {
                    return None;
                }
                continue;
            }
            let a = (-r - b[i]) / v[i];
            let c = (r - b[i]) / v[i];
            t0 = t0.max(a.min(c));
            t1 = t1.min(a.max(c));
        }
        if !(t1 > t0) {
            return None;
        }
        let mid = 0.5 * (t0 + t1);
        for i in 0..2 {
            y0[lo + i] = snap(displace(ball.center[lo + i], b[i] + mid * v[i]));
        }
        Some(Fiber {
            lo,
            map: FixedMap::plane(m),
            mu,
            v,
            t0: t0 - mid,
            t1: t1 - mid,
        })
    }

    /// Searches the image of the segment at time `k` (base point image `y0k`)
    /// for a point inside the ball; returns an exactly verified `y`.
    fn probe(&self, k: usize, y0: &Fixed, y0k: &Fixed, ball: &FixedBall, r: f64) -> Option<Fixed> {
        let lo = self.lo;
        let p = [
            offset(ball.center[lo], y0k[lo]),
            offset(ball.center[lo + 1], y0k[lo + 1]),
        ];
        let mk = self.mu.powi(k as i32);
        let (s0, s1) = {
            let (a, b) = (mk * self.t0, mk * self.t1);
            (a.min(b), a.max(b))
        };
        let v = self.v;
        let (i, j) = if v[0].abs() >= v[1].abs() { (0, 1) } else { (1, 0) };
        let range = |s_lo: f64, s_hi: f64, c: usize| {
            let a = p[c] + s_lo * v[c];
            let b = p[c] + s_hi * v[c];
            (a.min(b), a.max(b))
        };
        let solve = |n: f64, c: usize| {
            let a = (n - r - p[c]) / v[c];
            let b = (n + r - p[c]) / v[c];
            (a.min(b), a.max(b))
        };
        let (vi_lo, vi_hi) = range(s0, s1, i);
        let first = (vi_lo - r).ceil();
        let last = (vi_hi + r).floor();
        if last - first > MAX_FIBER_COLUMNS {
            return None;
        }
        let mut ni = first;
        while ni <= last {
            let (a, b) = solve(ni, i);
            let (a, b) = (a.max(s0), b.min(s1));
            ni += 1.0;
            if a > b {
                continue;
            }
            let (vj_lo, vj_hi) = range(a, b, j);
            let mut nj = (vj_lo - r).ceil();
            while nj <= (vj_hi + r).floor() {
                let (c, d) = if v[j].abs() < 1e-15 {
                    if (p[j] - nj).abs() <= r {
                        (a, b)
                    } else {
                        (1.0, 0.0)
                    }
                } else {
                    let (c, d) = solve(nj, j);
                    (c.max(a), d.min(b))
                };
                nj += 1.0;
                if c > d {
                    continue;
                }
                let t = 0.5 * (c + d) / mk;
                let mut y = *y0;
                for q in 0..2 {
                    y[lo + q] = snap(displace(y0[lo + q], t * v[q]));
                }
                if self.verify(k, &y, ball) {
                    return Some(y);
                }
            }
        }
        None
    }

    fn verify(&self, k: usize, y: &Fixed, ball: &FixedBall) -> bool {
        let range = (self.lo, self.lo + 2);
        if !ball.contains_range(y, range.0, range.1) {
            return false;
        }
        let mut z = [0u128; MAX_DIM];
        z[..2].copy_from_slice(&y[range.0..range.1]);
        for _ in 0..k {
            self.map.step(&mut z);
        }
        let mut shifted = *y;
        shifted[range.0..range.1].copy_from_slice(&z[..2]);
        ball.contains_range(&shifted, range.0, range.1)
    }
}

enum Candidate {
    Point(Fixed),
    Fibers { y0: Fixed, fibers: Vec<Fiber> },
    Degenerate,
}

struct Hit {
    k: usize,
    y: Fixed,
    z: Fixed,
}

fn run_point(map: &FixedMap, ball: &FixedBall, y: Fixed, best: &AtomicUsize) -> Option<Hit> {
    if !ball.contains(&y) {
        return None;
    }
    let mut z = y;
    let mut k = 0;
    while k < best.load(Ordering::Relaxed) {
        k += 1;
        map.step(&mut z);
        if ball.contains(&z) {
            best.fetch_min(k, Ordering::Relaxed);
            return Some(Hit { k, y, z });
        }
    }
    None
}

fn run_fibers(
    map: &FixedMap,
    ball: &FixedBall,
    r: f64,
    y0: Fixed,
    fibers: &[Fiber],
    best: &AtomicUsize,
) -> Option<Hit> {
    let mut y0k = y0;
    let mut k = 0;
    'time: while k < best.load(Ordering::Relaxed) {
        k += 1;
        map.step(&mut y0k);
        // All factors must return at the same k.
        let mut y = y0;
        for f in fibers {
            match f.probe(k, &y, &y0k, ball, r) {
                Some(found) => y = found,
                None => continue 'time,
            }
        }
        let mut z = y;
        for _ in 0..k {
            map.step(&mut z);
        }
        if ball.contains(&y) && ball.contains(&z) {
            best.fetch_min(k, Ordering::Relaxed);
            return Some(Hit { k, y, z });
        }
    }
    None
}

/// Least `k ≤ k_max` at which some sampled `y ∈ B` has `fᵏ(y) ∈ B`.
///
/// Any witness proves `fᵏ(B) ∩ B ≠ ∅`, so the result is an upper bound for
/// the exact `τ`. With `samples = 1` only the center is tried. Deterministic
/// in `seed` at any thread count.
pub fn tau_ball_sample(
    map: &MapSpec,
    ball: &Ball,
    k_max: usize,
    samples: usize,
    seed: u64,
) -> Result<ReturnTimeResult> {
    check_common(map, ball, k_max)?;
    if samples == 0 {
        return Err(Error::param("samples must be at least 1"));
    }
    let dim = map.dim();
    let r = ball.radius();
    let fmap = FixedMap::forward(map);
    let fball = FixedBall::new(ball.center(), r);
    let n_fibers = fiber_count(map, samples);
    let n_points = samples - n_fibers;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = kronecker_base(dim);
    let alpha: Vec<f64> = (1..=dim).map(|j| base.powi(-(j as i32)).fract()).collect();
    let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    let fiber_shift: f64 = rng.gen();

    let center = {
        let mut c = point_to_fixed(ball.center());
        for v in c.iter_mut().take(dim) {
            *v = snap(*v);
        }
        c
    };
    let planes: Vec<(usize, IntMatrix)> = match map.kind() {
        MapKind::ToralAuto2d | MapKind::ToralEndo2d => vec![(0, map.matrix().expect("linear").clone())],
        MapKind::Product4d => map
            .factors()
            .expect("product")
            .iter()
            .enumerate()
            .map(|(i, f)| (2 * i, f.matrix().expect("factor").clone()))
            .collect(),
        MapKind::Doubling1d => Vec::new(),
    };

    let candidate = |i: usize| -> Candidate {
        if i == 0 {
            return Candidate::Point(center);
        }
        if i <= n_fibers {
            let frac = ((i - 1) as f64 + fiber_shift) / n_fibers as f64;
            let mut y0 = center;
            let mut fibers = Vec::with_capacity(planes.len());
            for (lo, m) in &planes {
                match Fiber::build(*lo, m, &fball, r, frac, &mut y0) {
                    Some(f) => fibers.push(f),
                    None => return Candidate::Degenerate,
                }
            }
            return Candidate::Fibers { y0, fibers };
        }
        let idx = (i - n_fibers) as f64;
        let mut y = center;
        for j in 0..dim {
            let u = (shift[j] + idx * alpha[j]).fract();
            y[j] = snap(displace(fball.center[j], r * (2.0 * u - 1.0)));
        }
        Candidate::Point(y)
    };

    let best = AtomicUsize::new(k_max);
    let hits: Vec<Option<Hit>> = (0..n_points + n_fibers)
        .into_par_iter()
        .map(|i| match candidate(i) {
            Candidate::Point(y) => run_point(&fmap, &fball, y, &best),
            Candidate::Fibers { y0, fibers } => run_fibers(&fmap, &fball, r, y0, &fibers, &best),
            Candidate::Degenerate => None,
        })
        .collect();

    // Lowest k, then lowest candidate index.
    let winner = hits
        .into_iter()
        .flatten()
        .min_by_key(|h| h.k);
    Ok(ReturnTimeResult {
        tau: winner.as_ref().map(|h| h.k),
        cutoff: k_max,
        witness: winner.map(|h| Witness::Pair {
            y: fixed_to_point(&h.y, dim),
            z: fixed_to_point(&h.z, dim),
        }),
        method: Method::MonteCarlo,
        ambiguous_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::TorusPoint;

    #[test]
    fn kronecker_bases() {
        assert!((kronecker_base(1) - 1.618_033_988_749_895).abs() < 1e-12);
        assert!((kronecker_base(2) - 1.324_717_957_244_746).abs() < 1e-12);
    }

    #[test]
    fn doubling_interval_example() {
        let ball = Ball::new(TorusPoint::new(&[0.325]).unwrap(), 0.025).unwrap();
        let res = tau_ball_sample(&MapSpec::doubling(), &ball, 10, 1000, 1).unwrap();
        assert_eq!(res.tau, Some(2));
    }

    #[test]
    fn fixed_center_returns_immediately() {
        let ball = Ball::new(TorusPoint::new(&[0.0, 0.0]).unwrap(), 1e-3).unwrap();
        let res = tau_ball_sample(&MapSpec::cat_map(), &ball, 10, 1, 0).unwrap();
        assert_eq!(res.tau, Some(1));
    }

    #[test]
    fn fiber_budget() {
        assert_eq!(fiber_count(&MapSpec::cat_map(), 10_000), 625);
        assert_eq!(fiber_count(&MapSpec::cat_map(), 1_000), 62);
        assert_eq!(fiber_count(&MapSpec::cat_map(), 1), 0);
        assert_eq!(fiber_count(&MapSpec::doubling(), 10_000), 0);
    }
}
