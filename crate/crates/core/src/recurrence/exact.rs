//! Exact return times of balls under linear maps.
//!
//! Write `B = x + Q` with `Q = [−r, r]^d`. Then `fᵏ(B) ∩ B ≠ ∅` iff some
//! integer vector `n` satisfies `n − c_k ∈ Aᵏ Q ⊕ Q`, where
//! `c_k = Aᵏx − x mod Z^d`. In the plane the Minkowski sum is a centrally
//! symmetric polygon whose edges are parallel to `e₁`, `e₂`, `Aᵏe₁` and
//! `Aᵏe₂`, so membership is four slab inequalities with integer normals.
//!
//! `Aᵏ` and `c_k` are exact: the matrix power is a big integer and `c_k` is
//! computed from the binary expansion of the `f64` center, then rounded to a
//! `2^-40` grid. All slab arithmetic is in `i128`. A point is a robust hit
//! when it clears every slab by [`AMBIGUITY_MARGIN`]; a point that clears
//! the slabs only when they are widened by the margin makes the step
//! ambiguous.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, One, ToPrimitive, Zero};

use super::{check_common, Ball, Method, ReturnTimeResult, Witness};
use crate::dynamics::{IntMatrix, MapKind, MapSpec};
use crate::error::{Error, Result};
use crate::numtheory::BigMatrix2;

/// Half-width (torus distance) of the indeterminacy band around slab
/// boundaries.
pub const AMBIGUITY_MARGIN: f64 = 1e-9;

const FRAC_BITS: u32 = 40;
const ONE: i128 = 1 << FRAC_BITS;

/// Lattice columns scanned per step before giving up.
const MAX_COLUMNS: i128 = 1 << 31;

#[derive(Debug, Clone, PartialEq)]
enum Outcome {
    Hit { translate: Vec<i128>, slack: f64 },
    Ambiguous,
    Miss,
}

fn overflow() -> Error {
    Error::Overflow("lattice test exceeds 128-bit range".into())
}

#[inline]
fn floor_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

#[inline]
fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    -(-a).div_euclid(b)
}

/// Coordinates of `x` as integers over a common power of two.
fn dyadic(coords: &[f64]) -> (Vec<BigInt>, u32) {
    let parts: Vec<(u64, i16)> = coords
        .iter()
        .map(|&c| {
            let (m, e, _) = c.integer_decode();
            (m, e)
        })
        .collect();
    let e = parts
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|&(_, e)| (-(e as i32)).max(0) as u32)
        .max()
        .unwrap_or(0);
    let nums = parts
        .iter()
        .map(|&(m, ex)| {
            if m == 0 {
                BigInt::zero()
            } else {
                BigInt::from(m) << (e as i32 + ex as i32) as usize
            }
        })
        .collect();
    (nums, e)
}

/// `value / 2^e` rounded onto the `2^-FRAC_BITS` grid.
fn to_grid(value: &BigInt, e: u32) -> i128 {
    let v = if e <= FRAC_BITS {
        value << (FRAC_BITS - e) as usize
    } else {
        let shift = (e - FRAC_BITS) as usize;
        (value + (BigInt::one() << (shift - 1))) >> shift
    };
    v.to_i128().expect("reduced coordinate fits")
}

/// One slab `|N·(n − c)| ≤ h` with `h = r·weight`.
struct Slab {
    normal: [i128; 2],
    weight: f64,
}

/// Exact state of one planar factor: `Aᵏ` and `Aᵏx mod 1`.
struct PlaneProbe {
    base: BigMatrix2,
    power: BigMatrix2,
    x: Vec<BigInt>,
    ax: Vec<BigInt>,
    modulus: BigInt,
    e: u32,
    radius: f64,
}

impl PlaneProbe {
    fn new(m: &IntMatrix, center: &[f64], radius: f64) -> Self {
        let (x, e) = dyadic(center);
        Self {
            base: BigMatrix2::from_int(m),
            power: BigMatrix2::identity(),
            ax: x.clone(),
            x,
            modulus: BigInt::one() << e as usize,
            e,
            radius,
        }
    }

    fn advance(&mut self) {
        self.power = self.power.mul(&self.base);
        let r = &self.base.rows;
        let a0 = (&r[0][0] * &self.ax[0] + &r[0][1] * &self.ax[1]).mod_floor(&self.modulus);
        let a1 = (&r[1][0] * &self.ax[0] + &r[1][1] * &self.ax[1]).mod_floor(&self.modulus);
        self.ax = vec![a0, a1];
    }

    fn test(&self) -> Result<Outcome> {
        let a = self.power.to_i128().ok_or_else(overflow)?;
        let c: Vec<i128> = (0..2)
            .map(|i| to_grid(&(&self.ax[i] - &self.x[i]).mod_floor(&self.modulus), self.e))
            .collect();
        plane_test(a, [c[0], c[1]], self.radius)
    }
}

fn abs_sum(v: &[i128]) -> Result<f64> {
    let mut s: i128 = 0;
    for &x in v {
        s = s.checked_add(x.checked_abs().ok_or_else(overflow)?).ok_or_else(overflow)?;
    }
    Ok(s as f64)
}

/// Decides whether some `n ∈ Z²` has `n − c ∈ A Q ⊕ Q`, `c` given on the
/// `2^-40` grid.
fn plane_test(a: [[i128; 2]; 2], c: [i128; 2], r: f64) -> Result<Outcome> {
    let det = a[0][0]
        .checked_mul(a[1][1])
        .zip(a[0][1].checked_mul(a[1][0]))
        .and_then(|(p, q)| p.checked_sub(q))
        .ok_or_else(overflow)?;
    let mut slabs = vec![
        Slab { normal: [1, 0], weight: abs_sum(&[a[0][0], a[0][1], 1])? },
        Slab { normal: [0, 1], weight: abs_sum(&[a[1][0], a[1][1], 1])? },
        Slab { normal: [-a[1][0], a[0][0]], weight: abs_sum(&[det, a[0][0], a[1][0]])? },
        Slab { normal: [-a[1][1], a[0][1]], weight: abs_sum(&[det, a[0][1], a[1][1]])? },
    ];
    // Scan along the axis with the narrower extent.
    let swapped = slabs[1].weight < slabs[0].weight;
    let mut c = c;
    if swapped {
        for s in &mut slabs {
            s.normal.swap(0, 1);
        }
        slabs.swap(0, 1);
        c.swap(0, 1);
    }
    let found = scan(&slabs, c, r)?;
    Ok(match found {
        Outcome::Hit { mut translate, slack } => {
            if swapped {
                translate.swap(0, 1);
            }
            Outcome::Hit { translate, slack }
        }
        other => other,
    })
}

struct Bound {
    normal: [i128; 2],
    robust: i128,
    possible: i128,
    half_width: f64,
    norm: f64,
}

fn scan(slabs: &[Slab], c: [i128; 2], r: f64) -> Result<Outcome> {
    let scale = ONE as f64;
    let mut bounds = Vec::with_capacity(slabs.len());
    for s in slabs {
        let norm = (s.normal[0] as f64).hypot(s.normal[1] as f64);
        let h = r * s.weight;
        let pad = AMBIGUITY_MARGIN * norm;
        let possible = ((h + pad) * scale).ceil();
        if possible >= i128::MAX as f64 / 4.0 {
            return Err(overflow());
        }
        bounds.push(Bound {
            normal: s.normal,
            robust: ((h - pad) * scale).floor() as i128,
            possible: possible as i128,
            half_width: h,
            norm,
        });
    }
    // Slab 0 has normal e₁: it fixes the column range.
    let b0 = &bounds[0];
    let lo = ceil_div(c[0] - b0.possible, ONE);
    let hi = floor_div(c[0] + b0.possible, ONE);
    if hi < lo {
        return Ok(Outcome::Miss);
    }
    if hi - lo > MAX_COLUMNS {
        return Err(Error::Unsupported(format!(
            "lattice scan of {} columns",
            hi - lo + 1
        )));
    }
    let start = floor_div(c[0] + ONE / 2, ONE).clamp(lo, hi);
    let mut ambiguous = false;
    // Columns start, start+1, start−1, start+2, … so hits near the center
    // are found first and the integers stay small.
    for d in 0..=(hi - lo) {
        for n1 in [start + d, start - d] {
            if n1 < lo || n1 > hi || (d == 0 && n1 != start) {
                continue;
            }
            match column(&bounds, n1, c)? {
                Column::Robust(n2) => {
                    let n = [n1, n2];
                    return Ok(Outcome::Hit {
                        slack: slack(&bounds, n, c),
                        translate: n.to_vec(),
                    });
                }
                Column::Possible => ambiguous = true,
                Column::Empty => {}
            }
        }
        if start + d >= hi && start - d <= lo {
            break;
        }
    }
    Ok(if ambiguous { Outcome::Ambiguous } else { Outcome::Miss })
}

enum Column {
    Robust(i128),
    Possible,
    Empty,
}

/// Intersects the slabs with the lattice column `n₁`.
fn column(bounds: &[Bound], n1: i128, c: [i128; 2]) -> Result<Column> {
    let dx = n1.checked_mul(ONE).and_then(|v| v.checked_sub(c[0])).ok_or_else(overflow)?;
    let (mut p_lo, mut p_hi) = (i128::MIN, i128::MAX);
    let (mut r_lo, mut r_hi) = (i128::MIN, i128::MAX);
    let mut robust_ok = true;
    let mut possible_ok = true;
    for b in bounds {
        let g = b.normal[0]
            .checked_mul(dx)
            .zip(b.normal[1].checked_mul(c[1]))
            .and_then(|(p, q)| p.checked_sub(q))
            .ok_or_else(overflow)?;
        let ny = b.normal[1];
        if ny == 0 {
            possible_ok &= g.abs() <= b.possible;
            robust_ok &= g.abs() <= b.robust;
            continue;
        }
        // N_y·2^40·n₂ ∈ [−h − g, h − g]
        let d = ny.checked_mul(ONE).ok_or_else(overflow)?;
        let (d, g) = if d < 0 { (-d, -g) } else { (d, g) };
        for (h, lo_acc, hi_acc) in [
            (b.possible, &mut p_lo, &mut p_hi),
            (b.robust, &mut r_lo, &mut r_hi),
        ] {
            let l = (-h).checked_sub(g).ok_or_else(overflow)?;
            let u = h.checked_sub(g).ok_or_else(overflow)?;
            *lo_acc = (*lo_acc).max(ceil_div(l, d));
            *hi_acc = (*hi_acc).min(floor_div(u, d));
        }
    }
    Ok(if robust_ok && r_lo <= r_hi {
        Column::Robust(r_lo)
    } else if possible_ok && p_lo <= p_hi {
        Column::Possible
    } else {
        Column::Empty
    })
}

/// Distance of `n − c` from the boundary of the polygon, in torus units.
fn slack(bounds: &[Bound], n: [i128; 2], c: [i128; 2]) -> f64 {
    let scale = ONE as f64;
    bounds
        .iter()
        .map(|b| {
            let v = (b.normal[0] as f64) * ((n[0] * ONE - c[0]) as f64)
                + (b.normal[1] as f64) * ((n[1] * ONE - c[1]) as f64);
            (b.half_width - v.abs() / scale) / b.norm
        })
        .fold(f64::INFINITY, f64::min)
}

/// Exact state for the doubling map: `2ᵏx mod 1`.
struct IntervalProbe {
    x: BigInt,
    ax: BigInt,
    modulus: BigInt,
    e: u32,
    radius: f64,
    k: i32,
}

impl IntervalProbe {
    fn new(center: f64, radius: f64) -> Self {
        let (x, e) = dyadic(&[center]);
        Self {
            ax: x[0].clone(),
            x: x[0].clone(),
            modulus: BigInt::one() << e as usize,
            e,
            radius,
            k: 0,
        }
    }

    fn advance(&mut self) {
        self.k += 1;
        self.ax = (&self.ax << 1usize).mod_floor(&self.modulus);
    }

    /// `fᵏ[x−r, x+r] = [2ᵏx − 2ᵏr, 2ᵏx + 2ᵏr]`, which meets the ball iff some
    /// integer lies within `(2ᵏ+1)r` of `c_k = 2ᵏx − x`.
    fn test(&self) -> Result<Outcome> {
        let c = to_grid(&(&self.ax - &self.x).mod_floor(&self.modulus), self.e);
        let half = self.radius * (2f64.powi(self.k) + 1.0);
        let nearest = floor_div(c + ONE / 2, ONE);
        let dist = ((nearest * ONE - c) as f64 / ONE as f64).abs();
        if half >= 0.5 + AMBIGUITY_MARGIN || dist <= half - AMBIGUITY_MARGIN {
            return Ok(Outcome::Hit {
                translate: vec![nearest],
                slack: half - dist,
            });
        }
        Ok(if dist <= half + AMBIGUITY_MARGIN {
            Outcome::Ambiguous
        } else {
            Outcome::Miss
        })
    }
}

enum Probe {
    Interval(IntervalProbe),
    Plane(PlaneProbe),
    Product(PlaneProbe, PlaneProbe),
}

/// Least `k ≤ k_max` with `fᵏ(B) ∩ B ≠ ∅`, decided exactly.
///
/// Planar maps use the polygon test, doubling tracks the image interval, and
/// products combine the factor tests at equal `k` (a max-norm ball in `T⁴`
/// is the product of its factor balls).
pub fn tau_ball_exact(map: &MapSpec, ball: &Ball, k_max: usize) -> Result<ReturnTimeResult> {
    check_common(map, ball, k_max)?;
    let x = ball.center().coords();
    let r = ball.radius();
    let (mut probe, method) = match map.kind() {
        MapKind::Doubling1d => (Probe::Interval(IntervalProbe::new(x[0], r)), Method::IntervalExact),
        MapKind::ToralAuto2d | MapKind::ToralEndo2d => (
            Probe::Plane(PlaneProbe::new(map.matrix().expect("linear"), x, r)),
            Method::ExactLattice,
        ),
        MapKind::Product4d => {
            let f = map.factors().expect("product");
            (
                Probe::Product(
                    PlaneProbe::new(f[0].matrix().expect("factor"), &x[..2], r),
                    PlaneProbe::new(f[1].matrix().expect("factor"), &x[2..], r),
                ),
                Method::ExactLattice,
            )
        }
    };
    let mut result = ReturnTimeResult {
        tau: None,
        cutoff: k_max,
        witness: None,
        method,
        ambiguous_at: None,
    };
    for k in 1..=k_max {
        let outcome = match &mut probe {
            Probe::Interval(p) => {
                p.advance();
                p.test()?
            }
            Probe::Plane(p) => {
                p.advance();
                p.test()?
            }
            Probe::Product(p, q) => {
                p.advance();
                q.advance();
                match p.test()? {
                    Outcome::Miss => Outcome::Miss,
                    first => match (first, q.test()?) {
                        (_, Outcome::Miss) => Outcome::Miss,
                        (
                            Outcome::Hit { translate: mut t1, slack: s1 },
                            Outcome::Hit { translate: t2, slack: s2 },
                        ) => {
                            t1.extend(t2);
                            Outcome::Hit { translate: t1, slack: s1.min(s2) }
                        }
                        _ => Outcome::Ambiguous,
                    },
                }
            }
        };
        match outcome {
            Outcome::Hit { translate, slack } => {
                result.tau = Some(k);
                result.witness = Some(Witness::Lattice {
                    translate: translate
                        .iter()
                        .map(|&t| i64::try_from(t).map_err(|_| overflow()))
                        .collect::<Result<_>>()?,
                    slack,
                });
                return Ok(result);
            }
            Outcome::Ambiguous => {
                result.ambiguous_at.get_or_insert(k);
            }
            Outcome::Miss => {}
        }
    }
    Ok(result)
}
