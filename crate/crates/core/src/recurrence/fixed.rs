//! Exact orbits on the dyadic grid `2^-128 Z^d / Z^d`.
//!
//! Integer matrices act on `u128` fixed-point coordinates by wrapping
//! arithmetic, which is exactly `A y mod 1` for `y ∈ 2^-128 Z^d`. Sample
//! points are additionally snapped to 53 significant bits so that they are
//! exactly representable as `f64`, which makes every sampled witness pair an
//! exact statement about the map.

use crate::dynamics::{IntMatrix, MapKind, MapSpec, TorusPoint, MAX_DIM};

pub(crate) type Fixed = [u128; MAX_DIM];

const SCALE: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0; // 2^128

/// `x ∈ [0, 1)` to fixed point, truncating bits below `2^-128`.
#[inline]
pub(crate) fn to_fixed(x: f64) -> u128 {
    let v = x * SCALE;
    if v >= SCALE {
        0
    } else {
        v as u128
    }
}

/// Nearest `f64` to a fixed-point coordinate.
#[inline]
pub(crate) fn from_fixed(y: u128) -> f64 {
    let v = y as f64 / SCALE;
    if v >= 1.0 {
        0.0
    } else {
        v
    }
}

/// Signed offset `y − c` in `[-1/2, 1/2)` as `f64`.
#[inline]
pub(crate) fn offset(c: u128, y: u128) -> f64 {
    (y.wrapping_sub(c) as i128) as f64 / SCALE
}

/// Fixed-point displacement by a real offset `|d| < 1/2`.
#[inline]
pub(crate) fn displace(y: u128, d: f64) -> u128 {
    y.wrapping_add((d * SCALE) as i128 as u128)
}

/// Drops low bits so that `y / 2^128` is exactly an `f64`.
#[inline]
pub(crate) fn snap(y: u128) -> u128 {
    let bits = 128 - y.leading_zeros();
    if bits > 53 {
        y & !((1u128 << (bits - 53)) - 1)
    } else {
        y
    }
}

pub(crate) fn point_to_fixed(p: &TorusPoint) -> Fixed {
    let mut out = [0u128; MAX_DIM];
    for (o, &c) in out.iter_mut().zip(p.coords()) {
        *o = to_fixed(c);
    }
    out
}

pub(crate) fn fixed_to_point(y: &Fixed, dim: usize) -> TorusPoint {
    let mut c = [0.0; MAX_DIM];
    for i in 0..dim {
        c[i] = from_fixed(y[i]);
    }
    TorusPoint::new(&c[..dim]).expect("valid dimension")
}

type Block = [[u128; 2]; 2];

fn block(m: [[i64; 2]; 2]) -> Block {
    let w = |v: i64| v as i128 as u128;
    [[w(m[0][0]), w(m[0][1])], [w(m[1][0]), w(m[1][1])]]
}

#[inline]
fn apply_block(m: &Block, y: &mut [u128]) {
    let a = m[0][0].wrapping_mul(y[0]).wrapping_add(m[0][1].wrapping_mul(y[1]));
    let b = m[1][0].wrapping_mul(y[0]).wrapping_add(m[1][1].wrapping_mul(y[1]));
    y[0] = a;
    y[1] = b;
}

/// A map (or its inverse) acting on fixed-point coordinates.
#[derive(Debug, Clone, Copy)]
pub(crate) enum FixedMap {
    Doubling,
    Plane(Block),
    Product(Block, Block),
}

impl FixedMap {
    pub(crate) fn plane(m: &IntMatrix) -> Self {
        FixedMap::Plane(block(m.rows()))
    }

    pub(crate) fn forward(map: &MapSpec) -> Self {
        match map.kind() {
            MapKind::Doubling1d => FixedMap::Doubling,
            MapKind::ToralAuto2d | MapKind::ToralEndo2d => {
                FixedMap::Plane(block(map.matrix().expect("linear").rows()))
            }
            MapKind::Product4d => {
                let f = map.factors().expect("product");
                FixedMap::Product(
                    block(f[0].matrix().expect("factor").rows()),
                    block(f[1].matrix().expect("factor").rows()),
                )
            }
        }
    }

    /// `None` for non-invertible maps.
    pub(crate) fn inverse(map: &MapSpec) -> Option<Self> {
        match map.kind() {
            MapKind::ToralAuto2d => Some(FixedMap::Plane(block(
                map.matrix()?.inverse()?.rows(),
            ))),
            MapKind::Product4d => {
                let f = map.factors()?;
                Some(FixedMap::Product(
                    block(f[0].matrix()?.inverse()?.rows()),
                    block(f[1].matrix()?.inverse()?.rows()),
                ))
            }
            _ => None,
        }
    }

    #[inline]
    pub(crate) fn step(&self, y: &mut Fixed) {
        match self {
            FixedMap::Doubling => y[0] = y[0].wrapping_shl(1),
            FixedMap::Plane(m) => apply_block(m, &mut y[..2]),
            FixedMap::Product(m1, m2) => {
                apply_block(m1, &mut y[..2]);
                apply_block(m2, &mut y[2..]);
            }
        }
    }
}

/// A closed max-norm ball in fixed point.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FixedBall {
    pub center: Fixed,
    pub radius: u128,
    pub dim: usize,
}

impl FixedBall {
    pub(crate) fn new(center: &TorusPoint, radius: f64) -> Self {
        Self {
            center: point_to_fixed(center),
            radius: to_fixed(radius),
            dim: center.dim(),
        }
    }

    #[inline]
    pub(crate) fn contains(&self, y: &Fixed) -> bool {
        (0..self.dim).all(|i| (y[i].wrapping_sub(self.center[i]) as i128).unsigned_abs() <= self.radius)
    }

    #[inline]
    pub(crate) fn contains_range(&self, y: &Fixed, lo: usize, hi: usize) -> bool {
        (lo..hi).all(|i| (y[i].wrapping_sub(self.center[i]) as i128).unsigned_abs() <= self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_of_representable_values() {
        for x in [0.0, 0.5, 0.337, 1e-20, 0.999_999_999] {
            let y = snap(to_fixed(x));
            assert_eq!(from_fixed(y), x);
        }
    }

    #[test]
    fn cat_step_matches_float_on_simple_points() {
        let m = FixedMap::forward(&MapSpec::cat_map());
        let mut y = [to_fixed(0.5), to_fixed(0.25), 0, 0];
        m.step(&mut y);
        assert_eq!(from_fixed(y[0]), 0.25);
        assert_eq!(from_fixed(y[1]), 0.75);
    }

    #[test]
    fn inverse_undoes_forward() {
        let map = MapSpec::cat_map();
        let f = FixedMap::forward(&map);
        let g = FixedMap::inverse(&map).unwrap();
        let start = [to_fixed(0.123), to_fixed(0.987), 0, 0];
        let mut y = start;
        for _ in 0..50 {
            f.step(&mut y);
        }
        for _ in 0..50 {
            g.step(&mut y);
        }
        assert_eq!(y, start);
    }

    #[test]
    fn ball_membership() {
        let c = TorusPoint::new(&[0.01, 0.5]).unwrap();
        let b = FixedBall::new(&c, 0.02);
        assert!(b.contains(&point_to_fixed(&TorusPoint::new(&[0.995, 0.51]).unwrap())));
        assert!(!b.contains(&point_to_fixed(&TorusPoint::new(&[0.985, 0.51]).unwrap())));
    }
}
