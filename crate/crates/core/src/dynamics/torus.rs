use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest torus dimension handled (products of two surfaces).
pub const MAX_DIM: usize = 4;

/// A point of the torus `T^d`, `d ∈ {1, 2, 4}`, stored by its canonical
/// representative in `[0, 1)^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    coords: [f64; MAX_DIM],
    dim: usize,
}

/// Reduces `x` modulo 1 into `[0, 1)`.
///
/// `rem_euclid` can return exactly `1.0` for tiny negative inputs; that case
/// is folded back to `0.0`.
#[inline]
pub fn wrap(x: f64) -> f64 {
    let w = x.rem_euclid(1.0);
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Distance on the circle `R/Z`.
#[inline]
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Signed displacement `b - a` reduced into `[-1/2, 1/2)`.
#[inline]
pub fn circle_offset(a: f64, b: f64) -> f64 {
    let d = (b - a).rem_euclid(1.0);
    if d >= 0.5 {
        d - 1.0
    } else {
        d
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(d)?;
        TorusPoint::new(&coords).map_err(serde::de::Error::custom)
    }
}

impl TorusPoint {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if !matches!(coords.len(), 1 | 2 | 4) {
            return Err(Error::param(format!(
                "torus dimension must be 1, 2 or 4, got {}",
                coords.len()
            )));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::param(format!("non-finite coordinate {c}")));
        }
        let mut out = [0.0; MAX_DIM];
        for (dst, &src) in out.iter_mut().zip(coords) {
            *dst = wrap(src);
        }
        Ok(Self {
            coords: out,
            dim: coords.len(),
        })
    }

    /// Builds a point from raw coordinates known to be finite; reduces mod 1.
    #[inline]
    pub(crate) fn from_raw(raw: [f64; MAX_DIM], dim: usize) -> Self {
        let mut coords = [0.0; MAX_DIM];
        for i in 0..dim {
            coords[i] = wrap(raw[i]);
        }
        Self { coords, dim }
    }

    pub fn origin(dim: usize) -> Result<Self> {
        Self::new(&vec![0.0; dim])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    #[inline]
    pub(crate) fn raw(&self) -> [f64; MAX_DIM] {
        self.coords
    }

    /// Max-norm torus distance. On products this is the maximum of the factor
    /// distances.
    #[inline]
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut d: f64 = 0.0;
        for i in 0..self.dim {
            d = d.max(circle_distance(self.coords[i], other.coords[i]));
        }
        d
    }

    /// Splits a point of `T^4` into its two `T^2` factors.
    pub fn split(&self) -> Result<(TorusPoint, TorusPoint)> {
        if self.dim != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: self.dim,
            });
        }
        let c = self.coords;
        Ok((
            TorusPoint::from_raw([c[0], c[1], 0.0, 0.0], 2),
            TorusPoint::from_raw([c[2], c[3], 0.0, 0.0], 2),
        ))
    }

    /// Joins two points of `T^2` into a point of `T^4`.
    pub fn join(a: &TorusPoint, b: &TorusPoint) -> Result<TorusPoint> {
        for p in [a, b] {
            if p.dim != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: p.dim,
                });
            }
        }
        Ok(TorusPoint::from_raw(
            [a.coords[0], a.coords[1], b.coords[0], b.coords[1]],
            4,
        ))
    }

    /// Translates by `offset` (lifted coordinates) and reduces mod 1.
    #[inline]
    pub fn translate(&self, offset: &[f64]) -> TorusPoint {
        debug_assert_eq!(offset.len(), self.dim);
        let mut raw = self.coords;
        for (c, o) in raw.iter_mut().zip(offset) {
            *c += o;
        }
        TorusPoint::from_raw(raw, self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_never_returns_one() {
        assert_eq!(wrap(-1e-18), 0.0);
        assert_eq!(wrap(1.0), 0.0);
        assert_eq!(wrap(-0.25), 0.75);
        assert!(wrap(-f64::EPSILON / 4.0) < 1.0);
    }

    #[test]
    fn distance_wraps_around() {
        let a = TorusPoint::new(&[0.95, 0.5]).unwrap();
        let b = TorusPoint::new(&[0.05, 0.52]).unwrap();
        assert!((a.distance(&b) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_dimension() {
        assert!(TorusPoint::new(&[0.1, 0.2, 0.3]).is_err());
        assert!(TorusPoint::new(&[f64::NAN]).is_err());
    }

    #[test]
    fn split_join_round_trip() {
        let p = TorusPoint::new(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let (a, b) = p.split().unwrap();
        assert_eq!(TorusPoint::join(&a, &b).unwrap(), p);
    }

    #[test]
    fn offsets_are_centered() {
        assert!((circle_offset(0.9, 0.1) - 0.2).abs() < 1e-15);
        assert!((circle_offset(0.1, 0.9) + 0.2).abs() < 1e-15);
    }
}
