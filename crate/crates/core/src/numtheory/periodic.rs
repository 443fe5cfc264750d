use std::collections::HashSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::{IntMatrix, MapSpec, RationalPoint};
use crate::error::{Error, Result};

/// Largest period accepted by [`periodic_points`].
pub const MAX_PERIOD: usize = 64;

/// A 2×2 matrix over arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigMatrix2 {
    pub rows: [[BigInt; 2]; 2],
}

impl BigMatrix2 {
    pub fn from_int(m: &IntMatrix) -> Self {
        let r = m.rows();
        Self {
            rows: [
                [BigInt::from(r[0][0]), BigInt::from(r[0][1])],
                [BigInt::from(r[1][0]), BigInt::from(r[1][1])],
            ],
        }
    }

    pub fn identity() -> Self {
        Self::from_int(&IntMatrix::identity())
    }

    pub fn mul(&self, o: &BigMatrix2) -> BigMatrix2 {
        let a = &self.rows;
        let b = &o.rows;
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        BigMatrix2 {
            rows: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn det(&self) -> BigInt {
        let r = &self.rows;
        &r[0][0] * &r[1][1] - &r[0][1] * &r[1][0]
    }

    pub fn minus_identity(&self) -> BigMatrix2 {
        let mut out = self.clone();
        out.rows[0][0] -= 1;
        out.rows[1][1] -= 1;
        out
    }

    /// Entries as `i128`, or `None` when any entry does not fit.
    pub fn to_i128(&self) -> Option<[[i128; 2]; 2]> {
        let r = &self.rows;
        Some([
            [r[0][0].to_i128()?, r[0][1].to_i128()?],
            [r[1][0].to_i128()?, r[1][1].to_i128()?],
        ])
    }
}

/// `m^p` by repeated squaring, exact.
pub fn matrix_power(m: &IntMatrix, p: u32) -> BigMatrix2 {
    let mut result = BigMatrix2::identity();
    let mut base = BigMatrix2::from_int(m);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&base);
        }
        base = base.mul(&base);
        e >>= 1;
    }
    result
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodicKind {
    Auto,
    Endo,
}

/// `|det(A^p − I)|` for `p = 1..=p_max`: the number of points fixed by `f^p`.
pub fn periodic_points(matrix: &IntMatrix, p_max: usize, kind: PeriodicKind) -> Result<Vec<BigInt>> {
    match kind {
        PeriodicKind::Auto => MapSpec::toral_auto(matrix.clone())?,
        PeriodicKind::Endo => MapSpec::toral_endo(matrix.clone())?,
    };
    if p_max == 0 || p_max > MAX_PERIOD {
        return Err(Error::param(format!(
            "p_max must be in 1..={MAX_PERIOD}, got {p_max}"
        )));
    }
    let base = BigMatrix2::from_int(matrix);
    let mut power = BigMatrix2::identity();
    let mut out = Vec::with_capacity(p_max);
    for _ in 0..p_max {
        power = power.mul(&base);
        out.push(power.minus_identity().det().abs());
    }
    Ok(out)
}

/// `|Π_j (μ_j^p − 1)|` in floating point, from the eigenvalues.
pub fn periodic_count_from_eigenvalues(matrix: &IntMatrix, p: u32) -> f64 {
    matrix
        .eigenvalues()
        .iter()
        .map(|mu| mu.powu(p) - Complex64::new(1.0, 0.0))
        .fold(Complex64::new(1.0, 0.0), |acc, z| acc * z)
        .norm()
}

/// Every point `y ∈ T^2` with `A^p y = y`, exactly.
///
/// Solutions are `y = (A^p − I)^{-1} n mod 1`; all of them arise from `n` in
/// `[0, D)^2` with `D = |det(A^p − I)|`, so the scan is `O(D^2)` and meant for
/// small periods.
pub fn enumerate_periodic_points(matrix: &IntMatrix, p: u32) -> Result<Vec<RationalPoint>> {
    let m = matrix_power(matrix, p).minus_identity();
    let det = m.det();
    if det.is_zero() {
        return Err(Error::InvalidMap("A^p − I is singular".into()));
    }
    let d = det.abs().to_i64().ok_or_else(|| {
        Error::Overflow(format!("det(A^{p} − I) too large to enumerate"))
    })?;
    if d > 5_000 {
        return Err(Error::param(format!(
            "{d} periodic points is too many to enumerate"
        )));
    }
    let r = &m.rows;
    // Adjugate; inverse = adj / det.
    let adj = [
        [r[1][1].clone(), -r[0][1].clone()],
        [-r[1][0].clone(), r[0][0].clone()],
    ];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n1 in 0..d {
        for n2 in 0..d {
            let coords: Vec<BigRational> = (0..2)
                .map(|i| {
                    let num = &adj[i][0] * n1 + &adj[i][1] * n2;
                    let q = BigRational::new(num, det.clone());
                    &q - q.floor()
                })
                .collect();
            let pt = RationalPoint::new(coords)?;
            if seen.insert(pt.clone()) {
                out.push(pt);
            }
        }
    }
    out.sort_by(|a, b| a.coords().cmp(b.coords()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> IntMatrix {
        IntMatrix::new(2, 1, 1, 1)
    }

    #[test]
    fn cat_counts_by_hand() {
        // det(A−I) = −1, det(A²−I) = −5, det(A³−I) = −16, det(A⁴−I) = 396 − 441 = −45.
        let c = periodic_points(&cat(), 4, PeriodicKind::Auto).unwrap();
        let c: Vec<i64> = c.iter().map(|b| b.to_i64().unwrap()).collect();
        assert_eq!(c, vec![1, 5, 16, 45]);
    }

    #[test]
    fn fourth_power_of_cat() {
        let p = matrix_power(&cat(), 4);
        assert_eq!(p, BigMatrix2::from_int(&IntMatrix::new(34, 21, 21, 13)));
    }

    #[test]
    fn expanding_single_fixed_point() {
        let c = periodic_points(&IntMatrix::new(6, 3, 3, 3), 1, PeriodicKind::Endo).unwrap();
        assert_eq!(c[0], BigInt::from(1));
        // (e^{λᵘ} − 1)(e^{Λᵘ} − 1) = 1
        let lo = (9.0 - 3.0 * 5f64.sqrt()) / 2.0;
        let hi = (9.0 + 3.0 * 5f64.sqrt()) / 2.0;
        assert!(((lo - 1.0) * (hi - 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_rejected() {
        assert!(periodic_points(&IntMatrix::identity(), 3, PeriodicKind::Auto).is_err());
    }

    #[test]
    fn p_max_bounds() {
        assert!(periodic_points(&cat(), 0, PeriodicKind::Auto).is_err());
        assert!(periodic_points(&cat(), 65, PeriodicKind::Auto).is_err());
        let big = periodic_points(&cat(), 64, PeriodicKind::Auto).unwrap();
        // Grows like φ^{2p}: 64 periods need far more than 64 bits.
        assert!(big[63].bits() > 80);
    }

    #[test]
    fn enumeration_matches_counts() {
        let counts = periodic_points(&cat(), 4, PeriodicKind::Auto).unwrap();
        let map = MapSpec::cat_map();
        for p in 1..=4u32 {
            let pts = enumerate_periodic_points(&cat(), p).unwrap();
            assert_eq!(BigInt::from(pts.len()), counts[p as usize - 1]);
            for y in &pts {
                let mut z = y.clone();
                for _ in 0..p {
                    z = map.apply_exact(&z).unwrap();
                }
                assert_eq!(&z, y);
            }
        }
    }
}
