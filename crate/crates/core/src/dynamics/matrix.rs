use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 2×2 integer matrix, the defining data of a linear toral map.
///
/// Entries are stored as `i64`; anything raised to a power goes through the
/// big-integer routines in [`crate::numtheory`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    rows: [[i64; 2]; 2],
}

impl IntMatrix {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self {
            rows: [[a, b], [c, d]],
        }
    }

    pub const fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        self.rows
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.rows;
        a * d - b * c
    }

    pub fn trace(&self) -> i64 {
        self.rows[0][0] + self.rows[1][1]
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        let [[a, b], [c, d]] = self.rows;
        [[a as f64, b as f64], [c as f64, d as f64]]
    }

    /// Roots of `z² − tz + det`, ordered by increasing modulus.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let t = self.trace() as f64;
        let d = self.det() as f64;
        let disc = t * t - 4.0 * d;
        let (z1, z2) = if disc >= 0.0 {
            let s = disc.sqrt();
            // Avoid cancellation for the small root.
            let big = if t >= 0.0 { (t + s) / 2.0 } else { (t - s) / 2.0 };
            let small = if big != 0.0 { d / big } else { 0.0 };
            (Complex64::new(small, 0.0), Complex64::new(big, 0.0))
        } else {
            let s = (-disc).sqrt();
            (Complex64::new(t / 2.0, -s / 2.0), Complex64::new(t / 2.0, s / 2.0))
        };
        if z1.norm() <= z2.norm() {
            [z1, z2]
        } else {
            [z2, z1]
        }
    }

    /// Real eigenvalues ordered by increasing modulus, or `None` when the
    /// spectrum is complex.
    pub fn real_eigenvalues(&self) -> Option<[f64; 2]> {
        let t = self.trace() as f64;
        let d = self.det() as f64;
        if t * t - 4.0 * d < 0.0 {
            return None;
        }
        let [a, b] = self.eigenvalues();
        Some([a.re, b.re])
    }

    /// Unit eigenvector for a real eigenvalue `mu`.
    pub fn eigenvector(&self, mu: f64) -> [f64; 2] {
        let [[a, b], [c, d]] = self.to_f64();
        // Columns of (A − mu I) adjugate span the eigenspace.
        let v1 = [b, mu - a];
        let v2 = [mu - d, c];
        let n1 = v1[0].hypot(v1[1]);
        let n2 = v2[0].hypot(v2[1]);
        let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
        if n == 0.0 {
            // Scalar matrix: every vector is an eigenvector.
            return [1.0, 0.0];
        }
        [v[0] / n, v[1] / n]
    }

    /// Integer inverse when `|det| = 1`.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let det = self.det();
        if det.abs() != 1 {
            return None;
        }
        let [[a, b], [c, d]] = self.rows;
        Some(IntMatrix::new(d * det, -b * det, -c * det, a * det))
    }

    /// Euclidean operator norm (largest singular value).
    pub fn operator_norm(&self) -> f64 {
        let [[a, b], [c, d]] = self.to_f64();
        // Eigenvalues of AᵀA.
        let p = a * a + c * c;
        let q = a * b + c * d;
        let s = b * b + d * d;
        let tr = p + s;
        let det = p * s - q * q;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        (tr / 2.0 + disc).sqrt()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(Error::InvalidMap(
                "only 2×2 integer matrices are supported".into(),
            ));
        }
        Ok(IntMatrix::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1]))
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows.iter().map(|r| r.to_vec()).collect()
    }
}
