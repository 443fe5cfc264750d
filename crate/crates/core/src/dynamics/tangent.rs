use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand::Rng;

use super::map::MapSpec;
use crate::error::{Error, Result};

/// Below this stretch factor a column is treated as collapsed.
const DEGENERATE_STRETCH: f64 = 1e-300;

/// An orthonormal frame of tangent vectors with the log-stretch accumulated
/// by each direction so far.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    dim: usize,
    /// Column-major: column `j` occupies `basis[j*dim .. (j+1)*dim]`.
    basis: Vec<f64>,
    log_norms: Vec<f64>,
}

impl TangentFrame {
    pub fn identity(dim: usize) -> Self {
        let mut basis = vec![0.0; dim * dim];
        for j in 0..dim {
            basis[j * dim + j] = 1.0;
        }
        Self {
            dim,
            basis,
            log_norms: vec![0.0; dim],
        }
    }

    /// Orthonormalized Gaussian frame drawn from `seed`.
    pub fn random(dim: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut basis: Vec<f64> = (0..dim * dim)
            .map(|_| {
                // Box–Muller; only isotropy matters here.
                let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let v: f64 = rng.gen();
                (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
            })
            .collect();
        orthonormalize(&mut basis, dim)?;
        Ok(Self {
            dim,
            basis,
            log_norms: vec![0.0; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.basis[j * self.dim..(j + 1) * self.dim]
    }

    /// Accumulated log stretch per column, in nats.
    pub fn log_norms(&self) -> &[f64] {
        &self.log_norms
    }

    /// `max |⟨e_i, e_j⟩ − δ_ij|` over the basis columns.
    pub fn orthonormality_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let dot: f64 = self
                    .column(i)
                    .iter()
                    .zip(self.column(j))
                    .map(|(a, b)| a * b)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((dot - target).abs());
            }
        }
        err
    }
}

/// Modified Gram–Schmidt with one reorthogonalization pass. Returns the
/// diagonal of the triangular factor.
fn orthonormalize(basis: &mut [f64], dim: usize) -> Result<Vec<f64>> {
    let mut diag = vec![0.0; dim];
    for j in 0..dim {
        for _pass in 0..2 {
            for i in 0..j {
                let (head, tail) = basis.split_at_mut(j * dim);
                let qi = &head[i * dim..(i + 1) * dim];
                let vj = &mut tail[..dim];
                let dot: f64 = qi.iter().zip(vj.iter()).map(|(a, b)| a * b).sum();
                for (v, q) in vj.iter_mut().zip(qi) {
                    *v -= dot * q;
                }
            }
        }
        let col = &mut basis[j * dim..(j + 1) * dim];
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm >= DEGENERATE_STRETCH) {
            return Err(Error::NumericalDegeneracy(format!(
                "tangent column {j} collapsed (stretch {norm:e})"
            )));
        }
        col.iter_mut().for_each(|v| *v /= norm);
        diag[j] = norm;
    }
    Ok(diag)
}

impl MapSpec {
    /// Pushes the frame through the derivative, re-orthonormalizes and adds
    /// the log of each column's stretch to `log_norms`.
    pub fn tangent_step(&self, frame: &TangentFrame) -> Result<TangentFrame> {
        let d = self.dim();
        if frame.dim != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: frame.dim,
            });
        }
        let jac = self.derivative();
        let mut next = TangentFrame {
            dim: d,
            basis: vec![0.0; d * d],
            log_norms: frame.log_norms.clone(),
        };
        tangent_push(&jac, frame, &mut next)?;
        Ok(next)
    }
}

/// Allocation-free core of [`MapSpec::tangent_step`]; `out` must have the
/// same dimension as `frame`.
pub(crate) fn tangent_push(jac: &[f64], frame: &TangentFrame, out: &mut TangentFrame) -> Result<()> {
    let d = frame.dim;
    for j in 0..d {
        let col = frame.column(j);
        for i in 0..d {
            out.basis[j * d + i] = (0..d).map(|k| jac[i * d + k] * col[k]).sum();
        }
    }
    let diag = orthonormalize(&mut out.basis, d)?;
    for (acc, (prev, s)) in out
        .log_norms
        .iter_mut()
        .zip(frame.log_norms.iter().zip(diag))
    {
        *acc = prev + s.ln();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_one_step() {
        let f = MapSpec::doubling()
            .tangent_step(&TangentFrame::identity(1))
            .unwrap();
        assert!((f.log_norms()[0] - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn random_frame_is_orthonormal() {
        let f = TangentFrame::random(4, 7).unwrap();
        assert!(f.orthonormality_error() < 1e-12);
    }

    #[test]
    fn cat_map_rates() {
        let map = MapSpec::cat_map();
        let mut f = TangentFrame::identity(2);
        let k = 2000;
        for _ in 0..k {
            f = map.tangent_step(&f).unwrap();
            assert!(f.orthonormality_error() < 1e-12);
        }
        let rate = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((f.log_norms()[0] / k as f64 - rate).abs() < 1e-3);
        assert!((f.log_norms()[1] / k as f64 + rate).abs() < 1e-3);
    }

    #[test]
    fn dimension_checked() {
        assert!(MapSpec::cat_map()
            .tangent_step(&TangentFrame::identity(1))
            .is_err());
    }
}
