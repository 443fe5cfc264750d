//! Lyapunov spectra of linear toral maps: closed form from eigenvalues,
//! numerical estimation through the tangent cocycle, and the recurrence
//! bounds built from the four extreme exponents.

use serde::Serialize;

use crate::dynamics::{tangent_push, MapKind, MapSpec, TangentFrame, TorusPoint};
use crate::error::{Error, Result};

/// Exponents with `|λ| < ZERO_EXPONENT` are classified as zero.
pub const ZERO_EXPONENT: f64 = 1e-9;

/// Minimum number of cocycle iterations accepted by [`estimate_exponents`].
pub const MIN_ITERS: usize = 1_000;

/// Lyapunov exponents in nats per iteration, sorted ascending, with the
/// derived constants:
///
/// * `Λᵘ` (`lambda_u_max`): the largest exponent, when positive;
/// * `λᵘ` (`lambda_u_min`): the smallest positive exponent;
/// * `λˢ` (`lambda_s_max`): the largest negative exponent;
/// * `Λˢ` (`lambda_s_min`): the smallest exponent, when negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentSpectrum {
    exponents: Vec<f64>,
    lambda_u_max: Option<f64>,
    lambda_u_min: Option<f64>,
    lambda_s_max: Option<f64>,
    lambda_s_min: Option<f64>,
}

impl ExponentSpectrum {
    pub fn from_exponents(mut exponents: Vec<f64>) -> Self {
        exponents.sort_by(f64::total_cmp);
        let pos = exponents.iter().copied().filter(|&l| l >= ZERO_EXPONENT);
        let neg = exponents.iter().copied().filter(|&l| l <= -ZERO_EXPONENT);
        let lambda_u_min = pos.clone().reduce(f64::min);
        let lambda_u_max = pos.reduce(f64::max);
        let lambda_s_max = neg.clone().reduce(f64::max);
        let lambda_s_min = neg.reduce(f64::min);
        Self {
            exponents,
            lambda_u_max,
            lambda_u_min,
            lambda_s_max,
            lambda_s_min,
        }
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn lambda_u_max(&self) -> Option<f64> {
        self.lambda_u_max
    }

    pub fn lambda_u_min(&self) -> Option<f64> {
        self.lambda_u_min
    }

    pub fn lambda_s_max(&self) -> Option<f64> {
        self.lambda_s_max
    }

    pub fn lambda_s_min(&self) -> Option<f64> {
        self.lambda_s_min
    }

    /// No exponent is (numerically) zero.
    pub fn is_hyperbolic(&self) -> bool {
        self.exponents.iter().all(|l| l.abs() >= ZERO_EXPONENT)
    }

    pub fn sum(&self) -> f64 {
        self.exponents.iter().sum()
    }
}

/// Logs of eigenvalue moduli of the defining matrix (union over factors for
/// products, `log 2` for doubling).
pub fn exact_exponents(map: &MapSpec) -> ExponentSpectrum {
    fn linear(map: &MapSpec) -> Vec<f64> {
        let m = map.matrix().expect("linear map");
        m.eigenvalues().iter().map(|z| z.norm().ln()).collect()
    }
    let exps = match map.kind() {
        MapKind::Doubling1d => vec![2f64.ln()],
        MapKind::ToralAuto2d | MapKind::ToralEndo2d => linear(map),
        MapKind::Product4d => map
            .factors()
            .expect("product")
            .iter()
            .flat_map(linear)
            .collect(),
    };
    ExponentSpectrum::from_exponents(exps)
}

/// Cocycle estimate: run the tangent frame `iters` steps from a seeded random
/// orthonormal frame, re-orthonormalizing every step, and divide the
/// accumulated log stretches by `iters`.
///
/// The maps are linear so the cocycle does not depend on the base orbit; `x`
/// only fixes the dimension.
pub fn estimate_exponents(
    map: &MapSpec,
    x: &TorusPoint,
    iters: usize,
    seed: u64,
) -> Result<ExponentSpectrum> {
    if iters < MIN_ITERS {
        return Err(Error::param(format!(
            "iters must be at least {MIN_ITERS}, got {iters}"
        )));
    }
    if x.dim() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            got: x.dim(),
        });
    }
    let jac = map.derivative();
    let mut frame = TangentFrame::random(map.dim(), seed)?;
    let mut scratch = frame.clone();
    for _ in 0..iters {
        tangent_push(&jac, &frame, &mut scratch)?;
        std::mem::swap(&mut frame, &mut scratch);
    }
    let n = iters as f64;
    Ok(ExponentSpectrum::from_exponents(
        frame.log_norms().iter().map(|l| l / n).collect(),
    ))
}

/// The two recurrence-rate bounds implied by a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremBounds {
    /// `1/Λᵘ − 1/Λˢ`; the stable term is dropped without negative exponents.
    pub lower: f64,
    /// `1/λᵘ − 1/λˢ` for hyperbolic spectra, same convention; `None` otherwise.
    pub upper: Option<f64>,
}

pub fn theorem_bounds(spec: &ExponentSpectrum) -> Result<TheoremBounds> {
    let big_u = spec.lambda_u_max.ok_or(Error::UndefinedBounds)?;
    let small_u = spec.lambda_u_min.ok_or(Error::UndefinedBounds)?;
    let lower = 1.0 / big_u - spec.lambda_s_min.map_or(0.0, |l| 1.0 / l);
    let upper = spec
        .is_hyperbolic()
        .then(|| 1.0 / small_u - spec.lambda_s_max.map_or(0.0, |l| 1.0 / l));
    Ok(TheoremBounds { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::IntMatrix;

    const CAT_RATE: f64 = 0.962_423_650_119_206_9; // ln((3+√5)/2)

    #[test]
    fn constants_from_exponents() {
        let s = ExponentSpectrum::from_exponents(vec![1.3, -0.9, 0.9, -1.3]);
        assert_eq!(s.exponents(), &[-1.3, -0.9, 0.9, 1.3]);
        assert_eq!(s.lambda_u_max(), Some(1.3));
        assert_eq!(s.lambda_u_min(), Some(0.9));
        assert_eq!(s.lambda_s_max(), Some(-0.9));
        assert_eq!(s.lambda_s_min(), Some(-1.3));
    }

    #[test]
    fn zero_exponent_is_not_hyperbolic() {
        let s = ExponentSpectrum::from_exponents(vec![0.5, 1e-12, -0.5]);
        assert!(!s.is_hyperbolic());
        let b = theorem_bounds(&s).unwrap();
        assert!(b.upper.is_none());
        assert!((b.lower - 4.0).abs() < 1e-12);
    }

    #[test]
    fn no_positive_exponent() {
        let s = ExponentSpectrum::from_exponents(vec![-0.5, -0.1]);
        assert_eq!(theorem_bounds(&s).unwrap_err(), Error::UndefinedBounds);
    }

    #[test]
    fn exact_cat() {
        let s = exact_exponents(&MapSpec::cat_map());
        assert!((s.exponents()[1] - CAT_RATE).abs() < 1e-12);
        assert!((s.exponents()[0] + CAT_RATE).abs() < 1e-12);
        assert!(s.sum().abs() < 1e-12);
    }

    #[test]
    fn exact_expanding_closed_forms() {
        let s = exact_exponents(&MapSpec::expanding_example());
        let lo = ((9.0 - 3.0 * 5f64.sqrt()) / 2.0).ln();
        let hi = ((9.0 + 3.0 * 5f64.sqrt()) / 2.0).ln();
        assert!((s.lambda_u_min().unwrap() - lo).abs() < 1e-12);
        assert!((s.lambda_u_max().unwrap() - hi).abs() < 1e-12);
        assert!((s.sum() - 9f64.ln()).abs() < 1e-12);
        assert!((lo - 0.136188).abs() < 1e-6);
        // Quoted to six places the larger exponent rounds to 2.061036.
        assert!((hi - 2.061037).abs() < 2e-6);
    }

    #[test]
    fn estimate_doubling_is_exact() {
        let s = estimate_exponents(
            &MapSpec::doubling(),
            &TorusPoint::new(&[0.1]).unwrap(),
            1000,
            1,
        )
        .unwrap();
        assert!((s.exponents()[0] - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn estimate_rejects_short_runs() {
        let x = TorusPoint::new(&[0.1, 0.2]).unwrap();
        assert!(estimate_exponents(&MapSpec::cat_map(), &x, 999, 1).is_err());
    }

    #[test]
    fn bounds_examples() {
        let cat = theorem_bounds(&exact_exponents(&MapSpec::cat_map())).unwrap();
        assert!((cat.lower - 2.078087).abs() < 1e-6);
        assert!((cat.upper.unwrap() - 2.078087).abs() < 1e-6);

        let exp = theorem_bounds(&exact_exponents(&MapSpec::expanding_example())).unwrap();
        assert!((exp.lower - 0.485193).abs() < 1e-6);
        // 1/0.136188 = 7.342797 uses the rounded exponent; the exact value is
        // 7.342756.
        assert!((exp.upper.unwrap() - 7.342756).abs() < 1e-6);
        assert!((exp.upper.unwrap() - 7.342797).abs() < 1e-4);

        let prod = MapSpec::product(MapSpec::cat_map(), MapSpec::cat_map()).unwrap();
        let pb = theorem_bounds(&exact_exponents(&prod)).unwrap();
        assert!((pb.lower - 2.078087).abs() < 1e-6);
        assert!((pb.upper.unwrap() - 2.078087).abs() < 1e-6);

        let dbl = theorem_bounds(&exact_exponents(&MapSpec::doubling())).unwrap();
        assert!((dbl.lower - 1.0 / 2f64.ln()).abs() < 1e-12);
        assert_eq!(dbl.upper, Some(dbl.lower));

        let mixed = MapSpec::product(
            MapSpec::cat_map(),
            MapSpec::toral_auto(IntMatrix::new(3, 2, 1, 1)).unwrap(),
        )
        .unwrap();
        let mb = theorem_bounds(&exact_exponents(&mixed)).unwrap();
        assert!(mb.lower < mb.upper.unwrap());
    }
}
