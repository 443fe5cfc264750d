use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::torus::{TorusPoint, MAX_DIM};
use crate::error::{Error, Result};

/// Slack used when classifying eigenvalue moduli against 1.
const UNIT_MODULUS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    #[serde(rename = "toral_auto_2d")]
    ToralAuto2d,
    #[serde(rename = "toral_endo_2d")]
    ToralEndo2d,
    #[serde(rename = "product_4d")]
    Product4d,
    #[serde(rename = "doubling_1d")]
    Doubling1d,
}

/// A validated linear map of a torus.
///
/// Construction checks hyperbolicity (automorphisms), expansion
/// (endomorphisms) and factor kinds (products), so every value of this type
/// satisfies its invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapSpecRepr", into = "MapSpecRepr")]
pub struct MapSpec(Repr);

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Auto(IntMatrix),
    Endo(IntMatrix),
    Product(Box<[MapSpec; 2]>),
    Doubling,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum MapSpecRepr {
    #[serde(rename = "toral_auto_2d")]
    ToralAuto2d { matrix: IntMatrix },
    #[serde(rename = "toral_endo_2d")]
    ToralEndo2d { matrix: IntMatrix },
    #[serde(rename = "product_4d")]
    Product4d { factors: Vec<MapSpec> },
    #[serde(rename = "doubling_1d")]
    Doubling1d,
}

impl TryFrom<MapSpecRepr> for MapSpec {
    type Error = Error;

    fn try_from(repr: MapSpecRepr) -> Result<Self> {
        match repr {
            MapSpecRepr::ToralAuto2d { matrix } => MapSpec::toral_auto(matrix),
            MapSpecRepr::ToralEndo2d { matrix } => MapSpec::toral_endo(matrix),
            MapSpecRepr::Product4d { factors } => {
                let [a, b]: [MapSpec; 2] = factors.try_into().map_err(|f: Vec<MapSpec>| {
                    Error::InvalidMap(format!("product_4d needs exactly 2 factors, got {}", f.len()))
                })?;
                MapSpec::product(a, b)
            }
            MapSpecRepr::Doubling1d => Ok(MapSpec::doubling()),
        }
    }
}

impl From<MapSpec> for MapSpecRepr {
    fn from(m: MapSpec) -> Self {
        match m.0 {
            Repr::Auto(matrix) => MapSpecRepr::ToralAuto2d { matrix },
            Repr::Endo(matrix) => MapSpecRepr::ToralEndo2d { matrix },
            Repr::Product(f) => {
                let [a, b] = *f;
                MapSpecRepr::Product4d { factors: vec![a, b] }
            }
            Repr::Doubling => MapSpecRepr::Doubling1d,
        }
    }
}

impl MapSpec {
    /// Hyperbolic automorphism of `T^2`: `|det| = 1` and `|trace| > 2`.
    pub fn toral_auto(matrix: IntMatrix) -> Result<Self> {
        let det = matrix.det();
        if det.abs() != 1 {
            return Err(Error::InvalidMap(format!(
                "toral_auto_2d requires |det| = 1, got det = {det}"
            )));
        }
        let tr = matrix.trace();
        if tr.abs() <= 2 {
            return Err(Error::InvalidMap(format!(
                "toral_auto_2d requires |trace| > 2 (hyperbolicity), got trace = {tr}"
            )));
        }
        Ok(MapSpec(Repr::Auto(matrix)))
    }

    /// Expanding endomorphism of `T^2`: both eigenvalue moduli exceed 1.
    pub fn toral_endo(matrix: IntMatrix) -> Result<Self> {
        let [small, _] = matrix.eigenvalues();
        if small.norm() <= 1.0 + UNIT_MODULUS_TOL {
            return Err(Error::InvalidMap(format!(
                "toral_endo_2d requires all eigenvalue moduli > 1, smallest is {:.6}",
                small.norm()
            )));
        }
        Ok(MapSpec(Repr::Endo(matrix)))
    }

    pub fn product(a: MapSpec, b: MapSpec) -> Result<Self> {
        if a.kind() != MapKind::ToralAuto2d || b.kind() != MapKind::ToralAuto2d {
            return Err(Error::InvalidMap(
                "product_4d requires both factors to be toral_auto_2d".into(),
            ));
        }
        Ok(MapSpec(Repr::Product(Box::new([a, b]))))
    }

    pub fn doubling() -> Self {
        MapSpec(Repr::Doubling)
    }

    /// Arnold's cat map `[[2,1],[1,1]]`.
    pub fn cat_map() -> Self {
        MapSpec(Repr::Auto(IntMatrix::new(2, 1, 1, 1)))
    }

    /// The expanding map `[[6,3],[3,3]]` whose return-time slope lies
    /// strictly between the two Lyapunov bounds.
    pub fn expanding_example() -> Self {
        MapSpec(Repr::Endo(IntMatrix::new(6, 3, 3, 3)))
    }

    /// The cat map times `[[3,2],[1,1]]` on `T^4`.
    pub fn product_example() -> Self {
        MapSpec(Repr::Product(Box::new([
            MapSpec::cat_map(),
            MapSpec(Repr::Auto(IntMatrix::new(3, 2, 1, 1))),
        ])))
    }

    pub fn kind(&self) -> MapKind {
        match self.0 {
            Repr::Auto(_) => MapKind::ToralAuto2d,
            Repr::Endo(_) => MapKind::ToralEndo2d,
            Repr::Product(_) => MapKind::Product4d,
            Repr::Doubling => MapKind::Doubling1d,
        }
    }

    pub fn matrix(&self) -> Option<&IntMatrix> {
        match &self.0 {
            Repr::Auto(m) | Repr::Endo(m) => Some(m),
            _ => None,
        }
    }

    pub fn factors(&self) -> Option<&[MapSpec; 2]> {
        match &self.0 {
            Repr::Product(f) => Some(f),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self.0 {
            Repr::Auto(_) | Repr::Endo(_) => 2,
            Repr::Product(_) => 4,
            Repr::Doubling => 1,
        }
    }

    pub fn is_invertible(&self) -> bool {
        matches!(self.0, Repr::Auto(_) | Repr::Product(_))
    }

    /// Short human-readable identifier, e.g. `toral_auto_2d[[2,1],[1,1]]`.
    pub fn id(&self) -> String {
        fn mat(m: &IntMatrix) -> String {
            let [[a, b], [c, d]] = m.rows();
            format!("[[{a},{b}],[{c},{d}]]")
        }
        match &self.0 {
            Repr::Auto(m) => format!("toral_auto_2d{}", mat(m)),
            Repr::Endo(m) => format!("toral_endo_2d{}", mat(m)),
            Repr::Product(f) => format!("product_4d({}x{})", f[0].id(), f[1].id()),
            Repr::Doubling => "doubling_1d".to_string(),
        }
    }

    pub(crate) fn check_dim(&self, x: &TorusPoint) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// `f(x)`: `Ax mod 1`, `2x mod 1`, or factorwise on products.
    pub fn apply(&self, x: &TorusPoint) -> Result<TorusPoint> {
        self.check_dim(x)?;
        Ok(self.step(x))
    }

    /// `f⁻¹(x)` for invertible kinds.
    pub fn inverse_apply(&self, x: &TorusPoint) -> Result<TorusPoint> {
        self.check_dim(x)?;
        if !self.is_invertible() {
            return Err(Error::Unsupported(format!(
                "{} is not invertible",
                self.id()
            )));
        }
        Ok(self.step_inverse(x))
    }

    /// Unchecked forward step; `x` must have the map's dimension.
    #[inline]
    pub(crate) fn step(&self, x: &TorusPoint) -> TorusPoint {
        let c = x.raw();
        match &self.0 {
            Repr::Auto(m) | Repr::Endo(m) => {
                let [[a, b], [cc, d]] = m.to_f64();
                TorusPoint::from_raw([a * c[0] + b * c[1], cc * c[0] + d * c[1], 0.0, 0.0], 2)
            }
            Repr::Doubling => TorusPoint::from_raw([2.0 * c[0], 0.0, 0.0, 0.0], 1),
            Repr::Product(f) => {
                let [[a, b], [cc, d]] = f[0].matrix().expect("product factor").to_f64();
                let [[e, g], [h, k]] = f[1].matrix().expect("product factor").to_f64();
                TorusPoint::from_raw(
                    [
                        a * c[0] + b * c[1],
                        cc * c[0] + d * c[1],
                        e * c[2] + g * c[3],
                        h * c[2] + k * c[3],
                    ],
                    4,
                )
            }
        }
    }

    /// Unchecked inverse step; the map must be invertible.
    #[inline]
    pub(crate) fn step_inverse(&self, x: &TorusPoint) -> TorusPoint {
        match &self.0 {
            Repr::Auto(m) => {
                let inv = MapSpec(Repr::Auto(m.inverse().expect("|det| = 1")));
                inv.step(x)
            }
            Repr::Product(f) => {
                let (a, b) = x.split().expect("4-d point");
                let a = f[0].step_inverse(&a);
                let b = f[1].step_inverse(&b);
                TorusPoint::join(&a, &b).expect("2-d factors")
            }
            _ => unreachable!("step_inverse on a non-invertible map"),
        }
    }

    /// `n` forward steps starting at `x`, point by point mod 1.
    pub fn orbit(&self, x: &TorusPoint, n: usize) -> Result<super::Orbit> {
        self.check_dim(x)?;
        if n == 0 {
            return Err(Error::param("orbit length n must be at least 1"));
        }
        let mut points = Vec::with_capacity(n + 1);
        let mut p = *x;
        points.push(p);
        for _ in 0..n {
            p = self.step(&p);
            points.push(p);
        }
        Ok(super::Orbit::from_points(points))
    }

    /// The (constant) derivative as a row-major `d×d` matrix.
    pub fn derivative(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d * d];
        match &self.0 {
            Repr::Auto(m) | Repr::Endo(m) => {
                let [[a, b], [c, dd]] = m.to_f64();
                out.copy_from_slice(&[a, b, c, dd]);
            }
            Repr::Doubling => out[0] = 2.0,
            Repr::Product(f) => {
                for (block, factor) in f.iter().enumerate() {
                    let m = factor.matrix().expect("product factor").to_f64();
                    for i in 0..2 {
                        for j in 0..2 {
                            out[(2 * block + i) * 4 + 2 * block + j] = m[i][j];
                        }
                    }
                }
            }
        }
        out
    }
}

const _: () = assert!(MAX_DIM == 4);

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> TorusPoint {
        TorusPoint::new(c).unwrap()
    }

    #[test]
    fn doubling_step() {
        let y = MapSpec::doubling().apply(&pt(&[0.3])).unwrap();
        assert!((y.coords()[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn cat_fixes_origin() {
        let y = MapSpec::cat_map().apply(&pt(&[0.0, 0.0])).unwrap();
        assert_eq!(y.coords(), &[0.0, 0.0]);
    }

    #[test]
    fn expanding_step_by_hand() {
        // (6·0.5 + 3·0.5, 3·0.5 + 3·0.5) = (4.5, 3.0) ≡ (0.5, 0.0)
        let y = MapSpec::expanding_example().apply(&pt(&[0.5, 0.5])).unwrap();
        assert_eq!(y.coords(), &[0.5, 0.0]);
    }

    #[test]
    fn cat_inverse_by_hand() {
        // A⁻¹ = [[1,−1],[−1,2]]: (0.25 − 0.5, −0.25 + 1.0) ≡ (0.75, 0.75)
        let y = MapSpec::cat_map().inverse_apply(&pt(&[0.25, 0.5])).unwrap();
        assert_eq!(y.coords(), &[0.75, 0.75]);
        assert_eq!(
            MapSpec::cat_map().inverse_apply(&pt(&[0.0, 0.0])).unwrap().coords(),
            &[0.0, 0.0]
        );
    }

    #[test]
    fn doubling_has_no_inverse() {
        let err = MapSpec::doubling().inverse_apply(&pt(&[0.3])).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = MapSpec::cat_map().apply(&pt(&[0.3])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn validation() {
        assert!(MapSpec::toral_auto(IntMatrix::identity()).is_err());
        assert!(MapSpec::toral_auto(IntMatrix::new(1, 1, 0, 1)).is_err());
        assert!(MapSpec::toral_auto(IntMatrix::new(6, 3, 3, 3)).is_err());
        assert!(MapSpec::toral_endo(IntMatrix::new(2, 1, 1, 1)).is_err());
        assert!(MapSpec::toral_endo(IntMatrix::new(1, -2, 2, 1)).is_ok());
        assert!(MapSpec::product(MapSpec::cat_map(), MapSpec::doubling()).is_err());
        assert!(MapSpec::product(MapSpec::cat_map(), MapSpec::cat_map()).is_ok());
    }

    #[test]
    fn json_forms() {
        let m: MapSpec =
            serde_json::from_str(r#"{"kind":"toral_auto_2d","matrix":[[2,1],[1,1]]}"#).unwrap();
        assert_eq!(m, MapSpec::cat_map());
        let d: MapSpec = serde_json::from_str(r#"{"kind":"doubling_1d"}"#).unwrap();
        assert_eq!(d, MapSpec::doubling());
        let p: MapSpec = serde_json::from_str(
            r#"{"kind":"product_4d","factors":[
                {"kind":"toral_auto_2d","matrix":[[2,1],[1,1]]},
                {"kind":"toral_auto_2d","matrix":[[3,2],[1,1]]}]}"#,
        )
        .unwrap();
        assert_eq!(p.kind(), MapKind::Product4d);
        let back: MapSpec = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert_eq!(
            serde_json::to_string(&MapSpec::doubling()).unwrap(),
            r#"{"kind":"doubling_1d"}"#
        );
        assert!(serde_json::from_str::<MapSpec>(
            r#"{"kind":"toral_auto_2d","matrix":[[1,0],[0,1]]}"#
        )
        .is_err());
    }

    #[test]
    fn product_is_componentwise() {
        let p = MapSpec::product(MapSpec::cat_map(), MapSpec::toral_auto(IntMatrix::new(3, 2, 1, 1)).unwrap()).unwrap();
        let x = pt(&[0.11, 0.27, 0.61, 0.93]);
        let (a, b) = x.split().unwrap();
        let fa = p.factors().unwrap()[0].apply(&a).unwrap();
        let fb = p.factors().unwrap()[1].apply(&b).unwrap();
        assert_eq!(p.apply(&x).unwrap(), TorusPoint::join(&fa, &fb).unwrap());
    }
}
