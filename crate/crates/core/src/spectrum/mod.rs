//! Empirical measures, pointwise dimensions and the recurrence spectrum.

mod dims;
mod measure;

pub use dims::{
    box_dimension, geometric_grid, linear_entropy, point_profile, pointwise_dim, spectrum_curve, youngs_check,
    BoxDimension, PointProfile, PointwiseDim, QDiagnostics, SpectrumCurve, YoungsReport, ESS_SUP_PERCENTILE,
    MIN_SPECTRUM_POINTS, MIN_USABLE_RADII, SATURATION_DIVISOR,
};
pub use measure::{EmpiricalMeasure, MeasureInfo, MIN_MEASURE_POINTS};
