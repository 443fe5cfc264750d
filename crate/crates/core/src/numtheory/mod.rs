//! Arithmetic behind the expanding-map example: continued fractions and
//! rotation density, the covering-time certificate, exact periodic-point
//! counts, and the Borel–Cantelli lower-bound experiment.

mod borel_cantelli;
mod covering;
mod periodic;
mod rotation;

pub use borel_cantelli::{borel_cantelli_lower, BorelCantelliReport, BorelCantelliRow};
pub use covering::{covering_time, fiber_norm_factor, CoveringCertificate, COVERING_CONSTANT};
pub use periodic::{
    enumerate_periodic_points, matrix_power, periodic_count_from_eigenvalues, periodic_points,
    BigMatrix2, PeriodicKind, MAX_PERIOD,
};
pub use rotation::{
    convergents, distinct_gaps, golden_theta, rotation_density, rotation_gaps, Convergent,
    MAX_CONVERGENTS,
};
