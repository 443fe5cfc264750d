//! Return times of balls, recurrence dimensions and their number-theoretic
//! side results for linear toral maps.

pub mod dynamics;
pub mod error;
pub mod lyapunov;
pub mod numtheory;
pub mod recurrence;
pub mod seeds;
pub mod spectrum;
pub mod stats;

pub use error::{Error, Result};
