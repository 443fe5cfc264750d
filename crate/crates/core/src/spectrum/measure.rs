use serde::Serialize;

use crate::dynamics::{Orbit, TorusPoint};
use crate::error::{Error, Result};
use crate::recurrence::Ball;

/// Smallest orbit accepted as an empirical measure.
pub const MIN_MEASURE_POINTS: usize = 1_000;

/// The uniform measure on a finite orbit, with a sorted uniform-grid index.
///
/// Ball masses are exact visit counts; the index only narrows down which
/// points have to be compared.
#[derive(Debug, Clone)]
pub struct EmpiricalMeasure {
    dim: usize,
    cells: u64,
    /// `(cell key, point)` sorted by key.
    entries: Vec<(u64, TorusPoint)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureInfo {
    pub points: usize,
    pub dim: usize,
    pub cell_size: f64,
}

impl EmpiricalMeasure {
    /// Indexes the orbit on a grid with cells of side at least `cell`.
    pub fn new(orbit: &Orbit, cell: f64) -> Result<Self> {
        let pts = orbit.points();
        if pts.len() < MIN_MEASURE_POINTS {
            return Err(Error::param(format!(
                "empirical measure needs at least {MIN_MEASURE_POINTS} points, got {}",
                pts.len()
            )));
        }
        if !(cell > 0.0 && cell <= 1.0) {
            return Err(Error::param(format!("cell size must lie in (0, 1], got {cell}")));
        }
        let dim = orbit.dim();
        // Keys must fit in u64: cells^dim < 2^64.
        let cap = match dim {
            1 => 1u64 << 40,
            2 => 1 << 24,
            _ => 1 << 15,
        };
        let cells = ((1.0 / cell).floor() as u64).clamp(1, cap);
        let mut entries: Vec<(u64, TorusPoint)> = pts
            .iter()
            .map(|p| (key_of(p, cells), *p))
            .collect();
        entries.sort_by_key(|e| e.0);
        Ok(Self { dim, cells, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn info(&self) -> MeasureInfo {
        MeasureInfo {
            points: self.len(),
            dim: self.dim,
            cell_size: 1.0 / self.cells as f64,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = &TorusPoint> {
        self.entries.iter().map(|e| &e.1)
    }

    /// `#{k : x_k ∈ B} / N`.
    pub fn ball_mass(&self, ball: &Ball) -> f64 {
        self.ball_count(ball) as f64 / self.len() as f64
    }

    pub fn ball_count(&self, ball: &Ball) -> usize {
        let c = ball.center().coords();
        let r = ball.radius();
        let m = self.cells;
        // Per axis: the cell indices touched, as at most two contiguous runs.
        let runs: Vec<Vec<(u64, u64)>> = (0..self.dim).map(|i| axis_runs(c[i], r, m)).collect();
        let mut count = 0;
        let mut visit = |prefix: u64| {
            // prefix holds the key contribution of axes 1..dim.
            for &(a, b) in &runs[0] {
                let lo = self.entries.partition_point(|e| e.0 < prefix + a);
                let hi = self.entries.partition_point(|e| e.0 <= prefix + b);
                count += self.entries[lo..hi]
                    .iter()
                    .filter(|e| ball.contains(&e.1))
                    .count();
            }
        };
        let mut stack = vec![(1usize, 0u64, 1u64)];
        while let Some((axis, prefix, weight)) = stack.pop() {
            if axis == self.dim {
                visit(prefix);
                continue;
            }
            let w = weight * m;
            for &(a, b) in &runs[axis] {
                for idx in a..=b {
                    stack.push((axis + 1, prefix + idx * w, w));
                }
            }
        }
        count
    }

    /// Linear scan over all points; the reference for [`Self::ball_mass`].
    pub fn ball_mass_brute_force(&self, ball: &Ball) -> f64 {
        self.entries.iter().filter(|e| ball.contains(&e.1)).count() as f64 / self.len() as f64
    }
}

fn cell_index(x: f64, cells: u64) -> u64 {
    ((x * cells as f64).floor() as u64).min(cells - 1)
}

fn key_of(p: &TorusPoint, cells: u64) -> u64 {
    let mut key = 0;
    let mut w = 1;
    for &c in p.coords() {
        key += cell_index(c, cells) * w;
        w *= cells;
    }
    key
}

/// Cells within `r` of `c` on one circle axis, as inclusive runs.
fn axis_runs(c: f64, r: f64, cells: u64) -> Vec<(u64, u64)> {
    let m = cells as f64;
    let lo = ((c - r) * m).floor() - 1.0;
    let hi = ((c + r) * m).floor() + 1.0;
    if hi - lo + 1.0 >= m {
        return vec![(0, cells - 1)];
    }
    let lo_w = lo.rem_euclid(m) as u64;
    let hi_w = hi.rem_euclid(m) as u64;
    if lo_w <= hi_w {
        vec![(lo_w, hi_w)]
    } else {
        vec![(lo_w, cells - 1), (0, hi_w)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{typical_orbit, MapSpec};

    #[test]
    fn runs_wrap_around() {
        assert_eq!(axis_runs(0.5, 0.01, 10), vec![(3, 6)]);
        assert_eq!(axis_runs(0.0, 0.01, 10), vec![(8, 9), (0, 1)]);
        assert_eq!(axis_runs(0.5, 0.4, 10), vec![(0, 9)]);
    }

    #[test]
    fn indexed_equals_brute_force() {
        let orbit = typical_orbit(&MapSpec::cat_map(), 20_000, 5).unwrap();
        let mu = EmpiricalMeasure::new(&orbit, 0.01).unwrap();
        for (i, &(x, y, r)) in [(0.0, 0.0, 0.05), (0.99, 0.5, 0.013), (0.3, 0.7, 0.2), (0.5, 0.001, 0.004)]
            .iter()
            .enumerate()
        {
            let b = Ball::new(TorusPoint::new(&[x, y]).unwrap(), r).unwrap();
            assert_eq!(mu.ball_mass(&b), mu.ball_mass_brute_force(&b), "query {i}");
        }
    }

    #[test]
    fn dirac_mass() {
        let p = TorusPoint::new(&[0.0, 0.0]).unwrap();
        let mu = EmpiricalMeasure::new(&Orbit::constant(p, 2_000), 0.01).unwrap();
        let b = Ball::new(TorusPoint::new(&[0.99, 0.005]).unwrap(), 0.02).unwrap();
        assert_eq!(mu.ball_mass(&b), 1.0);
    }

    #[test]
    fn short_orbit_rejected() {
        let orbit = typical_orbit(&MapSpec::cat_map(), 10, 5).unwrap();
        assert!(EmpiricalMeasure::new(&orbit, 0.01).is_err());
    }
}
