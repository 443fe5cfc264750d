use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recur_core::dynamics::*;
use recur_core::recurrence::Ball;
use recur_core::spectrum::*;

#[test]
fn bucketed_mass_equals_brute_force() {
    let orbit = typical_orbit(&MapSpec::cat_map(), 50_000, 2).unwrap();
    let mu = EmpiricalMeasure::new(&orbit, 0.005).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1_000 {
        let x = random_point(2, &mut rng);
        let r = 10f64.powf(-3.0 + 2.3 * rng.gen::<f64>());
        let b = Ball::new(x, r).unwrap();
        assert_eq!(mu.ball_mass(&b), mu.ball_mass_brute_force(&b));
    }
}

#[test]
fn bucketed_mass_in_four_dimensions() {
    let orbit = typical_orbit(&MapSpec::product_example(), 20_000, 2).unwrap();
    let mu = EmpiricalMeasure::new(&orbit, 0.05).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let b = Ball::new(random_point(4, &mut rng), 0.05 + 0.15 * rng.gen::<f64>()).unwrap();
        assert_eq!(mu.ball_mass(&b), mu.ball_mass_brute_force(&b));
    }
}

#[test]
fn lebesgue_mass_of_a_ball() {
    let n = 1_000_000;
    let orbit = typical_orbit(&MapSpec::cat_map(), n, 1).unwrap();
    let mu = EmpiricalMeasure::new(&orbit, 0.05).unwrap();
    let m = mu.ball_mass(&Ball::new(TorusPoint::new(&[0.4, 0.6]).unwrap(), 0.05).unwrap());
    let se = (0.01 * 0.99 / n as f64).sqrt();
    assert!((m - 0.01).abs() < 3.0 * se, "mass {m}");
}

#[test]
fn four_balls_tile_the_torus() {
    let orbit = typical_orbit(&MapSpec::cat_map(), 10_000, 1).unwrap();
    let mu = EmpiricalMeasure::new(&orbit, 0.01).unwrap();
    // Closed balls of radius just under 1/4 at the centers of the four
    // quadrants; boundary points have measure zero for this orbit.
    let r = 0.25 - 1e-12;
    let total: f64 = [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)]
        .iter()
        .map(|&(a, b)| mu.ball_mass(&Ball::new(TorusPoint::new(&[a, b]).unwrap(), r).unwrap()))
        .sum();
    assert!((total - 1.0).abs() < 1e-3, "total {total}");
}

#[test]
fn pointwise_dimension_decreases_in_q() {
    let cat = MapSpec::cat_map();
    let orbit = typical_orbit(&cat, 200_000, 6).unwrap();
    let grid = geometric_grid(0.01, 0.2, 8).unwrap();
    let mu = EmpiricalMeasure::new(&orbit, 0.01).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..30 {
        let x = random_point(2, &mut rng);
        let prof = point_profile(&cat, &mu, &x, &grid, None, true).unwrap();
        let qs = [-1.0, -0.75, -0.5, -0.25, 0.0];
        let ds: Vec<f64> = qs.iter().map(|&q| prof.dimension(q).unwrap().d).collect();
        for w in ds.windows(2) {
            assert!(w[0] >= w[1], "{ds:?}");
        }
    }
}

#[test]
fn doubling_measure_dimension() {
    let d = MapSpec::doubling();
    let orbit = typical_orbit(&d, 200_000, 2).unwrap();
    let mu = EmpiricalMeasure::new(&orbit, 1e-3).unwrap();
    let b = box_dimension(&mu, &[1.0 / 4.0, 1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0, 1.0 / 1024.0]).unwrap();
    assert!((b.dim - 1.0).abs() < 0.1);
    let grid = geometric_grid(1e-3, 0.1, 8).unwrap();
    let pd = pointwise_dim(&d, &mu, &TorusPoint::new(&[0.3217]).unwrap(), 0.0, &grid, None).unwrap();
    assert!((pd.d - 1.0).abs() < 0.2, "{pd:?}");
}

#[test]
fn spectrum_needs_enough_points() {
    let cat = MapSpec::cat_map();
    let orbit = typical_orbit(&cat, 10_000, 6).unwrap();
    let mu = EmpiricalMeasure::new(&orbit, 0.01).unwrap();
    let grid = geometric_grid(0.01, 0.2, 8).unwrap();
    assert!(spectrum_curve(&cat, &mu, &[0.0], 10, &grid, None, 0).is_err());
}
