use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use recur_core::dynamics::*;

fn pt(c: &[f64]) -> TorusPoint {
    TorusPoint::new(c).unwrap()
}

fn close(a: &TorusPoint, b: &TorusPoint, tol: f64) -> bool {
    a.distance(b) < tol
}

#[test]
fn apply_examples() {
    assert_eq!(MapSpec::doubling().apply(&pt(&[0.3])).unwrap().coords(), &[0.6]);
    assert_eq!(MapSpec::cat_map().apply(&pt(&[0.0, 0.0])).unwrap().coords(), &[0.0, 0.0]);
    let y = MapSpec::expanding_example().apply(&pt(&[0.5, 0.5])).unwrap();
    assert_eq!(y.coords(), &[0.5, 0.0]);
}

#[test]
fn inverse_examples() {
    let cat = MapSpec::cat_map();
    assert_eq!(cat.inverse_apply(&pt(&[0.0, 0.0])).unwrap().coords(), &[0.0, 0.0]);
    assert_eq!(cat.inverse_apply(&pt(&[0.25, 0.5])).unwrap().coords(), &[0.75, 0.75]);
    assert!(MapSpec::doubling().inverse_apply(&pt(&[0.25])).is_err());
    assert!(MapSpec::expanding_example().inverse_apply(&pt(&[0.25, 0.5])).is_err());
}

#[test]
fn orbit_examples() {
    let d = MapSpec::doubling();
    let o = d.orbit(&pt(&[0.0]), 5).unwrap();
    assert_eq!(o.points().len(), 6);
    assert!(o.points().iter().all(|p| p.coords() == [0.0]));
    let third = RationalPoint::from_fractions(&[1], 3).unwrap();
    let a = d.apply_exact(&third).unwrap();
    let b = d.apply_exact(&a).unwrap();
    assert_eq!(a, RationalPoint::from_fractions(&[2], 3).unwrap());
    assert_eq!(b, third);
}

#[test]
fn dimension_mismatch_rejected() {
    assert!(MapSpec::cat_map().apply(&pt(&[0.1])).is_err());
    assert!(MapSpec::doubling().apply(&pt(&[0.1, 0.2])).is_err());
}

#[test]
fn invertibility_round_trip_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for map in [MapSpec::cat_map(), MapSpec::product_example()] {
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let x = random_point(map.dim(), &mut rng);
            let back = map.apply(&map.inverse_apply(&x).unwrap()).unwrap();
            worst = worst.max(back.distance(&x));
        }
        assert!(worst < 1e-12, "{}: {worst}", map.id());
    }
}

#[test]
fn rational_orbits_are_periodic() {
    // Q ≤ 64, a few numerators per denominator; period bound Q².
    let maps = [MapSpec::cat_map(), MapSpec::expanding_example()];
    for q in (2..=64).step_by(7) {
        for (a, b) in [(1, 2), (q - 1, 1), (q / 2, q / 3)] {
            let x = RationalPoint::from_fractions(&[a, b], q).unwrap();
            for m in &maps {
                let (start, period) = m.exact_cycle(&x, (q * q) as usize + 1).unwrap().expect("cycle");
                assert!(start + period <= (q * q) as usize + 1);
                assert!(period >= 1);
                // Automorphisms are bijective on rational points: purely periodic.
                if m.is_invertible() {
                    assert_eq!(start, 0);
                }
            }
        }
    }
}

#[test]
fn float_orbit_tracks_exact_orbit_briefly() {
    // Dyadic points stay dyadic; the float orbit is exact for a few steps.
    let cat = MapSpec::cat_map();
    let x = RationalPoint::new(vec![
        BigRational::new(BigInt::from(3), BigInt::from(16)),
        BigRational::new(BigInt::from(5), BigInt::from(64)),
    ])
    .unwrap();
    let mut e = x.clone();
    let mut f = x.to_torus_point();
    for _ in 0..10 {
        e = cat.apply_exact(&e).unwrap();
        f = cat.apply(&f).unwrap();
        assert_eq!(e.to_torus_point(), f);
    }
}

#[test]
fn exponents_of_tangent_cocycle() {
    let frame = TangentFrame::identity(1);
    let next = MapSpec::doubling().tangent_step(&frame).unwrap();
    assert!((next.log_norms()[0] - 2f64.ln()).abs() < 1e-15);
}

proptest! {
    #[test]
    fn outputs_are_canonical(a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0, d in 0.0f64..1.0) {
        for map in [MapSpec::cat_map(), MapSpec::expanding_example()] {
            let y = map.apply(&pt(&[a, b])).unwrap();
            prop_assert!(y.coords().iter().all(|&v| (0.0..1.0).contains(&v)));
        }
        let y = MapSpec::product_example().apply(&pt(&[a, b, c, d])).unwrap();
        prop_assert!(y.coords().iter().all(|&v| (0.0..1.0).contains(&v)));
        let y = MapSpec::doubling().apply(&pt(&[a])).unwrap();
        prop_assert!((0.0..1.0).contains(&y.coords()[0]));
    }

    #[test]
    fn product_acts_factorwise(a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0, d in 0.0f64..1.0) {
        let prod = MapSpec::product_example();
        let [f1, f2] = prod.factors().unwrap();
        let whole = prod.apply(&pt(&[a, b, c, d])).unwrap();
        let p = f1.apply(&pt(&[a, b])).unwrap();
        let q = f2.apply(&pt(&[c, d])).unwrap();
        prop_assert_eq!(whole, TorusPoint::join(&p, &q).unwrap());
    }

    #[test]
    fn inverse_round_trip(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let cat = MapSpec::cat_map();
        let x = pt(&[a, b]);
        prop_assert!(close(&cat.inverse_apply(&cat.apply(&x).unwrap()).unwrap(), &x, 1e-12));
    }

    #[test]
    fn estimated_cat_exponents(seed in 0u64..1000) {
        let s = recur_core::lyapunov::estimate_exponents(&MapSpec::cat_map(), &pt(&[0.1, 0.2]), 2_000, seed).unwrap();
        let l = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        prop_assert!((s.exponents()[1] - l).abs() < 1e-2);
        prop_assert!((s.exponents()[0] + l).abs() < 1e-2);
    }
}
