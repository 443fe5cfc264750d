use num_bigint::BigInt;
use proptest::prelude::*;
use recur_core::dynamics::{IntMatrix, MapSpec};
use recur_core::numtheory::*;

fn cat() -> IntMatrix {
    IntMatrix::new(2, 1, 1, 1)
}

#[test]
fn cat_periodic_counts() {
    let c = periodic_points(&cat(), 4, PeriodicKind::Auto).unwrap();
    let want: Vec<BigInt> = [1, 5, 16, 45].iter().map(|&v| BigInt::from(v)).collect();
    assert_eq!(c, want);
    // A⁴ = [[34,21],[21,13]]; det(A⁴ − I) = 33·12 − 21² = −45.
    let p4 = matrix_power(&cat(), 4).to_i128().unwrap();
    assert_eq!(p4, [[34, 21], [21, 13]]);
}

#[test]
fn expanding_fixed_points() {
    let m = IntMatrix::new(6, 3, 3, 3);
    let c = periodic_points(&m, 1, PeriodicKind::Endo).unwrap();
    // det([[5,3],[3,2]]) = 1.
    assert_eq!(c[0], BigInt::from(1));
}

#[test]
fn enumeration_matches_determinant() {
    for (m, kind) in [(cat(), PeriodicKind::Auto), (IntMatrix::new(3, 2, 1, 1), PeriodicKind::Auto)] {
        let counts = periodic_points(&m, 4, kind).unwrap();
        for p in 1..=4u32 {
            let pts = enumerate_periodic_points(&m, p).unwrap();
            assert_eq!(BigInt::from(pts.len()), counts[p as usize - 1]);
        }
    }
}

#[test]
fn enumerated_points_are_periodic_exactly() {
    let map = MapSpec::cat_map();
    for p in 1..=3u32 {
        for y in enumerate_periodic_points(&cat(), p).unwrap() {
            let mut z = y.clone();
            for _ in 0..p {
                z = map.apply_exact(&z).unwrap();
            }
            assert_eq!(z, y);
        }
    }
}

#[test]
fn golden_convergents_follow_the_recurrence() {
    let c = convergents(golden_theta(), 20).unwrap();
    for i in 2..c.len() {
        let a = c[i].quotient as i64;
        assert_eq!(c[i].p, a * c[i - 1].p + c[i - 2].p);
        assert_eq!(c[i].q, a * c[i - 1].q + c[i - 2].q);
    }
    for i in 2..c.len() {
        let ratio = c[i].q as f64 / c[i - 1].q as f64;
        assert!(ratio > 1.0 && ratio <= 2.0, "i={i} ratio={ratio}");
    }
}

#[test]
fn density_beats_the_convergent_bound() {
    let c = convergents(golden_theta(), 16).unwrap();
    for i in 2..=15 {
        let k = c[i].q as usize;
        let prev = c[i - 1].q as f64;
        assert!(rotation_density(golden_theta(), k).unwrap() < 1.0 / prev);
    }
}

#[test]
fn covering_at_one_percent() {
    let cert = covering_time(0.01).unwrap();
    assert_eq!(cert.n_formula, 5);
    assert!(cert.validates());
}

#[test]
fn covering_formula_is_monotone() {
    let mut last = 0;
    for r in [0.04, 0.02, 0.01, 0.005, 0.002, 0.001] {
        let c = covering_time(r).unwrap();
        assert!(c.n_formula >= last);
        last = c.n_formula;
    }
}

proptest! {
    #[test]
    fn three_distances(theta in 0.01f64..0.99, k in 1usize..3000) {
        let gaps = rotation_gaps(theta, k).unwrap();
        prop_assert!(distinct_gaps(&gaps, 1e-9).len() <= 3);
        prop_assert!((gaps.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn determinant_matches_eigenvalues(p in 1u32..20, a in 2i64..6, b in 1i64..4) {
        // [[a, b], [1, 1]] needs det = a − b = ±1 for an automorphism; use
        // a general hyperbolic endomorphism check instead.
        let m = IntMatrix::new(a + 1, b, b, a);
        prop_assume!(MapSpec::toral_endo(m.clone()).is_ok());
        let exact = periodic_points(&m, p as usize, PeriodicKind::Endo).unwrap();
        let exact = num_traits::ToPrimitive::to_f64(&exact[p as usize - 1]).unwrap();
        let float = periodic_count_from_eigenvalues(&m, p);
        prop_assert!((exact - float).abs() <= 1e-9 * exact.max(1.0));
    }
}
