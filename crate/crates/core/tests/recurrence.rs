use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recur_core::dynamics::*;
use recur_core::numtheory::enumerate_periodic_points;
use recur_core::recurrence::*;

fn pt(c: &[f64]) -> TorusPoint {
    TorusPoint::new(c).unwrap()
}

fn rational(p: &TorusPoint) -> RationalPoint {
    RationalPoint::new(p.coords().iter().map(|&c| BigRational::from_float(c).unwrap()).collect()).unwrap()
}

/// Exact max-norm torus membership of a rational point in a ball.
fn in_ball_exact(x: &RationalPoint, ball: &Ball) -> bool {
    let r = BigRational::from_float(ball.radius()).unwrap();
    x.coords().iter().zip(ball.center().coords()).all(|(a, &c)| {
        let d = (a - BigRational::from_float(c).unwrap()).abs();
        let d = &d - d.floor();
        let d = if d > BigRational::new(1.into(), 2.into()) { BigRational::one() - d } else { d };
        d <= r
    })
}

/// Replays a sampled witness in exact rational arithmetic.
fn check_pair_witness(map: &MapSpec, ball: &Ball, res: &ReturnTimeResult) {
    let Some(Witness::Pair { y, z }) = &res.witness else {
        panic!("sampled hit without a pair witness");
    };
    let mut e = rational(y);
    assert!(in_ball_exact(&e, ball), "witness start outside the ball");
    for _ in 0..res.tau.unwrap() {
        e = map.apply_exact(&e).unwrap();
    }
    assert!(in_ball_exact(&e, ball), "witness end outside the ball");
    for (a, &b) in e.coords().iter().zip(z.coords()) {
        assert!(circle_distance(a.to_f64().unwrap(), b) < 1e-15);
    }
}

#[test]
fn sampling_is_sound_against_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for map in [MapSpec::cat_map(), MapSpec::expanding_example(), MapSpec::doubling(), MapSpec::product_example()] {
        for i in 0..30 {
            let x = random_point(map.dim(), &mut rng);
            let r = 10f64.powf(-3.0 + 1.5 * rng.gen::<f64>());
            let ball = Ball::new(x, r).unwrap();
            let k = default_k_max(&map, r).unwrap();
            let exact = tau_ball_exact(&map, &ball, k).unwrap();
            let sample = tau_ball_sample(&map, &ball, k, 2_000, i).unwrap();
            if let Some(s) = sample.tau {
                check_pair_witness(&map, &ball, &sample);
                let e = exact.tau.expect("a sampled return implies an exact one");
                assert!(s >= e, "{}: sample {s} < exact {e}", map.id());
            }
        }
    }
}

#[test]
fn doubling_interval_oracle() {
    // The image of an arc of length 2r under 2^k has length 2^{k+1}r; it meets
    // the arc iff some integer is within (2^k + 1)r of (2^k − 1)c.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = MapSpec::doubling();
    for _ in 0..500 {
        let c: f64 = rng.gen();
        let r = 10f64.powf(-4.0 + 3.0 * rng.gen::<f64>());
        let oracle = (1..=60).find(|&k| {
            let s = (2f64.powi(k) - 1.0) * c;
            let gap = (s - s.round()).abs();
            gap <= (2f64.powi(k) + 1.0) * r
        });
        let res = tau_ball_exact(&d, &Ball::new(pt(&[c]), r).unwrap(), 60).unwrap();
        if res.ambiguous_at.is_none() {
            assert_eq!(res.tau, oracle.map(|k| k as usize), "c={c} r={r}");
        }
    }
}

#[test]
fn periodic_point_balls_return_within_period() {
    let a = IntMatrix::new(2, 1, 1, 1);
    let cat = MapSpec::cat_map();
    for p in 1..=4u32 {
        for y in enumerate_periodic_points(&a, p).unwrap() {
            let ball = Ball::new(y.to_torus_point(), 1e-3).unwrap();
            let res = tau_ball_exact(&cat, &ball, p as usize).unwrap();
            assert!(res.tau.is_some_and(|t| t <= p as usize), "p={p}");
        }
    }
}

#[test]
fn product_return_dominates_factors() {
    let prod = MapSpec::product_example();
    let [f1, f2] = prod.factors().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let x = random_point(4, &mut rng);
        let r = 10f64.powf(-3.0 + rng.gen::<f64>());
        let (x1, x2) = x.split().unwrap();
        let t = tau_ball_exact(&prod, &Ball::new(x, r).unwrap(), 60).unwrap();
        let t1 = tau_ball_exact(f1, &Ball::new(x1, r).unwrap(), 60).unwrap();
        let t2 = tau_ball_exact(f2, &Ball::new(x2, r).unwrap(), 60).unwrap();
        if t.is_ambiguous() || t1.is_ambiguous() || t2.is_ambiguous() {
            continue;
        }
        if let Some(t) = t.tau {
            assert!(t >= t1.tau.unwrap().max(t2.tau.unwrap()));
        }
    }
}

#[test]
fn dirac_factor_product_matches_first_factor() {
    let prod = MapSpec::product_example();
    let f1 = &prod.factors().unwrap()[0];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let x1 = random_point(2, &mut rng);
        let r = 10f64.powf(-3.0 + rng.gen::<f64>());
        let x = TorusPoint::join(&x1, &pt(&[0.0, 0.0])).unwrap();
        let t = tau_ball_exact(&prod, &Ball::new(x, r).unwrap(), 60).unwrap();
        let t1 = tau_ball_exact(f1, &Ball::new(x1, r).unwrap(), 60).unwrap();
        assert_eq!(t.tau, t1.tau);
    }
}

/// Brute-force smallest period: least k with s[i] = s[i+k] for all valid i.
fn period_oracle(s: &[u32]) -> usize {
    (1..=s.len()).find(|&k| (0..s.len() - k).all(|i| s[i] == s[i + k])).unwrap()
}

#[test]
fn word_examples() {
    assert_eq!(tau_word(&Word::parse("0101").unwrap(), false), 2);
    for n in 1..40 {
        assert_eq!(tau_word(&Word::new(vec![0; n]).unwrap(), false), 1);
    }
}

proptest! {
    #[test]
    fn tau_word_is_the_smallest_period(s in prop::collection::vec(0u32..3, 1..60)) {
        let w = Word::new(s.clone()).unwrap();
        let t = tau_word(&w, false);
        prop_assert_eq!(t, period_oracle(&s));
        prop_assert!(t <= s.len());
        prop_assert_eq!(t, tau_word(&w, true));
    }

    #[test]
    fn exact_tau_is_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0, e in 2.0f64..4.0) {
        let r = 10f64.powf(-e);
        let cat = MapSpec::cat_map();
        let x = pt(&[a, b]);
        let small = tau_ball_exact(&cat, &Ball::new(x, r).unwrap(), 80).unwrap();
        let big = tau_ball_exact(&cat, &Ball::new(x, 2.0 * r).unwrap(), 80).unwrap();
        if !small.is_ambiguous() && !big.is_ambiguous() {
            if let Some(s) = small.tau {
                prop_assert!(big.tau.unwrap() <= s);
            }
        }
    }

    #[test]
    fn sampled_tau_is_deterministic(a in 0.0f64..1.0, b in 0.0f64..1.0, seed in 0u64..100) {
        let cat = MapSpec::cat_map();
        let ball = Ball::new(pt(&[a, b]), 1e-3).unwrap();
        let one = tau_ball_sample(&cat, &ball, 40, 500, seed).unwrap();
        let two = tau_ball_sample(&cat, &ball, 40, 500, seed).unwrap();
        prop_assert_eq!(one, two);
    }
}
