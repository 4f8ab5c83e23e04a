use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nodal_core::analytic::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn rational_points_are_strict_minima_up_to_q12() {
    for q in 2..=12 {
        for pt in rationals_with_denominator(q) {
            let c = check_rational_minimum(pt, q * q, default_step(q)).unwrap();
            assert!(c.holds, "{}/{}: margin {}", pt.p(), pt.q(), c.margin());
        }
    }
}

#[test]
fn sign_cos_sum_vanishes_up_to_q50() {
    for q in 2..=50 {
        for pt in rationals_with_denominator(q) {
            assert!(sign_cos_period_sum(pt).abs() < 1e-12, "{}/{}", pt.p(), pt.q());
        }
    }
}

#[test]
fn period_average_increases_to_two_over_pi() {
    let values: Vec<f64> = (2..=200).map(|q| rational_mean_abs_sin(q).unwrap()).collect();
    assert_eq!(values[0], 0.5);
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!(values[1..].iter().all(|v| *v > 0.5));
    assert!((values.last().unwrap() - 2.0 / PI).abs() < 1e-4);
}

#[test]
fn irrational_average_tends_to_two_over_pi() {
    assert!((mean_abs_sin(FRAC_1_SQRT_2, 1_000_000) - 2.0 / PI).abs() < 1e-3);
}

#[test]
fn rational_average_matches_period_average() {
    for (p, q) in [(1, 3), (2, 5), (3, 8)] {
        let n = 1000 * q;
        let want = rational_mean_abs_sin(q).unwrap();
        assert!((mean_abs_sin(p as f64 / q as f64, n) - want).abs() < 1e-9);
    }
}

#[test]
fn quartic_constant_scan() {
    let candidates: Vec<f64> = (0..=40).map(|i| 2f64.powf(i as f64 / 4.0 - 3.0)).collect();
    let y = RationalPoint::new(1, 2).unwrap();
    let c = smallest_quartic_constant(&[2, 3, 4, 5], y, &candidates).unwrap();
    let c = c.expect("some constant in the scanned range passes");
    println!("smallest passing quartic constant C = {c}");
    for q in [2, 3, 4, 5] {
        let x = RationalPoint::new(1, q).unwrap();
        let lambda = (c * (q as f64).powi(4)).max(2.0);
        assert!(check_rational_minimum_2d(x, y, lambda, default_step(q)).unwrap().holds);
    }
}

#[test]
fn nodal_inequality_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..2000 {
        let x: f64 = rng.gen();
        let n = rng.gen_range(1..=200);
        assert!(interval_score(x, n) <= PI * nodal_distance_sum(x, n));
    }
}

fn arb_periodic() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, usize)> {
    (1usize..=20, 1usize..=2000).prop_flat_map(|(p, n)| {
        let raw = proptest::collection::vec(-10.0f64..10.0, p);
        let steps = proptest::collection::vec(0.0f64..1.0, n);
        (raw, steps, Just(n), 0.01f64..5.0)
    })
    .prop_map(|(raw, steps, n, b0)| {
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        let a: Vec<f64> = raw.iter().map(|v| v - mean).collect();
        let mut b = Vec::with_capacity(n);
        let mut acc = b0;
        for s in steps {
            acc += s;
            b.push(acc);
        }
        (a, b, n)
    })
}

proptest! {
    #[test]
    fn periodic_sum_bound_holds((a, b, n) in arb_periodic()) {
        let seq = match PeriodicSequence::new(a) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        match periodic_sum_bound(&seq, &b, n) {
            Ok(r) => prop_assert!(r.holds, "{} > {}", r.lhs, r.rhs),
            Err(nodal_core::Error::NonZeroMean(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn nodal_inequality(x in 0.0f64..=1.0, n in 1u64..=200) {
        prop_assert!(interval_score(x, n) <= PI * nodal_distance_sum(x, n));
    }

    #[test]
    fn interval_score_is_symmetric(x in 0.0f64..=1.0, n in 1u64..=300) {
        prop_assert!((interval_score(x, n) - interval_score(1.0 - x, n)).abs() < 1e-11);
    }

    #[test]
    fn square_score_symmetric(x in 0.0f64..=1.0, y in 0.0f64..=1.0, l in 2.0f64..500.0) {
        prop_assert!((square_score(x, y, l) - square_score(y, x, l)).abs() < 1e-11);
    }
}
