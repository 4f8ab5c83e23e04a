use std::f64::consts::{FRAC_PI_2, PI};

use nodal_core::eigen::dense_sym_eig;
use nodal_core::torus::*;

const TAU: f64 = 2.0 * PI;

fn spec(eps_frac: f64) -> PotentialSpec {
    PotentialSpec::new(0.35 * TAU, eps_frac * TAU, Bump::ConstantWell).unwrap()
}

#[test]
fn abs_sin_plus_abs_cos_at_least_one() {
    for i in 0..=100_000 {
        let z = -2.0 * PI + 4.0 * PI * i as f64 / 100_000.0;
        assert!(z.sin().abs() + z.cos().abs() >= 1.0 - 1e-15);
    }
    for k in -8..=8 {
        let z = k as f64 * FRAC_PI_2;
        assert!((z.sin().abs() + z.cos().abs() - 1.0).abs() < 1e-15);
        let off = z + 0.01;
        assert!(off.sin().abs() + off.cos().abs() > 1.0 + 1e-3);
    }
}

/// The well is nonpositive, so by min-max no eigenvalue can rise. The split
/// pattern is: a lower branch pushed down at order ε², an upper branch that
/// stays at the unperturbed value to leading order.
#[test]
fn pairs_split_into_lower_and_stationary_branches() {
    let n = 512;
    for eps_frac in [0.01, 0.02] {
        let s = spec(eps_frac);
        let perturbed = dense_sym_eig(&build_circle_operator(n, &s).unwrap().operator)
            .unwrap()
            .values();
        let reference = dense_sym_eig(&build_circle_operator(n, &s.with_weight(0.0)).unwrap().operator)
            .unwrap()
            .values();
        for k in 1..=3 {
            let r = reference[2 * k];
            let (lo, hi) = (perturbed[2 * k - 1] - r, perturbed[2 * k] - r);
            assert!(lo < 0.0, "k = {k}: lower branch shift {lo}");
            assert!(hi.abs() < 0.1 * lo.abs(), "k = {k}: upper {hi} vs lower {lo}");
        }
    }
}

#[test]
fn argmin_stays_in_window_up_to_n_eps() {
    let s = spec(0.1);
    let opts = TorusOptions::default();
    let n_star = find_n_eps(&s, 512, 24, &opts).unwrap();
    assert!(n_star >= 1);
    for n in 1..=n_star {
        let f = torus_score(512, &s, n, &opts).unwrap();
        assert!(s.contains(grid_point(512, f.argmin().unwrap())), "N = {n}");
    }
}

#[test]
fn argmin_is_stable_under_refinement() {
    let s = spec(0.1);
    let opts = TorusOptions::default();
    let a = grid_point(512, torus_score(512, &s, 5, &opts).unwrap().argmin().unwrap());
    let b = grid_point(1024, torus_score(1024, &s, 5, &opts).unwrap().argmin().unwrap());
    assert!((a - b).abs() <= 2.0 * TAU / 512.0, "{a} vs {b}");
}

#[test]
fn potential_respects_window() {
    let s = spec(0.1);
    let op = build_circle_operator(512, &s).unwrap();
    for (i, v) in op.potential.iter().enumerate() {
        if s.contains(op.grid_point(i)) {
            assert!(*v < 1.0);
        } else {
            assert_eq!(*v, 1.0);
        }
    }
    let inv_h2 = 1.0 / (op.h * op.h);
    let dense = op.operator.to_dense();
    for i in 0..512 {
        let row = &dense[i * 512..(i + 1) * 512];
        let diff_sum: f64 = row.iter().sum::<f64>() - op.potential[i];
        assert!(diff_sum.abs() < 1e-9 * inv_h2);
        assert!(row[i] >= 2.0 * inv_h2 + 1.0 - s.eps() - 1e-9);
    }
}
