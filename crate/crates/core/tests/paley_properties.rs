use nodal_core::eigen::dense_sym_eig;
use nodal_core::graph::{laplacian, LaplacianKind};
use nodal_core::paley::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 6] = [5, 13, 17, 29, 37, 101];

#[test]
fn residue_times_nonresidue_is_nonresidue() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for p in [13u64, 29, 101, 1009] {
        let res: Vec<u64> = (1..p).filter(|&a| is_quadratic_residue(a, p).unwrap()).collect();
        let non: Vec<u64> = (1..p).filter(|&a| !is_quadratic_residue(a, p).unwrap()).collect();
        assert_eq!(res.len(), non.len());
        for _ in 0..200 {
            let r = res[rng.gen_range(0..res.len())];
            let n = non[rng.gen_range(0..non.len())];
            let n2 = non[rng.gen_range(0..non.len())];
            assert!(!is_quadratic_residue(r * n % p, p).unwrap());
            assert!(is_quadratic_residue(n * n2 % p, p).unwrap());
        }
    }
}

#[test]
fn three_values_with_class_constancy() {
    for p in PRIMES {
        for score in [paley_score_closed_form(p).unwrap(), paley_score_numeric(p).unwrap()] {
            assert_eq!(score.distinct_values(1e-10).len(), 3, "p = {p}");
            for (j, v) in score.per_vertex.iter().enumerate().skip(1) {
                let class = if is_quadratic_residue(j as u64, p).unwrap() {
                    score.s_residue
                } else {
                    score.s_nonresidue
                };
                assert!((v - class).norm() < 1e-10, "p = {p}, j = {j}");
            }
            assert!(score.per_vertex.iter().all(|v| v.im.abs() <= 1e-10));
        }
    }
}

#[test]
fn numeric_spectrum_matches_closed_form() {
    for p in PRIMES {
        let l = laplacian(&paley_graph(p).unwrap(), LaplacianKind::Combinatorial).unwrap();
        let values = dense_sym_eig(&l.operator).unwrap().values();
        let (lo, hi) = paley_spectrum(p).unwrap();
        let half = ((p - 1) / 2) as usize;
        let mut want = vec![0.0];
        want.extend(std::iter::repeat_n(lo, half));
        want.extend(std::iter::repeat_n(hi, half));
        for (a, b) in values.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-9 * b.max(1.0), "p = {p}: {a} vs {b}");
        }
    }
}

#[test]
fn closed_form_and_numeric_agree() {
    for p in PRIMES {
        let a = paley_score_closed_form(p).unwrap();
        let b = paley_score_numeric(p).unwrap();
        for (x, y) in a.per_vertex.iter().zip(&b.per_vertex) {
            assert!((x - y).norm() <= 1e-10, "p = {p}");
        }
    }
}

#[test]
fn rejects_bad_primes() {
    assert!(paley_score_closed_form(7).is_err());
    assert!(paley_score_numeric(9).is_err());
    assert!(paley_score_numeric(2003).is_err());
}
