use nodal_core::eigen::{dense_sym_eig, lanczos_smallest, lanczos_smallest_with, LanczosOptions, SymOperator};
use nodal_core::graph::{laplacian, Graph, LaplacianKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_connected_graph(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = std::collections::BTreeMap::new();
    for i in 1..n {
        edges.insert((rng.gen_range(0..i), i), rng.gen_range(0.1..2.0));
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.entry((a.min(b), a.max(b))).or_insert(rng.gen_range(0.1..2.0));
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|((a, b), w)| (a, b, w))).unwrap()
}

fn iterative() -> LanczosOptions {
    LanczosOptions {
        dense_below: 0,
        ..LanczosOptions::default()
    }
}

fn assert_orthonormal(vs: &[&[f64]]) {
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let d: f64 = a.iter().zip(*b).map(|(x, y)| x * y).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((d - want).abs() < 1e-8, "<v{i}, v{j}> = {d}");
        }
    }
}

#[test]
fn complete_graph_k4() {
    let g = Graph::from_edges(4, (0..4).flat_map(|i| ((i + 1)..4).map(move |j| (i, j, 1.0)))).unwrap();
    let l = laplacian(&g, LaplacianKind::Combinatorial).unwrap();
    for opts in [LanczosOptions::default(), iterative()] {
        let r = lanczos_smallest_with(&l.operator, 2, 1e-10, 0, &opts).unwrap();
        assert!(r.converged);
        let v = r.values();
        assert!(v[0].abs() < 1e-10 && (v[1] - 4.0).abs() < 1e-10, "{v:?}");
    }
}

#[test]
fn sparse_laplacian_n200_matches_dense() {
    let g = random_connected_graph(200, 400, 11);
    let l = laplacian(&g, LaplacianKind::Combinatorial).unwrap();
    let dense = dense_sym_eig(&l.operator).unwrap();
    let r = lanczos_smallest_with(&l.operator, 10, 1e-10, 5, &iterative()).unwrap();
    assert!(r.converged);
    for (a, b) in r.values().iter().zip(dense.values()) {
        assert!((a - b).abs() < 1e-8);
    }
    assert!(r.residuals.iter().all(|x| *x <= 1e-10));
    assert_orthonormal(&r.pairs.iter().map(|p| p.vector.as_slice()).collect::<Vec<_>>());
}

#[test]
fn fixed_seed_is_bitwise_reproducible() {
    let g = random_connected_graph(700, 2000, 3);
    let l = laplacian(&g, LaplacianKind::SymNormalized).unwrap();
    let a = lanczos_smallest(&l.operator, 8, 1e-9, 42).unwrap();
    let b = lanczos_smallest(&l.operator, 8, 1e-9, 42).unwrap();
    assert_eq!(a, b);
    assert!(a.converged);
}

#[test]
fn large_sparse_zero_mode() {
    let g = random_connected_graph(1500, 3000, 9);
    let l = laplacian(&g, LaplacianKind::Combinatorial).unwrap();
    let r = lanczos_smallest(&l.operator, 4, 1e-9, 1).unwrap();
    assert!(r.converged);
    assert!(r.values()[0].abs() <= 1e-9);
    let v = &r.pairs[0].vector;
    assert!(v.iter().all(|x| (x - v[0]).abs() < 1e-6));
}

#[test]
fn gershgorin_bounds_spectrum() {
    let g = random_connected_graph(80, 200, 4);
    for kind in [LaplacianKind::Combinatorial, LaplacianKind::SymNormalized] {
        let l = laplacian(&g, kind).unwrap();
        let top = *dense_sym_eig(&l.operator).unwrap().values().last().unwrap();
        assert!(top <= l.operator.gershgorin_bound() + 1e-12);
    }
}

fn arb_symmetric() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..40).prop_flat_map(|n| {
        proptest::collection::vec(-5.0f64..5.0, n * (n + 1) / 2).prop_map(move |upper| {
            let mut a = vec![0.0; n * n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i..n {
                    let v = it.next().unwrap();
                    a[i * n + j] = v;
                    a[j * n + i] = v;
                }
            }
            (n, a)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dense_residuals_and_orthonormality((n, a) in arb_symmetric()) {
        let op = SymOperator::dense(n, a).unwrap();
        let r = dense_sym_eig(&op).unwrap();
        prop_assert!(r.converged);
        prop_assert!(r.residuals.iter().all(|x| *x <= 1e-10));
        prop_assert!(r.values().windows(2).all(|w| w[0] <= w[1]));
        assert_orthonormal(&r.pairs.iter().map(|p| p.vector.as_slice()).collect::<Vec<_>>());
    }

    #[test]
    fn lanczos_matches_dense_oracle(n in 12usize..300, extra in 0usize..600, seed in any::<u64>(), m in 1usize..10) {
        let g = random_connected_graph(n, extra, seed);
        let l = laplacian(&g, LaplacianKind::Combinatorial).unwrap();
        let dense = dense_sym_eig(&l.operator).unwrap();
        let r = lanczos_smallest_with(&l.operator, m, 1e-9, seed, &iterative()).unwrap();
        prop_assert!(r.converged);
        for (a, b) in r.values().iter().zip(dense.values()) {
            prop_assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
        }
        prop_assert!(r.residuals.iter().all(|x| *x <= 1e-9));
        prop_assert!(r.values()[0].abs() <= 1e-9);
        let v = &r.pairs[0].vector;
        prop_assert!(v.iter().all(|x| (x - v[0]).abs() < 1e-6));
    }
}

#[test]
fn rejects_bad_requests() {
    let g = random_connected_graph(10, 5, 0);
    let l = laplacian(&g, LaplacianKind::Combinatorial).unwrap();
    assert!(lanczos_smallest(&l.operator, 10, 1e-9, 0).is_err());
    assert!(lanczos_smallest(&l.operator, 0, 1e-9, 0).is_err());
    assert!(lanczos_smallest(&l.operator, 3, 0.0, 0).is_err());
}
