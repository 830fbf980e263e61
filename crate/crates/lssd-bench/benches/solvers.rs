//! Benchmarks for the solver layers at desk scale: the exact no-signalling
//! LP, the vertex enumeration, the classical symmetric search and the
//! Jacobi eigendecomposition used by the SDP projection.

use criterion::{criterion_group, criterion_main, Criterion};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use lssd_core::classical::optimal_classical_symmetric;
use lssd_core::game::bsc_game;
use lssd_core::nosig::{optimal_ns, optimal_ns_repeated, BehaviorShape};
use lssd_core::npa::jacobi_eigendecomposition;
use lssd_core::polytope::{ns_polytope_vertices, AdjacencyTest};
use lssd_core::scalar::Rational;

fn alpha() -> Rational {
    Rational::new(3.into(), 10.into())
}

fn ns_lp(c: &mut Criterion) {
    let base = bsc_game(alpha(), 2, 1).unwrap();
    let two_fold = base.parallel_repetition(2).unwrap();
    c.bench_function("ns_lp_two_fold_full", |b| {
        b.iter(|| optimal_ns(&two_fold).unwrap())
    });
    c.bench_function("ns_lp_three_fold_symmetrized", |b| {
        b.iter(|| optimal_ns_repeated(&base, 3).unwrap())
    });
}

fn vertex_enumeration(c: &mut Criterion) {
    let shape = BehaviorShape {
        x_size: 2,
        input_sizes: vec![2, 2],
    };
    c.bench_function("dd_bipartite_rank", |b| {
        b.iter(|| ns_polytope_vertices(&shape, AdjacencyTest::Rank).unwrap())
    });
    c.bench_function("dd_bipartite_combinatorial", |b| {
        b.iter(|| ns_polytope_vertices(&shape, AdjacencyTest::Combinatorial).unwrap())
    });
}

fn classical_search(c: &mut Criterion) {
    let two_fold = bsc_game(alpha(), 2, 2).unwrap();
    c.bench_function("classical_symmetric_two_fold", |b| {
        b.iter(|| optimal_classical_symmetric(&two_fold).unwrap())
    });
    let two_fold_float = bsc_game(0.3f64, 2, 2).unwrap();
    c.bench_function("classical_symmetric_two_fold_float", |b| {
        b.iter(|| optimal_classical_symmetric(&two_fold_float).unwrap())
    });
}

fn jacobi(c: &mut Criterion) {
    let n = 169;
    let mut rng = StdRng::seed_from_u64(1);
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = rng.gen_range(-1.0..1.0);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    c.bench_function("jacobi_eigendecomposition_169", |b| {
        b.iter(|| jacobi_eigendecomposition(&m, n))
    });
}

criterion_group!(benches, ns_lp, vertex_enumeration, classical_search, jacobi);
criterion_main!(benches);
