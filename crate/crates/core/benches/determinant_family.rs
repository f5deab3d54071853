use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cofrob::family::{invertible_in_affine_family, SearchOptions};
use cofrob::frobenius::{check_frobenius_extension, CheckOptions, Route};
use cofrob::par::Strategy;
use cofrob::zoo;
use cofrob::{FieldSpec, Matrix};

fn strategies() -> Vec<(&'static str, Strategy)> {
    let mut s = vec![("sequential", Strategy::Sequential)];
    #[cfg(feature = "parallel")]
    s.push(("parallel", Strategy::Parallel));
    s
}

/// A family whose last row vanishes, so every grid point must be evaluated.
fn singular_family(field: FieldSpec, n: usize, k: usize) -> (Matrix, Vec<Matrix>) {
    let base = Matrix::zeros(field, n, n);
    let family = (0..k)
        .map(|t| {
            let mut m = Matrix::zeros(field, n, n);
            for i in 0..n - 1 {
                for j in 0..n {
                    m.set(i, j, field.from_i64(((i * 7 + j * 3 + t * 5) % 11) as i64 - 5));
                }
            }
            m
        })
        .collect();
    (base, family)
}

fn grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("determinant_grid");
    group.sample_size(10);
    for (field, label) in [(FieldSpec::Rationals, "Q"), (FieldSpec::prime(7).unwrap(), "F7")] {
        let (base, family) = singular_family(field, 5, 4);
        for (name, strategy) in strategies() {
            let opts = SearchOptions { strategy, symbolic_cap: 0, probes: 0, ..SearchOptions::default() };
            group.bench_with_input(BenchmarkId::new(name, label), &opts, |b, opts| {
                b.iter(|| invertible_in_affine_family(&base, &family, opts).unwrap())
            });
        }
    }
    group.finish();
}

fn primal(c: &mut Criterion) {
    let mut group = c.benchmark_group("primal_no_verdict");
    group.sample_size(10);
    let local = Arc::new(zoo::square_zero_local(FieldSpec::Rationals, 2).unwrap());
    let lambda = zoo::trivial_extension(local);
    for (name, strategy) in strategies() {
        let opts = CheckOptions {
            route: Route::Primal,
            search: SearchOptions { strategy, ..SearchOptions::default() },
            ..CheckOptions::default()
        };
        group.bench_function(name, |b| b.iter(|| check_frobenius_extension(&lambda, &opts).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, grid, primal);
criterion_main!(benches);
