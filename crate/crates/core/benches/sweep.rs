use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ladm_core::adomian::{lambda_expansion_oracle, AnalyticNonlinearity};
use ladm_core::report::{sweep, SweepParams};
use ladm_core::solver::oscillator_series;
use ladm_core::{Execution, TimePolynomial};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("beta_sweep");
    group.sample_size(20);
    for steps in [8usize, 32] {
        let params = SweepParams::new(0.05, 0.9, steps);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, steps), &params, |b, p| {
                b.iter(|| sweep(black_box(p), exec).unwrap());
            });
        }
    }
    group.finish();
}

fn bench_series_grid(c: &mut Criterion) {
    let series = oscillator_series(0.2, 14).unwrap().full_sum();
    let mut group = c.benchmark_group("series_grid");
    for n in [1_000usize, 100_000] {
        let grid: Vec<f64> = (0..n).map(|i| 10.0 * i as f64 / n as f64).collect();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &grid, |b, g| {
                b.iter(|| exec.map(black_box(g), |&t| series.eval(t)));
            });
        }
    }
    group.finish();
}

fn bench_lambda_oracle(c: &mut Criterion) {
    let comps = vec![
        TimePolynomial::linear(0.2, 0.5),
        TimePolynomial::monomial(3, -0.3),
        TimePolynomial::monomial(2, 0.4),
        TimePolynomial::monomial(1, 0.1),
        TimePolynomial::constant(-0.2),
    ];
    let nl = AnalyticNonlinearity::exp();
    let probes: Vec<f64> = (0..256).map(|i| 2.0 * f64::from(i) / 256.0).collect();
    let mut group = c.benchmark_group("lambda_oracle_probes");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                exec.map(black_box(&probes), |&t| {
                    lambda_expansion_oracle(&nl, &comps, 4, t, 1e-4)
                })
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_series_grid, bench_lambda_oracle);
criterion_main!(benches);
