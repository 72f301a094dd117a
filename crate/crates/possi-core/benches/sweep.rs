use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use possi_core::{
    solve_all, solve_all_seq, CoinsuranceProblem, EuOperator, FuzzyNumber, UtilityFunction,
    WeightingFunction,
};

fn loading_grid(n: usize) -> Vec<CoinsuranceProblem> {
    let risk = FuzzyNumber::triangular(2.0, 1.0, 1.5).unwrap();
    (0..n)
        .map(|k| {
            let lam = 0.45 * k as f64 / (n - 1) as f64;
            let op = if k % 2 == 0 {
                EuOperator::t1(WeightingFunction::linear())
            } else {
                EuOperator::t2(WeightingFunction::linear())
            };
            CoinsuranceProblem::new(12.0, lam, risk, UtilityFunction::cara(), op).unwrap()
        })
        .collect()
}

fn bench_lambda_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("lambda_sweep");
    for &n in &[64usize, 256, 1024] {
        let problems = loading_grid(n);
        group.bench_with_input(BenchmarkId::new("parallel", n), &problems, |b, p| {
            b.iter(|| solve_all(p, 1e-10))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &problems, |b, p| {
            b.iter(|| solve_all_seq(p, 1e-10))
        });
    }
    group.finish();
}

fn bench_indicators(c: &mut Criterion) {
    let risk = FuzzyNumber::trapezoidal(1.0, 2.0, 1.0, 3.0).unwrap();
    let op = EuOperator::t2(WeightingFunction::linear());
    c.bench_function("t2_variance_trapezoid", |b| {
        b.iter(|| op.t_variance(&risk))
    });
}

criterion_group!(benches, bench_lambda_sweep, bench_indicators);
criterion_main!(benches);
