use std::hint::black_box;

use bankcover::coupon::SurvivalSweep;
use bankcover::{expected_tests, single_bank_cdf, theta, variance_tests, TruncationPolicy};
use bankcover_bench::table_specs;
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_cdf(c: &mut Criterion) {
    c.bench_function("single_bank_cdf a=64 y=200", |b| {
        b.iter(|| single_bank_cdf(black_box(64), black_box(200)))
    });
    c.bench_function("survival sweep a=20 1000 steps", |b| {
        b.iter(|| SurvivalSweep::new(black_box(20)).unwrap().take(1000).map(|v| v.p).sum::<f64>())
    });
}

fn bench_series(c: &mut Criterion) {
    let policy = TruncationPolicy::default();
    let mut group = c.benchmark_group("expected_tests");
    for spec in table_specs() {
        group.bench_function(spec.to_string(), |b| b.iter(|| expected_tests(black_box(spec), &policy)));
    }
    group.finish();
    let spec = table_specs()[1];
    c.bench_function("variance_tests a=10 q=10", |b| {
        b.iter(|| variance_tests(black_box(spec), &policy))
    });
}

fn bench_theta(c: &mut Criterion) {
    c.bench_function("theta a=10", |b| b.iter(|| theta(black_box(10))));
}

criterion_group!(benches, bench_cdf, bench_series, bench_theta);
criterion_main!(benches);
