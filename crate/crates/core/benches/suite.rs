use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mixquant::distribution::ParametricDistribution;
use mixquant::mixture::MixtureSpec;
use mixquant::par::Execution;
use mixquant::verification::{monte_carlo_quantile, run_suite, InstanceGenConfig};

fn cross_check_suite(c: &mut Criterion) {
    let cfg = InstanceGenConfig::default();
    let mut group = c.benchmark_group("cross_check_suite");
    group.sample_size(10);
    for count in [200usize, 1000] {
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            group.bench_with_input(BenchmarkId::new(name, count), &count, |b, &n| {
                b.iter(|| run_suite(&cfg, n, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let m = MixtureSpec::new(
        0.3,
        ParametricDistribution::normal(0.0, 1.0).unwrap(),
        ParametricDistribution::lognormal(0.0, 0.5).unwrap(),
    )
    .unwrap();
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    group.bench_function("quantile_1e5", |b| {
        b.iter(|| monte_carlo_quantile(&m, 0.5, 100_000, 1).unwrap())
    });
    group.finish();
}

criterion_group!(benches, cross_check_suite, monte_carlo);
criterion_main!(benches);
