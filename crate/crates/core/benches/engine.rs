//! Sequential versus rayon paths on the three hot spots: the Moyal product,
//! quantization and a small property-suite run.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fedosov_core::engine::{quantize, FedosovData};
use fedosov_core::group::enumerate_group;
use fedosov_core::group::standard::minus_identity;
use fedosov_core::parallel;
use fedosov_core::sampling::{self, PolyShape};
use fedosov_core::suite::{run_suite, SuiteConfig};
use fedosov_core::weyl::moyal_mul;
use fedosov_core::{BasePoly, Chart, TruncationPolicy};

fn curved_r4() -> Chart {
    let g = enumerate_group(&[minus_identity(4)], 4, 8).unwrap();
    let mut rng = sampling::rng(14);
    let shape = PolyShape { max_degree: 1, max_terms: 2, ..Default::default() };
    let gamma = sampling::random_invariant_christoffel(&mut rng, &g, 3, &shape).unwrap();
    Chart::new(g, gamma, TruncationPolicy::new(4, 4).unwrap()).unwrap()
}

const MODES: [(&str, bool); 2] = [("sequential", false), ("rayon", true)];

fn bench(c: &mut Criterion) {
    let chart = curved_r4();
    let data = FedosovData::build(&chart).unwrap();
    let f = BasePoly::parse("x1^2*x3 + 2*x2*x4 - x4^3", 4).unwrap();
    let q = quantize(std::slice::from_ref(&f), &data).unwrap();

    let mut group = c.benchmark_group("moyal");
    for (name, on) in MODES {
        parallel::set_enabled(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| moyal_mul(&q, &q).unwrap()));
    }
    group.finish();

    let mut group = c.benchmark_group("quantize");
    group.sample_size(10);
    for (name, on) in MODES {
        parallel::set_enabled(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| quantize(std::slice::from_ref(&f), &data).unwrap())
        });
    }
    group.finish();

    let cone = Chart::flat(&[minus_identity(2)], 2, 6).unwrap();
    let config = SuiteConfig { seed: 0, samples: 16, orders: 3 };
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for (name, on) in MODES {
        parallel::set_enabled(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| run_suite(&cone, &config)));
    }
    group.finish();
    parallel::set_enabled(true);
}

criterion_group!(benches, bench);
criterion_main!(benches);
