use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tsyb_core::dist::{hellinger_affinity, hypercube_pair, LowerConstants, QuadSpec, TsybakovDistribution};
use tsyb_core::erm::{ErmMode, SearchConfig};
use tsyb_core::harness::{run_rate_experiment, BudgetRule, RateExperimentConfig, TauForm};
use tsyb_core::nn::compose_check;
use tsyb_core::par;
use tsyb_core::sets::BoundaryFn;

fn paths(c: &mut Criterion, group: &str, mut f: impl FnMut()) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    for (label, sequential) in [("parallel", false), ("sequential", true)] {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            par::set_sequential(sequential);
            b.iter(&mut f);
        });
    }
    par::set_sequential(false);
    g.finish();
}

fn rates(c: &mut Criterion) {
    let dist = TsybakovDistribution::single_boundary(
        2,
        BoundaryFn::Sine { offset: 0.5, amplitude: 0.2, frequency: 1.0 },
        0.0,
        0.5,
    )
    .unwrap();
    let cfg = RateExperimentConfig {
        dist,
        kappa: 1.0,
        rho: 1.0,
        n_grid: vec![128, 256, 512, 1024],
        replications: 8,
        p: 1.0,
        rule: BudgetRule { b: 0.25, ..Default::default() },
        tau: TauForm::Polynomial,
        seed: 1,
        quad: QuadSpec::default(),
        erm_mode: ErmMode::ExactStructured,
        search: SearchConfig::default(),
        enumeration_limit: 1 << 20,
    };
    paths(c, "rate_replications", || {
        black_box(run_rate_experiment(&cfg).unwrap());
    });
}

fn affinity(c: &mut Criterion) {
    let (a, b) = hypercube_pair(8, 0.0, 1.0, 2, &LowerConstants::default()).unwrap();
    let spec = QuadSpec::lines(256);
    paths(c, "hellinger_quadrature", || {
        black_box(hellinger_affinity(&a, &b, &spec, 1024).unwrap());
    });
}

fn composition(c: &mut Criterion) {
    paths(c, "compose_check", || {
        black_box(compose_check(200, 200, 4, 3, 1).unwrap());
    });
}

criterion_group!(benches, rates, affinity, composition);
criterion_main!(benches);
