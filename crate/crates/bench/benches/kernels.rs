use std::hint::black_box;

use chemoblow_bench::fixture;
use chemoblow_core::bound::{osgood_lower_bound, phi0};
use chemoblow_core::gn;
use chemoblow_core::sim::{adaptive_dt, solve_poisson, step};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("step");
    for cells in [256, 1024, 4096] {
        let f = fixture(cells);
        let dt = adaptive_dt(&f.state, &f.params, &f.grid, f.cfg.stop.cfl, f.cfg.stop.dt_max);
        group.bench_with_input(BenchmarkId::from_parameter(cells), &cells, |b, _| {
            b.iter(|| step(black_box(&f.state), dt, &f.params, &f.grid).unwrap())
        });
    }
    group.finish();
}

fn bench_poisson(c: &mut Criterion) {
    let f = fixture(1024);
    c.bench_function("solve_poisson/1024", |b| {
        b.iter(|| solve_poisson(black_box(&f.state.u), f.state.mean_mass, &f.grid).unwrap())
    });
}

fn bench_osgood(c: &mut Criterion) {
    let f = fixture(1024);
    let report = chemoblow_core::pipeline::cmd_bound(&f.cfg).unwrap();
    let coeffs = report.odi_coefficients();
    let start = phi0(&f.grid, &f.state.u, f.exps.pbar, f.spec.alpha);
    c.bench_function("osgood_lower_bound", |b| b.iter(|| osgood_lower_bound(black_box(&coeffs), start).unwrap()));
}

fn bench_gn(c: &mut Criterion) {
    let f = fixture(1024);
    let [cfg, ..] = gn::configurations(&f.exps, f.spec.m1, f.spec.p0, f.spec.geom.dim);
    let w: Vec<f64> = f.grid.centers.iter().map(|r| (-r * r / 0.1).exp()).collect();
    c.bench_function("gn_ratios/1024", |b| b.iter(|| gn::ratios(&f.grid, black_box(&w), &cfg)));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(20);
    targets = bench_step, bench_poisson, bench_osgood, bench_gn
}
criterion_main!(kernels);
