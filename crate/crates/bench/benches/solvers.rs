use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use fluctua_core::applications::aleph;
use fluctua_core::oracle::{few_mode_correlator, nongaussian_moment, FewModeSystem};
use fluctua_core::presets::load_builtin;
use fluctua_core::selfconsist::{calibrate_to_width, solve_critical_point, solve_omega};
use fluctua_core::{Extent, SolverSettings};

fn fixed_point(c: &mut Criterion) {
    let settings = SolverSettings::default();
    let toy = load_builtin("toy3d").unwrap().params;
    let sc = load_builtin("conventional-sc").unwrap().params;

    c.bench_function("solve_omega/toy3d", |b| {
        b.iter(|| solve_omega(black_box(&toy), black_box(1.05), &settings).unwrap())
    });
    c.bench_function("solve_omega/conventional-sc near T*", |b| {
        b.iter(|| solve_omega(black_box(&sc), black_box(9.2501), &settings).unwrap())
    });
    c.bench_function("solve_critical_point/toy3d", |b| {
        b.iter(|| solve_critical_point(black_box(&toy), &settings).unwrap())
    });
    c.bench_function("calibrate_to_width/1e-14", |b| {
        b.iter(|| calibrate_to_width(black_box(1e-14), &sc).unwrap())
    });
}

fn special(c: &mut Criterion) {
    c.bench_function("aleph/d=3", |b| b.iter(|| aleph(black_box(3.0), Extent::Infinite).unwrap()));
    c.bench_function("nongaussian_moment/p=2", |b| {
        b.iter(|| nongaussian_moment(black_box(2.0), black_box(1.0), black_box(0.5)).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let sys = FewModeSystem {
        mode_q: vec![0.0, 1.0],
        ..FewModeSystem::default()
    };
    let mut group = c.benchmark_group("few_mode");
    group.sample_size(10);
    group.bench_function("two modes", |b| b.iter(|| few_mode_correlator(black_box(&sys), 0).unwrap()));
    group.finish();
}

criterion_group!(benches, fixed_point, special, oracle);
criterion_main!(benches);
