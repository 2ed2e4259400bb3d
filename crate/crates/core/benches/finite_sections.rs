//! Sequential against parallel execution for the heavy loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use wcolab::diagnostics::{kernel_defect_max, normal_symbol_for, spectral_radius_gelfand};
use wcolab::sampling::{disk_pairs, disk_points, random_kernel, random_self_map, rng};
use wcolab::{c64, Exec, LftMap, Space, SymbolSpec, WcoSpec};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn parabolic() -> WcoSpec {
    let phi = LftMap::real(1.0, 1.0, -1.0, 3.0).unwrap();
    WcoSpec::lft(SymbolSpec::kernel(c64(0.2, 0.1)), phi, Space::Bergman { alpha: 1.0 }).unwrap()
}

fn matmul(c: &mut Criterion) {
    let mut g = c.benchmark_group("matmul");
    for n in [128, 256] {
        let a = parabolic().truncate(n, Exec::Parallel).unwrap().matrix;
        for (name, exec) in POLICIES {
            g.bench_with_input(BenchmarkId::new(name, n), &a, |b, a| b.iter(|| a.matmul(black_box(a), exec).unwrap()));
        }
    }
    g.finish();
}

fn truncate(c: &mut Criterion) {
    let mut g = c.benchmark_group("truncate");
    let op = parabolic();
    for n in [128, 256] {
        for (name, exec) in POLICIES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| op.truncate(black_box(n), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn gelfand(c: &mut Criterion) {
    let mut g = c.benchmark_group("gelfand");
    g.sample_size(10);
    let t = parabolic().truncate(128, Exec::Parallel).unwrap().matrix;
    for (name, exec) in POLICIES {
        g.bench_function(BenchmarkId::new(name, "n128_k16"), |b| {
            b.iter(|| spectral_radius_gelfand(black_box(&t), 16, exec).unwrap())
        });
    }
    g.finish();
}

fn adjoint_battery(c: &mut Criterion) {
    let mut r = rng(1);
    let spaces = [Space::Hardy, Space::Bergman { alpha: 0.0 }, Space::Bergman { alpha: 1.0 }];
    let ops: Vec<WcoSpec> = (0..12)
        .map(|k| WcoSpec::lft(random_kernel(&mut r, 0.5), random_self_map(&mut r), spaces[k % 3].clone()).unwrap())
        .collect();
    let points = disk_points(8, 0.6, 1);
    let mut g = c.benchmark_group("adjoint_battery");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(name, |b| {
            b.iter(|| {
                exec.map_slice(&ops, |op| {
                    let t = op.truncate(128, Exec::Sequential).unwrap();
                    points.iter().map(|w| op.kernel_adjoint_residual(&t, *w).unwrap()).fold(0.0, f64::max)
                })
            })
        });
    }
    g.finish();
}

fn kernel_defects(c: &mut Criterion) {
    let phi = LftMap::real(1.0, 0.5, 0.5, 1.0).unwrap();
    let space = Space::Bergman { alpha: 0.0 };
    let ns = normal_symbol_for(&phi, c64(1.0, 0.0), &space).unwrap();
    let op = WcoSpec::lft(ns.psi, phi, space).unwrap();
    let pairs = disk_pairs(25, 0.6, 1);
    let mut g = c.benchmark_group("kernel_defects");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_function(name, |b| b.iter(|| kernel_defect_max(&op, black_box(&pairs), 256, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, matmul, truncate, gelfand, adjoint_battery, kernel_defects);
criterion_main!(benches);
