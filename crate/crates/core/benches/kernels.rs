use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use phase_catenoid::approx::{build_approximation, residual_field, ApproximationSpec, ProbeGrid};
use phase_catenoid::catenoid::z2_root;
use phase_catenoid::domain::{critical_placement, make_ball, AxisymDomain};
use phase_catenoid::jacobi::solve_reduced_h;
use phase_catenoid::profile::compute_constants;
use phase_catenoid::solver::{build_grid_with, discrete_residual};
use phase_catenoid::Exec;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ball() -> AxisymDomain {
    let ys = z2_root();
    make_ball((1.0 + ys * ys) / ys).unwrap()
}

fn grid_kernels(c: &mut Criterion) {
    let d = ball();
    let p = critical_placement(&d).unwrap();
    let alpha = 0.1;
    let k = compute_constants(1e-13).unwrap();
    let approx =
        build_approximation(ApproximationSpec::new(alpha, p).with_h(solve_reduced_h(&p, alpha, &k).unwrap())).unwrap();
    for n in [64, 128] {
        let grid = build_grid_with(&d, n, Exec::Parallel).unwrap();
        let u = grid.sample(|r, x3| approx.value(r, x3), Exec::Parallel);
        let mut g = c.benchmark_group(format!("grid_n{n}"));
        g.sample_size(20);
        for (name, exec) in POLICIES {
            g.bench_with_input(BenchmarkId::new("build", name), &exec, |b, &e| {
                b.iter(|| build_grid_with(black_box(&d), n, e).unwrap())
            });
            g.bench_with_input(BenchmarkId::new("laplacian", name), &exec, |b, &e| {
                b.iter(|| grid.laplacian(black_box(&u), e))
            });
            g.bench_with_input(BenchmarkId::new("residual", name), &exec, |b, &e| {
                b.iter(|| discrete_residual(&grid, alpha, black_box(&u), e))
            });
            g.bench_with_input(BenchmarkId::new("sample_approximation", name), &exec, |b, &e| {
                b.iter(|| grid.sample(|r, x3| approx.value(r, x3), e))
            });
        }
        g.finish();
    }
}

fn probe_kernels(c: &mut Criterion) {
    let d = ball();
    let p = critical_placement(&d).unwrap();
    let alpha = 0.16;
    let approx = build_approximation(ApproximationSpec::new(alpha, p)).unwrap();
    let probes = ProbeGrid::covering(&d, alpha / 8.0);
    let mut g = c.benchmark_group("probe");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        g.bench_with_input(BenchmarkId::new("residual_field", name), &exec, |b, &e| {
            b.iter(|| residual_field(&approx, &d, &probes, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, grid_kernels, probe_kernels);
criterion_main!(benches);
