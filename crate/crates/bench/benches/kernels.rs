use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use floquet_bench::{free_scenario, oscillator_frame, perturbed_scenario};
use floquet_core::commutator::{c11_seminorm, InnerGrid, DEFAULT_T_MIN};
use floquet_core::diagnostics::{circle_grid, poisson_density};
use floquet_core::lattice::FunctionDesc;
use floquet_core::linalg::random::{random_hermitian, random_matrix, random_unit_vector};
use floquet_core::linalg::{herm_eig, op_norm, unitary_eig, DEFAULT_CLUSTER_TOL};
use floquet_core::mourre::{floquet_apply_frame, floquet_operator};
use floquet_core::propagator::{phase_table, FreeSystem, DEFAULT_PHASE_TOL};

fn dense(c: &mut Criterion) {
    let mut g = c.benchmark_group("dense");
    g.sample_size(10);
    for n in [128usize, 256] {
        let h = random_hermitian(n, 1);
        g.bench_with_input(BenchmarkId::new("herm_eig", n), &h, |b, h| b.iter(|| herm_eig(black_box(h), 1e-12).unwrap()));
        let m = random_matrix(n, n / 4, 2);
        g.bench_with_input(BenchmarkId::new("op_norm", n), &m, |b, m| b.iter(|| op_norm(black_box(m)).unwrap()));
        let u = floquet_operator(&free_scenario(n)).unwrap();
        g.bench_with_input(BenchmarkId::new("unitary_eig", n), &u, |b, u| b.iter(|| unitary_eig(black_box(u), DEFAULT_CLUSTER_TOL).unwrap()));
    }
    g.finish();
}

fn propagation(c: &mut Criterion) {
    let mut g = c.benchmark_group("propagation");
    g.sample_size(10);
    let s = perturbed_scenario(256);
    let times: Vec<f64> = (0..=s.time_steps).map(|k| k as f64 * s.period() / s.time_steps as f64).collect();
    g.bench_function("phase_table_256_steps", |b| b.iter(|| phase_table(&s.field, s.omega(), black_box(&times), DEFAULT_PHASE_TOL).unwrap()));
    let fs = FreeSystem::new(&s.basis).unwrap();
    let frame = oscillator_frame(&s);
    g.bench_function("period_map_on_frame_256", |b| b.iter(|| floquet_apply_frame(&fs, &s, black_box(&frame)).unwrap()));
    g.finish();
}

fn diagnostics(c: &mut Criterion) {
    let mut g = c.benchmark_group("diagnostics");
    g.sample_size(10);
    let u = floquet_operator(&free_scenario(128)).unwrap();
    let phi = random_unit_vector(128, 3);
    let thetas = circle_grid(256);
    g.bench_function("poisson_density_128", |b| b.iter(|| poisson_density(&u, black_box(&phi), &thetas, 0.99).unwrap()));
    let v = FunctionDesc::Gaussian { a: 1.0, s: 1.0 };
    g.bench_function("c11_seminorm_gaussian", |b| b.iter(|| c11_seminorm(black_box(&v), DEFAULT_T_MIN, &InnerGrid::default()).unwrap()));
    g.finish();
}

criterion_group!(benches, dense, propagation, diagnostics);
criterion_main!(benches);
