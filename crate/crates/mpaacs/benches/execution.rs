use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mpaacs::metrics::{sweep_with, SweepQuantity};
use mpaacs::state::{density_matrix, fock_coefficients};
use mpaacs::wigner::{wigner_grid_with, wigner_parity_grid, PhaseSpaceGrid};
use mpaacs::{Complex64, Execution, MpaacsParams};

fn modes() -> Vec<(&'static str, Execution)> {
    let mut modes = vec![("sequential", Execution::Sequential)];
    if cfg!(feature = "parallel") {
        modes.push(("parallel", Execution::Parallel));
    }
    modes
}

fn bench_wigner_grid(c: &mut Criterion) {
    let params = MpaacsParams::new(Complex64::new(1.0, 0.0), 2.0, 2).unwrap();
    let grid = PhaseSpaceGrid::new(-6.0, 6.0, -6.0, 6.0, 201, 201).unwrap();
    let mut group = c.benchmark_group("wigner_grid_201x201");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| wigner_grid_with(&params, &grid, exec).unwrap());
        });
    }
    group.finish();
}

fn bench_parity_grid(c: &mut Criterion) {
    let params = MpaacsParams::new(Complex64::new(1.0, 0.0), 2.0, 2).unwrap();
    let state = fock_coefficients(&params, 1e-12).unwrap();
    let rho = density_matrix(&state);
    let grid = PhaseSpaceGrid::new(-4.0, 4.0, -4.0, 4.0, 21, 21).unwrap();
    let mut group = c.benchmark_group("parity_grid_21x21");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| wigner_parity_grid(&rho, &grid, exec).unwrap());
        });
    }
    group.finish();
}

fn bench_noise_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("noise_sweep_64");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                sweep_with(
                    SweepQuantity::EquivalentInputNoise,
                    (0.1, 4.0, 64),
                    2.0,
                    2,
                    exec,
                )
                .unwrap()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_wigner_grid, bench_parity_grid, bench_noise_sweep);
criterion_main!(benches);
