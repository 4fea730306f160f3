//! Sequential (one worker) against parallel execution of the phase-parallel
//! solvers. Build with `--no-default-features` to time the inline fallback
//! for every worker count.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eikonal::harness::{make_example, Method};
use eikonal::parallel::hardware_workers;
use eikonal::{Executor, DEFAULT_TOL};

fn worker_counts() -> Vec<usize> {
    let mut counts = vec![1, 2, 4, hardware_workers()];
    counts.sort_unstable();
    counts.dedup();
    counts
}

fn solvers(c: &mut Criterion) {
    let size = 128;
    for method in [Method::Fim, Method::Ifim, Method::Oracle] {
        let mut group = c.benchmark_group(format!("{method}/example2/{size}"));
        group.sample_size(10);
        for workers in worker_counts() {
            let exec = Executor::new(workers).unwrap();
            let (grid, bc) = make_example(2, size).unwrap();
            group.bench_with_input(BenchmarkId::from_parameter(workers), &exec, |b, exec| {
                b.iter(|| {
                    let mut g = grid.clone();
                    black_box(method.run(&mut g, &bc, DEFAULT_TOL, exec).unwrap());
                })
            });
        }
        group.finish();
    }
}

fn map_cells(c: &mut Criterion) {
    let (grid, _) = make_example(5, 512).unwrap();
    let cells: Vec<usize> = (0..grid.len()).collect();
    let mut group = c.benchmark_group("map_cells/local_update/512");
    for workers in worker_counts() {
        let exec = Executor::new(workers).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(workers), &exec, |b, exec| {
            b.iter(|| black_box(exec.map_cells(&cells, |c| grid.local_update(grid.phi(), c))))
        });
    }
    group.finish();
}

criterion_group!(benches, solvers, map_cells);
criterion_main!(benches);
