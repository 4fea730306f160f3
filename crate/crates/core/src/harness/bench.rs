use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::Hasher;
use std::path::Path;

use super::{make_example, max_residual, Method};
use crate::error::{Error, Result};
use crate::parallel::Executor;
use crate::stats::max_abs_diff;
use crate::DEFAULT_TOL;

/// Bound on `max_residual` and `max_diff_vs_oracle` for a run to count as agreeing.
pub const AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub example: u8,
    /// Cells per side.
    pub n: usize,
    pub method: Method,
    pub workers: usize,
    /// Minimum over repetitions, seconds.
    pub wall_time: f64,
    pub solver_calls: u64,
    pub iterations: usize,
    pub peak_active: usize,
    pub peak_remedy: usize,
    pub max_residual: f64,
    pub max_diff_vs_oracle: f64,
}

impl BenchRow {
    pub fn cells(&self) -> usize {
        self.n * self.n
    }

    pub fn agrees(&self) -> bool {
        self.max_residual <= AGREEMENT_TOL && self.max_diff_vs_oracle <= AGREEMENT_TOL
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "example,n,cells,method,workers,wall_time_s,solver_calls,iterations,\
peak_active,peak_remedy,max_residual,max_diff_vs_oracle";

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, example: u8, n: usize, method: Method) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.example == example && r.n == n && r.method == method)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.6e},{},{},{},{},{:.3e},{:.3e}",
                r.example,
                r.n,
                r.cells(),
                r.method,
                r.workers,
                r.wall_time,
                r.solver_calls,
                r.iterations,
                r.peak_active,
                r.peak_remedy,
                r.max_residual,
                r.max_diff_vs_oracle
            );
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// [`run_bench_with`] at the default tolerance.
pub fn run_bench(ids: &[u8], sizes: &[usize], methods: &[Method], workers: usize, reps: usize) -> Result<BenchReport> {
    run_bench_with(ids, sizes, methods, workers, reps, DEFAULT_TOL)
}

/// One row per (example, size, method). Every run starts from a fresh grid;
/// counters come from the last repetition (they do not vary between runs).
pub fn run_bench_with(
    ids: &[u8],
    sizes: &[usize],
    methods: &[Method],
    workers: usize,
    reps: usize,
    tol: f64,
) -> Result<BenchReport> {
    let mut report = BenchReport::default();
    if methods.is_empty() {
        return Ok(report);
    }
    let exec = Executor::new(workers)?;
    let reps = reps.max(1);
    for &id in ids {
        for &n in sizes {
            let (mut grid, bc) = make_example(id, n)?;
            let reference = Method::Oracle.run(&mut grid, &bc, tol, &exec)?.phi;
            for &method in methods {
                let mut best = f64::INFINITY;
                let mut last = None;
                for _ in 0..reps {
                    let (mut g, bc) = make_example(id, n)?;
                    let r = method.run(&mut g, &bc, tol, &exec)?;
                    best = best.min(r.stats.wall_time);
                    last = Some((g, r));
                }
                let (g, r) = last.expect("at least one repetition");
                report.rows.push(BenchRow {
                    example: id,
                    n,
                    method,
                    workers: exec.workers(),
                    wall_time: best,
                    solver_calls: r.stats.solver_calls,
                    iterations: r.stats.iterations,
                    peak_active: r.stats.peak_active,
                    peak_remedy: r.stats.peak_remedy,
                    max_residual: max_residual(&g),
                    max_diff_vs_oracle: max_abs_diff(&r.phi, &reference),
                });
            }
        }
    }
    Ok(report)
}

/// Hash of the exact bit patterns of a field.
pub fn phi_hash(phi: &[f64]) -> u64 {
    let mut h = DefaultHasher::new();
    for v in phi {
        h.write_u64(v.to_bits());
    }
    h.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepRow {
    pub workers: usize,
    pub wall_time_ns: u128,
    pub solver_calls: u64,
    pub phi_hash: u64,
}

impl SweepRow {
    pub fn wall_time(&self) -> f64 {
        self.wall_time_ns as f64 * 1e-9
    }
}

/// Runs one parallel method at each worker count.
pub fn worker_sweep(id: u8, n: usize, method: Method, workers: &[usize], tol: f64) -> Result<Vec<SweepRow>> {
    if !method.is_parallel() {
        return Err(Error::InvalidArgument(format!(
            "{method} is sequential; worker sweeps need fim, ifim or oracle"
        )));
    }
    let mut rows = Vec::with_capacity(workers.len());
    for &w in workers {
        let exec = Executor::new(w)?;
        let (mut grid, bc) = make_example(id, n)?;
        let r = method.run(&mut grid, &bc, tol, &exec)?;
        rows.push(SweepRow {
            workers: exec.workers(),
            wall_time_ns: (r.stats.wall_time * 1e9) as u128,
            solver_calls: r.stats.solver_calls,
            phi_hash: phi_hash(&r.phi),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyRow {
    pub method: Method,
    pub max_diff_vs_oracle: f64,
    pub max_residual: f64,
}

impl VerifyRow {
    pub fn agrees(&self) -> bool {
        self.max_residual <= AGREEMENT_TOL && self.max_diff_vs_oracle <= AGREEMENT_TOL
    }
}

/// Runs the oracle and all four solvers on one example; the oracle row comes first.
pub fn verify_example(id: u8, n: usize, tol: f64, exec: &Executor) -> Result<Vec<VerifyRow>> {
    let (mut grid, bc) = make_example(id, n)?;
    let reference = Method::Oracle.run(&mut grid, &bc, tol, exec)?.phi;
    let mut rows = vec![VerifyRow {
        method: Method::Oracle,
        max_diff_vs_oracle: 0.0,
        max_residual: max_residual(&grid),
    }];
    for method in Method::SOLVERS {
        let r = method.run(&mut grid, &bc, tol, exec)?;
        rows.push(VerifyRow {
            method,
            max_diff_vs_oracle: max_abs_diff(&r.phi, &reference),
            max_residual: max_residual(&grid),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_methods_give_empty_report() {
        let r = run_bench(&[1], &[16], &[], 1, 1).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.to_csv().lines().count(), 1);
    }

    #[test]
    fn csv_has_one_line_per_row() {
        let r = run_bench(&[1], &[16], &[Method::Fmm, Method::Ifim], 1, 1).unwrap();
        assert_eq!(r.len(), 2);
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("1,16,256,fmm,1,"));
        assert_eq!(lines[2].split(',').count(), lines[0].split(',').count());
        assert!(r.rows.iter().all(BenchRow::agrees));
    }

    #[test]
    fn sweep_rejects_sequential_methods() {
        assert!(worker_sweep(1, 16, Method::Fmm, &[1], 1e-12).is_err());
        assert!(worker_sweep(1, 16, Method::Fsm, &[1], 1e-12).is_err());
        assert_eq!(worker_sweep(1, 16, Method::Fim, &[1], 1e-12).unwrap().len(), 1);
    }

    #[test]
    fn hash_distinguishes_bits() {
        assert_eq!(phi_hash(&[1.0, 2.0]), phi_hash(&[1.0, 2.0]));
        assert_ne!(phi_hash(&[0.0]), phi_hash(&[-0.0]));
    }
}
