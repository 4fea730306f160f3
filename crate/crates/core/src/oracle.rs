//! Brute-force reference solution.
//!
//! Every free cell is recomputed from a snapshot of the previous pass
//! (Jacobi), keeping `min(old, candidate)`, until no cell moves by `tol` or
//! more. Slow, order-independent and trivially correct; used as ground truth
//! by the cross-method tests.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Grid};
use crate::parallel::Executor;
use crate::stats::{max_abs_diff, SolverResult, SolverStats};

pub fn solve_fixpoint(grid: &mut Grid, bc: &BoundaryCondition, tol: f64) -> Result<SolverResult> {
    solve_fixpoint_with(grid, bc, tol, &Executor::sequential())
}

/// Pass budget: exceeding it is reported as [`Error::NotConverged`].
pub fn max_passes(grid: &Grid) -> usize {
    10 * (grid.nx() + grid.ny())
}

pub fn solve_fixpoint_with(
    grid: &mut Grid,
    bc: &BoundaryCondition,
    tol: f64,
    exec: &Executor,
) -> Result<SolverResult> {
    if bc.is_empty() {
        return Err(Error::InvalidBoundary("no seed cells".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let start = Instant::now();
    grid.apply(bc)?;
    let free: Vec<usize> = (0..grid.len()).filter(|&c| grid.is_free(c)).collect();
    let limit = max_passes(grid);
    let mut stats = SolverStats {
        peak_active: free.len(),
        ..SolverStats::default()
    };
    loop {
        let g: &Grid = grid;
        let next = exec.map_cells(&free, |c| g.local_update(g.phi(), c).min(g.phi()[c]));
        stats.solver_calls += free.len() as u64;
        stats.iterations += 1;
        let phi = grid.phi_mut();
        let mut change = 0.0f64;
        for (&c, v) in free.iter().zip(next) {
            if v < phi[c] {
                change = change.max(phi[c] - v);
                phi[c] = v;
            }
        }
        if change < tol {
            break;
        }
        if stats.iterations >= limit {
            return Err(Error::NotConverged {
                method: "oracle",
                limit,
            });
        }
    }
    stats.wall_time = start.elapsed().as_secs_f64();
    Ok(SolverResult {
        phi: grid.phi().to_vec(),
        stats,
    })
}

/// Exact travel time from a circle expanding at unit speed: `|p - center| - radius`.
pub fn analytic_example1(point: (f64, f64), center: (f64, f64), radius: f64) -> f64 {
    (point.0 - center.0).hypot(point.1 - center.1) - radius
}

/// Largest `|phi - exact|` over finite cells.
pub fn max_error_vs<F: Fn(f64, f64) -> f64>(grid: &Grid, phi: &[f64], exact: F) -> f64 {
    let reference: Vec<f64> = (0..grid.len())
        .map(|c| {
            if phi[c].is_finite() {
                let (x, y) = grid.center(c);
                exact(x, y)
            } else {
                phi[c]
            }
        })
        .collect();
    max_abs_diff(phi, &reference)
}
