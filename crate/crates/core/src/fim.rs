//! Fast iterative method with per-iteration neighbor convergence checks.
//!
//! Each iteration runs two phases on the [`Executor`]:
//!
//! 1. every Active cell is recomputed from the field as it stood at the start
//!    of the iteration; a cell whose value moves by at most `tol` converges
//!    and leaves the list;
//! 2. every non-active free neighbor of a converged cell is recomputed from the
//!    field written by phase 1. A neighbor that improves (or leaves `+inf`)
//!    takes the new value and joins the Active list.
//!
//! List membership is reconciled on the calling thread after each phase, in
//! list order, so the output is bit-identical for any worker count. Cells that
//! converged earlier may be re-activated by phase 2.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Grid};
use crate::parallel::Executor;
use crate::stats::{SolverResult, SolverStats};

pub fn solve_fim(grid: &mut Grid, bc: &BoundaryCondition, tol: f64, workers: usize) -> Result<SolverResult> {
    solve_fim_with(grid, bc, tol, &Executor::new(workers)?)
}

/// Cells adjacent to the seeds that a solver may update, ascending.
pub(crate) fn seed_frontier(grid: &Grid, bc: &BoundaryCondition) -> Vec<usize> {
    let mut front: Vec<usize> = bc
        .seeds()
        .iter()
        .flat_map(|&(c, _)| grid.neighbors(c).collect::<Vec<_>>())
        .filter(|&nb| grid.is_free(nb))
        .collect();
    front.sort_unstable();
    front.dedup();
    front
}

pub(crate) fn check_args(bc: &BoundaryCondition, tol: f64) -> Result<()> {
    if bc.is_empty() {
        return Err(Error::InvalidBoundary("no seed cells".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Iteration budget; generous, since each cell normally needs only a few visits.
pub(crate) fn iteration_limit(grid: &Grid) -> usize {
    grid.len() + 10 * (grid.nx() + grid.ny())
}

pub fn solve_fim_with(grid: &mut Grid, bc: &BoundaryCondition, tol: f64, exec: &Executor) -> Result<SolverResult> {
    check_args(bc, tol)?;
    let start = Instant::now();
    grid.apply(bc)?;
    let n = grid.len();
    let limit = iteration_limit(grid);

    let mut active = seed_frontier(grid, bc);
    let mut in_active = vec![false; n];
    for &c in &active {
        in_active[c] = true;
    }
    let mut stats = SolverStats::default();
    let mut converged = Vec::new();
    let mut checks = Vec::new();
    let mut next = Vec::new();

    while !active.is_empty() {
        stats.iterations += 1;
        if stats.iterations > limit {
            return Err(Error::NotConverged { method: "fim", limit });
        }
        stats.peak_active = stats.peak_active.max(active.len());

        // phase 1: update the Active list against the iteration-start snapshot
        let g: &Grid = grid;
        let updated = exec.map_cells(&active, |c| g.local_update(g.phi(), c));
        stats.solver_calls += active.len() as u64;

        converged.clear();
        next.clear();
        let phi = grid.phi_mut();
        for (&c, v) in active.iter().zip(updated) {
            let old = phi[c];
            phi[c] = v;
            if v.is_finite() && (v - old).abs() <= tol {
                converged.push(c);
            } else if v.is_finite() {
                next.push(c);
            }
            // +inf with no finite upwind neighbor: dropped, a neighbor will re-add it
        }

        // phase 2: convergence checks of the neighbors of converged cells
        checks.clear();
        for &c in &converged {
            checks.extend(grid.neighbors(c).filter(|&nb| grid.is_free(nb) && !in_active[nb]));
        }
        let g: &Grid = grid;
        let candidates = exec.map_cells(&checks, |nb| g.local_update(g.phi(), nb));
        stats.solver_calls += checks.len() as u64;

        for &c in &active {
            in_active[c] = false;
        }
        for &c in &next {
            in_active[c] = true;
        }
        let phi = grid.phi_mut();
        for (&nb, q) in checks.iter().zip(candidates) {
            let old = phi[nb];
            let improves = if old.is_finite() { q < old - tol } else { q.is_finite() };
            if improves {
                phi[nb] = q;
                if !in_active[nb] {
                    in_active[nb] = true;
                    next.push(nb);
                }
            }
        }
        std::mem::swap(&mut active, &mut next);
    }

    stats.wall_time = start.elapsed().as_secs_f64();
    Ok(SolverResult {
        phi: grid.phi().to_vec(),
        stats,
    })
}
