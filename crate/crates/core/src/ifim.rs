//! Improved fast iterative method.
//!
//! Three stages:
//!
//! 1. **Update.** Active cells are recomputed from the iteration-start
//!    snapshot. A cell whose value is unchanged (within `tol`) moves to the
//!    Source set and its free neighbors outside Active and Source join Active
//!    with value `+inf`; no local solve is spent on them until they are
//!    processed as Active members. Source cells are never revisited here.
//! 2. **Remedy set.** One full-grid pass recomputes every free cell without
//!    writing; cells whose value would change form the Remedy set.
//! 3. **Remedy.** Members are recomputed from the snapshot. A member that
//!    decreases takes the new value and pulls its free neighbors into the
//!    set; a member that does not decrease leaves, unless a neighbor pulled
//!    it back in during the same iteration.
//!
//! All phases run on the [`Executor`] with single-threaded reconciliation, so
//! the output does not depend on the worker count.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fim::{check_args, iteration_limit, seed_frontier};
use crate::grid::{BoundaryCondition, Grid};
use crate::parallel::Executor;
use crate::stats::{SolverResult, SolverStats};

/// Cells whose value fails the fixpoint test, as a flag per cell plus a dense list.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RemedySet {
    member: Vec<bool>,
    cells: Vec<usize>,
}

impl RemedySet {
    pub fn empty(len: usize) -> Self {
        RemedySet {
            member: vec![false; len],
            cells: Vec::new(),
        }
    }

    /// Builds a set from a list of cells; duplicates are ignored.
    pub fn from_cells(len: usize, cells: impl IntoIterator<Item = usize>) -> Self {
        let mut set = RemedySet::empty(len);
        for c in cells {
            set.insert(c);
        }
        set
    }

    pub fn insert(&mut self, c: usize) -> bool {
        if self.member[c] {
            return false;
        }
        self.member[c] = true;
        self.cells.push(c);
        true
    }

    pub fn contains(&self, c: usize) -> bool {
        self.member[c]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Outcome of the update stage.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UpdateStep {
    pub stats: SolverStats,
    /// Sum over iterations of the Active list length.
    pub active_visits: u64,
}

/// Counters of each stage of [`solve_ifim`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IfimBreakdown {
    pub update: UpdateStep,
    pub remedy_initial: usize,
    pub remedy_build_calls: u64,
    pub remedy: SolverStats,
}

/// Applies `bc` and runs the update stage until the Active set is empty.
pub fn ifim_update_step(grid: &mut Grid, bc: &BoundaryCondition, tol: f64, exec: &Executor) -> Result<UpdateStep> {
    check_args(bc, tol)?;
    let start = Instant::now();
    grid.apply(bc)?;
    let n = grid.len();
    let limit = iteration_limit(grid);

    let mut active = seed_frontier(grid, bc);
    let mut in_active = vec![false; n];
    let mut in_source = vec![false; n];
    for &c in &active {
        in_active[c] = true;
    }
    for &(c, _) in bc.seeds() {
        in_source[c] = true;
    }

    let mut out = UpdateStep::default();
    let mut converged = Vec::new();
    let mut next = Vec::new();
    #[cfg(debug_assertions)]
    let calls = std::sync::atomic::AtomicU64::new(0);

    while !active.is_empty() {
        out.stats.iterations += 1;
        if out.stats.iterations > limit {
            return Err(Error::NotConverged { method: "ifim", limit });
        }
        out.stats.peak_active = out.stats.peak_active.max(active.len());
        out.active_visits += active.len() as u64;

        let g: &Grid = grid;
        #[cfg(debug_assertions)]
        let act: &[bool] = &in_active;
        let updated = exec.map_cells(&active, |c| {
            #[cfg(debug_assertions)]
            {
                assert!(act[c], "local solve on non-active cell {c}");
                calls.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            }
            g.local_update(g.phi(), c)
        });

        converged.clear();
        next.clear();
        let phi = grid.phi_mut();
        for (&c, v) in active.iter().zip(updated) {
            let old = phi[c];
            if v.is_finite() && (v - old).abs() <= tol {
                converged.push(c);
                in_source[c] = true;
                in_active[c] = false;
            } else if v.is_finite() {
                phi[c] = v;
                next.push(c);
            } else {
                in_active[c] = false;
            }
        }
        for &c in &converged {
            for dir in crate::grid::Direction::ALL {
                if let Some(nb) = grid.neighbor(c, dir) {
                    if grid.is_free(nb) && !in_active[nb] && !in_source[nb] {
                        in_active[nb] = true;
                        next.push(nb);
                    }
                }
            }
        }
        std::mem::swap(&mut active, &mut next);
    }

    out.stats.solver_calls = out.active_visits;
    #[cfg(debug_assertions)]
    debug_assert_eq!(calls.into_inner(), out.stats.solver_calls);
    out.stats.wall_time = start.elapsed().as_secs_f64();
    Ok(out)
}

/// Full-grid pass collecting the free cells where `|recomputed - phi| > tol`.
/// `phi` is not modified. Returns the set and the number of local solves.
pub fn build_remedy_set(grid: &Grid, tol: f64, exec: &Executor) -> (RemedySet, u64) {
    let free: Vec<usize> = (0..grid.len()).filter(|&c| grid.is_free(c)).collect();
    let fresh = exec.map_cells(&free, |c| grid.local_update(grid.phi(), c));
    let phi = grid.phi();
    let stale = free.iter().zip(fresh).filter_map(|(&c, v)| {
        let old = phi[c];
        let differs = if v.is_finite() && old.is_finite() {
            (v - old).abs() > tol
        } else {
            v != old
        };
        differs.then_some(c)
    });
    (RemedySet::from_cells(grid.len(), stale), free.len() as u64)
}

/// Iterates the remedy set until it is empty. `phi` only ever decreases.
pub fn ifim_remedy_step(grid: &mut Grid, remedy: RemedySet, tol: f64, exec: &Executor) -> Result<SolverStats> {
    let start = Instant::now();
    let n = grid.len();
    let limit = n.max(1) * 4;
    let RemedySet { mut member, cells: mut list } = remedy;
    let mut stats = SolverStats::default();
    let mut next = Vec::new();
    let mut lowered = Vec::new();

    while !list.is_empty() {
        stats.iterations += 1;
        if stats.iterations > limit {
            return Err(Error::NotConverged { method: "ifim remedy", limit });
        }
        stats.peak_remedy = stats.peak_remedy.max(list.len());

        let g: &Grid = grid;
        let fresh = exec.map_cells(&list, |c| g.local_update(g.phi(), c));
        stats.solver_calls += list.len() as u64;

        lowered.clear();
        let phi = grid.phi_mut();
        for (&c, v) in list.iter().zip(fresh) {
            let old = phi[c];
            let decreases = if old.is_finite() { v < old - tol } else { v.is_finite() };
            if decreases {
                phi[c] = v;
                lowered.push(c);
            }
        }

        for &c in &list {
            member[c] = false;
        }
        next.clear();
        for &c in &lowered {
            if !member[c] {
                member[c] = true;
                next.push(c);
            }
        }
        for &c in &lowered {
            for dir in crate::grid::Direction::ALL {
                if let Some(nb) = grid.neighbor(c, dir) {
                    if grid.is_free(nb) && !member[nb] {
                        member[nb] = true;
                        next.push(nb);
                    }
                }
            }
        }
        std::mem::swap(&mut list, &mut next);
    }
    stats.wall_time = start.elapsed().as_secs_f64();
    Ok(stats)
}

pub fn solve_ifim(grid: &mut Grid, bc: &BoundaryCondition, tol: f64, workers: usize) -> Result<SolverResult> {
    solve_ifim_with(grid, bc, tol, &Executor::new(workers)?)
}

pub fn solve_ifim_with(grid: &mut Grid, bc: &BoundaryCondition, tol: f64, exec: &Executor) -> Result<SolverResult> {
    solve_ifim_detailed(grid, bc, tol, exec).map(|(r, _)| r)
}

/// [`solve_ifim_with`] that also reports the counters of each stage.
pub fn solve_ifim_detailed(
    grid: &mut Grid,
    bc: &BoundaryCondition,
    tol: f64,
    exec: &Executor,
) -> Result<(SolverResult, IfimBreakdown)> {
    let start = Instant::now();
    let update = ifim_update_step(grid, bc, tol, exec)?;
    let (set, build_calls) = build_remedy_set(grid, tol, exec);
    let initial = set.len();
    let remedy = ifim_remedy_step(grid, set, tol, exec)?;

    let mut stats = update.stats.merge(remedy);
    stats.solver_calls += build_calls;
    stats.peak_remedy = stats.peak_remedy.max(initial);
    stats.wall_time = start.elapsed().as_secs_f64();
    let breakdown = IfimBreakdown {
        update,
        remedy_initial: initial,
        remedy_build_calls: build_calls,
        remedy,
    };
    Ok((
        SolverResult {
            phi: grid.phi().to_vec(),
            stats,
        },
        breakdown,
    ))
}
