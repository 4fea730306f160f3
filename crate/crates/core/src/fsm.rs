//! Serial fast sweeping: in-place Gauss-Seidel updates over four alternating
//! orderings, repeated until a full round of four sweeps changes no cell by
//! more than the tolerance.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Grid};
use crate::stats::{SolverResult, SolverStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepOrdering {
    /// i ascending, j ascending.
    IncIIncJ,
    /// i descending, j ascending.
    DecIIncJ,
    /// i descending, j descending.
    DecIDecJ,
    /// i ascending, j descending.
    IncIDecJ,
}

impl SweepOrdering {
    /// The standard round, in order.
    pub const ROUND: [SweepOrdering; 4] = [
        SweepOrdering::IncIIncJ,
        SweepOrdering::DecIIncJ,
        SweepOrdering::DecIDecJ,
        SweepOrdering::IncIDecJ,
    ];

    fn reversed(self) -> (bool, bool) {
        match self {
            SweepOrdering::IncIIncJ => (false, false),
            SweepOrdering::DecIIncJ => (true, false),
            SweepOrdering::DecIDecJ => (true, true),
            SweepOrdering::IncIDecJ => (false, true),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SweepOutcome {
    /// Largest decrease of any cell; `+inf` if a cell went from `+inf` to finite.
    pub max_change: f64,
    pub solver_calls: u64,
}

/// One Gauss-Seidel sweep. Every free cell takes `min(old, candidate)`.
pub fn sweep(grid: &mut Grid, ordering: SweepOrdering) -> SweepOutcome {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (rev_i, rev_j) = ordering.reversed();
    let mut out = SweepOutcome::default();
    for jj in 0..ny {
        let j = if rev_j { ny - 1 - jj } else { jj };
        for ii in 0..nx {
            let i = if rev_i { nx - 1 - ii } else { ii };
            let c = j * nx + i;
            if !grid.is_free(c) {
                continue;
            }
            let cand = grid.local_update(grid.phi(), c);
            out.solver_calls += 1;
            let old = grid.phi()[c];
            if cand < old {
                out.max_change = out.max_change.max(old - cand);
                grid.phi_mut()[c] = cand;
            }
        }
    }
    out
}

pub fn solve_fsm(grid: &mut Grid, bc: &BoundaryCondition, tol: f64) -> Result<SolverResult> {
    solve_fsm_with_orderings(grid, bc, tol, SweepOrdering::ROUND)
}

/// Upper bound on rounds before giving up.
pub fn max_rounds(grid: &Grid) -> usize {
    10 * (grid.nx() + grid.ny())
}

/// Fast sweeping with a caller-chosen order of the four sweeps within a round.
///
/// `stats.iterations` counts the rounds that changed some cell by more than
/// `tol`; the final confirming round is not included.
pub fn solve_fsm_with_orderings(
    grid: &mut Grid,
    bc: &BoundaryCondition,
    tol: f64,
    orderings: [SweepOrdering; 4],
) -> Result<SolverResult> {
    if bc.is_empty() {
        return Err(Error::InvalidBoundary("no seed cells".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let start = Instant::now();
    grid.apply(bc)?;
    let mut stats = SolverStats::default();
    let limit = max_rounds(grid);
    let mut rounds = 0;
    loop {
        let mut change = 0.0f64;
        for ordering in orderings {
            let o = sweep(grid, ordering);
            stats.solver_calls += o.solver_calls;
            change = change.max(o.max_change);
        }
        rounds += 1;
        if change <= tol {
            break;
        }
        stats.iterations += 1;
        if rounds >= limit {
            return Err(Error::NotConverged {
                method: "fsm",
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
