//! Example catalog, benchmark runner, field export and residual checks.

mod bench;
mod examples;
mod io;

use std::fmt;
use std::str::FromStr;

pub use bench::{
    phi_hash, run_bench, run_bench_with, verify_example, worker_sweep, BenchReport, BenchRow, SweepRow, VerifyRow,
    AGREEMENT_TOL,
};
pub use examples::{
    make_example, speed_example3, speed_example5, Circle, ExampleSeeds, ExampleSpec, ExampleSpeed, DOMAIN, EXAMPLES,
    EXAMPLE5_EPSILON,
};
pub use io::{export_field_csv, import_field_csv, read_field_csv, write_field_csv, FieldCsv};

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Grid};
use crate::parallel::Executor;
use crate::stats::SolverResult;
use crate::{fim, fmm, fsm, ifim, oracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Fmm,
    Fsm,
    Fim,
    Ifim,
    Oracle,
}

impl Method {
    /// The four solvers compared against the oracle.
    pub const SOLVERS: [Method; 4] = [Method::Fmm, Method::Fsm, Method::Fim, Method::Ifim];
    pub const ALL: [Method; 5] = [Method::Fmm, Method::Fsm, Method::Fim, Method::Ifim, Method::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Method::Fmm => "fmm",
            Method::Fsm => "fsm",
            Method::Fim => "fim",
            Method::Ifim => "ifim",
            Method::Oracle => "oracle",
        }
    }

    /// Whether the method runs its phases on the [`Executor`].
    pub fn is_parallel(self) -> bool {
        matches!(self, Method::Fim | Method::Ifim | Method::Oracle)
    }

    /// Solves `grid` in place. FMM ignores `tol`; FMM and FSM ignore `exec`.
    pub fn run(self, grid: &mut Grid, bc: &BoundaryCondition, tol: f64, exec: &Executor) -> Result<SolverResult> {
        match self {
            Method::Fmm => fmm::solve_fmm(grid, bc),
            Method::Fsm => fsm::solve_fsm(grid, bc, tol),
            Method::Fim => fim::solve_fim_with(grid, bc, tol, exec),
            Method::Ifim => ifim::solve_ifim_with(grid, bc, tol, exec),
            Method::Oracle => oracle::solve_fixpoint_with(grid, bc, tol, exec),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}, expected fmm|fsm|fim|ifim|oracle")))
    }
}

/// Largest `|phi - local_update(phi)|` over free cells with finite `phi`;
/// 0 when there are none.
pub fn max_residual(grid: &Grid) -> f64 {
    let phi = grid.phi();
    (0..grid.len())
        .filter(|&c| grid.is_free(c) && phi[c].is_finite())
        .map(|c| {
            let r = grid.local_update(phi, c) - phi[c];
            if r.is_nan() {
                f64::INFINITY
            } else {
                r.abs()
            }
        })
        .fold(0.0, f64::max)
}
