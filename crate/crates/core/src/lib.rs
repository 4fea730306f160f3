//! Eikonal solvers on uniform 2D grids.
//!
//! Four solvers of the first-order Godunov upwind discretization of
//! `|grad phi| = 1 / F` share one grid type and one local update formula:
//!
//! - [`fmm`]: serial fast marching with an indexed binary heap.
//! - [`fsm`]: serial fast sweeping, Gauss-Seidel over four alternating orderings.
//! - [`fim`]: fast iterative method with per-iteration neighbor convergence checks.
//! - [`ifim`]: improved fast iterative method (update step without neighbor
//!   checks followed by a remedy step).
//!
//! [`oracle`] provides a brute-force Jacobi fixpoint used as ground truth,
//! [`parallel`] the deterministic fork-join executor behind the iterative
//! solvers, [`harness`] the example catalog and benchmark reporting, and
//! [`pathplan`] barrier maps and gradient-descent path extraction.

pub mod error;
pub mod fim;
pub mod fmm;
pub mod fsm;
pub mod grid;
pub mod harness;
pub mod ifim;
pub mod local_solver;
pub mod oracle;
pub mod parallel;
pub mod pathplan;
pub mod stats;

pub use error::{Error, Result};
pub use grid::{BoundaryCondition, CellIndex, CellState, Direction, Grid, SpeedField};
pub use parallel::Executor;
pub use stats::{SolverResult, SolverStats};

/// Default absolute tolerance used wherever two floating point values are
/// compared for "no change".
pub const DEFAULT_TOL: f64 = 1e-12;
