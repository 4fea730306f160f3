/// Counters collected by every solver.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolverStats {
    /// Heap pops (FMM), productive sweep rounds (FSM), set iterations (FIM,
    /// iFIM update + remedy) or Jacobi passes (oracle).
    pub iterations: usize,
    /// Local-solver invocations, including neighbor convergence checks.
    pub solver_calls: u64,
    /// Largest active set (or heap) size observed.
    pub peak_active: usize,
    /// Largest remedy set size observed; zero for methods without one.
    pub peak_remedy: usize,
    /// Seconds.
    pub wall_time: f64,
}

impl SolverStats {
    /// Combines the counters of two consecutive phases.
    pub fn merge(self, other: SolverStats) -> SolverStats {
        SolverStats {
            iterations: self.iterations + other.iterations,
            solver_calls: self.solver_calls + other.solver_calls,
            peak_active: self.peak_active.max(other.peak_active),
            peak_remedy: self.peak_remedy.max(other.peak_remedy),
            wall_time: self.wall_time + other.wall_time,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub phi: Vec<f64>,
    pub stats: SolverStats,
}

impl SolverResult {
    /// Largest absolute difference to another field; matching infinities count as equal.
    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        max_abs_diff(&self.phi, other)
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| if x == y { 0.0 } else { (x - y).abs() })
        .fold(0.0, f64::max)
}
