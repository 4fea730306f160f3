//! Serial fast marching.
//!
//! Seeds start Accepted, their neighbors Tentative in an [`IndexedMinHeap`].
//! Each step accepts the smallest tentative value and recomputes its
//! non-accepted neighbors, pushing Distant cells and decreasing the keys of
//! Tentative ones.

mod heap;

use std::time::Instant;

pub use heap::{HeapError, IndexedMinHeap};

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Grid};
use crate::stats::{SolverResult, SolverStats};

pub fn solve_fmm(grid: &mut Grid, bc: &BoundaryCondition) -> Result<SolverResult> {
    solve_fmm_traced(grid, bc).map(|(r, _)| r)
}

/// [`solve_fmm`] that also returns the cells in acceptance order (seeds excluded).
pub fn solve_fmm_traced(grid: &mut Grid, bc: &BoundaryCondition) -> Result<(SolverResult, Vec<usize>)> {
    if bc.is_empty() {
        return Err(Error::InvalidBoundary("no seed cells".into()));
    }
    let start = Instant::now();
    grid.apply(bc)?;
    let n = grid.len();
    let mut accepted = vec![false; n];
    for &(c, _) in bc.seeds() {
        accepted[c] = true;
    }

    let mut heap = IndexedMinHeap::with_capacity(n);
    let mut stats = SolverStats::default();

    let mut initial: Vec<usize> = bc
        .seeds()
        .iter()
        .flat_map(|&(c, _)| grid.neighbors(c).collect::<Vec<_>>())
        .filter(|&nb| !accepted[nb])
        .collect();
    initial.sort_unstable();
    initial.dedup();
    for nb in initial {
        let v = grid.local_update(grid.phi(), nb);
        stats.solver_calls += 1;
        grid.phi_mut()[nb] = v;
        heap.push(nb, v)?;
    }
    stats.peak_active = heap.len();

    let mut order = Vec::with_capacity(n);
    let mut nbrs = Vec::with_capacity(4);
    while let Some((c, _)) = heap.pop() {
        accepted[c] = true;
        order.push(c);
        stats.iterations += 1;
        nbrs.clear();
        nbrs.extend(grid.neighbors(c).filter(|&nb| !accepted[nb]));
        for &nb in &nbrs {
            let v = grid.local_update(grid.phi(), nb);
            stats.solver_calls += 1;
            match heap.key(nb) {
                Some(key) => {
                    if v < key {
                        grid.phi_mut()[nb] = v;
                        heap.decrease_key(nb, v)?;
                    }
                }
                None => {
                    grid.phi_mut()[nb] = v;
                    heap.push(nb, v)?;
                }
            }
        }
        stats.peak_active = stats.peak_active.max(heap.len());
    }

    stats.wall_time = start.elapsed().as_secs_f64();
    Ok((
        SolverResult {
            phi: grid.phi().to_vec(),
            stats,
        },
        order,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpeedField;

    const CORNER: f64 = 1.0 + std::f64::consts::FRAC_1_SQRT_2;

    fn three_by_three() -> (Grid, BoundaryCondition) {
        let g = Grid::new(3, 3, 1.0, 1.0, (0.0, 0.0), SpeedField::Uniform(1.0)).unwrap();
        (g, BoundaryCondition::new(vec![(4, 0.0)]).unwrap())
    }

    #[test]
    fn three_by_three_hand_solution() {
        let (mut g, bc) = three_by_three();
        let r = solve_fmm(&mut g, &bc).unwrap();
        for c in [1, 3, 5, 7] {
            assert_eq!(r.phi[c], 1.0);
        }
        for c in [0, 2, 6, 8] {
            assert!((r.phi[c] - CORNER).abs() < 1e-15);
        }
        assert_eq!(r.phi[4], 0.0);
    }

    #[test]
    fn all_seeded_makes_no_calls() {
        let mut g = Grid::new(2, 2, 1.0, 1.0, (0.0, 0.0), SpeedField::Uniform(1.0)).unwrap();
        let bc = BoundaryCondition::new(vec![(0, 0.5), (1, 1.0), (2, 2.0), (3, 3.0)]).unwrap();
        let r = solve_fmm(&mut g, &bc).unwrap();
        assert_eq!(r.phi, vec![0.5, 1.0, 2.0, 3.0]);
        assert_eq!(r.stats.solver_calls, 0);
    }

    #[test]
    fn fully_blocked_except_seed() {
        let mut speed = vec![0.0; 9];
        speed[4] = 1.0;
        let mut g = Grid::new(3, 3, 1.0, 1.0, (0.0, 0.0), SpeedField::Cells(speed)).unwrap();
        let r = solve_fmm(&mut g, &BoundaryCondition::new(vec![(4, 0.0)]).unwrap()).unwrap();
        assert_eq!(r.phi.iter().filter(|v| v.is_finite()).count(), 1);
    }

    #[test]
    fn errors() {
        let (mut g, _) = three_by_three();
        assert!(solve_fmm(&mut g, &BoundaryCondition::default()).is_err());
        let mut speed = vec![1.0; 9];
        speed[0] = 0.0;
        let mut g = Grid::new(3, 3, 1.0, 1.0, (0.0, 0.0), SpeedField::Cells(speed)).unwrap();
        assert!(solve_fmm(&mut g, &BoundaryCondition::new(vec![(0, 0.0)]).unwrap()).is_err());
    }

    #[test]
    fn each_reachable_cell_accepted_once() {
        let mut speed = vec![1.0; 25];
        // wall with the corner cell (4, 4) enclosed
        speed[3 * 5 + 4] = 0.0;
        speed[4 * 5 + 3] = 0.0;
        let mut g = Grid::new(5, 5, 1.0, 1.0, (0.0, 0.0), SpeedField::Cells(speed)).unwrap();
        let (r, order) = solve_fmm_traced(&mut g, &BoundaryCondition::new(vec![(0, 0.0)]).unwrap()).unwrap();
        let mut sorted = order.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), order.len());
        assert_eq!(order.len(), 25 - 1 - 2 - 1);
        assert_eq!(r.phi[24], f64::INFINITY);
        assert!(order.windows(2).all(|w| r.phi[w[0]] <= r.phi[w[1]]));
    }
}
