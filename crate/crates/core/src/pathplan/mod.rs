//! Barrier maps and shortest-path extraction by gradient descent on a solved
//! travel-time field.

mod descent;
mod map;

pub use descent::{gradient_descent_path, PathPolyline};
pub use map::{
    barrier_speed, load_barrier_map, parse_csv, parse_pgm, synthetic_goal, synthetic_map,
    synthetic_source, BarrierMap,
};

use crate::error::Result;
use crate::grid::{seed_point, BoundaryCondition, CellIndex, Grid};

/// Unit-spacing grid over a barrier map, origin at cell `(0, 0)`.
pub fn map_grid(map: &BarrierMap) -> Result<Grid> {
    Grid::new(map.width(), map.height(), 1.0, 1.0, (0.0, 0.0), barrier_speed(map))
}

/// Grid plus a zero-valued point seed at `source`.
pub fn map_problem(map: &BarrierMap, source: (usize, usize)) -> Result<(Grid, BoundaryCondition)> {
    let grid = map_grid(map)?;
    let bc = seed_point(&grid, CellIndex::new(source.0, source.1), 0.0)?;
    Ok((grid, bc))
}
