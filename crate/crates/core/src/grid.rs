//! Uniform rectilinear 2D lattice holding `phi`, speed and per-cell state.
//!
//! Cells are addressed either by [`CellIndex`] `(i, j)` or by the row-major
//! linear index `j * nx + i`. Cell `(i, j)` sits at physical coordinate
//! `(x0 + i * dx, y0 + j * dy)`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::local_solver;

/// Per-cell bookkeeping flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Far,
    Active,
    /// Fixed by the boundary condition. Never modified by a solver.
    Source,
    Remedy,
    /// Zero speed. Keeps `phi = +inf` forever.
    Blocked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    MinusX,
    PlusX,
    MinusY,
    PlusY,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::MinusX,
        Direction::PlusX,
        Direction::MinusY,
        Direction::PlusY,
    ];

    /// `(di, dj)` step of this direction.
    pub fn offset(self) -> (i64, i64) {
        match self {
            Direction::MinusX => (-1, 0),
            Direction::PlusX => (1, 0),
            Direction::MinusY => (0, -1),
            Direction::PlusY => (0, 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub i: usize,
    pub j: usize,
}

impl CellIndex {
    pub fn new(i: usize, j: usize) -> Self {
        CellIndex { i, j }
    }
}

/// How speed values are assigned to cells at construction time.
#[derive(Debug, Clone)]
pub enum SpeedField {
    Uniform(f64),
    /// One value per cell in row-major order.
    Cells(Vec<f64>),
    /// Sampled at every cell center.
    Function(fn(f64, f64) -> f64),
}

#[derive(Debug, Clone)]
pub struct Grid {
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    origin: (f64, f64),
    phi: Vec<f64>,
    speed: Vec<f64>,
    state: Vec<CellState>,
}

impl Grid {
    pub fn new(
        nx: usize,
        ny: usize,
        dx: f64,
        dy: f64,
        origin: (f64, f64),
        speed: SpeedField,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGrid(format!(
                "cell counts must be positive, got {nx}x{ny}"
            )));
        }
        if !(dx > 0.0 && dx.is_finite() && dy > 0.0 && dy.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "spacings must be positive and finite, got dx={dx}, dy={dy}"
            )));
        }
        let n = nx * ny;
        let speed = match speed {
            SpeedField::Uniform(f) => vec![f; n],
            SpeedField::Cells(values) => {
                if values.len() != n {
                    return Err(Error::InvalidGrid(format!(
                        "speed field has {} values, grid has {n} cells",
                        values.len()
                    )));
                }
                values
            }
            SpeedField::Function(f) => (0..n)
                .map(|c| {
                    let (i, j) = (c % nx, c / nx);
                    f(origin.0 + i as f64 * dx, origin.1 + j as f64 * dy)
                })
                .collect(),
        };
        if let Some(c) = speed.iter().position(|f| !(*f >= 0.0 && f.is_finite())) {
            return Err(Error::InvalidGrid(format!(
                "speed at cell ({}, {}) is {}, must be finite and non-negative",
                c % nx,
                c / nx,
                speed[c]
            )));
        }
        let state = speed
            .iter()
            .map(|&f| if f == 0.0 { CellState::Blocked } else { CellState::Far })
            .collect();
        Ok(Grid {
            nx,
            ny,
            dx,
            dy,
            origin,
            phi: vec![f64::INFINITY; n],
            speed,
            state,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    /// Number of cells, `nx * ny`.
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn phi_mut(&mut self) -> &mut [f64] {
        &mut self.phi
    }

    pub fn speed(&self) -> &[f64] {
        &self.speed
    }

    pub fn states(&self) -> &[CellState] {
        &self.state
    }

    pub fn state(&self, c: usize) -> CellState {
        self.state[c]
    }

    pub fn is_blocked(&self, c: usize) -> bool {
        self.state[c] == CellState::Blocked
    }

    pub fn is_source(&self, c: usize) -> bool {
        self.state[c] == CellState::Source
    }

    /// True for cells a solver may write: neither Source nor Blocked.
    pub fn is_free(&self, c: usize) -> bool {
        !matches!(self.state[c], CellState::Source | CellState::Blocked)
    }

    pub fn index(&self, cell: CellIndex) -> usize {
        debug_assert!(cell.i < self.nx && cell.j < self.ny);
        cell.j * self.nx + cell.i
    }

    pub fn cell(&self, c: usize) -> CellIndex {
        CellIndex::new(c % self.nx, c / self.nx)
    }

    pub fn checked_index(&self, i: i64, j: i64) -> Result<usize> {
        if i < 0 || j < 0 || i as usize >= self.nx || j as usize >= self.ny {
            return Err(Error::OutOfBounds {
                i,
                j,
                nx: self.nx,
                ny: self.ny,
            });
        }
        Ok(j as usize * self.nx + i as usize)
    }

    /// Physical coordinate of the center of cell `c`.
    pub fn center(&self, c: usize) -> (f64, f64) {
        let CellIndex { i, j } = self.cell(c);
        (
            self.origin.0 + i as f64 * self.dx,
            self.origin.1 + j as f64 * self.dy,
        )
    }

    /// Linear index of the neighbor of `c` in `dir`, if it is in bounds.
    #[inline]
    pub fn neighbor(&self, c: usize, dir: Direction) -> Option<usize> {
        let (i, j) = (c % self.nx, c / self.nx);
        match dir {
            Direction::MinusX if i > 0 => Some(c - 1),
            Direction::PlusX if i + 1 < self.nx => Some(c + 1),
            Direction::MinusY if j > 0 => Some(c - self.nx),
            Direction::PlusY if j + 1 < self.ny => Some(c + self.nx),
            _ => None,
        }
    }

    /// In-bounds, non-blocked neighbors of `c` in the fixed order -x, +x, -y, +y.
    pub fn neighbors(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| self.neighbor(c, d))
            .filter(move |&n| !self.is_blocked(n))
    }

    pub fn neighbor_value(&self, cell: CellIndex, dir: Direction) -> f64 {
        self.neighbor_value_in(&self.phi, self.index(cell), dir)
    }

    /// [`Grid::neighbor_value`] reading from an arbitrary snapshot of `phi`.
    #[inline]
    pub fn neighbor_value_in(&self, phi: &[f64], c: usize, dir: Direction) -> f64 {
        match self.neighbor(c, dir) {
            Some(n) if self.state[n] != CellState::Blocked => phi[n],
            _ => f64::INFINITY,
        }
    }

    /// Godunov upwind update of cell `c` from the neighbor values in `phi`.
    ///
    /// Returns `+inf` for blocked cells and for cells without finite upwind
    /// information.
    #[inline]
    pub fn local_update(&self, phi: &[f64], c: usize) -> f64 {
        let f = self.speed[c];
        if f == 0.0 {
            return f64::INFINITY;
        }
        let minx = self
            .neighbor_value_in(phi, c, Direction::MinusX)
            .min(self.neighbor_value_in(phi, c, Direction::PlusX));
        let miny = self
            .neighbor_value_in(phi, c, Direction::MinusY)
            .min(self.neighbor_value_in(phi, c, Direction::PlusY));
        if self.dx == self.dy {
            local_solver::update_2d_uniform(minx, miny, f, self.dx)
        } else {
            local_solver::update_2d_aniso(minx, miny, f, self.dx, self.dy)
        }
    }

    /// Clears `phi` to `+inf` and every non-blocked state to `Far`.
    pub fn reset(&mut self) {
        self.phi.fill(f64::INFINITY);
        for s in &mut self.state {
            if *s != CellState::Blocked {
                *s = CellState::Far;
            }
        }
    }

    /// Resets the grid and writes the seeds of `bc`, marking them `Source`.
    pub fn apply(&mut self, bc: &BoundaryCondition) -> Result<()> {
        bc.validate(self)?;
        self.reset();
        for &(c, v) in bc.seeds() {
            self.phi[c] = v;
            self.state[c] = CellState::Source;
        }
        Ok(())
    }

    /// Replaces the whole field, e.g. with a solver result.
    pub fn set_phi(&mut self, phi: &[f64]) {
        self.phi.copy_from_slice(phi);
    }

    /// Mirror image of the grid in x: cell `(i, j)` maps to `(nx - 1 - i, j)`.
    pub fn reflected_x(&self) -> Grid {
        let mut out = self.clone();
        for c in 0..self.len() {
            let CellIndex { i, j } = self.cell(c);
            let m = j * self.nx + (self.nx - 1 - i);
            out.phi[m] = self.phi[c];
            out.speed[m] = self.speed[c];
            out.state[m] = self.state[c];
        }
        out
    }
}

/// Set of seed cells with fixed `phi` values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryCondition {
    seeds: Vec<(usize, f64)>,
}

impl BoundaryCondition {
    /// Builds a boundary condition from `(linear index, value)` pairs.
    ///
    /// Bounds and blocked cells are checked against a grid by
    /// [`BoundaryCondition::validate`].
    pub fn new(seeds: Vec<(usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(seeds.len());
        for &(c, v) in &seeds {
            if !v.is_finite() {
                return Err(Error::InvalidBoundary(format!(
                    "seed value at cell {c} is {v}, must be finite"
                )));
            }
            if !seen.insert(c) {
                return Err(Error::InvalidBoundary(format!("duplicate seed cell {c}")));
            }
        }
        Ok(BoundaryCondition { seeds })
    }

    pub fn seeds(&self) -> &[(usize, f64)] {
        &self.seeds
    }

    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    /// Merges two boundary conditions; a cell seeded by both keeps the smaller value.
    pub fn union(&self, other: &BoundaryCondition) -> BoundaryCondition {
        let mut seeds = self.seeds.clone();
        for &(c, v) in &other.seeds {
            match seeds.iter_mut().find(|(s, _)| *s == c) {
                Some(slot) => slot.1 = slot.1.min(v),
                None => seeds.push((c, v)),
            }
        }
        BoundaryCondition { seeds }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        for &(c, v) in &self.seeds {
            if c >= grid.len() {
                return Err(Error::InvalidBoundary(format!(
                    "seed cell {c} out of bounds for {} cells",
                    grid.len()
                )));
            }
            if grid.is_blocked(c) {
                let CellIndex { i, j } = grid.cell(c);
                return Err(Error::InvalidBoundary(format!(
                    "seed cell ({i}, {j}) is blocked"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidBoundary(format!(
                    "seed value at cell {c} is {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Seeds every non-blocked cell whose center lies in the closed disk with
/// the signed distance `|x - center| - radius`.
///
/// If no cell center falls inside the disk, the nearest non-blocked cell is
/// seeded instead (with a positive value).
pub fn seed_circle(grid: &Grid, center: (f64, f64), radius: f64) -> Result<BoundaryCondition> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    let dist = |c: usize| {
        let (x, y) = grid.center(c);
        (x - center.0).hypot(y - center.1)
    };
    let mut seeds: Vec<(usize, f64)> = (0..grid.len())
        .filter(|&c| !grid.is_blocked(c))
        .filter_map(|c| {
            let d = dist(c);
            (d <= radius).then_some((c, d - radius))
        })
        .collect();
    if seeds.is_empty() {
        let nearest = (0..grid.len())
            .filter(|&c| !grid.is_blocked(c))
            .min_by(|&a, &b| dist(a).total_cmp(&dist(b)))
            .ok_or_else(|| Error::InvalidBoundary("every cell is blocked".into()))?;
        seeds.push((nearest, dist(nearest) - radius));
    }
    BoundaryCondition::new(seeds)
}

/// Single-cell boundary condition.
pub fn seed_point(grid: &Grid, cell: CellIndex, value: f64) -> Result<BoundaryCondition> {
    let c = grid.checked_index(cell.i as i64, cell.j as i64)?;
    if grid.is_blocked(c) {
        return Err(Error::InvalidBoundary(format!(
            "seed cell ({}, {}) is blocked",
            cell.i, cell.j
        )));
    }
    BoundaryCondition::new(vec![(c, value)])
}
