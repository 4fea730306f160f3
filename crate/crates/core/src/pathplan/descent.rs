use crate::error::{Error, Result};
use crate::grid::Grid;

/// Descent path from the goal (first point) to a source cell (last point).
#[derive(Debug, Clone, PartialEq)]
pub struct PathPolyline {
    pub points: Vec<(f64, f64)>,
    /// Interpolated travel time at each point, strictly decreasing.
    pub phi: Vec<f64>,
    /// Value substituted for `+inf` cells during interpolation.
    pub sentinel: f64,
}

impl PathPolyline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of segment lengths.
    pub fn length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].0 - w[0].0).hypot(w[1].1 - w[0].1))
            .sum()
    }

    /// CSV with header `x,y,phi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,phi\n");
        for (&(x, y), phi) in self.points.iter().zip(&self.phi) {
            out.push_str(&format!("{x},{y},{phi}\n"));
        }
        out
    }
}

/// Continuous view of a solved grid.
struct Field<'a> {
    grid: &'a Grid,
    sentinel: f64,
}

impl<'a> Field<'a> {
    fn new(grid: &'a Grid) -> Self {
        let max = grid
            .phi()
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        Field {
            grid,
            sentinel: 10.0 * max.max(1.0),
        }
    }

    fn in_domain(&self, (x, y): (f64, f64)) -> bool {
        let g = self.grid;
        let (x0, y0) = g.origin();
        let (x1, y1) = (x0 + (g.nx() - 1) as f64 * g.dx(), y0 + (g.ny() - 1) as f64 * g.dy());
        x >= x0 && x <= x1 && y >= y0 && y <= y1
    }

    /// Fractional lattice coordinates.
    fn lattice(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let (x0, y0) = self.grid.origin();
        ((x - x0) / self.grid.dx(), (y - y0) / self.grid.dy())
    }

    fn nearest(&self, p: (f64, f64)) -> Option<usize> {
        if !self.in_domain(p) {
            return None;
        }
        let (u, v) = self.lattice(p);
        let i = (u.round() as usize).min(self.grid.nx() - 1);
        let j = (v.round() as usize).min(self.grid.ny() - 1);
        Some(j * self.grid.nx() + i)
    }

    /// Lower-left node and weights of the bilinear patch containing `p`.
    fn patch(&self, p: (f64, f64)) -> [(usize, f64); 4] {
        let g = self.grid;
        let (u, v) = self.lattice(p);
        let clamp = |t: f64, n: usize| -> (usize, f64) {
            if n == 1 {
                return (0, 0.0);
            }
            let t = t.clamp(0.0, (n - 1) as f64);
            let k = (t.floor() as usize).min(n - 2);
            (k, t - k as f64)
        };
        let (i, s) = clamp(u, g.nx());
        let (j, t) = clamp(v, g.ny());
        let i1 = (i + 1).min(g.nx() - 1);
        let j1 = (j + 1).min(g.ny() - 1);
        let nx = g.nx();
        [
            (j * nx + i, (1.0 - s) * (1.0 - t)),
            (j * nx + i1, s * (1.0 - t)),
            (j1 * nx + i, (1.0 - s) * t),
            (j1 * nx + i1, s * t),
        ]
    }

    fn node_value(&self, c: usize) -> f64 {
        let v = self.grid.phi()[c];
        if v.is_finite() {
            v
        } else {
            self.sentinel
        }
    }

    fn value(&self, p: (f64, f64)) -> f64 {
        self.patch(p)
            .iter()
            .map(|&(c, w)| if w == 0.0 { 0.0 } else { w * self.node_value(c) })
            .sum()
    }

    /// Central difference at a node, one-sided where a neighbor is missing or infinite.
    fn node_gradient(&self, c: usize) -> Option<(f64, f64)> {
        use crate::grid::Direction::*;
        let g = self.grid;
        let here = g.phi()[c];
        if !here.is_finite() {
            return None;
        }
        let read = |d| g.neighbor(c, d).map(|n| g.phi()[n]).filter(|v: &f64| v.is_finite());
        let diff = |lo: Option<f64>, hi: Option<f64>, h: f64| match (lo, hi) {
            (Some(l), Some(r)) => (r - l) / (2.0 * h),
            (None, Some(r)) => (r - here) / h,
            (Some(l), None) => (here - l) / h,
            (None, None) => 0.0,
        };
        Some((
            diff(read(MinusX), read(PlusX), g.dx()),
            diff(read(MinusY), read(PlusY), g.dy()),
        ))
    }

    /// Bilinear blend of node gradients over the finite nodes of the patch.
    fn gradient(&self, p: (f64, f64)) -> (f64, f64) {
        let (mut gx, mut gy, mut wsum) = (0.0, 0.0, 0.0);
        for (c, w) in self.patch(p) {
            if w == 0.0 {
                continue;
            }
            if let Some((ax, ay)) = self.node_gradient(c) {
                gx += w * ax;
                gy += w * ay;
                wsum += w;
            }
        }
        if wsum > 0.0 {
            (gx / wsum, gy / wsum)
        } else {
            (0.0, 0.0)
        }
    }

    fn admissible(&self, p: (f64, f64)) -> bool {
        self.nearest(p).is_some_and(|c| !self.grid.is_blocked(c))
    }
}

/// Candidate headings, in degrees from the steepest-descent direction.
const DEFLECTIONS: [f64; 11] = [0.0, 15.0, -15.0, 30.0, -30.0, 45.0, -45.0, 60.0, -60.0, 75.0, -75.0];
const HALVINGS: usize = 8;

/// Follows the normalized negative gradient of the interpolated field from
/// `start` until it reaches a source cell.
///
/// Each step tries the full step length first, deflecting the heading up
/// to 75 degrees when the straight step would enter a blocked cell or fail to
/// decrease `phi`, then halves the step. The walk fails with
/// [`Error::DescentStalled`] when no admissible decreasing step exists or the
/// step budget `4 (nx + ny) max(dx, dy) / step` runs out.
pub fn gradient_descent_path(grid: &Grid, start: (f64, f64), step: f64) -> Result<PathPolyline> {
    let h = grid.dx().min(grid.dy());
    if !(step > 0.0 && step <= h) {
        return Err(Error::InvalidArgument(format!(
            "step must lie in (0, {h}], got {step}"
        )));
    }
    let field = Field::new(grid);
    let c0 = field
        .nearest(start)
        .ok_or_else(|| Error::InvalidArgument(format!("start {start:?} is outside the grid")))?;
    if grid.is_blocked(c0) || !grid.phi()[c0].is_finite() {
        return Err(Error::InvalidArgument(format!(
            "start {start:?} lies in a blocked or unreached cell"
        )));
    }

    let budget = (4.0 * (grid.nx() + grid.ny()) as f64 * grid.dx().max(grid.dy()) / step).ceil() as usize;
    let mut p = start;
    let mut value = field.value(p);
    let mut path = PathPolyline {
        points: vec![p],
        phi: vec![value],
        sentinel: field.sentinel,
    };

    for steps in 0..=budget {
        let here = field.nearest(p).expect("path points stay in the domain");
        if grid.is_source(here) {
            return Ok(path);
        }
        if steps == budget {
            break;
        }
        let (gx, gy) = field.gradient(p);
        let norm = gx.hypot(gy);
        let (dx, dy) = if norm > 0.0 { (-gx / norm, -gy / norm) } else { (0.0, 0.0) };
        let mut next = None;
        'search: for k in 0..HALVINGS {
            let s = step / (1u32 << k) as f64;
            for deg in DEFLECTIONS {
                if norm == 0.0 && deg != 0.0 {
                    break;
                }
                let (sin, cos) = deg.to_radians().sin_cos();
                let dir = (dx * cos - dy * sin, dx * sin + dy * cos);
                let q = (p.0 + s * dir.0, p.1 + s * dir.1);
                if !field.admissible(q) {
                    continue;
                }
                let vq = field.value(q);
                if vq < value {
                    next = Some((q, vq));
                    break 'search;
                }
            }
        }
        match next {
            Some((q, vq)) => {
                p = q;
                value = vq;
                path.points.push(q);
                path.phi.push(vq);
            }
            None => {
                return Err(Error::DescentStalled {
                    steps: path.points.len() - 1,
                    x: p.0,
                    y: p.1,
                })
            }
        }
    }
    Err(Error::DescentStalled {
        steps: path.points.len() - 1,
        x: p.0,
        y: p.1,
    })
}
