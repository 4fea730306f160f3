use crate::error::{Error, Result};
use crate::grid::{seed_circle, seed_point, BoundaryCondition, CellIndex, Grid, SpeedField};
use crate::pathplan::{map_grid, synthetic_map, synthetic_source};

/// Square domain shared by examples 1, 2, 3 and 5.
pub const DOMAIN: (f64, f64) = (-10.0, 10.0);

/// Speed of example 3: fast inside the closed square `[3, 7] x [3, 7]`.
pub fn speed_example3(x: f64, y: f64) -> f64 {
    if (3.0..=7.0).contains(&x) && (3.0..=7.0).contains(&y) {
        1.0
    } else {
        0.01
    }
}

pub const EXAMPLE5_EPSILON: f64 = 0.3;

/// Speed of example 5: `sin^2 x + sin^2 y + 0.3`.
pub fn speed_example5(x: f64, y: f64) -> f64 {
    let (sx, sy) = (x.sin(), y.sin());
    sx * sx + sy * sy + EXAMPLE5_EPSILON
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: (f64, f64),
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExampleSeeds {
    Circles(&'static [Circle]),
    /// Point seed of the bundled barrier map.
    MapSource,
}

#[derive(Debug, Clone, Copy)]
pub enum ExampleSpeed {
    Uniform,
    Function(fn(f64, f64) -> f64),
    BarrierMap,
}

#[derive(Debug, Clone, Copy)]
pub struct ExampleSpec {
    pub id: u8,
    pub name: &'static str,
    /// `None` for the barrier map, which uses unit pixel spacing.
    pub extent: Option<(f64, f64)>,
    /// Default sizes (cells per side) for benchmarks.
    pub sizes: &'static [usize],
    pub speed: ExampleSpeed,
    pub seeds: ExampleSeeds,
}

const EXAMPLE1: [Circle; 1] = [Circle {
    center: (0.0, 0.0),
    radius: 3.0,
}];
const EXAMPLE2: [Circle; 2] = [
    Circle {
        center: (2.0, -5.0),
        radius: 3.0,
    },
    Circle {
        center: (-2.0, 5.0),
        radius: 1.5,
    },
];
const EXAMPLE3: [Circle; 2] = [
    Circle {
        center: (-5.0, 5.0),
        radius: 0.5,
    },
    Circle {
        center: (5.0, -5.0),
        radius: 0.5,
    },
];
const EXAMPLE5: [Circle; 1] = [Circle {
    center: (0.0, 0.0),
    radius: 0.5,
}];

const DESK_SIZES: &[usize] = &[64, 128, 256, 512];

pub const EXAMPLES: [ExampleSpec; 5] = [
    ExampleSpec {
        id: 1,
        name: "circle, F = 1",
        extent: Some(DOMAIN),
        sizes: DESK_SIZES,
        speed: ExampleSpeed::Uniform,
        seeds: ExampleSeeds::Circles(&EXAMPLE1),
    },
    ExampleSpec {
        id: 2,
        name: "two circles, F = 1",
        extent: Some(DOMAIN),
        sizes: DESK_SIZES,
        speed: ExampleSpeed::Uniform,
        seeds: ExampleSeeds::Circles(&EXAMPLE2),
    },
    ExampleSpec {
        id: 3,
        name: "two small circles, piecewise speed",
        extent: Some(DOMAIN),
        sizes: DESK_SIZES,
        speed: ExampleSpeed::Function(speed_example3),
        seeds: ExampleSeeds::Circles(&EXAMPLE3),
    },
    ExampleSpec {
        id: 4,
        name: "barrier map, point source",
        extent: None,
        sizes: DESK_SIZES,
        speed: ExampleSpeed::BarrierMap,
        seeds: ExampleSeeds::MapSource,
    },
    ExampleSpec {
        id: 5,
        name: "small circle, sin^2 speed",
        extent: Some(DOMAIN),
        sizes: DESK_SIZES,
        speed: ExampleSpeed::Function(speed_example5),
        seeds: ExampleSeeds::Circles(&EXAMPLE5),
    },
];

impl ExampleSpec {
    pub fn get(id: u8) -> Result<&'static ExampleSpec> {
        EXAMPLES
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown example {id}, expected 1..=5")))
    }
}

/// Builds example `id` on an `n x n` grid.
///
/// Examples 1, 2, 3 and 5 place `n` nodes per side over `[-10, 10]`, so the
/// spacing is `20 / (n - 1)`. Example 4 uses the bundled synthetic barrier
/// map at `n x n` pixels.
pub fn make_example(id: u8, n: usize) -> Result<(Grid, BoundaryCondition)> {
    let spec = ExampleSpec::get(id)?;
    if n < 8 {
        return Err(Error::InvalidArgument(format!("example size must be >= 8, got {n}")));
    }
    match (spec.extent, spec.seeds) {
        (Some((lo, hi)), ExampleSeeds::Circles(circles)) => {
            let h = (hi - lo) / (n - 1) as f64;
            let speed = match spec.speed {
                ExampleSpeed::Uniform => SpeedField::Uniform(1.0),
                ExampleSpeed::Function(f) => SpeedField::Function(f),
                ExampleSpeed::BarrierMap => unreachable!("circle examples have analytic speeds"),
            };
            let grid = Grid::new(n, n, h, h, (lo, lo), speed)?;
            let mut bc = BoundaryCondition::default();
            for c in circles {
                bc = bc.union(&seed_circle(&grid, c.center, c.radius)?);
            }
            Ok((grid, bc))
        }
        _ => {
            let map = synthetic_map(n.max(16))?;
            let grid = map_grid(&map)?;
            let (i, j) = synthetic_source(map.width());
            let bc = seed_point(&grid, CellIndex::new(i, j), 0.0)?;
            Ok((grid, bc))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn example3_speed() {
        assert_eq!(speed_example3(5.0, 5.0), 1.0);
        assert_eq!(speed_example3(0.0, 0.0), 0.01);
        assert_eq!(speed_example3(3.0, 3.0), 1.0);
        assert_eq!(speed_example3(7.0, 7.0), 1.0);
        assert_eq!(speed_example3(7.000001, 5.0), 0.01);
    }

    #[test]
    fn example5_speed() {
        assert_eq!(speed_example5(0.0, 0.0), 0.3);
        assert!((speed_example5(FRAC_PI_2, FRAC_PI_2) - 2.3).abs() < 1e-15);
        assert!((speed_example5(PI, 0.0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn example_grids() {
        let (g, bc) = make_example(1, 64).unwrap();
        assert_eq!((g.nx(), g.ny()), (64, 64));
        assert!(g.speed().iter().all(|f| *f == 1.0));
        for &(c, v) in bc.seeds() {
            let (x, y) = g.center(c);
            assert!(x.hypot(y) <= 3.0);
            assert_eq!(v, x.hypot(y) - 3.0);
        }

        let (g, bc) = make_example(2, 64).unwrap();
        let near = |c: usize, cx: f64, cy: f64, r: f64| {
            let (x, y) = g.center(c);
            (x - cx).hypot(y - cy) <= r
        };
        assert!(bc.seeds().iter().any(|&(c, _)| near(c, 2.0, -5.0, 3.0)));
        assert!(bc.seeds().iter().any(|&(c, _)| near(c, -2.0, 5.0, 1.5)));
        assert!(bc.seeds().iter().all(|&(c, _)| near(c, 2.0, -5.0, 3.0) || near(c, -2.0, 5.0, 1.5)));

        let (g, _) = make_example(5, 64).unwrap();
        for c in [0, 100, 2000] {
            let (x, y) = g.center(c);
            assert_eq!(g.speed()[c], speed_example5(x, y));
        }

        let (g, bc) = make_example(4, 64).unwrap();
        assert_eq!(bc.len(), 1);
        assert!(g.states().contains(&crate::grid::CellState::Blocked));

        assert!(make_example(6, 64).is_err());
        assert!(make_example(1, 4).is_err());
    }
}
