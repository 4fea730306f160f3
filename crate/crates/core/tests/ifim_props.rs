use eikonal::harness::{make_example, max_residual, Method};
use eikonal::ifim::{build_remedy_set, ifim_remedy_step, ifim_update_step, solve_ifim_detailed, RemedySet};
use eikonal::stats::max_abs_diff;
use eikonal::{BoundaryCondition, CellIndex, Executor, DEFAULT_TOL};

const TOL: f64 = DEFAULT_TOL;

fn oracle(id: u8, n: usize) -> Vec<f64> {
    let (mut g, bc) = make_example(id, n).unwrap();
    Method::Oracle.run(&mut g, &bc, TOL, &Executor::sequential()).unwrap().phi
}

#[test]
fn example1_update_step_is_already_exact() {
    let exec = Executor::sequential();
    let (mut g, bc) = make_example(1, 64).unwrap();
    let step = ifim_update_step(&mut g, &bc, TOL, &exec).unwrap();
    assert_eq!(step.stats.solver_calls, step.active_visits);
    assert!(max_abs_diff(g.phi(), &oracle(1, 64)) <= 1e-9);
    let (set, calls) = build_remedy_set(&g, TOL, &exec);
    assert!(set.is_empty());
    assert_eq!(calls as usize, g.len() - bc.len());
}

#[test]
fn example5_update_step_leaves_errors() {
    let exec = Executor::sequential();
    let (mut g, bc) = make_example(5, 64).unwrap();
    ifim_update_step(&mut g, &bc, TOL, &exec).unwrap();
    let reference = oracle(5, 64);
    let wrong = g
        .phi()
        .iter()
        .zip(&reference)
        .filter(|(a, b)| (*a - *b).abs() > 1e-9)
        .count();
    assert!(wrong > 0);

    let (set, _) = build_remedy_set(&g, TOL, &exec);
    assert!(!set.is_empty());
    let before = g.phi().to_vec();
    ifim_remedy_step(&mut g, set, TOL, &exec).unwrap();
    assert!(g.phi().iter().zip(&before).all(|(after, before)| after <= before));
    assert!(max_abs_diff(g.phi(), &reference) <= 10.0 * TOL);
    assert!(max_residual(&g) <= TOL);
}

#[test]
fn example2_remedy_set_sits_near_the_interface() {
    let exec = Executor::sequential();
    let (mut g, bc) = make_example(2, 128).unwrap();
    ifim_update_step(&mut g, &bc, TOL, &exec).unwrap();
    let (set, _) = build_remedy_set(&g, TOL, &exec);
    assert!(!set.is_empty());
    // signed distances to the two circles are equal on the interface
    let gap = |c: usize| {
        let (x, y) = g.center(c);
        let d1 = (x - 2.0).hypot(y + 5.0) - 3.0;
        let d2 = (x + 2.0).hypot(y - 5.0) - 1.5;
        (d1 - d2).abs()
    };
    let near = set.cells().iter().filter(|&&c| gap(c) <= 1.0).count();
    assert!(2 * near >= set.len(), "{near} of {} within 1.0", set.len());
    assert!(set.cells().iter().all(|&c| gap(c) <= 3.0));
}

#[test]
fn remedy_set_never_holds_source_or_blocked_cells() {
    let exec = Executor::sequential();
    for id in [2, 4, 5] {
        let (mut g, bc) = make_example(id, 64).unwrap();
        ifim_update_step(&mut g, &bc, TOL, &exec).unwrap();
        let (set, _) = build_remedy_set(&g, TOL, &exec);
        for &c in set.cells() {
            assert!(set.contains(c));
            assert!(g.is_free(c), "example {id}: cell {c} is {:?}", g.state(c));
        }
    }
}

#[test]
fn single_stale_cell_is_repaired_in_one_iteration() {
    let exec = Executor::sequential();
    let (mut g, bc) = make_example(1, 32).unwrap();
    Method::Oracle.run(&mut g, &bc, TOL, &exec).unwrap();
    let reference = g.phi().to_vec();
    let c = g.index(CellIndex::new(3, 4));
    assert!(g.is_free(c));
    g.phi_mut()[c] += 1.0;

    let (set, _) = build_remedy_set(&g, TOL, &exec);
    // the raised cell fails the equation, and so may its downwind neighbors
    assert!(set.contains(c));
    let single = RemedySet::from_cells(g.len(), [c]);
    let stats = ifim_remedy_step(&mut g, single, TOL, &exec).unwrap();
    // iteration 1 repairs the cell, iteration 2 checks it and its neighbors
    assert_eq!(stats.iterations, 2);
    assert_eq!(stats.solver_calls, 1 + 5);
    assert!((g.phi()[c] - reference[c]).abs() <= TOL);
    assert!(max_residual(&g) <= TOL);
}

#[test]
fn whole_pipeline_on_barrier_map() {
    let exec = Executor::new(4).unwrap();
    let (mut g, bc) = make_example(4, 64).unwrap();
    let (r, parts) = solve_ifim_detailed(&mut g, &bc, TOL, &exec).unwrap();
    assert!(max_abs_diff(&r.phi, &oracle(4, 64)) <= 1e-9);
    assert_eq!(
        r.stats.solver_calls,
        parts.update.stats.solver_calls + parts.remedy_build_calls + parts.remedy.solver_calls
    );
    assert!(r.stats.peak_remedy >= parts.remedy_initial);
}

#[test]
fn seeds_covering_the_grid() {
    let (mut g, _) = make_example(1, 8).unwrap();
    let bc = BoundaryCondition::new((0..g.len()).map(|c| (c, c as f64 * 0.5)).collect()).unwrap();
    let r = Method::Ifim.run(&mut g, &bc, TOL, &Executor::sequential()).unwrap();
    assert_eq!(r.stats.iterations, 0);
    assert!(r.phi.iter().enumerate().all(|(c, v)| *v == c as f64 * 0.5));
}
