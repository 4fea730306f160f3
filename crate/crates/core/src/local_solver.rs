//! Single-cell Godunov upwind updates.
//!
//! Each function returns the root `phi` of
//!
//! ```text
//! sum_k ((phi - a_k)^+ / h_k)^2 = 1 / f^2
//! ```
//!
//! where `a_k` is the smaller neighbor value along axis `k`. The closed-form
//! branch is selected first with the classic guards, then checked against
//! the positive-part structure; a candidate that would use a neighbor larger
//! than itself (or ignore one smaller than itself) is replaced by the branch
//! that actually satisfies the equation.
//!
//! `+inf` inputs mean "no upwind information along this axis" and always
//! force a lower-dimensional branch. All inputs `+inf` gives `+inf`.

use std::f64::consts::SQRT_2;

/// Tiny negative discriminants above `-DISC_EPS * scale` are clamped to zero.
const DISC_EPS: f64 = 1e-12;

#[inline]
fn clamped_sqrt(disc: f64, scale: f64) -> Option<f64> {
    if disc >= 0.0 {
        Some(disc.sqrt())
    } else if disc >= -DISC_EPS * scale {
        Some(0.0)
    } else {
        None
    }
}

/// 2D update on a square mesh with spacing `delta`.
#[inline]
pub fn update_2d_uniform(phi_minx: f64, phi_miny: f64, f: f64, delta: f64) -> f64 {
    let (a, b) = (phi_minx, phi_miny);
    let lo = a.min(b);
    if lo == f64::INFINITY {
        return f64::INFINITY;
    }
    let h = delta / f;
    let one_sided = lo + h;
    if b == f64::INFINITY || a == f64::INFINITY {
        return one_sided;
    }
    let diff = a - b;
    if diff.abs() > SQRT_2 * h {
        return one_sided;
    }
    let h2 = h * h;
    match clamped_sqrt(2.0 * h2 - diff * diff, h2) {
        Some(root) => {
            let two_sided = 0.5 * (a + b + root);
            // the two-sided root is only valid when it lies above both neighbors
            if two_sided >= a.max(b) {
                two_sided
            } else {
                one_sided
            }
        }
        None => one_sided,
    }
}

/// 2D update with distinct spacings `dx`, `dy`.
#[inline]
pub fn update_2d_aniso(phi_minx: f64, phi_miny: f64, f: f64, dx: f64, dy: f64) -> f64 {
    let (a, b) = (phi_minx, phi_miny);
    match (a.is_finite(), b.is_finite()) {
        (false, false) => return f64::INFINITY,
        (true, false) => return a + dx / f,
        (false, true) => return b + dy / f,
        (true, true) => {}
    }
    let from_x = a + dx / f;
    let from_y = b + dy / f;
    let s = dx * dx + dy * dy;
    let g2 = s / (f * f);
    let g = g2.sqrt();
    let diff = a - b;
    if diff > g {
        return from_y;
    }
    if diff < -g {
        return from_x;
    }
    let lower = if a <= b { from_x } else { from_y };
    match clamped_sqrt(g2 - diff * diff, g2) {
        Some(root) => {
            let two_sided = (a * dy * dy + b * dx * dx + dx * dy * root) / s;
            if two_sided >= a.max(b) {
                two_sided
            } else {
                lower
            }
        }
        None => lower,
    }
}

/// 3D update on a cubic mesh with spacing `delta`.
///
/// The branch guards compare neighbor gaps against `delta` itself. After the
/// guarded branch is evaluated its root is checked against the sorted
/// neighbors; if it falls outside its validity interval the remaining
/// branches are tried, lower dimensions first.
pub fn update_3d_uniform(phi_minx: f64, phi_miny: f64, phi_minz: f64, f: f64, delta: f64) -> f64 {
    let mut a = [phi_minx, phi_miny, phi_minz];
    a.sort_by(f64::total_cmp);
    let [a1, a2, a3] = a;
    if a1 == f64::INFINITY {
        return f64::INFINITY;
    }
    let finite = a.iter().filter(|v| v.is_finite()).count();
    let h = delta / f;
    let h2 = h * h;

    let candidate = |dims: usize| -> Option<f64> {
        if dims > finite {
            return None;
        }
        match dims {
            1 => Some(a1 + h),
            2 => {
                let d = a1 - a2;
                clamped_sqrt(2.0 * h2 - d * d, h2).map(|r| 0.5 * (a1 + a2 + r))
            }
            _ => {
                let sum = a1 + a2 + a3;
                let sq = a1 * a1 + a2 * a2 + a3 * a3;
                let scale = 12.0 * h2.max(sq);
                clamped_sqrt(4.0 * sum * sum - 12.0 * (sq - h2), scale)
                    .map(|r| (2.0 * sum + r) / 6.0)
            }
        }
    };
    // a dims-sided root must lie in [a_dims, a_{dims+1}]
    let valid = |dims: usize, phi: f64| -> bool {
        let upper = if dims < 3 { a[dims] } else { f64::INFINITY };
        phi >= a[dims - 1] && phi <= upper
    };

    let guarded = if finite == 3 && (a1 - a3).abs() < delta {
        3
    } else if finite >= 2 && (a1 - a2).abs() < delta {
        2
    } else {
        1
    };
    let order: [usize; 3] = match guarded {
        3 => [3, 2, 1],
        2 => [2, 1, 3],
        _ => [1, 2, 3],
    };
    let mut best: Option<(f64, f64)> = None;
    for dims in order {
        if let Some(phi) = candidate(dims) {
            if valid(dims, phi) {
                return phi;
            }
            let r = godunov_residual_3d(phi, a1, a2, a3, f, delta).abs();
            if best.is_none_or(|(br, _)| r < br) {
                best = Some((r, phi));
            }
        }
    }
    // only reachable through rounding at a branch boundary
    best.map_or(a1 + h, |(_, phi)| phi)
}

#[inline]
fn pos(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Left-hand side minus right-hand side of the 2D upwind equation at `phi`.
/// Infinite neighbor values contribute nothing.
pub fn godunov_residual_2d(phi: f64, phi_minx: f64, phi_miny: f64, f: f64, dx: f64, dy: f64) -> f64 {
    let tx = if phi_minx.is_finite() { pos(phi - phi_minx) / dx } else { 0.0 };
    let ty = if phi_miny.is_finite() { pos(phi - phi_miny) / dy } else { 0.0 };
    tx * tx + ty * ty - 1.0 / (f * f)
}

/// 3D analogue of [`godunov_residual_2d`] on a cubic mesh.
pub fn godunov_residual_3d(phi: f64, a: f64, b: f64, c: f64, f: f64, delta: f64) -> f64 {
    let t = |v: f64| if v.is_finite() { pos(phi - v) / delta } else { 0.0 };
    let (ta, tb, tc) = (t(a), t(b), t(c));
    ta * ta + tb * tb + tc * tc - 1.0 / (f * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const INF: f64 = f64::INFINITY;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(update_2d_uniform(0.0, INF, 1.0, 1.0), 1.0);
        assert!(rel(update_2d_uniform(0.0, 0.0, 1.0, 1.0), 0.5f64.sqrt()) < 1e-14);
        assert!(rel(update_2d_uniform(0.0, 1.0, 1.0, 1.0), 1.0) < 1e-14);
        assert_eq!(update_2d_uniform(INF, INF, 1.0, 1.0), INF);
    }

    #[test]
    fn uniform_two_sided_back_substitution() {
        // (0, 1): phi = (0 + 1 + sqrt(2 - 1)) / 2 = 1 satisfies phi^2 + (phi - 1)^2 = 1
        let phi = update_2d_uniform(0.0, 1.0, 1.0, 1.0);
        assert!(godunov_residual_2d(phi, 0.0, 1.0, 1.0, 1.0, 1.0).abs() < 1e-14);
    }

    #[test]
    fn uniform_demotes_between_guards() {
        // |a - b| = 1.2 lies between h and sqrt(2) h; the two-sided root
        // would sit below b, so the one-sided value is the solution.
        let phi = update_2d_uniform(0.0, 1.2, 1.0, 1.0);
        assert_eq!(phi, 1.0);
        assert!(godunov_residual_2d(phi, 0.0, 1.2, 1.0, 1.0, 1.0).abs() < 1e-15);
    }

    #[test]
    fn aniso_examples() {
        assert!(rel(update_2d_aniso(0.0, 0.0, 1.0, 1.0, 2.0), 2.0 / 5f64.sqrt()) < 1e-14);
        assert_eq!(update_2d_aniso(0.0, INF, 1.0, 1.0, 2.0), 1.0);
        assert_eq!(update_2d_aniso(INF, 0.0, 1.0, 1.0, 2.0), 2.0);
        assert_eq!(update_2d_aniso(INF, INF, 1.0, 1.0, 2.0), INF);
    }

    #[test]
    fn three_d_examples() {
        assert!(rel(update_3d_uniform(0.0, 0.0, 0.0, 1.0, 1.0), 1.0 / 3f64.sqrt()) < 1e-14);
        assert_eq!(update_3d_uniform(0.0, INF, INF, 1.0, 1.0), 1.0);
        assert!(rel(update_3d_uniform(0.0, 0.0, INF, 1.0, 1.0), 0.5f64.sqrt()) < 1e-14);
        assert_eq!(update_3d_uniform(INF, INF, INF, 1.0, 1.0), INF);
    }

    #[test]
    fn three_d_guard_with_slow_speed() {
        // fast speed: the guard picks three-sided, the root is one-sided
        let phi = update_3d_uniform(0.0, 0.5, 0.9, 10.0, 1.0);
        assert!(godunov_residual_3d(phi, 0.0, 0.5, 0.9, 10.0, 1.0).abs() < 1e-12);
        assert!((phi - 0.1).abs() < 1e-15);
        // slow speed: the guard picks one-sided, the root is three-sided
        let phi = update_3d_uniform(0.0, 3.0, 6.0, 0.1, 1.0);
        assert!(godunov_residual_3d(phi, 0.0, 3.0, 6.0, 0.1, 1.0).abs() < 1e-9);
        assert!(phi > 6.0);
    }

    /// Rounding scale of a back-substituted residual: `1/f^2` plus the error
    /// of forming `(phi - a) / h` when `phi` and `a` are large compared to `h`.
    fn scale(phi: f64, f: f64, h: f64) -> f64 {
        1.0 / (f * f) + 2.0 * phi.abs() / (f * h)
    }

    fn neighbor() -> impl Strategy<Value = f64> {
        prop_oneof![1 => Just(INF), 6 => 0.0f64..20.0]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn uniform_root_satisfies_equation(a in neighbor(), b in neighbor(), f in 0.05f64..20.0, d in 0.01f64..2.0) {
            prop_assume!(a.is_finite() || b.is_finite());
            let phi = update_2d_uniform(a, b, f, d);
            prop_assert!(phi.is_finite());
            let r = godunov_residual_2d(phi, a, b, f, d, d);
            prop_assert!(r.abs() <= 1e-12 * scale(phi, f, d), "residual {r}");
            prop_assert!(phi > a.min(b));
        }

        #[test]
        fn aniso_root_satisfies_equation(a in neighbor(), b in neighbor(), f in 0.05f64..20.0, dx in 0.01f64..2.0, dy in 0.01f64..2.0) {
            prop_assume!(a.is_finite() || b.is_finite());
            let phi = update_2d_aniso(a, b, f, dx, dy);
            let r = godunov_residual_2d(phi, a, b, f, dx, dy);
            prop_assert!(r.abs() <= 1e-12 * scale(phi, f, dx.min(dy)), "residual {r}");
            prop_assert!(phi > a.min(b));
        }

        #[test]
        fn aniso_reduces_to_uniform(a in neighbor(), b in neighbor(), f in 0.05f64..20.0, d in 0.01f64..2.0) {
            prop_assume!(a.is_finite() || b.is_finite());
            let u = update_2d_uniform(a, b, f, d);
            let v = update_2d_aniso(a, b, f, d, d);
            prop_assert!(rel(v, u) <= 1e-14, "{u} vs {v}");
        }

        #[test]
        fn uniform_monotone(a in 0.0f64..20.0, b in neighbor(), bump in 0.0f64..5.0, f in 0.05f64..20.0) {
            let base = update_2d_uniform(a, b, f, 1.0);
            prop_assert!(update_2d_uniform(a + bump, b, f, 1.0) >= base);
            prop_assert!(update_2d_uniform(b, a + bump, f, 1.0) >= base);
        }

        #[test]
        fn three_d_root_satisfies_equation(a in neighbor(), b in neighbor(), c in neighbor(), f in 0.05f64..20.0, d in 0.01f64..2.0) {
            prop_assume!(a.is_finite() || b.is_finite() || c.is_finite());
            let phi = update_3d_uniform(a, b, c, f, d);
            let r = godunov_residual_3d(phi, a, b, c, f, d);
            prop_assert!(r.abs() <= 1e-12 * scale(phi, f, d), "residual {r}");
            prop_assert!(phi > a.min(b).min(c));
        }

        #[test]
        fn three_d_permutation_symmetric(a in neighbor(), b in neighbor(), c in neighbor(), f in 0.05f64..20.0) {
            let phi = update_3d_uniform(a, b, c, f, 1.0);
            for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                prop_assert_eq!(update_3d_uniform(x, y, z, f, 1.0).to_bits(), phi.to_bits());
            }
        }

        #[test]
        fn three_d_monotone(a in 0.0f64..20.0, b in neighbor(), c in neighbor(), bump in 0.0f64..5.0, f in 0.05f64..20.0) {
            let base = update_3d_uniform(a, b, c, f, 1.0);
            prop_assert!(update_3d_uniform(a + bump, b, c, f, 1.0) >= base * (1.0 - 1e-15));
        }
    }
}
