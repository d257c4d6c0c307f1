//! Bracketed scalar minimization: coarse grid scan followed by golden-section
//! refinement.
//!
//! The objective may be multimodal (the asymptotic variance of uniform noise
//! has poles), so a dense scan locates the cell holding the global grid
//! minimum before the local refinement runs. Non-finite objective values are
//! treated as +∞ during the search; if more than half of the grid is
//! non-finite the search reports a numeric failure.

use crate::error::{Error, Result};

/// Default number of coarse scan points.
pub const DEFAULT_GRID: usize = 256;

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (√5 − 1) / 2

/// Minimize `f` on `[lo, hi]` with the default 256-point scan.
///
/// Returns `(argmin, min)` with the argmin within `tol` of a local minimizer
/// that attains the global grid minimum.
pub fn minimize_scalar<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    minimize_scalar_with_grid(f, lo, hi, tol, DEFAULT_GRID)
}

/// [`minimize_scalar`] with an explicit scan density.
pub fn minimize_scalar_with_grid<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    grid: usize,
) -> Result<(f64, f64)> {
    assert!(lo < hi, "empty interval");
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(grid >= 2, "grid must have at least two points");

    let g = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    let step = (hi - lo) / (grid - 1) as f64;
    let mut non_finite = 0usize;
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    for i in 0..grid {
        let x = if i == grid - 1 { hi } else { lo + i as f64 * step };
        let v = f(x);
        if !v.is_finite() {
            non_finite += 1;
        } else if v < best {
            best = v;
            best_i = i;
        }
    }
    if non_finite * 2 > grid {
        return Err(Error::MinimizeNonFinite { non_finite, grid });
    }
    if !best.is_finite() {
        return Err(Error::MinimizeNonFinite { non_finite, grid });
    }

    // Bracket around the winning cell, clamped to the interval.
    let a = (lo + best_i.saturating_sub(1) as f64 * step).max(lo);
    let b = if best_i + 1 >= grid {
        hi
    } else {
        lo + (best_i + 1) as f64 * step
    };

    let (xm, fm) = golden_refine(&g, a, b, tol);
    // The scan already visited the cell edges; keep whichever point won.
    if best < fm {
        let xb = if best_i == grid - 1 {
            hi
        } else {
            lo + best_i as f64 * step
        };
        Ok((xb, best))
    } else {
        Ok((xm, fm))
    }
}

/// Golden-section refinement on the bracket `[a, b]`; returns the best
/// evaluated `(x, f(x))`. Non-finite objective values count as +∞.
pub(crate) fn golden_refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let g = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let (mut a, mut b) = (a, b);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    let mut iters = 0;
    while b - a > tol && iters < 400 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = g(x2);
        }
        iters += 1;
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_minimum() {
        let (x, v) = minimize_scalar(|x| (x - 2.0) * (x - 2.0), 0.0, 5.0, 1e-10).unwrap();
        assert!((x - 2.0).abs() < 1e-8, "x = {x}");
        assert!(v.abs() < 1e-15, "v = {v}");
    }

    #[test]
    fn random_convex_quadratics() {
        // 100 random convex quadratics: argmin error < tol. (Tighter
        // tolerances run into the flatness floor √(ε·|f|/f'') of any
        // value-comparison search.)
        let mut stream = crate::rng::derive_substream(5, 0);
        let tol = 1e-7;
        for _ in 0..100 {
            let center = -1.0 + 7.0 * stream.next_f64();
            let curvature = 0.1 + 10.0 * stream.next_f64();
            let offset = -5.0 + 10.0 * stream.next_f64();
            let (x, _) = minimize_scalar(
                |x| curvature * (x - center) * (x - center) + offset,
                -2.0,
                7.0,
                tol,
            )
            .unwrap();
            assert!((x - center).abs() < tol, "center = {center}, x = {x}");
        }
    }

    #[test]
    fn boundary_minimum() {
        let (x, v) = minimize_scalar(|x| x, 1.0, 3.0, 1e-9).unwrap();
        assert!((x - 1.0).abs() < 1e-6, "x = {x}");
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn multimodal_picks_global_grid_minimum() {
        // Deep narrow well at 4.1 against a broad shallow one at 1.0.
        let f = |x: f64| {
            let broad = 0.3 + (x - 1.0) * (x - 1.0) * 0.05;
            let deep = -1.0 + (x - 4.1) * (x - 4.1) * 40.0;
            broad.min(deep)
        };
        let (x, _) = minimize_scalar(f, 0.0, 5.0, 1e-9).unwrap();
        assert!((x - 4.1).abs() < 1e-6, "x = {x}");
    }

    #[test]
    fn poles_tolerated_below_half_grid() {
        let f = |x: f64| {
            if (x - 1.5).abs() < 0.2 {
                f64::INFINITY
            } else {
                (x - 3.0) * (x - 3.0)
            }
        };
        let (x, _) = minimize_scalar(f, 0.0, 5.0, 1e-9).unwrap();
        assert!((x - 3.0).abs() < 1e-6);
    }

    #[test]
    fn mostly_non_finite_fails() {
        let res = minimize_scalar(|_| f64::NAN, 0.0, 1.0, 1e-6);
        assert!(matches!(res, Err(Error::MinimizeNonFinite { .. })));
    }
}
