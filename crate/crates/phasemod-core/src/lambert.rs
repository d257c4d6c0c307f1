//! Principal branch of the Lambert W function.

use crate::error::{Error, Result};
use crate::math;

/// `W₀(x)`: the solution `w ≥ −1` of `w·e^w = x`, for `x ≥ −1/e`.
///
/// Halley iteration safeguarded by bisection on a bracket that always
/// contains the root; the result satisfies `|w·e^w − x| ≤ 1e-12·max(1, |x|)`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let neg_inv_e = -math::exp(-1.0);
    if x.is_nan() || x < neg_inv_e {
        return Err(Error::Domain {
            what: "lambert_w0",
            value: x,
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    // Residual of the defining equation.
    let residual = |w: f64| w * math::exp(w) - x;

    // Bracket [lo, hi] with residual(lo) ≤ 0 ≤ residual(hi). The function is
    // increasing on w ≥ −1, and residual(-1) = -1/e - x ≤ 0 on the domain.
    let mut lo = -1.0;
    let mut hi = if x > 1.0 { math::log(x) + 1.0 } else { 1.0 };
    while residual(hi) < 0.0 {
        hi *= 2.0;
    }

    // Initial guess per region.
    let mut w = if x > core::f64::consts::E {
        let lx = math::log(x);
        lx - math::log(lx)
    } else if x < -0.25 {
        // Series around the branch point w = -1.
        let p = math::sqrt(2.0 * (core::f64::consts::E * x + 1.0));
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else {
        // Crude expansion of W near 0; Halley cleans it up.
        x * (1.0 - x)
    };
    if !(lo..=hi).contains(&w) {
        w = 0.5 * (lo + hi);
    }

    let tol = 1e-13 * if math::fabs(x) > 1.0 { math::fabs(x) } else { 1.0 };
    for _ in 0..200 {
        let ew = math::exp(w);
        let f = w * ew - x;
        if math::fabs(f) <= tol {
            return Ok(w);
        }
        if f > 0.0 {
            hi = w;
        } else {
            lo = w;
        }
        // Halley step: f' = e^w (1 + w), f'' = e^w (2 + w).
        let d1 = ew * (1.0 + w);
        let step = if d1 != 0.0 {
            let half_f2_over_f1 = (2.0 + w) / (2.0 * (1.0 + w));
            f / (d1 - f * half_f2_over_f1)
        } else {
            f64::NAN
        };
        let candidate = w - step;
        w = if candidate.is_finite() && candidate > lo && candidate < hi {
            candidate
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * math::fabs(hi) {
            return Ok(w);
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain bisection of w·e^w = x on [-1, hi].
    fn bisect_w0(x: f64) -> f64 {
        let mut lo = -1.0f64;
        let mut hi = 1.0f64;
        while hi * hi.exp() < x {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() > x {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn fixed_points() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(core::f64::consts::E).unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn branch_point_neighbourhood() {
        let x = -2.0 * (-2.0f64).exp(); // -0.2706705664732254
        let w = lambert_w0(x).unwrap();
        assert!((w - bisect_w0(x)).abs() < 1e-10, "w = {w}");
        assert!((w - (-0.406375)).abs() < 1e-6);
        // Exactly at the branch point the root is -1.
        let w_edge = lambert_w0(-(-1.0f64).exp()).unwrap();
        assert!((w_edge - (-1.0)).abs() < 2e-6, "w_edge = {w_edge}");
    }

    #[test]
    fn domain_error_below_branch_point() {
        let below = -(-1.0f64).exp() * (1.0 + 1e-9);
        assert!(matches!(
            lambert_w0(below),
            Err(Error::Domain { what: "lambert_w0", .. })
        ));
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn round_trip_on_principal_branch() {
        // 1000 w uniform in [-1, 10]: W(w e^w) = w within 1e-10.
        let mut stream = crate::rng::derive_substream(99, 0);
        for _ in 0..1000 {
            let w = -1.0 + 11.0 * stream.next_f64();
            let x = w * w.exp();
            let back = lambert_w0(x).unwrap();
            assert!((back - w).abs() < 1e-10, "w = {w}, back = {back}");
        }
    }

    #[test]
    fn defining_equation_residual_bound() {
        let mut stream = crate::rng::derive_substream(100, 0);
        for _ in 0..1000 {
            let x = -(-1.0f64).exp() + 1e4 * stream.next_f64();
            let w = lambert_w0(x).unwrap();
            let res = (w * w.exp() - x).abs();
            assert!(res <= 1e-12 * x.abs().max(1.0), "x = {x}, res = {res}");
        }
    }
}
