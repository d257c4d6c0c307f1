//! Asymptotic variance and relative efficiency of the phase-modulated
//! distributed estimator.
//!
//! The normalized received signal `z_L` concentrates around
//! `z̄(θ) = √ρ·e^{jωθ}·φ(ω)` with asymptotic covariance `Σ(θ)/L`; the
//! minimum-asymptotic-variance estimator built on `z_L` then achieves
//!
//! ```text
//! AsV(ω) = v_c·v_s / (ω²·[v_s·φ_I²(ω) + v_c·φ_R²(ω)])
//! ```
//!
//! independent of θ and of the channel-noise variance. Closed forms for the
//! built-in families:
//!
//! * Gaussian: `sinh(σ²ω²)/ω²`, nondecreasing, infimum σ² as ω → 0;
//! * Laplace: `σ²(1 + σ²ω²/2)²/(1 + 2σ²ω²)`, infimum `3σ²/4` at `ω = 1/σ`;
//! * Cauchy: `(e^{2γω} − 1)/(2ω²)`, infimum `2γ²(e^c − 1)/c²` at
//!   `ω = c/(2γ)` with `c = 2 + W(−2e⁻²)`.
//!
//! The relative efficiency `E(η) = [I(η)·inf AsV(ω)]⁻¹ ∈ [0, 1]` equals 1
//! exactly when the noise is Gaussian; uniform noise has infinite Fisher
//! information and efficiency 0.

use alloc::vec::Vec;

use crate::analysis::trig_moments;
use crate::error::{Error, Result};
use crate::lambert::lambert_w0;
use crate::math;
use crate::minimize::minimize_scalar;
use crate::noise::{NoiseFamily, NoiseModel};

use core::f64::consts::PI;

/// Relative ω below which the infimum search starts; the exact lower edge is
/// a limit, not an attainable point.
const OMEGA_MIN_FRACTION: f64 = 1e-4;

/// Expected value of `[Re z_L, Im z_L]`, in units of √ρ·|φ|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanVector {
    pub zr_mean: f64,
    pub zi_mean: f64,
}

/// Symmetric 2×2 asymptotic covariance of `√L·(z_L − z̄(θ))`.
///
/// Its determinant is `ρ²·v_c·v_s` and its trace `ρ·(v_c + v_s)` for every θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymCovariance {
    pub s11: f64,
    pub s22: f64,
    pub s12: f64,
}

impl AsymCovariance {
    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s12
    }

    pub fn trace(&self) -> f64 {
        self.s11 + self.s22
    }

    /// Solve `Σ·w = rhs`.
    pub(crate) fn solve(&self, rhs: [f64; 2]) -> [f64; 2] {
        let det = self.det();
        [
            (self.s22 * rhs[0] - self.s12 * rhs[1]) / det,
            (self.s11 * rhs[1] - self.s12 * rhs[0]) / det,
        ]
    }
}

/// Location of the infimum of AsV over the admissible band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaStar {
    /// The infimum is the ω → 0 boundary limit (the noise variance), not
    /// attained at any admissible ω.
    LimitZero,
    /// Interior (or right-edge) minimizer.
    At(f64),
}

/// How an efficiency figure was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfficiencyMethod {
    ClosedForm,
    Numeric,
}

/// Fisher information, infimum asymptotic variance, its location, and the
/// relative efficiency of the distributed scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyReport {
    pub fisher: f64,
    pub inf_asv: f64,
    pub omega_star: OmegaStar,
    pub efficiency: f64,
    pub method: EfficiencyMethod,
}

/// `z̄(θ) = √ρ·e^{jωθ}·φ(ω)` componentwise.
pub fn mean_vector(model: &NoiseModel, omega: f64, theta: f64, rho: f64) -> MeanVector {
    let cf = model.cf(omega);
    let (s, c) = math::sincos(omega * theta);
    let sr = math::sqrt(rho);
    MeanVector {
        zr_mean: sr * (cf.phi_r * c - cf.phi_i * s),
        zi_mean: sr * (cf.phi_r * s + cf.phi_i * c),
    }
}

/// `∂z̄/∂θ`, the sensitivity of the mean vector to the location parameter.
pub fn mean_vector_dtheta(model: &NoiseModel, omega: f64, theta: f64, rho: f64) -> [f64; 2] {
    let cf = model.cf(omega);
    let (s, c) = math::sincos(omega * theta);
    let w = omega * math::sqrt(rho);
    [
        -w * (cf.phi_r * s + cf.phi_i * c),
        w * (cf.phi_r * c - cf.phi_i * s),
    ]
}

/// Asymptotic covariance `Σ(θ)` of `z_L`.
pub fn sigma_matrix(model: &NoiseModel, omega: f64, theta: f64, rho: f64) -> AsymCovariance {
    let m = trig_moments(model, omega);
    let (s, c) = math::sincos(omega * theta);
    let (c2, s2) = (c * c, s * s);
    AsymCovariance {
        s11: rho * (m.v_c * c2 + m.v_s * s2),
        s22: rho * (m.v_s * c2 + m.v_c * s2),
        s12: rho * (m.v_c - m.v_s) * s * c,
    }
}

/// Asymptotic variance `AsV(ω)` of the minimum-asymptotic-variance estimator.
///
/// Returns `+∞` when the denominator underflows below 1e-300 — in particular
/// at zeros of the characteristic function (uniform noise at `ω = kπ/a`),
/// where the phase of `z_L` carries no information; ω ≤ 0 is a domain error.
pub fn asv(model: &NoiseModel, omega: f64) -> Result<f64> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::Domain {
            what: "asv requires omega > 0",
            value: omega,
        });
    }
    let cf = model.cf(omega);
    let m = trig_moments(model, omega);
    let denom = omega * omega * (m.v_s * cf.phi_i * cf.phi_i + m.v_c * cf.phi_r * cf.phi_r);
    if denom < 1e-300 {
        return Ok(f64::INFINITY);
    }
    Ok(m.v_c * m.v_s / denom)
}

/// Closed-form `AsV(ω)` for the Gaussian, Laplace, and Cauchy families.
///
/// Agrees with [`asv`] to 1e-12 relative; Uniform has no closed form here.
pub fn asv_closed_form(model: &NoiseModel, omega: f64) -> Result<f64> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::Domain {
            what: "asv_closed_form requires omega > 0",
            value: omega,
        });
    }
    let w2 = omega * omega;
    match model.family() {
        NoiseFamily::Gaussian => {
            let sigma2 = model.scale() * model.scale();
            Ok(math::sinh(sigma2 * w2) / w2)
        }
        NoiseFamily::Laplace => {
            let sigma2 = 2.0 * model.scale() * model.scale();
            let t = sigma2 * w2;
            let half = 1.0 + 0.5 * t;
            Ok(sigma2 * half * half / (1.0 + 2.0 * t))
        }
        NoiseFamily::Cauchy => {
            let gamma = model.scale();
            Ok(math::expm1(2.0 * gamma * omega) / (2.0 * w2))
        }
        NoiseFamily::Uniform => Err(Error::UnsupportedModel {
            what: "uniform noise has no closed-form AsV",
        }),
    }
}

/// `AsV` evaluated through the covariance quadratic form of the estimator at
/// an explicit θ:
/// `[∂z̄/∂θ]ᵀ Σ⁻¹(θ) [∂z̄/∂θ]` inverted. Independent of θ and ρ; serves as
/// the consistency route for [`asv`].
pub fn asv_from_covariance(model: &NoiseModel, omega: f64, theta: f64, rho: f64) -> Result<f64> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::Domain {
            what: "asv_from_covariance requires omega > 0",
            value: omega,
        });
    }
    let m = trig_moments(model, omega);
    if m.v_c <= 1e-12 || m.v_s <= 1e-12 {
        return Err(Error::SingularCovariance { v_c: m.v_c, v_s: m.v_s });
    }
    let d = mean_vector_dtheta(model, omega, theta, rho);
    let sigma = sigma_matrix(model, omega, theta, rho);
    let w = sigma.solve(d);
    let quad = d[0] * w[0] + d[1] * w[1];
    if quad <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / quad)
}

/// Infimum of `AsV` over `ω ∈ (0, 2π/θ_R]`, numerically.
///
/// Scans `[1e-4·(2π/θ_R), 2π/θ_R]` with a dense grid plus golden-section
/// refinement. When the noise has a finite variance, the ω → 0 boundary
/// value (which equals the variance) competes; if it wins, the location is
/// reported as [`OmegaStar::LimitZero`].
pub fn inf_asv(model: &NoiseModel, theta_r: f64) -> Result<(OmegaStar, f64)> {
    assert!(theta_r > 0.0, "theta_r must be positive");
    let omega_max = 2.0 * PI / theta_r;
    let omega_min = OMEGA_MIN_FRACTION * omega_max;
    let objective = |w: f64| asv(model, w).unwrap_or(f64::NAN);
    let (w_star, v_star) =
        minimize_scalar(objective, omega_min, omega_max, 1e-9 * omega_max)?;
    if let Some(variance) = model.variance() {
        // Ties go to the boundary: AsV(ω) > σ² strictly for ω > 0, so an
        // interior value within rounding of the variance is the limit
        // showing through.
        if v_star >= variance * (1.0 - 1e-12) {
            return Ok((OmegaStar::LimitZero, variance));
        }
    }
    Ok((OmegaStar::At(w_star), v_star))
}

/// Relative efficiency `E(η) = [I(η)·inf AsV]⁻¹` of the distributed scheme.
///
/// Gaussian, Laplace, and Cauchy use their closed-form infima (the Cauchy
/// critical point runs through [`lambert_w0`]); Uniform falls back to the
/// numeric search, and its infinite Fisher information drives the efficiency
/// to 0 under extended arithmetic.
pub fn relative_efficiency(model: &NoiseModel, theta_r: f64) -> Result<EfficiencyReport> {
    assert!(theta_r > 0.0, "theta_r must be positive");
    let omega_max = 2.0 * PI / theta_r;
    let fisher = model.fisher();

    let (omega_star, inf, method) = match model.family() {
        NoiseFamily::Gaussian => {
            // Nondecreasing in ω: the infimum is the ω → 0 limit, σ².
            let sigma2 = model.scale() * model.scale();
            (OmegaStar::LimitZero, sigma2, EfficiencyMethod::ClosedForm)
        }
        NoiseFamily::Laplace => {
            let sigma2 = 2.0 * model.scale() * model.scale();
            let w_unconstrained = 1.0 / math::sqrt(sigma2);
            if w_unconstrained <= omega_max {
                (
                    OmegaStar::At(w_unconstrained),
                    0.75 * sigma2,
                    EfficiencyMethod::ClosedForm,
                )
            } else {
                // AsV is decreasing up to 1/σ; the band edge is the minimizer.
                (
                    OmegaStar::At(omega_max),
                    asv_closed_form(model, omega_max)?,
                    EfficiencyMethod::ClosedForm,
                )
            }
        }
        NoiseFamily::Cauchy => {
            let gamma = model.scale();
            let c = 2.0 + lambert_w0(-2.0 * math::exp(-2.0))?;
            let w_unconstrained = c / (2.0 * gamma);
            if w_unconstrained <= omega_max {
                (
                    OmegaStar::At(w_unconstrained),
                    2.0 * gamma * gamma * math::expm1(c) / (c * c),
                    EfficiencyMethod::ClosedForm,
                )
            } else {
                (
                    OmegaStar::At(omega_max),
                    asv_closed_form(model, omega_max)?,
                    EfficiencyMethod::ClosedForm,
                )
            }
        }
        NoiseFamily::Uniform => {
            let (w, v) = inf_asv(model, theta_r)?;
            (w, v, EfficiencyMethod::Numeric)
        }
    };

    // Extended arithmetic (∞·finite = ∞, 1/∞ = 0), clamped to the
    // theoretical range to absorb last-ulp rounding of I·σ².
    let efficiency = (1.0 / (fisher * inf)).clamp(0.0, 1.0);
    Ok(EfficiencyReport {
        fisher,
        inf_asv: inf,
        omega_star,
        efficiency,
        method,
    })
}

/// One row of an AsV sweep; `±∞` values mark poles (empty fields in CSV).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub omega: f64,
    pub asv: f64,
    pub asv_db: f64,
    pub inv_fisher: f64,
    pub inv_fisher_db: f64,
}

/// Evaluate `AsV` and `1/I` (linear and dB) over an ascending positive grid.
pub fn asv_sweep(model: &NoiseModel, omega_grid: &[f64]) -> Vec<SweepPoint> {
    assert!(!omega_grid.is_empty(), "sweep grid must be nonempty");
    assert!(
        omega_grid.iter().all(|w| *w > 0.0),
        "sweep grid must be strictly positive"
    );
    assert!(
        omega_grid.windows(2).all(|p| p[0] < p[1]),
        "sweep grid must be ascending"
    );
    let inv_fisher = 1.0 / model.fisher();
    let inv_fisher_db = 10.0 * math::log10(inv_fisher);
    omega_grid
        .iter()
        .map(|&omega| {
            let a = asv(model, omega).expect("grid is strictly positive");
            SweepPoint {
                omega,
                asv: a,
                asv_db: 10.0 * math::log10(a),
                inv_fisher,
                inv_fisher_db,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseModel;

    fn gaussian_unit() -> NoiseModel {
        NoiseModel::gaussian(1.0).unwrap()
    }

    fn laplace_unit_variance() -> NoiseModel {
        NoiseModel::from_variance(NoiseFamily::Laplace, 1.0).unwrap()
    }

    #[test]
    fn mean_vector_at_theta_zero_is_cf() {
        let m = laplace_unit_variance();
        let mv = mean_vector(&m, 1.3, 0.0, 2.0);
        let cf = m.cf(1.3);
        assert!((mv.zr_mean - 2.0f64.sqrt() * cf.phi_r).abs() < 1e-15);
        assert!((mv.zi_mean - 2.0f64.sqrt() * cf.phi_i).abs() < 1e-15);
    }

    #[test]
    fn mean_vector_rotation_preserves_modulus() {
        let m = gaussian_unit();
        let mut stream = crate::rng::derive_substream(31, 0);
        for _ in 0..20 {
            let theta = 6.0 * stream.next_f64();
            let mv = mean_vector(&m, 1.0, theta, 1.0);
            let want = m.cf(1.0).modulus_sq();
            let got = mv.zr_mean * mv.zr_mean + mv.zi_mean * mv.zi_mean;
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_vector_quarter_turn() {
        let mv = mean_vector(&gaussian_unit(), 1.0, core::f64::consts::FRAC_PI_2, 1.0);
        assert!(mv.zr_mean.abs() < 1e-15, "zr = {}", mv.zr_mean);
        assert!((mv.zi_mean - 0.606531).abs() < 1e-6, "zi = {}", mv.zi_mean);
    }

    #[test]
    fn sigma_matrix_diagonal_at_zero() {
        let m = gaussian_unit();
        let s = sigma_matrix(&m, 1.0, 0.0, 2.0);
        let tm = crate::analysis::trig_moments(&m, 1.0);
        assert!((s.s11 - 2.0 * tm.v_c).abs() < 1e-15);
        assert!((s.s22 - 2.0 * tm.v_s).abs() < 1e-15);
        assert_eq!(s.s12, 0.0);
    }

    #[test]
    fn sigma_matrix_det_and_quarter_pi_values() {
        let s = sigma_matrix(&gaussian_unit(), 1.0, 0.7, 1.0);
        assert!((s.det() - 0.086375).abs() < 1e-6, "det = {}", s.det());

        let s = sigma_matrix(&gaussian_unit(), 1.0, core::f64::consts::FRAC_PI_4, 1.0);
        assert!((s.s11 - 0.316060).abs() < 1e-6);
        assert!((s.s22 - 0.316060).abs() < 1e-6);
        assert!((s.s12 + 0.116272).abs() < 1e-6);
    }

    #[test]
    fn asv_point_values() {
        let cauchy = NoiseModel::cauchy(1.0).unwrap();
        assert!((asv(&cauchy, 1.0).unwrap() - 3.194528).abs() < 1e-6);

        let laplace = laplace_unit_variance();
        assert!((asv(&laplace, 1.0).unwrap() - 0.75).abs() < 1e-12);

        let gauss = gaussian_unit();
        assert!((asv(&gauss, 1.0).unwrap() - 1.0f64.sinh()).abs() < 1e-12);
    }

    #[test]
    fn asv_uniform_pole_at_pi() {
        // φ_R(π) = sin(π)/π vanishes to machine precision; the estimator has
        // no phase information there.
        let u = NoiseModel::uniform(1.0).unwrap();
        assert_eq!(asv(&u, core::f64::consts::PI).unwrap(), f64::INFINITY);
    }

    #[test]
    fn asv_rejects_nonpositive_omega() {
        assert!(matches!(
            asv(&gaussian_unit(), 0.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            asv(&gaussian_unit(), -1.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn closed_form_examples() {
        // Gaussian ω → 0 recovers the variance.
        let g = gaussian_unit();
        assert!((asv_closed_form(&g, 1e-6).unwrap() - 1.0).abs() < 1e-9);

        // Laplace minimum over ω is 3σ²/4 at ω = 1.
        let l = laplace_unit_variance();
        let (w, v) = crate::minimize::minimize_scalar(
            |w| asv_closed_form(&l, w).unwrap(),
            1e-4,
            6.0,
            1e-10,
        )
        .unwrap();
        assert!((w - 1.0).abs() < 1e-6, "w = {w}");
        assert!((v - 0.75).abs() < 1e-10, "v = {v}");

        // Cauchy: scan-plus-refine minimization lands on ω* = c/(2γ) with
        // c = 2 + W(−2e⁻²), value 2(e^c − 1)/c².
        let c = 2.0 + crate::lambert::lambert_w0(-2.0 * (-2.0f64).exp()).unwrap();
        let cauchy = NoiseModel::cauchy(1.0).unwrap();
        let (w, v) = crate::minimize::minimize_scalar(
            |w| asv_closed_form(&cauchy, w).unwrap(),
            1e-4,
            6.0,
            1e-10,
        )
        .unwrap();
        assert!((w - 0.5 * c).abs() < 1e-6, "w = {w} vs {}", 0.5 * c);
        assert!((w - 0.796812).abs() < 1e-6);
        assert!((v - 2.0 * c.exp_m1() / (c * c)).abs() < 1e-10);
        assert!((v - 3.08827).abs() < 1e-5, "v = {v}");

        assert!(asv_closed_form(&NoiseModel::uniform(1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn inf_asv_gaussian_boundary() {
        let (w, v) = inf_asv(&gaussian_unit(), 2.0 * core::f64::consts::PI).unwrap();
        assert_eq!(w, OmegaStar::LimitZero);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn inf_asv_laplace_edge_and_interior() {
        let l = laplace_unit_variance();
        // ω ∈ (0, 1]: the minimizer sits on the right edge.
        let (w, v) = inf_asv(&l, 2.0 * core::f64::consts::PI).unwrap();
        match w {
            OmegaStar::At(w) => assert!((w - 1.0).abs() < 1e-4, "w = {w}"),
            other => panic!("expected interior/edge minimum, got {other:?}"),
        }
        assert!((v - 0.75).abs() < 1e-6, "v = {v}");

        // ω ∈ (0, 2]: the same point is interior.
        let (w, v) = inf_asv(&l, core::f64::consts::PI).unwrap();
        match w {
            OmegaStar::At(w) => assert!((w - 1.0).abs() < 1e-4, "w = {w}"),
            other => panic!("expected interior minimum, got {other:?}"),
        }
        assert!((v - 0.75).abs() < 1e-6, "v = {v}");
    }

    #[test]
    fn inf_asv_cauchy_interior() {
        let (w, v) = inf_asv(&NoiseModel::cauchy(1.0).unwrap(), core::f64::consts::PI).unwrap();
        match w {
            OmegaStar::At(w) => assert!((w - 0.796812).abs() < 1e-4, "w = {w}"),
            other => panic!("expected interior minimum, got {other:?}"),
        }
        assert!((v - 3.08827).abs() < 1e-4, "v = {v}");
    }

    #[test]
    fn relative_efficiency_table() {
        let theta_r = core::f64::consts::PI;

        let g = relative_efficiency(&gaussian_unit(), theta_r).unwrap();
        assert_eq!(g.efficiency, 1.0);
        assert_eq!(g.omega_star, OmegaStar::LimitZero);

        let l = relative_efficiency(&laplace_unit_variance(), theta_r).unwrap();
        assert!((l.efficiency - 2.0 / 3.0).abs() < 1e-6);

        let c = relative_efficiency(&NoiseModel::cauchy(1.0).unwrap(), theta_r).unwrap();
        assert!((c.efficiency - 0.647613).abs() < 1e-4, "E = {}", c.efficiency);

        let u = relative_efficiency(&NoiseModel::uniform(1.0).unwrap(), theta_r).unwrap();
        assert_eq!(u.efficiency, 0.0);
        assert_eq!(u.fisher, f64::INFINITY);
    }

    #[test]
    fn sweep_values_and_constant_inv_fisher() {
        let pts = asv_sweep(&gaussian_unit(), &[0.5, 1.0]);
        assert!((pts[0].asv - 1.010449).abs() < 1e-6);
        assert!((pts[1].asv - 1.175201).abs() < 1e-6);
        assert!(pts.iter().all(|p| p.inv_fisher == 1.0));

        // Uniform pole row carries infinities (CSV sentinel).
        let u = NoiseModel::uniform(1.0).unwrap();
        let pts = asv_sweep(&u, &[1.0, core::f64::consts::PI, 4.0]);
        assert_eq!(pts[1].asv, f64::INFINITY);
        assert_eq!(pts[1].asv_db, f64::INFINITY);
        assert_eq!(pts[1].inv_fisher, 0.0);
        assert_eq!(pts[1].inv_fisher_db, f64::NEG_INFINITY);
    }
}
