//! Trigonometric moments, Stein-identity residuals, and the
//! Fisher-information/characteristic-function inequality residuals.
//!
//! For sensing noise η with characteristic function φ, the variances of
//! cos(ωη) and sin(ωη) are
//!
//! ```text
//! v_c = 1/2 + φ_R(2ω)/2 − φ_R²(ω)      v_s = 1/2 − φ_R(2ω)/2 − φ_I²(ω)
//! ```
//!
//! and the Fisher information `I(η)` obeys the strict bounds
//!
//! ```text
//! ω² φ_I²(ω) ≤ I(η)·v_c(ω)        ω² φ_R²(ω) ≤ I(η)·v_s(ω)
//! ```
//!
//! with equality in both exactly at ω = 0. [`inequality_residuals`] returns the
//! two slacks so callers can assert strict positivity margins rather than a
//! boolean. Note the first bracket evaluates φ_R at 2ω: the slacks are
//! `I·E[g²] − E[g']²` for g the centered cosine/sine, and those second
//! moments are the variances above.

use crate::error::{Error, Result};
use crate::math;
use crate::noise::NoiseModel;
use crate::quadrature::{integrate, integrate_oscillatory, QuadratureSpec, TrigKind};

/// Variances of cos(ωη) and sin(ωη).
///
/// Both lie in [0, 1] and satisfy `v_c + v_s = 1 − |φ(ω)|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigMoments {
    pub v_c: f64,
    pub v_s: f64,
}

/// Slack of the two Fisher/characteristic-function inequalities; both are
/// nonnegative and vanish together exactly at ω = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityResiduals {
    /// `I(η)·v_c(ω) − ω²φ_I²(ω)`, the slack of the imaginary-part bound.
    pub r_imag: f64,
    /// `I(η)·v_s(ω) − ω²φ_R²(ω)`, the slack of the real-part bound.
    pub r_real: f64,
}

/// Trigonometric moments of the noise at frequency ω.
///
/// Evaluated through the cancellation-free complement `1 − φ_R`, so the
/// O(ω²)-small variances keep full relative accuracy near ω = 0.
pub fn trig_moments(model: &NoiseModel, omega: f64) -> TrigMoments {
    let d1 = model.cf_real_complement(omega);
    let d2 = model.cf_real_complement(2.0 * omega);
    let phi_i = model.cf(omega).phi_i;
    // v_c = 1/2 + (1 − d2)/2 − (1 − d1)² = 2d1 − d1² − d2/2
    let v_c = 2.0 * d1 - d1 * d1 - 0.5 * d2;
    let v_s = 0.5 * d2 - phi_i * phi_i;
    TrigMoments {
        v_c: v_c.max(0.0),
        v_s: v_s.max(0.0),
    }
}

/// Residual `|E[g(η)s(η)] + E[g'(η)]|` of Stein's identity, by quadrature.
///
/// Requires `g` differentiable with `g(x)p(x) → 0` at ±∞. Both expectations
/// are integrated over (−∞, 0) ∪ (0, ∞), skipping the possible density kink
/// at the origin. For the built-in test functions
/// `g₁ = cos(ωx) − φ_R(ω)` and `g₂ = sin(ωx) − φ_I(ω)` a residual below
/// 1e-6 counts as a pass.
pub fn stein_check<G, Gp>(
    model: &NoiseModel,
    g: G,
    g_prime: Gp,
    spec: &QuadratureSpec,
) -> Result<f64>
where
    G: Fn(f64) -> f64,
    Gp: Fn(f64) -> f64,
{
    let weighted = |h: &dyn Fn(f64) -> f64| -> Result<f64> {
        let lo = integrate(|x| h(x) * model.pdf(x), f64::NEG_INFINITY, 0.0, spec)?;
        let hi = integrate(|x| h(x) * model.pdf(x), 0.0, f64::INFINITY, spec)?;
        Ok(lo + hi)
    };
    let e_gs = weighted(&|x| g(x) * model.score(x))?;
    let e_gp = weighted(&|x| g_prime(x))?;
    Ok(math::fabs(e_gs + e_gp))
}

/// Split a trig-weighted expectation at the possible density kink at 0.
fn trig_expectation<W: Fn(f64) -> f64>(
    w: W,
    kind: TrigKind,
    omega: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let lo = integrate_oscillatory(&w, kind, omega, f64::NEG_INFINITY, 0.0, spec)?;
    let hi = integrate_oscillatory(&w, kind, omega, 0.0, f64::INFINITY, spec)?;
    Ok(lo + hi)
}

/// [`stein_check`] with `g₁(x) = cos(ωx) − φ_R(ω)`.
///
/// The constant and the oscillatory parts of `g₁` are integrated separately:
/// the trig-weighted pieces go through the half-period panel summation of
/// [`integrate_oscillatory`], which the slow Cauchy tails require.
pub fn stein_residual_g1(model: &NoiseModel, omega: f64, spec: &QuadratureSpec) -> Result<f64> {
    let phi_r = model.cf(omega).phi_r;
    let score_weighted = |x: f64| model.score(x) * model.pdf(x);
    let e_cos_sp = trig_expectation(score_weighted, TrigKind::Cos, omega, spec)?;
    let e_sp = {
        let lo = integrate(score_weighted, f64::NEG_INFINITY, 0.0, spec)?;
        let hi = integrate(score_weighted, 0.0, f64::INFINITY, spec)?;
        lo + hi
    };
    let e_g_s = e_cos_sp - phi_r * e_sp;
    let e_g_prime = -omega * trig_expectation(|x| model.pdf(x), TrigKind::Sin, omega, spec)?;
    Ok(math::fabs(e_g_s + e_g_prime))
}

/// [`stein_check`] with `g₂(x) = sin(ωx) − φ_I(ω)`.
pub fn stein_residual_g2(model: &NoiseModel, omega: f64, spec: &QuadratureSpec) -> Result<f64> {
    let phi_i = model.cf(omega).phi_i;
    let score_weighted = |x: f64| model.score(x) * model.pdf(x);
    let e_sin_sp = trig_expectation(score_weighted, TrigKind::Sin, omega, spec)?;
    let e_sp = {
        let lo = integrate(score_weighted, f64::NEG_INFINITY, 0.0, spec)?;
        let hi = integrate(score_weighted, 0.0, f64::INFINITY, spec)?;
        lo + hi
    };
    let e_g_s = e_sin_sp - phi_i * e_sp;
    let e_g_prime = omega * trig_expectation(|x| model.pdf(x), TrigKind::Cos, omega, spec)?;
    Ok(math::fabs(e_g_s + e_g_prime))
}

/// The two inequality slacks at frequency ω.
///
/// Errors with [`Error::UnsupportedModel`] when the Fisher information is
/// infinite (Uniform): an infinite slack would only mask NaN arithmetic.
pub fn inequality_residuals(model: &NoiseModel, omega: f64) -> Result<InequalityResiduals> {
    let fisher = model.fisher();
    if !fisher.is_finite() {
        return Err(Error::UnsupportedModel {
            what: "inequality_residuals needs finite Fisher information",
        });
    }
    let moments = trig_moments(model, omega);
    let cf = model.cf(omega);
    let w2 = omega * omega;
    Ok(InequalityResiduals {
        r_imag: fisher * moments.v_c - w2 * cf.phi_i * cf.phi_i,
        r_real: fisher * moments.v_s - w2 * cf.phi_r * cf.phi_r,
    })
}
