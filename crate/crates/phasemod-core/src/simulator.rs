//! Monte Carlo simulation of the L-sensor network.
//!
//! Each trial draws sensing noise `η_1..η_L`, forms the received signal
//!
//! ```text
//! y_L = √ρ · Σ_l e^{jω(θ + η_l)} + ν,      ν ~ CN(0, σ_ν²)
//! ```
//!
//! normalizes it to `z_L = y_L/L`, and runs one of the two fusion-center
//! estimators: the closed-form angle estimator `θ̂ = (1/ω)·∠z_L`, or the
//! generalized-least-squares search that minimizes
//! `[z − z̄(θ)]ᵀ Σ⁻¹(θ) [z − z̄(θ)]` over `[0, θ_R]` (the two agree for
//! symmetric noise).
//!
//! Campaigns are deterministic: trial `k` owns the substream
//! `derive_substream(seed, k)`, and the summary statistics are reduced with a
//! fixed pairwise tree (split at the midpoint down to blocks of 8), so the
//! result is bit-identical no matter how trials are scheduled across threads.
//!
//! The asymptotic theory assumes θ interior to `[0, θ_R]`: estimates near the
//! phase boundary can alias across `0 ↔ 2π/ω` at finite L, so campaigns
//! should keep θ at least a few predicted standard deviations
//! `√(AsV(ω)/L)` away from the band edges.

use alloc::format;
use alloc::vec::Vec;

use crate::analysis::trig_moments;
use crate::efficiency::{asv, mean_vector, sigma_matrix};
use crate::error::{Error, Result};
use crate::math;
use crate::minimize::golden_refine;
use crate::noise::NoiseModel;
use crate::rng::{derive_substream, standard_normal, RandomStream};

use core::f64::consts::PI;

/// Grid density of the GLS cost scan over `[0, θ_R]`.
const GLS_GRID: usize = 1024;

/// Fusion-center estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    /// `θ̂ = (1/ω)·∠z_L`.
    Angle,
    /// Grid + golden-section minimization of the GLS cost.
    Gls,
}

impl EstimatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Angle => "angle",
            EstimatorKind::Gls => "gls",
        }
    }
}

/// Full description of one network experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub model: NoiseModel,
    /// Number of sensors L.
    pub sensors: u64,
    /// Per-sensor transmit power ρ.
    pub rho: f64,
    /// Channel-noise variance σ_ν² (total over both quadratures).
    pub sigma_nu2: f64,
    /// Modulation frequency, in (0, 2π/θ_R].
    pub omega: f64,
    /// True location parameter, in [0, θ_R].
    pub theta: f64,
    /// Known parameter range bound θ_R.
    pub theta_r: f64,
    pub trials: u64,
    pub seed: u64,
    pub estimator: EstimatorKind,
}

impl SimConfig {
    /// Check the domain constraints, in particular `ω·θ_R ≤ 2π`.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: alloc::string::String| Err(Error::InvalidConfig(msg));
        if self.sensors == 0 {
            return fail(format!("need at least one sensor, got {}", self.sensors));
        }
        if self.trials == 0 {
            return fail(format!("need at least one trial, got {}", self.trials));
        }
        if self.rho.is_nan() || self.rho <= 0.0 {
            return fail(format!("rho must be positive, got {}", self.rho));
        }
        if self.sigma_nu2.is_nan() || self.sigma_nu2 < 0.0 {
            return fail(format!("sigma_nu2 must be nonnegative, got {}", self.sigma_nu2));
        }
        if self.theta_r.is_nan() || self.theta_r <= 0.0 {
            return fail(format!("theta_r must be positive, got {}", self.theta_r));
        }
        if self.omega.is_nan() || self.omega <= 0.0 {
            return fail(format!("omega must be positive, got {}", self.omega));
        }
        if self.omega * self.theta_r > 2.0 * PI * (1.0 + 1e-12) {
            return fail(format!(
                "omega {} exceeds 2*pi/theta_r = {}",
                self.omega,
                2.0 * PI / self.theta_r
            ));
        }
        if self.theta.is_nan() || self.theta < 0.0 || self.theta > self.theta_r {
            return fail(format!(
                "theta {} outside [0, theta_r = {}]",
                self.theta, self.theta_r
            ));
        }
        Ok(())
    }
}

/// Normalized received signal and estimate from one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutput {
    pub z_r: f64,
    pub z_i: f64,
    /// Estimate in `[0, 2π/ω)`; within `[0, θ_R)` for non-aliased trials.
    pub theta_hat: f64,
}

/// Aggregate statistics of a campaign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampaignSummary {
    pub mean_theta_hat: f64,
    pub bias: f64,
    /// Unbiased (n − 1) sample variance of the estimates.
    pub variance: f64,
    /// `L · variance`, the quantity that converges to AsV(ω).
    pub l_times_variance: f64,
    /// Analytic `AsV(ω)` for this configuration.
    pub predicted_asv: f64,
    pub trials_used: u64,
}

/// Draw one realization of `z_L = y_L/L` from the channel model.
pub fn simulate_received(config: &SimConfig, stream: &mut RandomStream) -> (f64, f64) {
    let (mut sum_r, mut sum_i) = (0.0f64, 0.0f64);
    for _ in 0..config.sensors {
        let eta = config.model.sample_one(stream);
        let (s, c) = math::sincos(config.omega * (config.theta + eta));
        sum_r += c;
        sum_i += s;
    }
    let amp = math::sqrt(config.rho);
    // Circularly symmetric CN(0, σ_ν²): each quadrature gets variance σ_ν²/2.
    let nu_scale = math::sqrt(config.sigma_nu2 / 2.0);
    let nu_r = nu_scale * standard_normal(stream);
    let nu_i = nu_scale * standard_normal(stream);
    let l = config.sensors as f64;
    ((amp * sum_r + nu_r) / l, (amp * sum_i + nu_i) / l)
}

/// Angle estimator `θ̂ = (1/ω)·∠z_L`.
///
/// The principal angle in (−π, π] is lifted to [0, 2π) and divided by ω, so
/// the estimate lands in `[0, 2π/ω) ⊇ [0, θ_R)`. A zero signal has no phase
/// and is reported as [`Error::DegenerateSignal`].
pub fn angle_estimate(z: (f64, f64), omega: f64, theta_r: f64) -> Result<f64> {
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::Domain {
            what: "angle_estimate requires omega > 0",
            value: omega,
        });
    }
    debug_assert!(omega * theta_r <= 2.0 * PI * (1.0 + 1e-12));
    let (z_r, z_i) = z;
    if z_r == 0.0 && z_i == 0.0 {
        return Err(Error::DegenerateSignal);
    }
    let mut angle = math::atan2(z_i, z_r);
    if angle < 0.0 {
        angle += 2.0 * PI;
    }
    let period = 2.0 * PI / omega;
    let mut theta_hat = angle / omega;
    // Guard the half-open range against rounding at the wrap point.
    if theta_hat >= period {
        theta_hat -= period;
    }
    if theta_hat < 0.0 {
        theta_hat = 0.0;
    }
    Ok(theta_hat)
}

/// GLS cost `[z − z̄(θ)]ᵀ Σ⁻¹(θ) [z − z̄(θ)]` through the covariance matrix.
pub fn gls_cost(
    model: &NoiseModel,
    z: (f64, f64),
    omega: f64,
    theta: f64,
    rho: f64,
) -> Result<f64> {
    let m = trig_moments(model, omega);
    if m.v_c <= 1e-12 || m.v_s <= 1e-12 {
        return Err(Error::SingularCovariance { v_c: m.v_c, v_s: m.v_s });
    }
    let zbar = mean_vector(model, omega, theta, rho);
    let sigma = sigma_matrix(model, omega, theta, rho);
    let d = [z.0 - zbar.zr_mean, z.1 - zbar.zi_mean];
    let w = sigma.solve(d);
    Ok(d[0] * w[0] + d[1] * w[1])
}

/// The same cost expanded into explicit trigonometric terms, valid for
/// symmetric noise (φ_I = 0); the dual route of [`gls_cost`].
pub fn gls_cost_expanded(
    model: &NoiseModel,
    z: (f64, f64),
    omega: f64,
    theta: f64,
    rho: f64,
) -> Result<f64> {
    let m = trig_moments(model, omega);
    if m.v_c <= 1e-12 || m.v_s <= 1e-12 {
        return Err(Error::SingularCovariance { v_c: m.v_c, v_s: m.v_s });
    }
    let phi = model.cf(omega).phi_r;
    let (z_r, z_i) = z;
    let (s1, c1) = math::sincos(omega * theta);
    let (s2, c2) = math::sincos(2.0 * omega * theta);
    let mag2 = z_r * z_r + z_i * z_i;
    let numerator = -4.0 * rho * math::sqrt(rho) * m.v_s * phi * (z_r * c1 + z_i * s1)
        + 2.0 * rho * rho * m.v_s * phi * phi
        + rho * (m.v_c + m.v_s) * mag2
        + rho * (m.v_c - m.v_s) * (z_i * z_i - z_r * z_r) * c2
        - 2.0 * rho * (m.v_c - m.v_s) * z_r * z_i * s2;
    Ok(numerator / (2.0 * rho * rho * m.v_c * m.v_s))
}

/// GLS estimator: scan of [`gls_cost`] over `[0, θ_R]` plus golden-section
/// refinement; grid-level ties are broken toward the candidate closest to
/// the angle estimate, which is the analytic cost minimizer for symmetric
/// noise.
pub fn gls_estimate(
    model: &NoiseModel,
    z: (f64, f64),
    omega: f64,
    theta_r: f64,
    rho: f64,
) -> Result<f64> {
    assert!(theta_r > 0.0, "theta_r must be positive");
    let cost = |theta: f64| gls_cost(model, z, omega, theta, rho);
    // Surface cost errors (singular covariance) once, up front.
    cost(0.0)?;

    let step = theta_r / (GLS_GRID - 1) as f64;
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    let mut values = [0.0f64; GLS_GRID];
    for (i, slot) in values.iter_mut().enumerate() {
        let x = if i == GLS_GRID - 1 {
            theta_r
        } else {
            i as f64 * step
        };
        let v = cost(x).unwrap_or(f64::INFINITY);
        *slot = v;
        if v < best {
            best = v;
            best_i = i;
        }
    }

    // Tie-break toward the angle candidate among equal-cost grid cells.
    if let Ok(angle) = angle_estimate(z, omega, theta_r) {
        let tie = best + 1e-12 * math::fabs(best);
        let mut best_dist = math::fabs(best_i as f64 * step - angle);
        for (i, v) in values.iter().enumerate() {
            if *v <= tie {
                let dist = math::fabs(i as f64 * step - angle);
                if dist < best_dist {
                    best_dist = dist;
                    best_i = i;
                }
            }
        }
    }

    let lo = (best_i.saturating_sub(1) as f64 * step).max(0.0);
    let hi = ((best_i + 1) as f64 * step).min(theta_r);
    let f = |x: f64| cost(x).unwrap_or(f64::INFINITY);
    let (theta_hat, _) = golden_refine(&f, lo, hi, 1e-11 * theta_r.max(1.0));
    Ok(theta_hat)
}

/// Run trial `trial_index` of the campaign on its own substream.
pub fn simulate_trial(config: &SimConfig, trial_index: u64) -> Result<TrialOutput> {
    let mut stream = derive_substream(config.seed, trial_index);
    let (z_r, z_i) = simulate_received(config, &mut stream);
    let theta_hat = match config.estimator {
        EstimatorKind::Angle => angle_estimate((z_r, z_i), config.omega, config.theta_r)?,
        EstimatorKind::Gls => {
            gls_estimate(&config.model, (z_r, z_i), config.omega, config.theta_r, config.rho)?
        }
    };
    Ok(TrialOutput { z_r, z_i, theta_hat })
}

/// Fixed-tree pairwise sum: split at the midpoint down to blocks of 8.
fn pairwise_sum<F: Fn(usize) -> f64 + Copy>(lo: usize, hi: usize, term: F) -> f64 {
    if hi - lo <= 8 {
        let mut acc = 0.0;
        for i in lo..hi {
            acc += term(i);
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term)
    }
}

/// Reduce per-trial estimates into a [`CampaignSummary`].
///
/// The reduction depends only on the slice contents, never on how it was
/// filled, so sequential and multi-threaded campaigns agree bit for bit.
pub fn summarize_estimates(config: &SimConfig, estimates: &[f64]) -> Result<CampaignSummary> {
    config.validate()?;
    let n = estimates.len();
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "variance needs at least 2 trials, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = pairwise_sum(0, n, |i| estimates[i]) / nf;
    let ss = pairwise_sum(0, n, |i| {
        let d = estimates[i] - mean;
        d * d
    });
    let variance = ss / (nf - 1.0);
    let l = config.sensors as f64;
    Ok(CampaignSummary {
        mean_theta_hat: mean,
        bias: mean - config.theta,
        variance,
        l_times_variance: l * variance,
        predicted_asv: asv(&config.model, config.omega)?,
        trials_used: n as u64,
    })
}

/// Run all trials sequentially and summarize.
pub fn run_campaign(config: &SimConfig) -> Result<CampaignSummary> {
    config.validate()?;
    if config.trials < 2 {
        return Err(Error::InvalidConfig(format!(
            "campaign needs at least 2 trials, got {}",
            config.trials
        )));
    }
    let mut estimates = Vec::with_capacity(config.trials as usize);
    for trial in 0..config.trials {
        estimates.push(simulate_trial(config, trial)?.theta_hat);
    }
    summarize_estimates(config, &estimates)
}
