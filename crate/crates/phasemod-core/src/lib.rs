//! Analysis and simulation of distributed location estimation with
//! constant-modulus phase-modulated transmissions over a Gaussian
//! multiple-access channel.
//!
//! Each of `L` sensors observes `x_l = θ + η_l` and transmits the fixed-power
//! phasor `√ρ·e^{jωx_l}`; the fusion center receives the superposition plus
//! complex Gaussian channel noise and estimates `θ` from the normalized sum
//! `z_L`. The quality of that estimate is governed entirely by the
//! characteristic function of the sensing noise `η`, which ties it back to the
//! Fisher information through a pair of strict inequalities.
//!
//! The crate provides:
//!
//! * [`noise`] — the built-in sensing-noise families (Gaussian, Laplace,
//!   Cauchy, Uniform) with pdf, score, characteristic function, exact
//!   samplers, and Fisher information;
//! * [`analysis`] — trigonometric moments, Stein-identity residuals, and the
//!   Fisher-information/characteristic-function inequality residuals;
//! * [`efficiency`] — the asymptotic covariance of `z_L`, the asymptotic
//!   variance `AsV(ω)`, its infimum over the admissible frequency band, and
//!   the relative efficiency of the distributed scheme;
//! * [`simulator`] — a deterministic Monte Carlo simulator of the sensor
//!   network validating the analytic predictions;
//! * [`quadrature`], [`minimize`], [`lambert`], [`rng`] — the self-contained
//!   numerical kernels the rest of the crate is built on.
//!
//! The crate is `no_std` (with `alloc`); all transcendental math goes through
//! `libm` so results are bit-reproducible across platforms.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod efficiency;
mod error;
pub mod lambert;
mod math;
pub mod minimize;
pub mod noise;
pub mod quadrature;
pub mod rng;
pub mod simulator;

pub use error::{Error, Result};
pub use lambert::lambert_w0;
pub use minimize::minimize_scalar;
pub use noise::{CfValue, NoiseFamily, NoiseModel};
pub use quadrature::{integrate, QuadratureSpec};
pub use rng::{derive_substream, RandomStream};
