//! Thin wrappers over `libm` so the crate builds without `std` and produces
//! identical bit patterns on every platform.

#![allow(dead_code)]

pub(crate) use libm::{atan2, cos, exp, expm1, fabs, log, log10, sin, sinh, sqrt, tan};

pub(crate) fn hypot_sq(re: f64, im: f64) -> f64 {
    re * re + im * im
}

/// sin and cos of the same angle.
pub(crate) fn sincos(x: f64) -> (f64, f64) {
    (libm::sin(x), libm::cos(x))
}
