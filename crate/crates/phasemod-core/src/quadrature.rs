//! Adaptive quadrature on bounded and unbounded intervals.
//!
//! Bounded segments are integrated with the 15-point Gauss-Kronrod rule and
//! worst-error-first bisection. Infinite endpoints are folded to `(0, 1]` by
//! the smooth change of variables `x = s ± (1−u)/u` instead of hard tail
//! truncation, so heavy-tailed (Cauchy-type) integrands keep their mass. For
//! a doubly infinite interval the finite core `[−tail_cut, tail_cut]` is
//! integrated directly and each tail is folded separately; `tail_cut` is the
//! half-width beyond which the integrand class is assumed to carry only
//! tolerance-level structure per unit subdivision.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Tolerances and budget for one [`integrate`] call.
///
/// Invariants: `abs_tol > 0`, `rel_tol > 0`, `max_subdivisions ≥ 1`,
/// `tail_cut > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Absolute tolerance on the result.
    pub abs_tol: f64,
    /// Relative tolerance on the result.
    pub rel_tol: f64,
    /// Bisection budget per integration piece.
    pub max_subdivisions: usize,
    /// Split point between the direct core and the folded tails of a doubly
    /// infinite interval.
    pub tail_cut: f64,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    fn validate(&self) {
        assert!(self.abs_tol > 0.0, "abs_tol must be positive");
        assert!(self.rel_tol > 0.0, "rel_tol must be positive");
        assert!(self.max_subdivisions >= 1, "max_subdivisions must be >= 1");
        assert!(self.tail_cut > 0.0, "tail_cut must be positive");
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 1000,
            tail_cut: 10.0,
        }
    }
}

// 15-point Kronrod abscissae (positive half, descending); every second entry
// starting at index 1 is a node of the embedded 7-point Gauss rule. The
// tables keep their published digits beyond f64 precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// QUADPACK-style error rescaling from the raw Kronrod/Gauss difference.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = math::fabs(err);
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = {
            let r = 200.0 * scaled / res_asc;
            r * math::sqrt(r)
        };
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One 15-point Gauss-Kronrod evaluation over `[a, b]`; returns the Kronrod
/// estimate and a rescaled error bound.
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = math::fabs(half);

    let f_center = f(center);
    let mut res_gauss = WG[3] * f_center;
    let mut res_kronrod = WGK[7] * f_center;
    let mut res_abs = math::fabs(res_kronrod);

    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];

    for (j, w_gauss) in WG.iter().enumerate().take(3) {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        let fsum = f1 + f2;
        res_gauss += w_gauss * fsum;
        res_kronrod += WGK[jtw] * fsum;
        res_abs += WGK[jtw] * (math::fabs(f1) + math::fabs(f2));
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let x = half * XGK[jtwm1];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        let fsum = f1 + f2;
        res_kronrod += WGK[jtwm1] * fsum;
        res_abs += WGK[jtwm1] * (math::fabs(f1) + math::fabs(f2));
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * math::fabs(f_center - mean);
    for j in 0..7 {
        res_asc += WGK[j] * (math::fabs(fv1[j] - mean) + math::fabs(fv2[j] - mean));
    }

    let err = (res_kronrod - res_gauss) * half;
    (
        res_kronrod * half,
        rescale_error(err, res_abs * abs_half, res_asc * abs_half),
    )
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive integration of `f` over the bounded `[a, b]`.
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(f64, f64)> {
    let (value, error) = qk15(f, a, b);
    let mut segments = Vec::with_capacity(64);
    segments.push(Segment { a, b, value, error });

    for _ in 0..max_subdivisions {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        let target = abs_tol.max(rel_tol * math::fabs(total));
        if total_err <= target && total_err.is_finite() {
            return Ok((total, total_err));
        }

        // Split the segment with the worst error bound.
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|(_, s), (_, t)| {
                let se = if s.error.is_nan() { f64::INFINITY } else { s.error };
                let te = if t.error.is_nan() { f64::INFINITY } else { t.error };
                se.partial_cmp(&te).unwrap_or(core::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .unwrap();
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval exhausted at machine precision; put it back and stop.
            segments.push(seg);
            break;
        }
        let (lv, le) = qk15(f, seg.a, mid);
        let (rv, re) = qk15(f, mid, seg.b);
        segments.push(Segment { a: seg.a, b: mid, value: lv, error: le });
        segments.push(Segment { a: mid, b: seg.b, value: rv, error: re });
    }

    let total: f64 = segments.iter().map(|s| s.value).sum();
    let total_err: f64 = segments.iter().map(|s| s.error).sum();
    if total_err <= abs_tol.max(rel_tol * math::fabs(total)) && total_err.is_finite() {
        Ok((total, total_err))
    } else {
        Err(Error::QuadratureNonConvergence {
            best: total,
            error_bound: total_err,
        })
    }
}

/// Integrate `f` from `lower` to `upper`; either endpoint may be infinite.
///
/// The result `I` satisfies `|I − ∫f| ≤ max(abs_tol, rel_tol·|I|)` for
/// piecewise smooth integrands with integrable tails. Non-convergence within
/// the subdivision budget returns
/// [`Error::QuadratureNonConvergence`] carrying the best estimate and its
/// error bound.
///
/// Integrands that keep oscillating over an infinite tail (e.g.
/// `cos(ωx)·p(x)` with an algebraic envelope) defeat plain subdivision: the
/// folded tail holds unboundedly many cycles. Use
/// [`integrate_oscillatory`] for those.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    upper: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate();
    assert!(!lower.is_nan() && !upper.is_nan(), "NaN integration bound");
    assert!(lower < upper, "lower bound must be below upper bound");

    let t = spec.tail_cut;
    // (piece kind, finite bounds) in x-space; tails are folded below.
    enum Piece {
        Direct(f64, f64),
        // ∫_s^∞ f dx = ∫_0^1 f(s + (1−u)/u) / u² du
        UpperTail(f64),
        // ∫_{−∞}^s f dx = ∫_0^1 f(s − (1−u)/u) / u² du
        LowerTail(f64),
    }

    let mut pieces: Vec<Piece> = Vec::new();
    match (lower == f64::NEG_INFINITY, upper == f64::INFINITY) {
        (false, false) => pieces.push(Piece::Direct(lower, upper)),
        (false, true) => {
            if lower < t {
                pieces.push(Piece::Direct(lower, t));
                pieces.push(Piece::UpperTail(t));
            } else {
                pieces.push(Piece::UpperTail(lower));
            }
        }
        (true, false) => {
            if upper > -t {
                pieces.push(Piece::Direct(-t, upper));
                pieces.push(Piece::LowerTail(-t));
            } else {
                pieces.push(Piece::LowerTail(upper));
            }
        }
        (true, true) => {
            pieces.push(Piece::Direct(-t, t));
            pieces.push(Piece::UpperTail(t));
            pieces.push(Piece::LowerTail(-t));
        }
    }

    let n = pieces.len() as f64;
    let abs_tol = spec.abs_tol / n;
    let rel_tol = spec.rel_tol / n;

    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut converged = true;
    for piece in &pieces {
        let outcome = match piece {
            Piece::Direct(a, b) => adapt(&f, *a, *b, abs_tol, rel_tol, spec.max_subdivisions),
            Piece::UpperTail(s) => {
                let s = *s;
                let g = |u: f64| f(s + (1.0 - u) / u) / (u * u);
                adapt(&g, 0.0, 1.0, abs_tol, rel_tol, spec.max_subdivisions)
            }
            Piece::LowerTail(s) => {
                let s = *s;
                let g = |u: f64| f(s - (1.0 - u) / u) / (u * u);
                adapt(&g, 0.0, 1.0, abs_tol, rel_tol, spec.max_subdivisions)
            }
        };
        match outcome {
            Ok((v, e)) => {
                total += v;
                total_err += e;
            }
            Err(Error::QuadratureNonConvergence { best, error_bound }) => {
                total += best;
                total_err += error_bound;
                converged = false;
            }
            Err(other) => return Err(other),
        }
    }

    if converged {
        Ok(total)
    } else {
        Err(Error::QuadratureNonConvergence {
            best: total,
            error_bound: total_err,
        })
    }
}

/// Which trigonometric factor multiplies the envelope in
/// [`integrate_oscillatory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigKind {
    Cos,
    Sin,
}

/// First zero of the trig factor at or above `s`.
fn first_trig_zero_above(kind: TrigKind, omega: f64, s: f64) -> f64 {
    let h = core::f64::consts::PI / omega;
    match kind {
        TrigKind::Sin => libm::ceil(s / h) * h,
        TrigKind::Cos => (libm::ceil(s / h - 0.5) + 0.5) * h,
    }
}

/// Integrate `trig(ω·x)·w(x)` from `lower` to `upper` (endpoints may be
/// infinite) for a smooth, one-signed-per-tail, absolutely integrable
/// envelope `w`.
///
/// The finite core is handled by ordinary adaptive subdivision; each infinite
/// tail is cut at a zero of the trig factor and summed as half-period panels
/// whose alternating partial sums are accelerated by repeated averaging
/// (Euler transformation). This converges for algebraically decaying
/// envelopes — Cauchy-type tails included — where plain subdivision cannot.
pub fn integrate_oscillatory<W: Fn(f64) -> f64>(
    w: W,
    kind: TrigKind,
    omega: f64,
    lower: f64,
    upper: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate();
    assert!(!lower.is_nan() && !upper.is_nan(), "NaN integration bound");
    assert!(lower < upper, "lower bound must be below upper bound");
    if omega == 0.0 {
        return match kind {
            TrigKind::Cos => integrate(w, lower, upper, spec),
            TrigKind::Sin => Ok(0.0),
        };
    }
    // trig(−ωx) = ±trig(ωx): fold the sign into the result.
    let (omega, sign) = if omega < 0.0 {
        (
            -omega,
            match kind {
                TrigKind::Cos => 1.0,
                TrigKind::Sin => -1.0,
            },
        )
    } else {
        (omega, 1.0)
    };

    let f = |x: f64| {
        let t = match kind {
            TrigKind::Cos => math::cos(omega * x),
            TrigKind::Sin => math::sin(omega * x),
        };
        t * w(x)
    };

    let half_period = core::f64::consts::PI / omega;
    let budget = spec.max_subdivisions;
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut converged = true;

    // Tail cut points: a trig zero just beyond tail_cut (or beyond the finite
    // bound when it already sits outside the core).
    let up_start = upper
        .is_infinite()
        .then(|| first_trig_zero_above(kind, omega, spec.tail_cut.max(lower)));
    let down_start = lower
        .is_infinite()
        .then(|| -first_trig_zero_above(kind, omega, spec.tail_cut.max(-upper)));

    // Finite core, pre-split at ±tail_cut: at low frequencies the first
    // trig zero beyond the cut sits many tail_cut widths out, and a single
    // Gauss-Kronrod pass over such a span can miss a light-tailed integrand
    // entirely (every node lands where it is ~0, so the error estimate is
    // deceptively small).
    let core_lo = down_start.unwrap_or(lower);
    let core_hi = up_start.unwrap_or(upper);
    let mut core_edges = alloc::vec![core_lo];
    for cut in [-spec.tail_cut, spec.tail_cut] {
        if core_lo < cut && cut < core_hi {
            core_edges.push(cut);
        }
    }
    core_edges.push(core_hi);

    let n_core = if core_lo < core_hi { core_edges.len() - 1 } else { 0 };
    let n_pieces =
        (n_core + up_start.is_some() as usize + down_start.is_some() as usize).max(1) as f64;
    let abs_tol = spec.abs_tol / n_pieces;
    let rel_tol = spec.rel_tol / n_pieces;
    if core_lo < core_hi {
        for pair in core_edges.windows(2) {
            match adapt(&f, pair[0], pair[1], abs_tol, rel_tol, budget) {
                Ok((v, e)) => {
                    total += v;
                    total_err += e;
                }
                Err(Error::QuadratureNonConvergence { best, error_bound }) => {
                    total += best;
                    total_err += error_bound;
                    converged = false;
                }
                Err(other) => return Err(other),
            }
        }
    }

    for (start, dir) in [(up_start, 1.0f64), (down_start, -1.0f64)] {
        let Some(start) = start else { continue };
        match oscillatory_tail(&f, start, dir * half_period, abs_tol, budget) {
            Ok((v, e)) => {
                total += v;
                total_err += e;
            }
            Err(Error::QuadratureNonConvergence { best, error_bound }) => {
                total += best;
                total_err += error_bound;
                converged = false;
            }
            Err(other) => return Err(other),
        }
    }

    if converged {
        Ok(sign * total)
    } else {
        Err(Error::QuadratureNonConvergence {
            best: sign * total,
            error_bound: total_err,
        })
    }
}

const MIN_PANELS: usize = 6;
const MAX_PANELS: usize = 96;

/// Sum of `∫f` over half-period panels marching from `start` with signed
/// step `step`, accelerated by repeated averaging of the partial sums.
fn oscillatory_tail<F: Fn(f64) -> f64>(
    f: &F,
    start: f64,
    step: f64,
    abs_tol: f64,
    budget: usize,
) -> Result<(f64, f64)> {
    let panel_tol = (abs_tol / 64.0).max(1e-300);
    let mut partials: Vec<f64> = Vec::with_capacity(MAX_PANELS);
    let mut sum = 0.0;
    let mut panel_err = 0.0;
    let mut prev_diag = f64::NAN;
    let mut tiny_streak = 0usize;

    for k in 0..MAX_PANELS {
        let a = start + k as f64 * step;
        let b = a + step;
        let (lo, hi) = if step > 0.0 { (a, b) } else { (b, a) };
        let (v, e) = adapt(f, lo, hi, panel_tol, 1e-12, budget)
            .or_else(|err| match err {
                Error::QuadratureNonConvergence { best, error_bound } => Ok((best, error_bound)),
                other => Err(other),
            })?;
        sum += v;
        panel_err += e;
        partials.push(sum);

        // Envelope exhausted (light tails): the plain sum is already there.
        if math::fabs(v) < abs_tol / 100.0 {
            tiny_streak += 1;
            if tiny_streak >= 2 && k + 1 >= MIN_PANELS {
                return Ok((sum, panel_err + math::fabs(v)));
            }
        } else {
            tiny_streak = 0;
        }

        if k + 1 >= MIN_PANELS {
            // Averaging table diagonal over the partial sums.
            let mut row = partials.clone();
            for _level in 1..row.len() {
                for i in 0..row.len() - 1 {
                    row[i] = 0.5 * (row[i] + row[i + 1]);
                }
                row.pop();
            }
            let diag = row[0];
            if !prev_diag.is_nan() {
                let diff = math::fabs(diag - prev_diag);
                if diff <= abs_tol / 4.0 {
                    return Ok((diag, diff + panel_err));
                }
            }
            prev_diag = diag;
        }
    }

    Err(Error::QuadratureNonConvergence {
        best: if prev_diag.is_nan() { sum } else { prev_diag },
        error_bound: f64::INFINITY,
    })
}
