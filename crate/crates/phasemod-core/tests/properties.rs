//! Analytic invariants of the noise families, the inequality residuals, and
//! the asymptotic-variance machinery, checked against quadrature and
//! sampling oracles.

use phasemod_core::analysis::{
    stein_residual_g1, stein_residual_g2, inequality_residuals, trig_moments,
};
use phasemod_core::efficiency::{
    asv, asv_closed_form, asv_from_covariance, inf_asv, relative_efficiency, OmegaStar,
};
use phasemod_core::noise::{NoiseFamily, NoiseModel};
use phasemod_core::quadrature::{integrate, integrate_oscillatory, TrigKind};
use phasemod_core::rng::derive_substream;
use phasemod_core::{QuadratureSpec, RandomStream};

const FAMILIES: [NoiseFamily; 4] = [
    NoiseFamily::Gaussian,
    NoiseFamily::Laplace,
    NoiseFamily::Cauchy,
    NoiseFamily::Uniform,
];

const FINITE_FISHER: [NoiseFamily; 3] = [
    NoiseFamily::Gaussian,
    NoiseFamily::Laplace,
    NoiseFamily::Cauchy,
];

fn random_scale(stream: &mut RandomStream) -> f64 {
    0.3 + 3.7 * stream.next_f64()
}

/// ∫pdf = 1 within 1e-8 for all families and 20 random scales. The real line
/// is split at ±scale so density kinks and support edges sit on piece
/// boundaries, where the quadrature never samples.
#[test]
fn pdf_normalizes_for_random_scales() {
    let spec = QuadratureSpec::default();
    let mut stream = derive_substream(101, 0);
    for family in FAMILIES {
        for _ in 0..20 {
            let m = NoiseModel::new(family, random_scale(&mut stream)).unwrap();
            let s = m.scale();
            let mass = integrate(|x| m.pdf(x), f64::NEG_INFINITY, -s, &spec).unwrap()
                + integrate(|x| m.pdf(x), -s, 0.0, &spec).unwrap()
                + integrate(|x| m.pdf(x), 0.0, s, &spec).unwrap()
                + integrate(|x| m.pdf(x), s, f64::INFINITY, &spec).unwrap();
            assert!(
                (mass - 1.0).abs() < 1e-8,
                "{}: mass = {mass}",
                m.spec_string()
            );
        }
    }
}

/// Score matches the centered finite difference of log pdf at smooth points.
#[test]
fn score_matches_log_pdf_derivative() {
    let mut stream = derive_substream(102, 0);
    for family in FAMILIES {
        for _ in 0..100 {
            let m = NoiseModel::new(family, random_scale(&mut stream)).unwrap();
            let s = m.scale();
            // Stay away from the Laplace kink and inside the Uniform support.
            let magnitude = match family {
                NoiseFamily::Uniform => (0.05 + 0.85 * stream.next_f64()) * s,
                _ => (0.1 + 2.9 * stream.next_f64()) * s,
            };
            let x = if stream.next_f64() < 0.5 { magnitude } else { -magnitude };
            let h = 1e-6 * x.abs().max(1.0);
            let fd = ((m.pdf(x + h)).ln() - (m.pdf(x - h)).ln()) / (2.0 * h);
            assert!(
                (fd - m.score(x)).abs() < 1e-6,
                "{} at x = {x}: fd {fd} vs score {}",
                m.spec_string(),
                m.score(x)
            );
        }
    }
}

/// Closed-form cf matches the quadrature of ∫cos(ωx)p(x)dx (and the
/// imaginary part vanishes) at 50 random (family, scale, ω) triples. The
/// oracle integrates piecewise with breaks at ±scale so support edges and
/// kinks sit on panel boundaries.
#[test]
fn cf_matches_quadrature_oracle() {
    let spec = QuadratureSpec::new(1e-9, 1e-9);
    let mut stream = derive_substream(103, 0);
    for i in 0..50 {
        let family = FAMILIES[i % 4];
        let m = NoiseModel::new(family, 0.3 + 2.7 * stream.next_f64()).unwrap();
        let omega = 0.1 + 2.9 * stream.next_f64();
        let s = m.scale();
        let pieces = [
            (f64::NEG_INFINITY, -s),
            (-s, s),
            (s, f64::INFINITY),
        ];
        let mut real = 0.0;
        let mut imag = 0.0;
        for (lo, hi) in pieces {
            real +=
                integrate_oscillatory(|x| m.pdf(x), TrigKind::Cos, omega, lo, hi, &spec).unwrap();
            imag +=
                integrate_oscillatory(|x| m.pdf(x), TrigKind::Sin, omega, lo, hi, &spec).unwrap();
        }
        let cf = m.cf(omega);
        assert!(
            (real - cf.phi_r).abs() < 1e-7,
            "{} at ω = {omega}: {real} vs {}",
            m.spec_string(),
            cf.phi_r
        );
        assert!((imag - cf.phi_i).abs() < 1e-7);
    }
}

/// Closed-form Fisher information matches the quadrature of ∫[p']²/p dx to
/// 1e-6 relative for the finite-Fisher families.
#[test]
fn fisher_matches_quadrature_oracle() {
    let spec = QuadratureSpec::default();
    let mut stream = derive_substream(104, 0);
    for family in FINITE_FISHER {
        for _ in 0..3 {
            let m = NoiseModel::new(family, random_scale(&mut stream)).unwrap();
            let integrand = |x: f64| {
                let s = m.score(x);
                s * s * m.pdf(x)
            };
            // Integrate over (−∞, 0) ∪ (0, ∞): the Laplace score jumps at 0.
            let left = integrate(integrand, f64::NEG_INFINITY, 0.0, &spec).unwrap();
            let right = integrate(integrand, 0.0, f64::INFINITY, &spec).unwrap();
            let quad = left + right;
            let closed = m.fisher();
            assert!(
                ((quad - closed) / closed).abs() < 1e-6,
                "{}: quad {quad} vs closed {closed}",
                m.spec_string()
            );
        }
    }
}

/// Sampler empirical characteristic function matches the closed form within
/// 4/√n at ω ∈ {0.5, 1, 2}.
#[test]
fn sampler_empirical_cf_matches_closed_form() {
    let n = 100_000usize;
    let tol = 4.0 / (n as f64).sqrt();
    for (k, family) in FAMILIES.iter().enumerate() {
        let m = NoiseModel::new(*family, 1.0).unwrap();
        let mut stream = derive_substream(105, k as u64);
        let xs = m.sample(&mut stream, n);
        for omega in [0.5, 1.0, 2.0] {
            let (mut ec, mut es) = (0.0, 0.0);
            for &x in &xs {
                ec += (omega * x).cos();
                es += (omega * x).sin();
            }
            ec /= n as f64;
            es /= n as f64;
            let cf = m.cf(omega);
            assert!(
                (ec - cf.phi_r).abs() < tol,
                "{} ω = {omega}: ecf {ec} vs {}",
                m.spec_string(),
                cf.phi_r
            );
            assert!((es - cf.phi_i).abs() < tol);
        }
    }
}

/// v_c + v_s + |φ(ω)|² = 1 within 1e-12 at 100 random (model, ω).
#[test]
fn trig_moment_identity() {
    let mut stream = derive_substream(106, 0);
    for i in 0..100 {
        let family = FAMILIES[i % 4];
        let m = NoiseModel::new(family, random_scale(&mut stream)).unwrap();
        let omega = 10.0 * stream.next_f64();
        let tm = trig_moments(&m, omega);
        let total = tm.v_c + tm.v_s + m.cf(omega).modulus_sq();
        assert!(
            (total - 1.0).abs() < 1e-12,
            "{} at ω = {omega}: total = {total}",
            m.spec_string()
        );
        assert!(tm.v_c >= 0.0 && tm.v_s >= 0.0);
    }
}

/// v_c and v_s are the second moments E[g²] of the centered cosine/sine:
/// the quadrature oracle that pins the 2ω argument inside the brackets.
#[test]
fn trig_moments_match_second_moment_quadrature() {
    let spec = QuadratureSpec::new(1e-10, 1e-10);
    for (family, omega) in [
        (NoiseFamily::Gaussian, 1.0),
        (NoiseFamily::Gaussian, 0.4),
        (NoiseFamily::Laplace, 1.3),
        (NoiseFamily::Laplace, 0.7),
    ] {
        let m = NoiseModel::new(family, 1.0).unwrap();
        let cf = m.cf(omega);
        let g1_sq = |x: f64| {
            let g = (omega * x).cos() - cf.phi_r;
            g * g * m.pdf(x)
        };
        let g2_sq = |x: f64| {
            let g = (omega * x).sin() - cf.phi_i;
            g * g * m.pdf(x)
        };
        let e_g1 = integrate(g1_sq, f64::NEG_INFINITY, f64::INFINITY, &spec).unwrap();
        let e_g2 = integrate(g2_sq, f64::NEG_INFINITY, f64::INFINITY, &spec).unwrap();
        let tm = trig_moments(&m, omega);
        assert!((e_g1 - tm.v_c).abs() < 1e-9, "v_c: {e_g1} vs {}", tm.v_c);
        assert!((e_g2 - tm.v_s).abs() < 1e-9, "v_s: {e_g2} vs {}", tm.v_s);
    }
}

/// Sample variances of cos(ωη) and sin(ωη) over 1e6 draws agree with the
/// analytic moments within 4/√n.
#[test]
fn trig_moments_match_sample_variances() {
    let n = 1_000_000usize;
    let tol = 4.0 / (n as f64).sqrt();
    let omega = 1.0;
    for (k, family) in FINITE_FISHER.iter().enumerate() {
        let m = NoiseModel::new(*family, 1.0).unwrap();
        let mut stream = derive_substream(107, k as u64);
        let (mut sc, mut ss, mut scc, mut sss) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for _ in 0..n {
            let x = m.sample_one(&mut stream);
            let (s, c) = (omega * x).sin_cos();
            sc += c;
            ss += s;
            scc += c * c;
            sss += s * s;
        }
        let nf = n as f64;
        let var_c = scc / nf - (sc / nf) * (sc / nf);
        let var_s = sss / nf - (ss / nf) * (ss / nf);
        let tm = trig_moments(&m, omega);
        assert!(
            (var_c - tm.v_c).abs() < tol,
            "{}: var_c {var_c} vs {}",
            m.spec_string(),
            tm.v_c
        );
        assert!((var_s - tm.v_s).abs() < tol);
    }
}

/// Strict positivity of both residuals over 200 log-spaced ω in [1e-3, 10]
/// for every finite-Fisher family: equality holds only at ω = 0.
#[test]
fn inequality_residuals_strictly_positive() {
    for family in FINITE_FISHER {
        let m = NoiseModel::new(family, 1.0).unwrap();
        for i in 0..200 {
            let omega = 1e-3 * 10f64.powf(4.0 * i as f64 / 199.0);
            let r = inequality_residuals(&m, omega).unwrap();
            assert!(
                r.r_imag > 0.0 && r.r_real > 0.0,
                "{} at ω = {omega}: r_imag = {:e}, r_real = {:e}",
                m.spec_string(),
                r.r_imag,
                r.r_real
            );
        }
    }
}

/// r_real(ω)/ω² → I·σ² − 1 as ω → 0 for finite-variance families
/// (0 for the Gaussian, the exactly-efficient case).
#[test]
fn residual_low_frequency_limit() {
    let omega = 1e-3;
    for family in [NoiseFamily::Gaussian, NoiseFamily::Laplace] {
        let m = NoiseModel::new(family, 1.0).unwrap();
        let want = m.fisher() * m.variance().unwrap() - 1.0;
        let r = inequality_residuals(&m, omega).unwrap();
        let got = r.r_real / (omega * omega);
        assert!(
            (got - want).abs() < 1e-3,
            "{}: {got} vs {want}",
            m.spec_string()
        );
    }
}

/// Stein residuals for the built-in g₁, g₂ stay below 1e-6 across models
/// and frequencies.
#[test]
fn stein_residuals_below_threshold() {
    let spec = QuadratureSpec::new(1e-9, 1e-9);
    for family in FINITE_FISHER {
        let m = NoiseModel::new(family, 1.0).unwrap();
        for omega in [0.1, 0.5, 1.0, 2.0] {
            let r1 = stein_residual_g1(&m, omega, &spec).unwrap();
            let r2 = stein_residual_g2(&m, omega, &spec).unwrap();
            assert!(r1 < 1e-6, "{} g1 at ω = {omega}: {r1:e}", m.spec_string());
            assert!(r2 < 1e-6, "{} g2 at ω = {omega}: {r2:e}", m.spec_string());
        }
    }
}

/// Strict Cramér-Rao-type bound: AsV(ω) > 1/I for every admissible ω.
#[test]
fn asv_strictly_above_inverse_fisher() {
    for family in FINITE_FISHER {
        let m = NoiseModel::new(family, 1.0).unwrap();
        let inv_fisher = 1.0 / m.fisher();
        for i in 0..200 {
            let omega = 0.015 + 2.985 * i as f64 / 199.0;
            let a = asv(&m, omega).unwrap();
            assert!(
                a > inv_fisher,
                "{} at ω = {omega}: asv {a} vs 1/I {inv_fisher}",
                m.spec_string()
            );
        }
    }
}

/// Gaussian AsV is nondecreasing in ω.
#[test]
fn gaussian_asv_nondecreasing() {
    let m = NoiseModel::gaussian(1.0).unwrap();
    let mut prev = 0.0;
    for i in 0..200 {
        let omega = 3.0 * (i + 1) as f64 / 200.0;
        let a = asv(&m, omega).unwrap();
        assert!(a >= prev, "dip at ω = {omega}: {a} < {prev}");
        prev = a;
    }
}

/// General-form and closed-form AsV agree to 1e-12 relative.
#[test]
fn asv_agrees_with_closed_form() {
    for family in FINITE_FISHER {
        let m = NoiseModel::new(family, 1.0).unwrap();
        for i in 0..200 {
            let omega = 0.02 + 2.98 * i as f64 / 199.0;
            let a = asv(&m, omega).unwrap();
            let c = asv_closed_form(&m, omega).unwrap();
            assert!(
                ((a - c) / c).abs() < 1e-12,
                "{} at ω = {omega}: {a} vs {c}",
                m.spec_string()
            );
        }
    }
}

/// det Σ(θ) = ρ²·v_c·v_s and tr Σ(θ) = ρ·(v_c + v_s) at every θ.
#[test]
fn sigma_matrix_rotation_invariants() {
    let mut stream = derive_substream(111, 0);
    for family in FAMILIES {
        let m = NoiseModel::new(family, 1.0).unwrap();
        for _ in 0..20 {
            let omega = 0.1 + 2.4 * stream.next_f64();
            let theta = 7.0 * stream.next_f64();
            let rho = 0.5 + 2.0 * stream.next_f64();
            let tm = trig_moments(&m, omega);
            let sigma = phasemod_core::efficiency::sigma_matrix(&m, omega, theta, rho);
            assert!(
                (sigma.det() - rho * rho * tm.v_c * tm.v_s).abs() < 1e-10,
                "{}: det drift at ω = {omega}, θ = {theta}",
                m.spec_string()
            );
            assert!((sigma.trace() - rho * (tm.v_c + tm.v_s)).abs() < 1e-12);
            assert!(sigma.s11 >= 0.0 && sigma.s22 >= 0.0);
        }
    }
}

/// The covariance quadratic form gives the same AsV at any θ (and ρ).
#[test]
fn asv_theta_invariance_through_quadratic_form() {
    let mut stream = derive_substream(108, 0);
    for family in FINITE_FISHER {
        let m = NoiseModel::new(family, 1.0).unwrap();
        for omega in [0.3, 1.0, 2.5] {
            let reference = asv(&m, omega).unwrap();
            for _ in 0..20 {
                let theta = 2.0 * std::f64::consts::PI * stream.next_f64();
                let rho = 0.5 + 2.0 * stream.next_f64();
                let via_form = asv_from_covariance(&m, omega, theta, rho).unwrap();
                assert!(
                    (1.0 / via_form - 1.0 / reference).abs() < 1e-10,
                    "{} ω = {omega} θ = {theta}: {via_form} vs {reference}",
                    m.spec_string()
                );
            }
        }
    }
}

/// Scale covariance: for η' = αη, AsV'(ω) = α²·AsV(αω).
#[test]
fn asv_scale_covariance() {
    let mut stream = derive_substream(109, 0);
    for family in FINITE_FISHER {
        for alpha in [0.5, 2.0, 10.0] {
            let base = NoiseModel::new(family, 1.0).unwrap();
            let scaled = NoiseModel::new(family, alpha).unwrap();
            for _ in 0..20 {
                let omega = 0.05 + 1.95 * stream.next_f64();
                let lhs = asv(&scaled, omega).unwrap();
                let rhs = alpha * alpha * asv(&base, alpha * omega).unwrap();
                assert!(
                    ((lhs - rhs) / rhs).abs() < 1e-12,
                    "{family:?} α = {alpha} ω = {omega}: {lhs} vs {rhs}"
                );
            }
        }
    }
    // Spot check with a uniform model away from its poles.
    let u1 = NoiseModel::uniform(0.8).unwrap();
    let u2 = NoiseModel::uniform(1.6).unwrap();
    let lhs = asv(&u2, 0.3).unwrap();
    let rhs = 4.0 * asv(&u1, 0.6).unwrap();
    assert!(((lhs - rhs) / rhs).abs() < 1e-12);
}

/// Numeric infimum obeys the scale relation: scaling the noise by α and the
/// band edge by 1/α (θ_R by α) multiplies the infimum by α² exactly.
#[test]
fn inf_asv_scale_relation_numeric() {
    let theta_r = std::f64::consts::PI;
    for family in [NoiseFamily::Laplace, NoiseFamily::Cauchy] {
        let base = NoiseModel::new(family, 1.0).unwrap();
        let (_, v_base) = inf_asv(&base, theta_r).unwrap();
        for alpha in [0.5, 2.0] {
            let scaled = NoiseModel::new(family, alpha).unwrap();
            let (_, v_scaled) = inf_asv(&scaled, alpha * theta_r).unwrap();
            assert!(
                ((v_scaled - alpha * alpha * v_base) / (alpha * alpha * v_base)).abs() < 1e-6,
                "{family:?} α = {alpha}: {v_scaled} vs {}",
                alpha * alpha * v_base
            );
        }
    }
}

/// Efficiency stays in [0, 1] for all built-ins over random scales, with the
/// Gaussian pinned at 1 and the Uniform at 0.
#[test]
fn efficiency_bounds_over_random_scales() {
    let theta_r = std::f64::consts::PI;
    let mut stream = derive_substream(110, 0);
    for family in FAMILIES {
        for _ in 0..20 {
            let m = NoiseModel::new(family, random_scale(&mut stream)).unwrap();
            let report = relative_efficiency(&m, theta_r).unwrap();
            assert!(
                (0.0..=1.0).contains(&report.efficiency),
                "{}: E = {}",
                m.spec_string(),
                report.efficiency
            );
            match family {
                NoiseFamily::Gaussian => {
                    assert!((report.efficiency - 1.0).abs() < 1e-12);
                    assert_eq!(report.omega_star, OmegaStar::LimitZero);
                }
                NoiseFamily::Uniform => assert_eq!(report.efficiency, 0.0),
                _ => assert!(report.efficiency < 1.0),
            }
        }
    }
}

/// Numeric inf_asv reproduces the closed-form infima used by
/// relative_efficiency for the three closed-form families.
#[test]
fn numeric_infimum_cross_checks_closed_form() {
    let theta_r = std::f64::consts::PI;
    for family in FINITE_FISHER {
        let m = NoiseModel::new(family, 1.0).unwrap();
        let (_, numeric) = inf_asv(&m, theta_r).unwrap();
        let report = relative_efficiency(&m, theta_r).unwrap();
        assert!(
            ((numeric - report.inf_asv) / report.inf_asv).abs() < 1e-6,
            "{}: numeric {numeric} vs closed {}",
            m.spec_string(),
            report.inf_asv
        );
    }
}
