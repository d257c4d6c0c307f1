//! The four subcommands: sweep and verify emit CSV, efficiency and simulate
//! emit JSON. Every document starts with (or contains) the fully resolved
//! configuration.

use phasemod_core::analysis::{stein_residual_g1, stein_residual_g2, inequality_residuals};
use phasemod_core::efficiency::{asv_sweep, relative_efficiency, EfficiencyMethod, OmegaStar};
use phasemod_core::simulator::{CampaignSummary, SimConfig};
use phasemod_core::{NoiseModel, QuadratureSpec};

use crate::args::Invocation;
use crate::fmt::{fmt17, Json};
use crate::parallel::{default_threads, run_campaign_parallel};
use crate::CliError;

/// Stein residuals below this are a pass for the built-in test functions.
pub const STEIN_PASS: f64 = 1e-6;

pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

pub fn execute(invocation: &Invocation) -> Result<Outcome, CliError> {
    match invocation {
        Invocation::Sweep { model, omega_min, omega_max, points, theta_r } => {
            run_sweep(model, *omega_min, *omega_max, *points, *theta_r)
        }
        Invocation::Efficiency { model, theta_r } => run_efficiency(model, *theta_r),
        Invocation::Simulate { config } => run_simulate(config),
        Invocation::Verify { model, omega_min, omega_max, points } => {
            run_verify(model, *omega_min, *omega_max, *points)
        }
    }
}

fn omega_grid(omega_min: f64, omega_max: f64, points: usize) -> Result<Vec<f64>, CliError> {
    let step = (omega_max - omega_min) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            if i == points - 1 {
                omega_max
            } else {
                omega_min + i as f64 * step
            }
        })
        .collect();
    if grid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(CliError::usage(format!(
            "grid spacing below floating-point resolution: {points} points over [{omega_min}, {omega_max}]"
        )));
    }
    Ok(grid)
}

fn run_sweep(
    model: &NoiseModel,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    theta_r: Option<f64>,
) -> Result<Outcome, CliError> {
    let grid = omega_grid(omega_min, omega_max, points)?;
    let rows = asv_sweep(model, &grid);

    let mut out = String::new();
    out.push_str(&format!(
        "# dist={} omega-min={} omega-max={} points={points}",
        model.spec_string(),
        fmt17(omega_min),
        fmt17(omega_max),
    ));
    if let Some(tr) = theta_r {
        out.push_str(&format!(" theta-r={}", fmt17(tr)));
    }
    out.push('\n');
    out.push_str("omega,asv,asv_db,inv_fisher,inv_fisher_db\n");
    for p in &rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt17(p.omega),
            fmt17(p.asv),
            fmt17(p.asv_db),
            fmt17(p.inv_fisher),
            fmt17(p.inv_fisher_db),
        ));
    }
    Ok(Outcome { output: out, exit_code: 0 })
}

fn model_params(model: &NoiseModel) -> Json {
    Json::Object(vec![(
        model.family().scale_key(),
        Json::Number(model.scale()),
    )])
}

fn run_efficiency(model: &NoiseModel, theta_r: f64) -> Result<Outcome, CliError> {
    let report = relative_efficiency(model, theta_r).map_err(CliError::from_core)?;
    let omega_star = match report.omega_star {
        OmegaStar::LimitZero => Json::Str("limit0".to_string()),
        OmegaStar::At(w) => Json::Number(w),
    };
    let method = match report.method {
        EfficiencyMethod::ClosedForm => "closed_form",
        EfficiencyMethod::Numeric => "numeric",
    };
    let doc = Json::Object(vec![
        ("dist", Json::Str(model.family().name().to_string())),
        ("params", model_params(model)),
        ("theta_r", Json::Number(theta_r)),
        ("fisher_information", Json::Number(report.fisher)),
        ("inf_asv", Json::Number(report.inf_asv)),
        ("omega_star", omega_star),
        ("relative_efficiency", Json::Number(report.efficiency)),
        ("method", Json::Str(method.to_string())),
    ]);
    Ok(Outcome { output: format!("{doc}\n"), exit_code: 0 })
}

fn config_json(config: &SimConfig) -> Json {
    Json::Object(vec![
        ("dist", Json::Str(config.model.family().name().to_string())),
        ("params", model_params(&config.model)),
        ("l", Json::Integer(config.sensors)),
        ("rho", Json::Number(config.rho)),
        ("sigma_nu2", Json::Number(config.sigma_nu2)),
        ("omega", Json::Number(config.omega)),
        ("theta", Json::Number(config.theta)),
        ("theta_r", Json::Number(config.theta_r)),
        ("trials", Json::Integer(config.trials)),
        ("seed", Json::Integer(config.seed)),
        ("estimator", Json::Str(config.estimator.name().to_string())),
    ])
}

fn run_simulate(config: &SimConfig) -> Result<Outcome, CliError> {
    let summary: CampaignSummary =
        run_campaign_parallel(config, default_threads()).map_err(CliError::from_core)?;
    let doc = Json::Object(vec![
        ("config", config_json(config)),
        ("mean_theta_hat", Json::Number(summary.mean_theta_hat)),
        ("bias", Json::Number(summary.bias)),
        ("variance", Json::Number(summary.variance)),
        ("l_times_variance", Json::Number(summary.l_times_variance)),
        ("predicted_asv", Json::Number(summary.predicted_asv)),
        ("trials_used", Json::Integer(summary.trials_used)),
    ]);
    Ok(Outcome { output: format!("{doc}\n"), exit_code: 0 })
}

fn run_verify(
    model: &NoiseModel,
    omega_min: f64,
    omega_max: f64,
    points: usize,
) -> Result<Outcome, CliError> {
    let spec = QuadratureSpec::new(1e-9, 1e-9);
    let grid = omega_grid(omega_min, omega_max, points)?;

    let mut out = String::new();
    out.push_str(&format!(
        "# dist={} omega-min={} omega-max={} points={points}\n",
        model.spec_string(),
        fmt17(omega_min),
        fmt17(omega_max),
    ));
    out.push_str("omega,r_imag,r_real,stein_g1,stein_g2\n");

    let mut all_ok = true;
    for &omega in &grid {
        let residuals = inequality_residuals(model, omega).map_err(CliError::from_core)?;
        let g1 = stein_residual_g1(model, omega, &spec).map_err(CliError::from_core)?;
        let g2 = stein_residual_g2(model, omega, &spec).map_err(CliError::from_core)?;
        all_ok &= residuals.r_imag > 0.0
            && residuals.r_real > 0.0
            && g1 < STEIN_PASS
            && g2 < STEIN_PASS;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt17(omega),
            fmt17(residuals.r_imag),
            fmt17(residuals.r_real),
            fmt17(g1),
            fmt17(g2),
        ));
    }

    Ok(Outcome {
        output: out,
        exit_code: if all_ok { 0 } else { 4 },
    })
}
