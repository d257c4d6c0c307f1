//! Flag parsing for the four subcommands.
//!
//! Grammar: `phasemod <verb> --flag value ...` with an optional
//! `--config <path>` whose file holds one `flag=value` per line (`#` starts
//! a comment); command-line flags override the file. Unknown flags are
//! rejected. Model specs use the flat `family:key=value` grammar, e.g.
//! `gaussian:sigma=1.0`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use phasemod_core::simulator::{EstimatorKind, SimConfig};
use phasemod_core::NoiseModel;

use crate::CliError;

pub const USAGE: &str = "\
usage: phasemod <command> [--flag value ...] [--out <path>] [--config <path>]

commands:
  sweep       --dist <spec> --omega-min <r> --omega-max <r> --points <n> [--theta-r <r>]
  efficiency  --dist <spec> --theta-r <r>
  simulate    --dist <spec> --l <n> --trials <n> --omega <r> --theta <r> --theta-r <r>
              --rho <r> --sigma-nu2 <r> --seed <u64> --estimator angle|gls
  verify      --dist <spec> --omega-min <r> --omega-max <r> --points <n>

model spec: gaussian:sigma=<r> | laplace:b=<r> | cauchy:gamma=<r> | uniform:a=<r>
output:     CSV (sweep, verify) or JSON (efficiency, simulate) to stdout,
            or to a file with --out <path>
exit codes: 0 ok, 2 usage/config error, 3 numeric failure, 4 verification failure";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// A fully validated invocation of one subcommand.
#[derive(Debug, Clone)]
pub enum Invocation {
    Sweep {
        model: NoiseModel,
        omega_min: f64,
        omega_max: f64,
        points: usize,
        theta_r: Option<f64>,
    },
    Efficiency {
        model: NoiseModel,
        theta_r: f64,
    },
    Simulate {
        config: SimConfig,
    },
    Verify {
        model: NoiseModel,
        omega_min: f64,
        omega_max: f64,
        points: usize,
    },
}

impl Invocation {
    pub fn format(&self) -> OutputFormat {
        match self {
            Invocation::Sweep { .. } | Invocation::Verify { .. } => OutputFormat::Csv,
            Invocation::Efficiency { .. } | Invocation::Simulate { .. } => OutputFormat::Json,
        }
    }
}

#[derive(Debug)]
pub struct Command {
    pub invocation: Invocation,
    /// `None` writes to standard output.
    pub out: Option<PathBuf>,
}

/// Parse `argv[1..]`.
pub fn parse(args: &[String]) -> Result<Command, CliError> {
    let Some(verb) = args.first() else {
        return Err(CliError::usage(USAGE));
    };

    let mut flags: BTreeMap<String, String> = BTreeMap::new();
    let mut config_path: Option<PathBuf> = None;
    let mut out: Option<PathBuf> = None;
    let mut it = args[1..].iter();
    while let Some(arg) = it.next() {
        let Some(name) = arg.strip_prefix("--") else {
            return Err(CliError::usage(format!("expected --flag, got `{arg}`")));
        };
        let Some(value) = it.next() else {
            return Err(CliError::usage(format!("flag --{name} is missing a value")));
        };
        match name {
            "config" => config_path = Some(PathBuf::from(value)),
            "out" => out = Some(PathBuf::from(value)),
            _ => {
                flags.insert(name.to_string(), value.clone());
            }
        }
    }

    // The config file supplies defaults; explicit flags win.
    if let Some(path) = &config_path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "{}:{}: expected flag=value",
                    path.display(),
                    lineno + 1
                )));
            };
            let (key, value) = (key.trim(), value.trim());
            if key == "out" {
                out.get_or_insert_with(|| PathBuf::from(value));
            } else {
                flags.entry(key.to_string()).or_insert_with(|| value.to_string());
            }
        }
    }

    let invocation = build_invocation(verb, flags)?;
    Ok(Command { invocation, out })
}

struct FlagSet {
    flags: BTreeMap<String, String>,
}

impl FlagSet {
    fn take(&mut self, name: &str) -> Result<String, CliError> {
        self.flags
            .remove(name)
            .ok_or_else(|| CliError::usage(format!("missing required flag --{name}")))
    }

    fn take_optional(&mut self, name: &str) -> Option<String> {
        self.flags.remove(name)
    }

    fn take_f64(&mut self, name: &str) -> Result<f64, CliError> {
        parse_f64(name, &self.take(name)?)
    }

    fn take_u64(&mut self, name: &str) -> Result<u64, CliError> {
        let raw = self.take(name)?;
        raw.parse()
            .map_err(|_| CliError::usage(format!("--{name}: `{raw}` is not an unsigned integer")))
    }

    fn finish(self) -> Result<(), CliError> {
        if let Some(name) = self.flags.keys().next() {
            return Err(CliError::usage(format!("unknown flag --{name}")));
        }
        Ok(())
    }
}

fn parse_f64(name: &str, raw: &str) -> Result<f64, CliError> {
    let v: f64 = raw
        .parse()
        .map_err(|_| CliError::usage(format!("--{name}: `{raw}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::usage(format!("--{name} must be finite, got {raw}")));
    }
    Ok(v)
}

fn parse_model(spec: &str) -> Result<NoiseModel, CliError> {
    NoiseModel::parse_spec(spec).map_err(|e| CliError::usage(e.to_string()))
}

fn grid_flags(fs: &mut FlagSet) -> Result<(f64, f64, usize), CliError> {
    let omega_min = fs.take_f64("omega-min")?;
    let omega_max = fs.take_f64("omega-max")?;
    let points = fs.take_u64("points")? as usize;
    if omega_min <= 0.0 {
        return Err(CliError::usage(format!(
            "--omega-min must be positive, got {omega_min}"
        )));
    }
    if omega_max <= omega_min {
        return Err(CliError::usage(format!(
            "--omega-max must exceed --omega-min, got [{omega_min}, {omega_max}]"
        )));
    }
    if points < 2 {
        return Err(CliError::usage(format!("--points must be at least 2, got {points}")));
    }
    if points > 10_000_000 {
        return Err(CliError::usage(format!(
            "--points is capped at 10000000, got {points}"
        )));
    }
    Ok((omega_min, omega_max, points))
}

fn build_invocation(verb: &str, flags: BTreeMap<String, String>) -> Result<Invocation, CliError> {
    let mut fs = FlagSet { flags };
    let inv = match verb {
        "sweep" => {
            let model = parse_model(&fs.take("dist")?)?;
            let (omega_min, omega_max, points) = grid_flags(&mut fs)?;
            let theta_r = match fs.take_optional("theta-r") {
                Some(raw) => Some(parse_f64("theta-r", &raw)?),
                None => None,
            };
            if let Some(tr) = theta_r {
                if tr <= 0.0 {
                    return Err(CliError::usage(format!("--theta-r must be positive, got {tr}")));
                }
                let bound = 2.0 * std::f64::consts::PI / tr;
                if omega_max > bound * (1.0 + 1e-12) {
                    return Err(CliError::usage(format!(
                        "--omega-max {omega_max} exceeds 2*pi/theta_r = {bound}"
                    )));
                }
            }
            Invocation::Sweep { model, omega_min, omega_max, points, theta_r }
        }
        "efficiency" => {
            let model = parse_model(&fs.take("dist")?)?;
            let theta_r = fs.take_f64("theta-r")?;
            if theta_r <= 0.0 {
                return Err(CliError::usage(format!(
                    "--theta-r must be positive, got {theta_r}"
                )));
            }
            Invocation::Efficiency { model, theta_r }
        }
        "simulate" => {
            let model = parse_model(&fs.take("dist")?)?;
            let estimator = match fs.take("estimator")?.as_str() {
                "angle" => EstimatorKind::Angle,
                "gls" => EstimatorKind::Gls,
                other => {
                    return Err(CliError::usage(format!(
                        "--estimator must be angle or gls, got `{other}`"
                    )))
                }
            };
            let config = SimConfig {
                model,
                sensors: fs.take_u64("l")?,
                trials: fs.take_u64("trials")?,
                omega: fs.take_f64("omega")?,
                theta: fs.take_f64("theta")?,
                theta_r: fs.take_f64("theta-r")?,
                rho: fs.take_f64("rho")?,
                sigma_nu2: fs.take_f64("sigma-nu2")?,
                seed: fs.take_u64("seed")?,
                estimator,
            };
            config.validate().map_err(|e| CliError::usage(e.to_string()))?;
            if config.trials < 2 {
                return Err(CliError::usage(format!(
                    "--trials must be at least 2, got {}",
                    config.trials
                )));
            }
            if config.trials > 100_000_000 {
                return Err(CliError::usage(format!(
                    "--trials is capped at 100000000, got {}",
                    config.trials
                )));
            }
            Invocation::Simulate { config }
        }
        "verify" => {
            let model = parse_model(&fs.take("dist")?)?;
            if !model.fisher().is_finite() {
                return Err(CliError::usage(format!(
                    "verify needs finite Fisher information; {} has none",
                    model.spec_string()
                )));
            }
            let (omega_min, omega_max, points) = grid_flags(&mut fs)?;
            Invocation::Verify { model, omega_min, omega_max, points }
        }
        other => {
            return Err(CliError::usage(format!("unknown command `{other}`\n\n{USAGE}")));
        }
    };
    fs.finish()?;
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(args: &[&str]) -> Vec<String> {
        args.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_sweep() {
        let cmd = parse(&sv(&[
            "sweep", "--dist", "gaussian:sigma=1", "--omega-min", "0.5", "--omega-max", "1",
            "--points", "2",
        ]))
        .unwrap();
        match cmd.invocation {
            Invocation::Sweep { omega_min, omega_max, points, .. } => {
                assert_eq!((omega_min, omega_max, points), (0.5, 1.0, 2));
            }
            other => panic!("wrong invocation {other:?}"),
        }
        assert!(cmd.out.is_none());
    }

    #[test]
    fn rejects_unknown_flags() {
        let err = parse(&sv(&[
            "efficiency", "--dist", "gaussian:sigma=1", "--theta-r", "1", "--bogus", "1",
        ]))
        .unwrap_err();
        assert_eq!(err.exit_code, 2);
        assert!(err.message.contains("--bogus"));
    }

    #[test]
    fn rejects_band_violation() {
        let err = parse(&sv(&[
            "simulate", "--dist", "gaussian:sigma=1", "--l", "10", "--trials", "10", "--omega",
            "10", "--theta", "0.5", "--theta-r", "1", "--rho", "1", "--sigma-nu2", "1", "--seed",
            "1", "--estimator", "angle",
        ]))
        .unwrap_err();
        assert_eq!(err.exit_code, 2);
    }

    #[test]
    fn rejects_uniform_verify() {
        let err = parse(&sv(&[
            "verify", "--dist", "uniform:a=1", "--omega-min", "0.1", "--omega-max", "1",
            "--points", "3",
        ]))
        .unwrap_err();
        assert_eq!(err.exit_code, 2);
    }
}
