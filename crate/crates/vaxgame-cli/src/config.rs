//! Run configuration: baseline defaults, flat key=value config files, and
//! command-line overrides (flags win over the file, the file over defaults).

use std::path::{Path, PathBuf};

use vaxgame_core::{ModelParams, PolicyKind};

use crate::CliError;

pub const MODEL_KEYS: [&str; 10] = [
    "alpha", "beta", "theta1", "theta2", "theta3", "gamma1", "gamma2", "eta", "delta", "r",
];

const RUN_KEYS: [&str; 10] = [
    "policy",
    "t_end",
    "points",
    "psi",
    "horizon",
    "steps",
    "relaxation",
    "max_iters",
    "tol",
    "out_dir",
];

/// Fully resolved run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub policy: Option<PolicyKind>,
    pub t_end: f64,
    pub points: usize,
    /// Reimbursed price fraction for customer-p simulations.
    pub psi: f64,
    pub horizon: f64,
    pub steps: usize,
    pub relaxation: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub out_dir: PathBuf,
    /// Model symbols that were left at their baseline defaults.
    pub defaulted: Vec<&'static str>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: ModelParams::baseline(),
            policy: None,
            t_end: 100.0,
            points: 1000,
            psi: 0.0,
            horizon: 200.0,
            steps: 20_000,
            relaxation: 0.5,
            max_iters: 400,
            tol: 1e-10,
            out_dir: PathBuf::from("out"),
            defaulted: Vec::new(),
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("config key `{key}`: `{value}` is not a number")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, CliError> {
    value
        .parse::<usize>()
        .map_err(|_| CliError::Usage(format!("config key `{key}`: `{value}` is not a count")))
}

pub fn parse_policy(value: &str) -> Result<PolicyKind, CliError> {
    PolicyKind::from_label(value).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown policy `{value}` (expected none, manu-q, manu-d or customer-p)"
        ))
    })
}

impl RunConfig {
    fn set_model_key(&mut self, key: &str, value: f64) {
        match key {
            "alpha" => self.params.alpha = value,
            "beta" => self.params.beta = value,
            "theta1" => self.params.theta1 = value,
            "theta2" => self.params.theta2 = value,
            "theta3" => self.params.theta3 = value,
            "gamma1" => self.params.gamma1 = value,
            "gamma2" => self.params.gamma2 = value,
            "eta" => self.params.eta = value,
            "delta" => self.params.delta = value,
            "r" => self.params.r = value,
            _ => unreachable!("checked against MODEL_KEYS"),
        }
    }

    /// Applies one `key = value` assignment, rejecting unknown keys.
    fn apply(&mut self, key: &str, value: &str, set_model: &mut Vec<&'static str>) -> Result<(), CliError> {
        if let Some(&canonical) = MODEL_KEYS.iter().find(|&&k| k == key) {
            self.set_model_key(key, parse_f64(key, value)?);
            if !set_model.contains(&canonical) {
                set_model.push(canonical);
            }
            return Ok(());
        }
        match key {
            "policy" => self.policy = Some(parse_policy(value)?),
            "t_end" => self.t_end = parse_f64(key, value)?,
            "points" => self.points = parse_usize(key, value)?,
            "psi" => self.psi = parse_f64(key, value)?,
            "horizon" => self.horizon = parse_f64(key, value)?,
            "steps" => self.steps = parse_usize(key, value)?,
            "relaxation" => self.relaxation = parse_f64(key, value)?,
            "max_iters" => self.max_iters = parse_usize(key, value)?,
            "tol" => self.tol = parse_f64(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            _ => {
                return Err(CliError::Usage(format!(
                    "unknown config key `{key}` (model keys: {}; run keys: {})",
                    MODEL_KEYS.join(", "),
                    RUN_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Loads defaults, then the optional config file, then the model-symbol
    /// flag overrides. Returns the resolved config with the list of model
    /// symbols that fell back to the baseline.
    pub fn resolve(
        config_path: Option<&Path>,
        flag_overrides: &[(&'static str, Option<f64>)],
    ) -> Result<RunConfig, CliError> {
        let mut config = RunConfig::default();
        let mut set_model: Vec<&'static str> = Vec::new();

        if let Some(path) = config_path {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            for (line_no, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(CliError::Usage(format!(
                        "config line {} is not `key = value`: `{raw}`",
                        line_no + 1
                    )));
                };
                config.apply(key.trim(), value.trim(), &mut set_model)?;
            }
        }

        for &(key, value) in flag_overrides {
            if let Some(value) = value {
                config.set_model_key(key, value);
                if !set_model.contains(&key) {
                    set_model.push(key);
                }
            }
        }

        config.defaulted = MODEL_KEYS
            .iter()
            .copied()
            .filter(|k| !set_model.contains(k))
            .collect();
        Ok(config)
    }

    /// `key=value` listing of the ten model parameters, for CSV headers.
    pub fn model_summary(&self) -> String {
        let p = &self.params;
        let pairs = [
            ("alpha", p.alpha),
            ("beta", p.beta),
            ("theta1", p.theta1),
            ("theta2", p.theta2),
            ("theta3", p.theta3),
            ("gamma1", p.gamma1),
            ("gamma2", p.gamma2),
            ("eta", p.eta),
            ("delta", p.delta),
            ("r", p.r),
        ];
        pairs
            .iter()
            .map(|(k, v)| format!("{k}={}", crate::output::format_value(*v)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
