//! Batch analysis CLI for the vaccine supply chain subsidy game.
//!
//! Exit codes: 0 success, 1 usage error, 2 infeasible parameters, 3 oracle
//! non-convergence.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_policy, RunConfig};
use vaxgame_core::analysis::ParamName;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Engine(vaxgame_core::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use vaxgame_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Engine(e) => match e {
                E::InvalidParameter { .. }
                | E::Unstable { .. }
                | E::NotInterior { .. }
                | E::BoundaryRegime { .. }
                | E::NegativeCostate { .. }
                | E::NegativeInitialCostate { .. }
                | E::NonRealEigenvalues { .. } => 2,
                E::NonConvergence { .. } => 3,
                _ => 1,
            },
        }
    }
}

/// Model parameter overrides, each named by its conventional symbol.
#[derive(Debug, Args)]
struct ParamFlags {
    /// Market capacity.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Price sensitivity of customers.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Technology-effort effect on quality.
    #[arg(long, global = true)]
    theta1: Option<f64>,
    /// Blockchain-effort effect on goodwill.
    #[arg(long, global = true)]
    theta2: Option<f64>,
    /// Advertising-effort effect on goodwill.
    #[arg(long, global = true)]
    theta3: Option<f64>,
    /// Quality effect on sales volume.
    #[arg(long, global = true)]
    gamma1: Option<f64>,
    /// Goodwill effect on sales volume.
    #[arg(long, global = true)]
    gamma2: Option<f64>,
    /// Government marginal sales revenue.
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Common decay rate of quality and goodwill.
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Continuous discount rate.
    #[arg(long, global = true)]
    r: Option<f64>,
}

#[derive(Debug, Parser)]
#[command(
    name = "vaxgame",
    about = "Equilibria, steady states and policy analysis for a three-tier \
             vaccine supply chain differential game",
    version
)]
struct Cli {
    /// Flat key=value config file (model symbols plus run settings).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV files.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(flatten)]
    params: ParamFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check stability and interior-subsidy conditions.
    Validate {
        /// Policy to check (none, manu-q, manu-d, customer-p).
        #[arg(long)]
        policy: Option<String>,
    },
    /// Long-run steady state per policy.
    Steady {
        #[arg(long)]
        policy: Option<String>,
    },
    /// Sample the equilibrium trajectory on a uniform grid.
    Simulate {
        #[arg(long)]
        policy: String,
        /// End of the time grid.
        #[arg(long)]
        t_end: Option<f64>,
        /// Number of grid points (endpoints included).
        #[arg(long)]
        points: Option<usize>,
        /// Reimbursed price fraction (customer-p only).
        #[arg(long)]
        psi: Option<f64>,
    },
    /// Sign table and numbers comparing the two manufacturer policies.
    Compare {
        /// Early evaluation time (defaults to the operational small time).
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Steady-state parameter sweep with monotonicity verdicts.
    Sweep {
        /// Parameter symbol to sweep (alpha, beta, ..., r).
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Number of sweep points.
        #[arg(long, default_value_t = 25)]
        points: usize,
        /// Comma-separated policies (defaults to none,manu-q,manu-d).
        #[arg(long)]
        policies: Option<String>,
    },
    /// Compare the closed forms against the boundary-value oracle.
    Verify {
        #[arg(long)]
        policy: Option<String>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        relaxation: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate the proposition ledger.
    Props,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let p = &cli.params;
    let overrides: [(&'static str, Option<f64>); 10] = [
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
    let mut config = RunConfig::resolve(cli.config.as_deref(), &overrides)?;
    if let Some(dir) = cli.out_dir {
        config.out_dir = dir;
    }
    if !config.defaulted.is_empty() {
        eprintln!(
            "notice: using baseline defaults for: {}",
            config.defaulted.join(", ")
        );
    }

    match cli.command {
        Command::Validate { policy } => {
            if let Some(policy) = policy {
                config.policy = Some(parse_policy(&policy)?);
            }
            commands::run_validate(&config)
        }
        Command::Steady { policy } => {
            if let Some(policy) = policy {
                config.policy = Some(parse_policy(&policy)?);
            }
            commands::run_steady(&config)
        }
        Command::Simulate {
            policy,
            t_end,
            points,
            psi,
        } => {
            let policy = parse_policy(&policy)?;
            if let Some(t_end) = t_end {
                config.t_end = t_end;
            }
            if let Some(points) = points {
                config.points = points;
            }
            if let Some(psi) = psi {
                config.psi = psi;
            }
            commands::run_simulate(&config, policy)
        }
        Command::Compare { tau, t_end, points } => {
            if let Some(t_end) = t_end {
                config.t_end = t_end;
            }
            if let Some(points) = points {
                config.points = points;
            }
            commands::run_compare(&config, tau)
        }
        Command::Sweep {
            param,
            from,
            to,
            points,
            policies,
        } => {
            let param = ParamName::from_str(&param).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown sweep parameter `{param}` (one of alpha, beta, theta1, theta2, \
                     theta3, gamma1, gamma2, eta, delta, r)"
                ))
            })?;
            let parsed = policies
                .map(|list| {
                    list.split(',')
                        .map(|s| parse_policy(s.trim()))
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?;
            commands::run_sweep(&config, param, from, to, points, parsed)
        }
        Command::Verify {
            policy,
            horizon,
            steps,
            relaxation,
            max_iters,
            tol,
        } => {
            if let Some(policy) = policy {
                config.policy = Some(parse_policy(&policy)?);
            }
            if let Some(horizon) = horizon {
                config.horizon = horizon;
            }
            if let Some(steps) = steps {
                config.steps = steps;
            }
            if let Some(relaxation) = relaxation {
                config.relaxation = relaxation;
            }
            if let Some(max_iters) = max_iters {
                config.max_iters = max_iters;
            }
            if let Some(tol) = tol {
                config.tol = tol;
            }
            commands::run_verify(&config)
        }
        Command::Props => commands::run_props(&config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap renders help to stdout and errors to stderr by itself
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
