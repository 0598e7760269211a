//! Subcommand implementations: each one resolves inputs through the engine
//! and emits CSV files into the output directory. Diagnostics go to stderr,
//! never into the CSV streams.

use vaxgame_core::analysis::{
    compare_policies, default_tau, proposition_suite, sweep, ParamName, Quantity, Sign,
};
use vaxgame_core::{
    oracle_check, steady_state, trajectory, uniform_grid, customer_p_response, validate,
    OracleConfig, PolicyKind, Snapshot, SteadyState, TimeSeries,
};

use crate::config::RunConfig;
use crate::output::{format_bool, format_value, write_csv};
use crate::CliError;

/// Snapshot columns shared by the trajectory and steady-state schemas.
const SNAPSHOT_COLUMNS: [&str; 15] = [
    "Q", "G", "A", "lambda", "mu", "q", "b", "a", "omega", "p", "subsidy", "D", "pi_G", "pi_M",
    "pi_R",
];

fn snapshot_fields(s: &Snapshot) -> Vec<String> {
    [
        s.quality,
        s.goodwill,
        s.aggregate,
        s.lambda,
        s.mu,
        s.tech_effort,
        s.blockchain_effort,
        s.ad_effort,
        s.wholesale_price,
        s.retail_price,
        s.subsidy.value(),
        s.demand,
        s.government_profit,
        s.manufacturer_profit,
        s.retailer_profit,
    ]
    .iter()
    .map(|v| format_value(*v))
    .collect()
}

fn policies_from(config: &RunConfig) -> Vec<PolicyKind> {
    match config.policy {
        Some(p) => vec![p],
        None => PolicyKind::DYNAMIC.to_vec(),
    }
}

/// `validate`: print the feasibility report; infeasible parameters are an
/// error (exit code 2).
pub fn run_validate(config: &RunConfig) -> Result<(), CliError> {
    let policies = match config.policy {
        Some(p) => vec![p],
        None => vec![PolicyKind::ManufacturerQ, PolicyKind::ManufacturerD],
    };
    let mut stability_printed = false;
    let mut failure: Option<vaxgame_core::Error> = None;
    for policy in &policies {
        let report = validate(&config.params, *policy).map_err(CliError::Engine)?;
        if !stability_printed {
            println!("Delta = {}", format_value(report.delta_aggregate));
            println!(
                "stability: 8*beta*delta*(r+delta) = {} {} Delta = {} -> {}",
                format_value(report.stability_lhs),
                if report.stability_ok { ">" } else { "<=" },
                format_value(report.delta_aggregate),
                if report.stability_ok { "ok" } else { "VIOLATED" }
            );
            stability_printed = true;
        }
        for (label, check) in [("manu-q", report.interior_t), ("manu-d", report.interior_s)] {
            if let Some(check) = check {
                if report.stability_ok {
                    println!(
                        "interior ({label}): eta = {} vs threshold {} -> {}",
                        format_value(config.params.eta),
                        format_value(check.threshold),
                        if check.ok { "ok" } else { "VIOLATED" }
                    );
                } else {
                    println!("interior ({label}): not evaluable while stability is violated");
                }
            }
        }
        if failure.is_none() {
            if let Err(e) = vaxgame_core::require_feasible(&config.params, *policy) {
                // for the default all-policies report only stability is fatal
                let fatal = config.policy.is_some()
                    || matches!(e, vaxgame_core::Error::Unstable { .. });
                if fatal {
                    failure = Some(e);
                }
            }
        }
    }
    match failure {
        Some(e) => Err(CliError::Engine(e)),
        None => {
            println!("parameters feasible");
            Ok(())
        }
    }
}

/// `steady`: one CSV per policy with the long-run limits.
pub fn run_steady(config: &RunConfig) -> Result<(), CliError> {
    let policies = match config.policy {
        Some(p) => vec![p],
        None => PolicyKind::DYNAMIC.to_vec(),
    };
    for policy in policies {
        let steady: SteadyState = steady_state(policy, &config.params).map_err(CliError::Engine)?;
        let mut columns = vec!["policy"];
        columns.extend(SNAPSHOT_COLUMNS);
        let mut row = vec![policy.label().to_string()];
        row.extend(snapshot_fields(&steady.snapshot));
        let summary = format!(
            "command=steady policy={} {}",
            policy.label(),
            config.model_summary()
        );
        let path = write_csv(
            &config.out_dir,
            &format!("steady_{}.csv", policy.label()),
            &summary,
            &columns,
            &[row],
        )?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn simulate_series(config: &RunConfig, policy: PolicyKind) -> Result<TimeSeries, CliError> {
    let grid = uniform_grid(config.t_end, config.points).map_err(CliError::Engine)?;
    let series = if policy == PolicyKind::CustomerP {
        let base =
            trajectory(PolicyKind::NoSubsidy, &config.params, &grid).map_err(CliError::Engine)?;
        let psi = vec![config.psi; grid.len()];
        customer_p_response(&config.params, &psi, &base).map_err(CliError::Engine)?
    } else {
        trajectory(policy, &config.params, &grid).map_err(CliError::Engine)?
    };
    Ok(series)
}

/// `simulate`: trajectory CSV, one row per grid point.
pub fn run_simulate(config: &RunConfig, policy: PolicyKind) -> Result<(), CliError> {
    let series = simulate_series(config, policy)?;
    let mut columns = vec!["t"];
    columns.extend(SNAPSHOT_COLUMNS);
    let rows: Vec<Vec<String>> = series
        .snapshots
        .iter()
        .map(|s| {
            let mut row = vec![format_value(s.t)];
            row.extend(snapshot_fields(s));
            row
        })
        .collect();
    let summary = format!(
        "command=simulate policy={} t_end={} points={} psi={} {}",
        policy.label(),
        format_value(config.t_end),
        config.points,
        format_value(config.psi),
        config.model_summary()
    );
    let path = write_csv(
        &config.out_dir,
        &format!("simulate_{}.csv", policy.label()),
        &summary,
        &columns,
        &rows,
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

/// `compare`: the two-policy sign table plus the underlying numbers.
pub fn run_compare(config: &RunConfig, tau: Option<f64>) -> Result<(), CliError> {
    let tau = match tau {
        Some(t) => t,
        None => default_tau(&config.params).map_err(CliError::Engine)?,
    };
    let grid = uniform_grid(config.t_end, config.points).map_err(CliError::Engine)?;
    let table = compare_policies(&config.params, tau, &grid).map_err(CliError::Engine)?;
    let pattern = table.table5().map_err(CliError::Engine)?;
    let summary = format!(
        "command=compare tau={} t_end={} points={} {}",
        format_value(tau),
        format_value(config.t_end),
        config.points,
        config.model_summary()
    );

    let sign_columns = ["policy", "q_b_a", "A", "omega_p", "D_tau", "D_inf", "pi_G_tau", "pi_G_inf"];
    let t_row = vec![
        "manu-q".to_string(),
        pattern.efforts.to_string(),
        pattern.aggregate.to_string(),
        pattern.prices.to_string(),
        pattern.demand_early.to_string(),
        pattern.demand_late.to_string(),
        pattern.gov_profit_early.to_string(),
        pattern.gov_profit_late.to_string(),
    ];
    let s_row: Vec<String> = t_row
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i == 0 {
                "manu-d".to_string()
            } else {
                let sign = if v == "+" { Sign::Plus } else { Sign::Minus };
                sign.mirrored().to_string()
            }
        })
        .collect();
    let path = write_csv(
        &config.out_dir,
        "compare_signs.csv",
        &summary,
        &sign_columns,
        &[t_row, s_row],
    )?;
    println!("wrote {}", path.display());

    let value_columns = [
        "quantity",
        "none_tau",
        "manu_q_tau",
        "manu_d_tau",
        "none_inf",
        "manu_q_inf",
        "manu_d_inf",
    ];
    let quantities = [
        Quantity::TechEffort,
        Quantity::BlockchainEffort,
        Quantity::AdEffort,
        Quantity::Aggregate,
        Quantity::Wholesale,
        Quantity::Retail,
        Quantity::Demand,
        Quantity::GovProfit,
    ];
    // snapshots at tau come from the stored series' closed forms re-evaluated
    let at_tau: Vec<Snapshot> = PolicyKind::DYNAMIC
        .iter()
        .map(|&p| {
            vaxgame_core::ClosedFormPath::new(p, &config.params)
                .and_then(|path| path.snapshot(tau))
                .map_err(CliError::Engine)
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<Vec<String>> = quantities
        .iter()
        .map(|q| {
            let mut row = vec![q.label().to_string()];
            for snap in &at_tau {
                row.push(format_value(q.of(snap)));
            }
            for steady in &table.steady {
                row.push(format_value(q.of(&steady.snapshot)));
            }
            row
        })
        .collect();
    let path = write_csv(
        &config.out_dir,
        "compare_values.csv",
        &summary,
        &value_columns,
        &rows,
    )?;
    println!("wrote {}", path.display());

    let o = table.orderings;
    println!(
        "orderings at tau={}: p S<*<T {}; omega S<*<T {}; D S>T>* {}",
        format_value(tau),
        o.retail_early,
        o.wholesale_early,
        o.demand_early
    );
    println!(
        "orderings at infinity: p S<*<=T {}; omega S<*<=T {}; D T>=* {}; D S>* {}",
        o.retail_late, o.wholesale_late, o.demand_late_t, o.demand_late_s
    );
    Ok(())
}

/// `sweep`: steady states and initial values per grid point and policy, plus
/// monotone-direction verdicts.
pub fn run_sweep(
    config: &RunConfig,
    param: ParamName,
    from: f64,
    to: f64,
    points: usize,
    policies: Option<Vec<PolicyKind>>,
) -> Result<(), CliError> {
    if !(from.is_finite() && to.is_finite() && to > from) {
        return Err(CliError::Usage(format!(
            "sweep range must be finite with to > from (got {from}..{to})"
        )));
    }
    if points < 2 {
        return Err(CliError::Usage("sweep needs at least 2 points".into()));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| from + (to - from) * i as f64 / (points - 1) as f64)
        .collect();
    let policies = policies.unwrap_or_else(|| policies_from(config));
    let result = sweep(&config.params, param, &grid, &policies).map_err(CliError::Engine)?;

    let summary = format!(
        "command=sweep param={} from={} to={} points={} policies={} {}",
        param,
        format_value(from),
        format_value(to),
        points,
        policies
            .iter()
            .map(|p| p.label())
            .collect::<Vec<_>>()
            .join("+"),
        config.model_summary()
    );

    let mut columns: Vec<&str> = vec!["value", "policy"];
    columns.extend(SNAPSHOT_COLUMNS);
    columns.extend([
        "lambda_t0",
        "q_t0",
        "b_t0",
        "a_t0",
        "omega_t0",
        "p_t0",
        "subsidy_t0",
        "D_t0",
        "pi_G_t0",
        "pi_M_t0",
        "pi_R_t0",
        "s_price_precondition",
    ]);
    let mut rows = Vec::new();
    for point in &result.points {
        for (pi, outcome) in point.outcomes.iter().enumerate() {
            match outcome {
                Ok(o) => {
                    let mut row = vec![
                        format_value(point.value),
                        result.policies[pi].label().to_string(),
                    ];
                    row.extend(snapshot_fields(&o.steady.snapshot));
                    let init = &o.initial;
                    row.extend(
                        [
                            init.lambda,
                            init.tech_effort,
                            init.blockchain_effort,
                            init.ad_effort,
                            init.wholesale_price,
                            init.retail_price,
                            init.subsidy.value(),
                            init.demand,
                            init.government_profit,
                            init.manufacturer_profit,
                            init.retailer_profit,
                        ]
                        .iter()
                        .map(|v| format_value(*v)),
                    );
                    row.push(format_bool(o.price_drop_precondition));
                    rows.push(row);
                }
                Err(diagnostic) => {
                    eprintln!(
                        "skipped {}={} policy {}: {diagnostic}",
                        param,
                        format_value(point.value),
                        result.policies[pi].label()
                    );
                }
            }
        }
    }
    let path = write_csv(
        &config.out_dir,
        &format!("sweep_{param}.csv"),
        &summary,
        &columns,
        &rows,
    )?;
    println!("wrote {}", path.display());

    let verdict_columns = ["policy", "quantity", "direction"];
    let mut verdict_rows = Vec::new();
    for (pi, verdicts) in result.verdicts.iter().enumerate() {
        for (quantity, direction) in verdicts {
            verdict_rows.push(vec![
                result.policies[pi].label().to_string(),
                quantity.label().to_string(),
                direction.to_string(),
            ]);
        }
    }
    let path = write_csv(
        &config.out_dir,
        &format!("sweep_{param}_verdicts.csv"),
        &summary,
        &verdict_columns,
        &verdict_rows,
    )?;
    println!("wrote {}", path.display());
    Ok(())
}

/// `verify`: closed-form/oracle discrepancy report per policy.
pub fn run_verify(config: &RunConfig) -> Result<(), CliError> {
    let policies = policies_from(config);
    let cfg = OracleConfig {
        horizon: config.horizon,
        steps: config.steps,
        relaxation: config.relaxation,
        max_iters: config.max_iters,
        convergence_tol: config.tol,
    };
    let columns = [
        "policy",
        "converged",
        "iterations",
        "max_residual",
        "sup_rel_disc_A",
        "sup_rel_disc_lambda",
        "fitted_rate",
        "analytic_rate",
        "rate_rel_gap",
    ];
    let mut rows = Vec::new();
    for policy in &policies {
        let report = oracle_check(*policy, &config.params, &cfg).map_err(CliError::Engine)?;
        println!(
            "{}: converged in {} iterations; sup relative discrepancy A {} lambda {}; \
             fitted rate {} vs analytic {}",
            policy.label(),
            report.iterations,
            format_value(report.aggregate_discrepancy),
            format_value(report.costate_discrepancy),
            format_value(report.fitted_rate),
            format_value(report.analytic_rate)
        );
        rows.push(vec![
            policy.label().to_string(),
            format_bool(report.converged),
            report.iterations.to_string(),
            format_value(report.max_residual),
            format_value(report.aggregate_discrepancy),
            format_value(report.costate_discrepancy),
            format_value(report.fitted_rate),
            format_value(report.analytic_rate),
            format_value(report.rate_gap),
        ]);
    }
    let summary = format!(
        "command=verify horizon={} steps={} relaxation={} max_iters={} tol={} {}",
        format_value(config.horizon),
        config.steps,
        format_value(config.relaxation),
        config.max_iters,
        format_value(config.tol),
        config.model_summary()
    );
    let path = write_csv(&config.out_dir, "verify.csv", &summary, &columns, &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// `props`: evaluated proposition ledger, with every precondition printed.
pub fn run_props(config: &RunConfig) -> Result<(), CliError> {
    // unstable parameters make the whole ledger meaningless: exit 2 up front
    vaxgame_core::require_feasible(&config.params, PolicyKind::NoSubsidy)
        .map_err(CliError::Engine)?;
    let ledger = proposition_suite(&config.params);
    let columns = [
        "prop",
        "claim",
        "precondition",
        "precondition_lhs",
        "precondition_rhs",
        "precondition_holds",
        "values",
        "inequality_holds",
        "status",
    ];
    let mut rows = Vec::new();
    for check in &ledger.checks {
        let (pre_desc, pre_lhs, pre_rhs, pre_holds) = match &check.precondition {
            Some(pre) => (
                pre.description.clone(),
                format_value(pre.lhs),
                format_value(pre.rhs),
                format_bool(pre.holds),
            ),
            None => ("".to_string(), "".to_string(), "".to_string(), "".to_string()),
        };
        let values = check
            .values
            .iter()
            .map(|(name, value)| format!("{name}={}", format_value(*value)))
            .collect::<Vec<_>>()
            .join("; ");
        println!("prop {} [{}] {}", check.id, check.status, check.claim);
        if let Some(pre) = &check.precondition {
            println!(
                "  precondition ({}): lhs={} rhs={} -> {}",
                pre.description,
                format_value(pre.lhs),
                format_value(pre.rhs),
                pre.holds
            );
        }
        println!("  values: {values}");
        rows.push(vec![
            check.id.to_string(),
            check.claim.to_string(),
            pre_desc,
            pre_lhs,
            pre_rhs,
            pre_holds,
            values,
            format_bool(check.inequality_holds),
            check.status.to_string(),
        ]);
    }
    let summary = format!(
        "command=props tau={} {}",
        format_value(ledger.tau),
        config.model_summary()
    );
    let path = write_csv(&config.out_dir, "props.csv", &summary, &columns, &rows)?;
    println!("wrote {}", path.display());
    Ok(())
}
