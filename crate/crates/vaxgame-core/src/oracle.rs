//! Numerical verification of the closed forms by solving the reduced
//! state–costate two-point boundary value problem directly.
//!
//! The solver sees only [`ModelParams`] and the [`ReducedSystem`]
//! coefficients: it never reads the saddle-path construction, so agreement
//! between its paths and the closed-form trajectories is a genuine
//! cross-check. The scheme is a damped forward–backward sweep: integrate the
//! aggregate forward from zero under the current costate guess, integrate the
//! costate backward from its stationary terminal value, and repeat until the
//! costate iterates stop moving. Under the stability condition the sweep map
//! is a contraction with ratio `m*c/(delta*(r+delta)) < 1`.

use crate::params::{require_feasible, Error, ModelParams, PolicyKind, Result};
use crate::reduced::{reduced_system, ReducedSystem};

/// Discretization and iteration settings for the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Truncation time of the infinite horizon.
    pub horizon: f64,
    /// Number of integration steps (grid has `steps + 1` nodes).
    pub steps: usize,
    /// Damping factor of the costate update, in (0, 1].
    pub relaxation: f64,
    pub max_iters: usize,
    /// Sup-norm threshold on successive costate iterates.
    pub convergence_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        // horizon chosen so exp(k*T) < 1e-7 for all baseline policies
        OracleConfig {
            horizon: 200.0,
            steps: 20_000,
            relaxation: 0.5,
            max_iters: 400,
            convergence_tol: 1e-10,
        }
    }
}

impl OracleConfig {
    fn check(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidConfig {
                name: "horizon",
                requirement: "finite and positive",
                value: self.horizon,
            });
        }
        if self.steps < 100 {
            return Err(Error::InvalidConfig {
                name: "steps",
                requirement: "at least 100",
                value: self.steps as f64,
            });
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::InvalidConfig {
                name: "relaxation",
                requirement: "in (0, 1]",
                value: self.relaxation,
            });
        }
        if !(self.convergence_tol.is_finite() && self.convergence_tol > 0.0) {
            return Err(Error::InvalidConfig {
                name: "convergence_tol",
                requirement: "finite and positive",
                value: self.convergence_tol,
            });
        }
        Ok(())
    }

    /// Config with the horizon stretched so that `exp(k*horizon) <= 1e-7`
    /// for the given problem, keeping the step size near the default.
    pub fn tuned_for(policy: PolicyKind, params: &ModelParams) -> Result<OracleConfig> {
        let base = OracleConfig::default();
        let rs = reduced_system(policy, params)?;
        let k = rs.stable_eigenvalue(params)?;
        let needed = 16.2 / k.abs();
        let horizon = base.horizon.max(needed.min(4000.0));
        let steps = ((horizon / 0.01).ceil() as usize).clamp(base.steps, 400_000);
        Ok(OracleConfig {
            horizon,
            steps,
            ..base
        })
    }
}

/// Converged sweep output on the uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub times: Vec<f64>,
    pub aggregate: Vec<f64>,
    pub costate: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Final sup-norm defect of the costate fixed point.
    pub max_residual: f64,
}

/// Fourth-order interpolated midpoint of the interval `[i, i+1]` from node
/// values (centered four-point stencil, one-sided cubic at the edges). Keeps
/// the RK4 sweeps fourth-order accurate overall.
fn midpoint(values: &[f64], i: usize) -> f64 {
    let n = values.len();
    if i == 0 {
        (5.0 * values[0] + 15.0 * values[1] - 5.0 * values[2] + values[3]) / 16.0
    } else if i + 2 >= n {
        (5.0 * values[n - 1] + 15.0 * values[n - 2] - 5.0 * values[n - 3] + values[n - 4]) / 16.0
    } else {
        (-values[i - 1] + 9.0 * values[i] + 9.0 * values[i + 1] - values[i + 2]) / 16.0
    }
}

/// RK4 forward integration of the aggregate equation against a frozen costate
/// path.
fn integrate_aggregate(
    rs: &ReducedSystem,
    params: &ModelParams,
    costate: &[f64],
    step: f64,
    out: &mut [f64],
) {
    out[0] = 0.0;
    for i in 0..costate.len() - 1 {
        let a = out[i];
        let l0 = costate[i];
        let l1 = costate[i + 1];
        let lm = midpoint(costate, i);
        let k1 = rs.aggregate_rate(params, a, l0);
        let k2 = rs.aggregate_rate(params, a + 0.5 * step * k1, lm);
        let k3 = rs.aggregate_rate(params, a + 0.5 * step * k2, lm);
        let k4 = rs.aggregate_rate(params, a + step * k3, l1);
        out[i + 1] = a + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

/// RK4 backward integration of the costate equation against a frozen
/// aggregate path, from the pinned terminal value.
fn integrate_costate(
    rs: &ReducedSystem,
    params: &ModelParams,
    aggregate: &[f64],
    step: f64,
    terminal: f64,
    out: &mut [f64],
) {
    let n = aggregate.len() - 1;
    out[n] = terminal;
    for i in (0..n).rev() {
        let l = out[i + 1];
        let am = midpoint(aggregate, i);
        let k1 = rs.costate_rate(params, aggregate[i + 1], l);
        let k2 = rs.costate_rate(params, am, l - 0.5 * step * k1);
        let k3 = rs.costate_rate(params, am, l - 0.5 * step * k2);
        let k4 = rs.costate_rate(params, aggregate[i], l - step * k3);
        out[i] = l - step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
}

/// Solves the reduced two-point boundary value problem
/// (`A(0) = 0`, `lambda(horizon)` pinned to the stationary value) by damped
/// forward–backward sweeping.
pub fn solve_bvp(
    policy: PolicyKind,
    params: &ModelParams,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    cfg.check()?;
    require_feasible(params, policy)?;
    let rs = reduced_system(policy, params)?;
    let (_, costate_star) = rs.stationary_point(params);

    let n = cfg.steps;
    let step = cfg.horizon / n as f64;
    let times: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
    let mut costate = vec![costate_star; n + 1];
    let mut aggregate = vec![0.0; n + 1];
    let mut costate_next = vec![0.0; n + 1];
    let mut history = Vec::new();

    for iteration in 1..=cfg.max_iters {
        integrate_aggregate(&rs, params, &costate, step, &mut aggregate);
        integrate_costate(&rs, params, &aggregate, step, costate_star, &mut costate_next);
        let defect = costate
            .iter()
            .zip(&costate_next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        history.push(defect);
        if defect < cfg.convergence_tol {
            costate.copy_from_slice(&costate_next);
            integrate_aggregate(&rs, params, &costate, step, &mut aggregate);
            return Ok(OracleResult {
                times,
                aggregate,
                costate,
                converged: true,
                iterations: iteration,
                max_residual: defect,
            });
        }
        for (current, next) in costate.iter_mut().zip(&costate_next) {
            *current += cfg.relaxation * (next - *current);
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iters,
        residual: history.last().copied().unwrap_or(f64::NAN),
        history,
    })
}

/// Discrepancy report between the oracle paths and the closed-form
/// trajectory on the oracle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub converged: bool,
    pub iterations: usize,
    pub max_residual: f64,
    /// Sup-norm discrepancy of the aggregate path, relative to its limit.
    pub aggregate_discrepancy: f64,
    /// Sup-norm discrepancy of the costate path, relative to its limit.
    pub costate_discrepancy: f64,
    /// Exponential rate fitted to the oracle aggregate path by log-linear
    /// regression on `A_inf - A(t)` (NaN when the path is flat).
    pub fitted_rate: f64,
    /// Stable eigenvalue of the reduced system.
    pub analytic_rate: f64,
    /// `|fitted - analytic| / |analytic|` (NaN when not fitted).
    pub rate_gap: f64,
}

/// Log-linear least-squares fit of the decay rate of `limit - values[i]`.
fn fit_decay_rate(times: &[f64], values: &[f64], limit: f64) -> f64 {
    let scale = limit.abs().max(1e-300);
    let points: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter_map(|(&t, &v)| {
            let gap = limit - v;
            // stay well above the truncation noise so the tail does not
            // pollute the slope
            if gap > 1e-5 * scale {
                Some((t, gap.ln()))
            } else {
                None
            }
        })
        .collect();
    if points.len() < 10 {
        return f64::NAN;
    }
    let n = points.len() as f64;
    let sum_t: f64 = points.iter().map(|p| p.0).sum();
    let sum_y: f64 = points.iter().map(|p| p.1).sum();
    let sum_tt: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sum_ty: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sum_ty - sum_t * sum_y) / (n * sum_tt - sum_t * sum_t)
}

/// Runs the oracle and compares it against the closed-form trajectory.
pub fn oracle_check(
    policy: PolicyKind,
    params: &ModelParams,
    cfg: &OracleConfig,
) -> Result<OracleReport> {
    let result = solve_bvp(policy, params, cfg)?;
    let path = crate::trajectory::ClosedFormPath::new(policy, params)?;
    let saddle = path.saddle();
    let aggregate_scale = saddle.aggregate_limit.abs().max(1e-12);
    let costate_scale = saddle.costate_limit.abs().max(1e-12);
    let mut aggregate_discrepancy = 0.0_f64;
    let mut costate_discrepancy = 0.0_f64;
    for (i, &t) in result.times.iter().enumerate() {
        let a_closed = saddle.aggregate_at(t);
        let l_closed = saddle.costate_at(t);
        aggregate_discrepancy =
            aggregate_discrepancy.max((result.aggregate[i] - a_closed).abs() / aggregate_scale);
        costate_discrepancy =
            costate_discrepancy.max((result.costate[i] - l_closed).abs() / costate_scale);
    }
    let fitted_rate = fit_decay_rate(&result.times, &result.aggregate, saddle.aggregate_limit);
    let analytic_rate = saddle.stable_rate;
    let rate_gap = (fitted_rate - analytic_rate).abs() / analytic_rate.abs();
    Ok(OracleReport {
        converged: result.converged,
        iterations: result.iterations,
        max_residual: result.max_residual,
        aggregate_discrepancy,
        costate_discrepancy,
        fitted_rate,
        analytic_rate,
        rate_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quick_cfg() -> OracleConfig {
        OracleConfig {
            horizon: 200.0,
            steps: 4000,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn decoupled_system_is_exactly_flat() {
        // all effort channels off: aggregate stays at zero, costate constant
        let p = ModelParams {
            theta1: 0.0,
            theta2: 0.0,
            theta3: 0.0,
            ..ModelParams::baseline()
        };
        let result = solve_bvp(PolicyKind::NoSubsidy, &p, &quick_cfg()).unwrap();
        assert!(result.converged);
        let flat = p.alpha / (8.0 * p.beta * p.discount_decay());
        for (&a, &l) in result.aggregate.iter().zip(&result.costate) {
            assert!(a.abs() < 1e-12);
            assert_relative_eq!(l, flat, max_relative = 1e-12);
        }
    }

    #[test]
    fn baseline_initial_costate_matches_closed_form() {
        let p = ModelParams::baseline();
        let result = solve_bvp(PolicyKind::NoSubsidy, &p, &OracleConfig::default()).unwrap();
        assert!(result.converged);
        assert_relative_eq!(
            result.costate[0],
            2.898_416_009_977_194,
            max_relative = 1e-6
        );
    }

    #[test]
    fn manufacturer_d_terminal_aggregate() {
        let p = ModelParams::baseline();
        let result = solve_bvp(PolicyKind::ManufacturerD, &p, &quick_cfg()).unwrap();
        let a_t = *result.aggregate.last().unwrap();
        assert_relative_eq!(a_t, 5.626_563_430_613_460_4, max_relative = 1e-5);
    }

    #[test]
    fn check_agrees_with_closed_form_at_baseline() {
        let p = ModelParams::baseline();
        for policy in PolicyKind::DYNAMIC {
            let report = oracle_check(policy, &p, &quick_cfg()).unwrap();
            assert!(report.converged);
            assert!(
                report.aggregate_discrepancy < 1e-6,
                "{policy}: {}",
                report.aggregate_discrepancy
            );
            assert!(
                report.costate_discrepancy < 1e-6,
                "{policy}: {}",
                report.costate_discrepancy
            );
        }
    }

    #[test]
    fn fitted_rate_matches_analytic() {
        let p = ModelParams::baseline();
        let report = oracle_check(PolicyKind::NoSubsidy, &p, &quick_cfg()).unwrap();
        assert_relative_eq!(report.fitted_rate, -0.080_898_011_300_696_8, max_relative = 1e-3);
        assert!(report.rate_gap < 1e-3);
    }

    #[test]
    fn infeasible_params_refused() {
        let p = ModelParams {
            beta: 0.1,
            ..ModelParams::baseline()
        };
        assert!(matches!(
            solve_bvp(PolicyKind::NoSubsidy, &p, &quick_cfg()),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn non_convergence_reports_history() {
        let p = ModelParams::baseline();
        let cfg = OracleConfig {
            max_iters: 2,
            relaxation: 0.05,
            ..quick_cfg()
        };
        match solve_bvp(PolicyKind::NoSubsidy, &p, &cfg) {
            Err(Error::NonConvergence {
                iterations,
                history,
                ..
            }) => {
                assert_eq!(iterations, 2);
                assert_eq!(history.len(), 2);
            }
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let p = ModelParams::baseline();
        let bad = OracleConfig {
            steps: 10,
            ..OracleConfig::default()
        };
        assert!(matches!(
            solve_bvp(PolicyKind::NoSubsidy, &p, &bad),
            Err(Error::InvalidConfig { name: "steps", .. })
        ));
        let bad = OracleConfig {
            relaxation: 0.0,
            ..OracleConfig::default()
        };
        assert!(matches!(
            solve_bvp(PolicyKind::NoSubsidy, &p, &bad),
            Err(Error::InvalidConfig { name: "relaxation", .. })
        ));
    }

    #[test]
    fn grid_refinement_does_not_mask_model_error() {
        let p = ModelParams::baseline();
        let coarse = solve_bvp(PolicyKind::NoSubsidy, &p, &OracleConfig::default()).unwrap();
        let fine_cfg = OracleConfig {
            steps: 40_000,
            ..OracleConfig::default()
        };
        let fine = solve_bvp(PolicyKind::NoSubsidy, &p, &fine_cfg).unwrap();
        let closed = 2.898_416_009_977_194;
        let discrepancy = (coarse.costate[0] - closed).abs();
        let refinement_shift = (coarse.costate[0] - fine.costate[0]).abs();
        assert!(
            refinement_shift < 0.1 * discrepancy,
            "shift {refinement_shift} vs discrepancy {discrepancy}"
        );
    }

    #[test]
    fn horizon_robustness() {
        let p = ModelParams::baseline();
        let short = solve_bvp(PolicyKind::NoSubsidy, &p, &quick_cfg()).unwrap();
        let long_cfg = OracleConfig {
            horizon: 400.0,
            steps: 8000,
            ..OracleConfig::default()
        };
        let long = solve_bvp(PolicyKind::NoSubsidy, &p, &long_cfg).unwrap();
        // same step size; compare shared nodes on [0, 200]
        let scale = short.costate[0].abs();
        for i in 0..=2000 {
            let rel = (short.costate[i] - long.costate[i]).abs() / scale;
            assert!(rel < 1e-8, "node {i}: {rel}");
        }
    }
}
