//! Steady-state parameter sweeps with per-quantity monotonicity verdicts.

use super::{map_indexed, Quantity};
use crate::closures::Snapshot;
use crate::params::{Error, ModelParams, PolicyKind, Result};
use crate::saddle::{steady_state, SteadyState};
use crate::trajectory::ClosedFormPath;

/// A sweepable model parameter, named by its conventional symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamName {
    Alpha,
    Beta,
    Theta1,
    Theta2,
    Theta3,
    Gamma1,
    Gamma2,
    Eta,
    Delta,
    R,
}

impl ParamName {
    pub const ALL: [ParamName; 10] = [
        ParamName::Alpha,
        ParamName::Beta,
        ParamName::Theta1,
        ParamName::Theta2,
        ParamName::Theta3,
        ParamName::Gamma1,
        ParamName::Gamma2,
        ParamName::Eta,
        ParamName::Delta,
        ParamName::R,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ParamName::Alpha => "alpha",
            ParamName::Beta => "beta",
            ParamName::Theta1 => "theta1",
            ParamName::Theta2 => "theta2",
            ParamName::Theta3 => "theta3",
            ParamName::Gamma1 => "gamma1",
            ParamName::Gamma2 => "gamma2",
            ParamName::Eta => "eta",
            ParamName::Delta => "delta",
            ParamName::R => "r",
        }
    }

    pub fn from_str(name: &str) -> Option<ParamName> {
        ParamName::ALL.iter().copied().find(|p| p.as_str() == name)
    }

    pub fn apply(&self, params: &mut ModelParams, value: f64) {
        match self {
            ParamName::Alpha => params.alpha = value,
            ParamName::Beta => params.beta = value,
            ParamName::Theta1 => params.theta1 = value,
            ParamName::Theta2 => params.theta2 = value,
            ParamName::Theta3 => params.theta3 = value,
            ParamName::Gamma1 => params.gamma1 = value,
            ParamName::Gamma2 => params.gamma2 = value,
            ParamName::Eta => params.eta = value,
            ParamName::Delta => params.delta = value,
            ParamName::R => params.r = value,
        }
    }
}

impl std::fmt::Display for ParamName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Monotone direction of a series across the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
    /// Fewer than two evaluable points.
    Undetermined,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
            Direction::Constant => "constant",
            Direction::Mixed => "mixed",
            Direction::Undetermined => "undetermined",
        })
    }
}

fn classify(values: &[f64]) -> Direction {
    if values.len() < 2 {
        return Direction::Undetermined;
    }
    let (mut up, mut down) = (false, false);
    for pair in values.windows(2) {
        let tol = 1e-9 * pair[0].abs().max(pair[1].abs()).max(1.0);
        if pair[1] > pair[0] + tol {
            up = true;
        } else if pair[1] < pair[0] - tol {
            down = true;
        }
    }
    match (up, down) {
        (true, false) => Direction::Increasing,
        (false, true) => Direction::Decreasing,
        (false, false) => Direction::Constant,
        (true, true) => Direction::Mixed,
    }
}

/// Evaluated quantities at one sweep point for one policy.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub steady: SteadyState,
    /// Snapshot at the start of the equilibrium path (t = 0).
    pub initial: Snapshot,
    /// Whether `4*beta*delta*(r+delta) > Delta` holds at this point (the
    /// precondition for the long-run retail price to fall in eta under the
    /// per-dose policy).
    pub price_drop_precondition: bool,
}

/// One grid point: the swept value plus per-policy outcomes (a diagnostic
/// string where a policy is infeasible at this point).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub outcomes: Vec<std::result::Result<SweepOutcome, String>>,
}

/// Sweep output: points in grid order and per-policy monotonicity verdicts
/// over the evaluable points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub param: ParamName,
    pub policies: Vec<PolicyKind>,
    pub points: Vec<SweepPoint>,
    pub verdicts: Vec<Vec<(Quantity, Direction)>>,
}

impl SweepResult {
    /// Steady-state verdict for one policy and quantity.
    pub fn direction(&self, policy: PolicyKind, quantity: Quantity) -> Option<Direction> {
        let idx = self.policies.iter().position(|&p| p == policy)?;
        self.verdicts[idx]
            .iter()
            .find(|(q, _)| *q == quantity)
            .map(|(_, d)| *d)
    }
}

/// Evaluates steady states and initial snapshots for every requested policy
/// over the grid of values for `param`. Points are independent and evaluated
/// concurrently; results are gathered by grid index. Infeasible points are
/// skipped with a diagnostic, never interpolated.
pub fn sweep(
    params: &ModelParams,
    param: ParamName,
    grid: &[f64],
    policies: &[PolicyKind],
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty sweep grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(
            "sweep grid must be finite and strictly increasing".into(),
        ));
    }
    if policies.is_empty() {
        return Err(Error::InvalidGrid("no policies requested".into()));
    }

    let points = map_indexed(grid, |&value| {
        let mut local = *params;
        param.apply(&mut local, value);
        let outcomes = policies
            .iter()
            .map(|&policy| {
                let steady = steady_state(policy, &local).map_err(|e| e.to_string())?;
                let initial = ClosedFormPath::new(policy, &local)
                    .and_then(|path| path.snapshot(0.0))
                    .map_err(|e| e.to_string())?;
                let price_drop_precondition = 4.0 * local.beta * local.delta
                    * local.discount_decay()
                    > local.delta_aggregate();
                Ok(SweepOutcome {
                    steady,
                    initial,
                    price_drop_precondition,
                })
            })
            .collect();
        SweepPoint { value, outcomes }
    });

    let verdicts = policies
        .iter()
        .enumerate()
        .map(|(pi, _)| {
            Quantity::ALL
                .iter()
                .map(|&quantity| {
                    let series: Vec<f64> = points
                        .iter()
                        .filter_map(|pt| {
                            pt.outcomes[pi]
                                .as_ref()
                                .ok()
                                .map(|o| quantity.of(&o.steady.snapshot))
                        })
                        .collect();
                    (quantity, classify(&series))
                })
                .collect()
        })
        .collect();

    Ok(SweepResult {
        param,
        policies: policies.to_vec(),
        points,
        verdicts,
    })
}
