//! Closed-form equilibrium trajectories and derived time series.
//!
//! The saddle path fixes the aggregate level and the shadow price; quality and
//! goodwill follow by integrating their linear decay equations exactly against
//! the exponential effort forcing. Each component is
//! `limit + saddle_coeff*exp(k*t) + decay_coeff*exp(-delta*t)`, with the decay
//! term kept so that the zero initial condition holds exactly; the two decay
//! terms cancel in the aggregate.

use crate::closures::{assemble_snapshot, efforts_from_costate, profit_rates, Snapshot, SubsidyControl};
use crate::params::{Error, ModelParams, PolicyKind, Result};
use crate::saddle::{saddle_path, SaddlePath};

/// A sampled equilibrium path.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub policy: PolicyKind,
    pub snapshots: Vec<Snapshot>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }
}

/// One state component `value(t) = limit + saddle_coeff*e^{kt} + decay_coeff*e^{-delta t}`.
#[derive(Debug, Clone, Copy)]
struct Component {
    limit: f64,
    saddle_coeff: f64,
    decay_coeff: f64,
}

impl Component {
    /// Integrates `x' = forcing(t) - delta*x, x(0) = 0` exactly for
    /// `forcing(t) = forcing_limit + forcing_coeff*e^{kt}`.
    fn from_forcing(forcing_limit: f64, forcing_coeff: f64, stable_rate: f64, decay: f64) -> Component {
        let limit = forcing_limit / decay;
        // k + delta > 0 whenever the forcing has an exponential part; a zero
        // coefficient (flat costate) must not divide by the degenerate k = -delta.
        let saddle_coeff = if forcing_coeff == 0.0 {
            0.0
        } else {
            forcing_coeff / (stable_rate + decay)
        };
        Component {
            limit,
            saddle_coeff,
            decay_coeff: -(limit + saddle_coeff),
        }
    }

    fn at(&self, t: f64, stable_rate: f64, decay: f64) -> f64 {
        self.limit
            + self.saddle_coeff * (stable_rate * t).exp()
            + self.decay_coeff * (-decay * t).exp()
    }
}

/// Closed-form equilibrium path of one policy, evaluable at any time.
#[derive(Debug, Clone)]
pub struct ClosedFormPath {
    policy: PolicyKind,
    params: ModelParams,
    saddle: SaddlePath,
    quality: Component,
    goodwill: Component,
}

impl ClosedFormPath {
    pub fn new(policy: PolicyKind, params: &ModelParams) -> Result<ClosedFormPath> {
        let dynamics_policy = match policy {
            PolicyKind::CustomerP => PolicyKind::NoSubsidy,
            other => other,
        };
        let saddle = saddle_path(dynamics_policy, params)?;
        let limit_efforts = efforts_from_costate(
            dynamics_policy,
            params,
            saddle.costate_limit,
            2.0 * saddle.costate_limit,
        )?;
        let initial = saddle.initial_costate();
        let initial_efforts =
            efforts_from_costate(dynamics_policy, params, initial, 2.0 * initial)?;

        let quality = Component::from_forcing(
            params.theta1 * limit_efforts.tech,
            params.theta1 * (initial_efforts.tech - limit_efforts.tech),
            saddle.stable_rate,
            params.delta,
        );
        let goodwill_limit_forcing = params.theta2 * limit_efforts.blockchain
            + params.theta3 * limit_efforts.advertising;
        let goodwill_initial_forcing = params.theta2 * initial_efforts.blockchain
            + params.theta3 * initial_efforts.advertising;
        let goodwill = Component::from_forcing(
            goodwill_limit_forcing,
            goodwill_initial_forcing - goodwill_limit_forcing,
            saddle.stable_rate,
            params.delta,
        );
        Ok(ClosedFormPath {
            policy: dynamics_policy,
            params: *params,
            saddle,
            quality,
            goodwill,
        })
    }

    pub fn saddle(&self) -> &SaddlePath {
        &self.saddle
    }

    /// Full snapshot at time `t >= 0`.
    pub fn snapshot(&self, t: f64) -> Result<Snapshot> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidGrid(format!("time {t} not finite and nonnegative")));
        }
        let quality = self.quality.at(t, self.saddle.stable_rate, self.params.delta);
        let goodwill = self.goodwill.at(t, self.saddle.stable_rate, self.params.delta);
        let lambda = self.saddle.costate_at(t);
        assemble_snapshot(self.policy, &self.params, t, quality, goodwill, lambda)
    }
}

/// Checks a trajectory grid: nonempty, finite, strictly increasing, starting
/// at zero.
fn check_grid(grid: &[f64]) -> Result<()> {
    let first = *grid.first().ok_or_else(|| Error::InvalidGrid("empty grid".into()))?;
    if first != 0.0 {
        return Err(Error::InvalidGrid(format!("grid must start at 0 (starts at {first})")));
    }
    for pair in grid.windows(2) {
        if !(pair[1].is_finite() && pair[1] > pair[0]) {
            return Err(Error::InvalidGrid(format!(
                "grid must be strictly increasing and finite ({} then {})",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// Uniform grid of `points` samples on `[0, t_end]`, endpoints included.
pub fn uniform_grid(t_end: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidGrid(format!("t_end must be positive (got {t_end})")));
    }
    if points < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 points (got {points})")));
    }
    Ok((0..points)
        .map(|i| t_end * i as f64 / (points - 1) as f64)
        .collect())
}

/// Samples the closed-form equilibrium path of `policy` on the grid.
pub fn trajectory(policy: PolicyKind, params: &ModelParams, grid: &[f64]) -> Result<TimeSeries> {
    check_grid(grid)?;
    let path = ClosedFormPath::new(policy, params)?;
    let snapshots = grid
        .iter()
        .map(|&t| path.snapshot(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries { policy, snapshots })
}

/// Applies a customer reimbursement path to a no-subsidy base trajectory.
///
/// The manufacturer and retailer pass the reimbursement through: both prices
/// scale by `1/(1 - psi)` pointwise, while states, efforts and sales volume
/// stay at their base values. Profits are re-evaluated under the
/// reimbursement accounting.
pub fn customer_p_response(
    params: &ModelParams,
    psi_path: &[f64],
    base: &TimeSeries,
) -> Result<TimeSeries> {
    if base.policy != PolicyKind::NoSubsidy {
        return Err(Error::PolicyMismatch {
            policy: PolicyKind::CustomerP,
            found: base.policy.label(),
        });
    }
    if psi_path.len() != base.snapshots.len() {
        return Err(Error::InvalidGrid(format!(
            "psi path has {} points, base trajectory {}",
            psi_path.len(),
            base.snapshots.len()
        )));
    }
    let snapshots = psi_path
        .iter()
        .zip(&base.snapshots)
        .map(|(&psi, snap)| {
            if !(0.0..1.0).contains(&psi) {
                return Err(Error::InvalidFraction { name: "psi", value: psi });
            }
            let scale = 1.0 / (1.0 - psi);
            let mut out = *snap;
            out.wholesale_price = snap.wholesale_price * scale;
            out.retail_price = snap.retail_price * scale;
            out.subsidy = SubsidyControl::Reimbursement { fraction: psi };
            // Sales volume through the amended demand: out-of-pocket price is
            // back at the base level, so this reproduces the base volume.
            out.demand = crate::closures::demand(
                params,
                out.retail_price,
                out.quality,
                out.goodwill,
                psi,
            );
            let rates = profit_rates(PolicyKind::CustomerP, params, &out)?;
            out.government_profit = rates.government;
            out.manufacturer_profit = rates.manufacturer;
            out.retailer_profit = rates.retailer;
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries {
        policy: PolicyKind::CustomerP,
        snapshots,
    })
}

/// Present value of a profit-rate series on a uniform grid, with the
/// infinite tail beyond the horizon integrated in closed form from the steady
/// rate: `integral of e^{-rt} rate(t) dt + steady_rate * e^{-rT} / r`.
///
/// Requires `exp(-r * horizon) < tail_tolerance` so the tail approximation is
/// explicitly certified by the caller.
pub fn discounted_value(
    times: &[f64],
    rates: &[f64],
    discount_rate: f64,
    steady_rate: f64,
    tail_tolerance: f64,
) -> Result<f64> {
    if times.is_empty() || rates.is_empty() {
        return Err(Error::EmptySeries);
    }
    if times.len() != rates.len() {
        return Err(Error::InvalidGrid(format!(
            "{} times vs {} rates",
            times.len(),
            rates.len()
        )));
    }
    if !(discount_rate.is_finite() && discount_rate > 0.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            requirement: "finite and positive",
            value: discount_rate,
        });
    }
    check_grid(times)?;
    let n = times.len();
    if n < 2 {
        return Err(Error::InvalidGrid("need at least 2 samples".into()));
    }
    let step = times[1] - times[0];
    for (i, pair) in times.windows(2).enumerate() {
        if ((pair[1] - pair[0]) - step).abs() > 1e-9 * step.max(1.0) {
            return Err(Error::NonUniformGrid { index: i + 1 });
        }
    }
    let horizon = times[n - 1];
    let tail = (-discount_rate * horizon).exp();
    if tail >= tail_tolerance {
        return Err(Error::HorizonTooShort {
            horizon,
            tail,
            tolerance: tail_tolerance,
        });
    }
    let weighted: Vec<f64> = times
        .iter()
        .zip(rates)
        .map(|(&t, &rate)| (-discount_rate * t).exp() * rate)
        .collect();
    let mut integral = 0.0;
    for pair in weighted.windows(2) {
        integral += 0.5 * step * (pair[0] + pair[1]);
    }
    Ok(integral + steady_rate * tail / discount_rate)
}
