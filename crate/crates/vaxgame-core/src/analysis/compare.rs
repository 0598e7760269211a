//! Signed comparison of the two manufacturer subsidy policies, plus the
//! three-way early/late orderings against the no-subsidy benchmark.

use super::Quantity;
use crate::params::{require_feasible, Error, ModelParams, PolicyKind, Result};
use crate::saddle::{saddle_path, steady_state, SteadyState};
use crate::trajectory::{trajectory, ClosedFormPath, TimeSeries};

/// Sign of an evaluated difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn of(x: f64) -> Result<Sign> {
        if x > 0.0 {
            Ok(Sign::Plus)
        } else if x < 0.0 {
            Ok(Sign::Minus)
        } else {
            Err(Error::SignConflict(format!("difference is exactly zero ({x})")))
        }
    }

    pub fn mirrored(&self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// One compared quantity: sign of (technology policy) minus (sales policy).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonEntry {
    pub quantity: Quantity,
    pub diff_at_tau: f64,
    pub diff_at_inf: f64,
    /// Whether the sign at `tau` persists over every positive grid time.
    pub uniform_after_start: bool,
}

/// Three-way orderings of prices and sales against the no-subsidy benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orderings {
    /// `p^S(tau) < p^*(tau) < p^T(tau)`
    pub retail_early: bool,
    /// `omega^S(tau) < omega^*(tau) < omega^T(tau)`
    pub wholesale_early: bool,
    /// `p^S(inf) < p^*(inf) <= p^T(inf)`
    pub retail_late: bool,
    /// `omega^S(inf) < omega^*(inf) <= omega^T(inf)`
    pub wholesale_late: bool,
    /// `D^S(tau) > D^T(tau) > D^*(tau)`
    pub demand_early: bool,
    /// `D^T(inf) >= D^*(inf)`
    pub demand_late_t: bool,
    /// `D^S(inf) > D^*(inf)` (holds above the eta threshold)
    pub demand_late_s: bool,
}

/// Full comparison of policy T against policy S at a small time `tau` and in
/// the long run, with the no-subsidy benchmark evaluated alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub tau: f64,
    /// Entries for q, b, a, A, omega, p, D, pi_G (T minus S).
    pub entries: Vec<ComparisonEntry>,
    /// Trajectories of (no-subsidy, T, S) on the evaluation grid.
    pub series: [TimeSeries; 3],
    /// Steady states of (no-subsidy, T, S).
    pub steady: [SteadyState; 3],
    pub orderings: Orderings,
}

/// The two-policy sign pattern for policy T (policy S is its mirror image):
/// efforts, aggregate and prices carry one persistent sign; demand and
/// government profit flip between the early and the late comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table5Pattern {
    pub efforts: Sign,
    pub aggregate: Sign,
    pub prices: Sign,
    pub demand_early: Sign,
    pub demand_late: Sign,
    pub gov_profit_early: Sign,
    pub gov_profit_late: Sign,
}

const COMPARED: [Quantity; 8] = [
    Quantity::TechEffort,
    Quantity::BlockchainEffort,
    Quantity::AdEffort,
    Quantity::Aggregate,
    Quantity::Wholesale,
    Quantity::Retail,
    Quantity::Demand,
    Quantity::GovProfit,
];

impl ComparisonTable {
    fn entry(&self, quantity: Quantity) -> &ComparisonEntry {
        self.entries
            .iter()
            .find(|e| e.quantity == quantity)
            .expect("all compared quantities present")
    }

    /// Collapses the entries into the persistent/flipping sign pattern.
    /// Fails when grouped quantities disagree or a persistent sign is not
    /// uniform in time.
    pub fn table5(&self) -> Result<Table5Pattern> {
        let persistent = |quantity: Quantity| -> Result<Sign> {
            let e = self.entry(quantity);
            let at_tau = Sign::of(e.diff_at_tau)?;
            let at_inf = Sign::of(e.diff_at_inf)?;
            if at_tau != at_inf || !e.uniform_after_start {
                return Err(Error::SignConflict(format!(
                    "{} does not keep one sign over time",
                    quantity
                )));
            }
            Ok(at_tau)
        };
        let grouped = |quantities: &[Quantity]| -> Result<Sign> {
            let signs = quantities
                .iter()
                .map(|&q| persistent(q))
                .collect::<Result<Vec<_>>>()?;
            if signs.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::SignConflict(format!(
                    "group {quantities:?} has mixed signs"
                )));
            }
            Ok(signs[0])
        };
        Ok(Table5Pattern {
            efforts: grouped(&[
                Quantity::TechEffort,
                Quantity::BlockchainEffort,
                Quantity::AdEffort,
            ])?,
            aggregate: persistent(Quantity::Aggregate)?,
            prices: grouped(&[Quantity::Wholesale, Quantity::Retail])?,
            demand_early: Sign::of(self.entry(Quantity::Demand).diff_at_tau)?,
            demand_late: Sign::of(self.entry(Quantity::Demand).diff_at_inf)?,
            gov_profit_early: Sign::of(self.entry(Quantity::GovProfit).diff_at_tau)?,
            gov_profit_late: Sign::of(self.entry(Quantity::GovProfit).diff_at_inf)?,
        })
    }
}

/// The operational reading of "tau > 0 sufficiently small":
/// `min(0.1, 1/(10*max |k|))` over the three dynamic policies, so that `tau`
/// sits well inside the initial regime of the fastest-decaying policy.
pub fn default_tau(params: &ModelParams) -> Result<f64> {
    let mut fastest: f64 = 0.0;
    for policy in PolicyKind::DYNAMIC {
        let sp = saddle_path(policy, params)?;
        fastest = fastest.max(sp.stable_rate.abs());
    }
    Ok((1.0 / (10.0 * fastest)).min(0.1))
}

/// Evaluates the three dynamic policies on the grid and extracts the
/// early/late sign pattern and the three-way orderings.
pub fn compare_policies(
    params: &ModelParams,
    tau: f64,
    grid: &[f64],
) -> Result<ComparisonTable> {
    for policy in PolicyKind::DYNAMIC {
        require_feasible(params, policy)?;
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidGrid(format!("tau must be positive (got {tau})")));
    }
    let series = [
        trajectory(PolicyKind::NoSubsidy, params, grid)?,
        trajectory(PolicyKind::ManufacturerQ, params, grid)?,
        trajectory(PolicyKind::ManufacturerD, params, grid)?,
    ];
    let steady = [
        steady_state(PolicyKind::NoSubsidy, params)?,
        steady_state(PolicyKind::ManufacturerQ, params)?,
        steady_state(PolicyKind::ManufacturerD, params)?,
    ];
    let at_tau = [
        ClosedFormPath::new(PolicyKind::NoSubsidy, params)?.snapshot(tau)?,
        ClosedFormPath::new(PolicyKind::ManufacturerQ, params)?.snapshot(tau)?,
        ClosedFormPath::new(PolicyKind::ManufacturerD, params)?.snapshot(tau)?,
    ];

    let entries = COMPARED
        .iter()
        .map(|&quantity| {
            let diff_at_tau = quantity.of(&at_tau[1]) - quantity.of(&at_tau[2]);
            let diff_at_inf =
                quantity.of(&steady[1].snapshot) - quantity.of(&steady[2].snapshot);
            // skip the shared start (both policies launch from zero states)
            let uniform_after_start = series[1]
                .snapshots
                .iter()
                .zip(&series[2].snapshots)
                .skip(1)
                .all(|(t_snap, s_snap)| {
                    let d = quantity.of(t_snap) - quantity.of(s_snap);
                    d != 0.0 && (d > 0.0) == (diff_at_tau > 0.0)
                });
            ComparisonEntry {
                quantity,
                diff_at_tau,
                diff_at_inf,
                uniform_after_start,
            }
        })
        .collect();

    let (base_tau, t_tau, s_tau) = (&at_tau[0], &at_tau[1], &at_tau[2]);
    let (base_inf, t_inf, s_inf) = (
        &steady[0].snapshot,
        &steady[1].snapshot,
        &steady[2].snapshot,
    );
    let orderings = Orderings {
        retail_early: s_tau.retail_price < base_tau.retail_price
            && base_tau.retail_price < t_tau.retail_price,
        wholesale_early: s_tau.wholesale_price < base_tau.wholesale_price
            && base_tau.wholesale_price < t_tau.wholesale_price,
        retail_late: s_inf.retail_price < base_inf.retail_price
            && base_inf.retail_price <= t_inf.retail_price,
        wholesale_late: s_inf.wholesale_price < base_inf.wholesale_price
            && base_inf.wholesale_price <= t_inf.wholesale_price,
        demand_early: s_tau.demand > t_tau.demand && t_tau.demand > base_tau.demand,
        demand_late_t: t_inf.demand >= base_inf.demand,
        demand_late_s: s_inf.demand > base_inf.demand,
    };

    Ok(ComparisonTable {
        tau,
        entries,
        series,
        steady,
        orderings,
    })
}
