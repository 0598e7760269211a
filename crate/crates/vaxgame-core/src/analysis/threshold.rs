//! Bisection of the price-sensitivity level at which the per-dose policy
//! overtakes the technology-share policy in long-run profit.
//!
//! Under the symmetric effectiveness construction (all effort channels at the
//! common strength `rho`), a vanishing discount rate and a large per-dose
//! revenue, the crossing approaches `1.04462 rho^2/delta^2` for the
//! government and `0.68255 rho^2/delta^2` for the manufacturer.

use crate::params::{require_feasible, Error, ModelParams, PolicyKind, Result};
use crate::saddle::steady_state;

/// Whose long-run profit the crossing is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfitParty {
    Government,
    Manufacturer,
}

impl ProfitParty {
    pub fn label(&self) -> &'static str {
        match self {
            ProfitParty::Government => "government",
            ProfitParty::Manufacturer => "manufacturer",
        }
    }

    /// Limiting crossing constant (multiplying `rho^2/delta^2`).
    pub fn limit_constant(&self) -> f64 {
        match self {
            ProfitParty::Government => 1.04462,
            ProfitParty::Manufacturer => 0.68255,
        }
    }
}

/// Located crossing of the long-run profit ranking in `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub party: ProfitParty,
    /// Located beta where the per-dose policy starts to dominate.
    pub crossing: f64,
    /// Initial bracket straddling the sign change.
    pub bracket: (f64, f64),
    /// Profit difference (per-dose minus tech-share) at the bracket ends.
    pub endpoint_values: (f64, f64),
    /// The analytic limiting threshold `constant * rho^2 / delta^2`.
    pub analytic: f64,
    /// `|crossing - analytic| / analytic`.
    pub relative_gap: f64,
    pub iterations: usize,
}

const BISECTION_TOL: f64 = 1e-6;
const MAX_ITERS: usize = 80;

/// Locates the `beta` above which the per-dose policy beats the
/// technology-share policy in the chosen party's long-run profit.
///
/// The parameterization is constructed internally: unit demand effects and
/// all effort effects at the common strength `rho`, with the market capacity
/// fixed at the baseline. `eta` must be large enough that both policies stay
/// interior across the bracket, and `r` close to zero (at most 1e-5) for the
/// analytic constant to apply.
pub fn find_beta_crossing(
    rho: f64,
    delta: f64,
    eta: f64,
    r: f64,
    party: ProfitParty,
) -> Result<ThresholdResult> {
    for (name, value) in [("rho", rho), ("delta", delta), ("eta", eta)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter {
                name,
                requirement: "finite and positive",
                value,
            });
        }
    }
    if !(r.is_finite() && r > 0.0 && r <= 1e-5) {
        return Err(Error::InvalidParameter {
            name: "r",
            requirement: "in (0, 1e-5]",
            value: r,
        });
    }

    let template = ModelParams {
        alpha: ModelParams::baseline().alpha,
        beta: 1.0, // placeholder, replaced per evaluation
        theta1: rho,
        theta2: rho,
        theta3: rho,
        gamma1: 1.0,
        gamma2: 1.0,
        eta,
        delta,
        r,
    };
    let with_beta = |beta: f64| ModelParams { beta, ..template };

    let profit_gap = |beta: f64| -> Result<f64> {
        let params = with_beta(beta);
        require_feasible(&params, PolicyKind::ManufacturerQ)?;
        require_feasible(&params, PolicyKind::ManufacturerD)?;
        let tech = steady_state(PolicyKind::ManufacturerQ, &params)?.snapshot;
        let dose = steady_state(PolicyKind::ManufacturerD, &params)?.snapshot;
        Ok(match party {
            ProfitParty::Government => dose.government_profit - tech.government_profit,
            ProfitParty::Manufacturer => dose.manufacturer_profit - tech.manufacturer_profit,
        })
    };

    let analytic = party.limit_constant() * rho * rho / (delta * delta);
    // 8*beta*delta*(r+delta) > Delta = 5 rho^2 bounds beta from below
    let stability_floor = 5.0 * rho * rho / (8.0 * delta * (r + delta));
    let mut lo = 1.05 * stability_floor;
    let mut hi = 2.0 * analytic;
    if lo >= hi {
        return Err(Error::NoSignChange {
            lo,
            hi,
            f_lo: f64::NAN,
            f_hi: f64::NAN,
        });
    }
    let f_lo = profit_gap(lo)?;
    let f_hi = profit_gap(hi)?;
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let bracket = (lo, hi);
    let mut iterations = 0;
    while hi - lo > BISECTION_TOL && iterations < MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if profit_gap(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let crossing = 0.5 * (lo + hi);
    Ok(ThresholdResult {
        party,
        crossing,
        bracket,
        endpoint_values: (f_lo, f_hi),
        analytic,
        relative_gap: (crossing - analytic).abs() / analytic,
        iterations,
    })
}
