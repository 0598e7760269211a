//! Differential-game engine for a three-tier vaccine supply chain
//! (government, manufacturer, retailer) under four subsidy policies.
//!
//! The model tracks accumulated vaccine quality and goodwill, each fed by
//! investment efforts and subject to common decay; demand is linear in the
//! retail price and in the aggregate quality/goodwill level. Open-loop
//! equilibria have closed forms: prices are functions of the aggregate state,
//! efforts are functions of the shadow prices, and the reduced
//! aggregate/costate pair follows a linear saddle-path system.
//!
//! Module map:
//!
//! - [`params`] — parameters, policy tags, feasibility checks
//! - [`closures`] — per-instant equilibrium formulas and snapshots
//! - [`reduced`] — the reduced linear aggregate/costate dynamics
//! - [`saddle`] — saddle paths and long-run steady states
//! - [`trajectory`] — closed-form time series, reimbursement response,
//!   discounted values
//! - [`oracle`] — independent forward–backward-sweep verification of the
//!   closed forms
//! - [`analysis`] — policy comparisons, sweeps, profit-ranking thresholds,
//!   blockchain impact, proposition suite

pub mod analysis;
pub mod closures;
pub mod oracle;
pub mod params;
pub mod reduced;
pub mod saddle;
pub mod trajectory;

pub use closures::{
    demand, efforts_from_costate, prices_from_state, profit_rates, subsidy_control, Efforts,
    Prices, ProfitRates, Snapshot, SubsidyControl,
};
pub use params::{
    require_feasible, validate, Error, FeasibilityReport, InteriorCheck, ModelParams, PolicyKind,
    Result,
};
pub use reduced::{reduced_system, ReducedSystem};
pub use saddle::{saddle_path, steady_state, SaddlePath, SteadyState};
pub use trajectory::{
    customer_p_response, discounted_value, trajectory, uniform_grid, ClosedFormPath, TimeSeries,
};
pub use oracle::{oracle_check, solve_bvp, OracleConfig, OracleReport, OracleResult};
