//! Shared helpers for the integration suites: seeded random parameter draws
//! (log-uniform between half and twice the baseline per field) with rejection
//! of infeasible sets.

use rand::Rng;
use vaxgame_core::{saddle_path, ModelParams, PolicyKind};

pub fn log_uniform<R: Rng>(rng: &mut R, center: f64) -> f64 {
    let lo = (0.5 * center).ln();
    let hi = (2.0 * center).ln();
    (lo + rng.gen::<f64>() * (hi - lo)).exp()
}

pub fn draw_params<R: Rng>(rng: &mut R) -> ModelParams {
    let b = ModelParams::baseline();
    ModelParams {
        alpha: log_uniform(rng, b.alpha),
        beta: log_uniform(rng, b.beta),
        theta1: log_uniform(rng, b.theta1),
        theta2: log_uniform(rng, b.theta2),
        theta3: log_uniform(rng, b.theta3),
        gamma1: log_uniform(rng, b.gamma1),
        gamma2: log_uniform(rng, b.gamma2),
        eta: log_uniform(rng, b.eta),
        delta: log_uniform(rng, b.delta),
        r: log_uniform(rng, b.r),
    }
}

/// Draws until the parameter set admits a saddle path (stability, interior
/// subsidies, nonnegative initial costate) for every listed policy.
pub fn feasible_draw_for<R: Rng>(rng: &mut R, policies: &[PolicyKind]) -> ModelParams {
    loop {
        let params = draw_params(rng);
        if policies.iter().all(|&p| saddle_path(p, &params).is_ok()) {
            return params;
        }
    }
}

/// Feasible for all three dynamic policies.
pub fn feasible_draw<R: Rng>(rng: &mut R) -> ModelParams {
    feasible_draw_for(rng, &PolicyKind::DYNAMIC)
}

/// Feasible draw whose sweep contraction ratio stays away from one, keeping
/// oracle runs inside the acceptance runtime budget.
pub fn well_conditioned_draw<R: Rng>(rng: &mut R) -> ModelParams {
    loop {
        let params = feasible_draw(rng);
        if params.delta_aggregate() <= 0.8 * params.stability_lhs() {
            return params;
        }
    }
}
