//! Saddle-path construction and long-run steady states.
//!
//! Under the stability condition the reduced system has one negative
//! eigenvalue; the unique bounded solution starting from `A(0) = 0` rides the
//! corresponding eigenvector, so every variable takes the form
//! `limit + coefficient * exp(k*t)` with `k < 0`. The unstable root is
//! discarded (transversality/boundedness).

use crate::closures::{assemble_snapshot, efforts_from_costate, Snapshot, SubsidyControl};
use crate::params::{Error, ModelParams, PolicyKind, Result};
use crate::reduced::reduced_system;

/// Closed-form description of the bounded equilibrium path of the reduced
/// aggregate/costate pair: `x(t) = limit + coefficient * exp(stable_rate*t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePath {
    /// Stable eigenvalue of the reduced system (1/time, in `(-delta, 0)`).
    pub stable_rate: f64,
    /// Long-run aggregate level.
    pub aggregate_limit: f64,
    /// Long-run retailer shadow price.
    pub costate_limit: f64,
    /// Exponential coefficient of the aggregate (equals `-aggregate_limit`
    /// so that `A(0) = 0`).
    pub aggregate_coeff: f64,
    /// Exponential coefficient of the costate, tied to the aggregate one
    /// through the stable eigenvector.
    pub costate_coeff: f64,
    /// Long-run quality level.
    pub quality_limit: f64,
    /// Long-run goodwill level.
    pub goodwill_limit: f64,
}

impl SaddlePath {
    pub fn aggregate_at(&self, t: f64) -> f64 {
        self.aggregate_limit + self.aggregate_coeff * (self.stable_rate * t).exp()
    }

    pub fn costate_at(&self, t: f64) -> f64 {
        self.costate_limit + self.costate_coeff * (self.stable_rate * t).exp()
    }

    /// Shadow price at the start of the path.
    pub fn initial_costate(&self) -> f64 {
        self.costate_limit + self.costate_coeff
    }
}

/// Builds the saddle path of the reduced system for the given policy.
///
/// Fails when the parameters are infeasible, the eigenvalues are not real, or
/// the implied initial shadow price is negative (equilibrium efforts would
/// leave their admissible range).
pub fn saddle_path(policy: PolicyKind, params: &ModelParams) -> Result<SaddlePath> {
    let rs = reduced_system(policy, params)?;
    let stable_rate = rs.stable_eigenvalue(params)?;
    let (aggregate_limit, costate_limit) = rs.stationary_point(params);
    let aggregate_coeff = -aggregate_limit;
    // On the stable eigenvector the costate deviation is (k+delta)/m times the
    // aggregate deviation; with no effort channel (m = 0) the costate is flat.
    let costate_coeff = if rs.costate_gain == 0.0 {
        0.0
    } else {
        (stable_rate + params.delta) * aggregate_coeff / rs.costate_gain
    };
    let lambda0 = costate_limit + costate_coeff;
    if lambda0 < 0.0 {
        return Err(Error::NegativeInitialCostate { lambda0 });
    }
    let efforts = efforts_from_costate(policy, params, costate_limit, 2.0 * costate_limit)?;
    let quality_limit = params.theta1 * efforts.tech / params.delta;
    let goodwill_limit =
        (params.theta2 * efforts.blockchain + params.theta3 * efforts.advertising) / params.delta;
    Ok(SaddlePath {
        stable_rate,
        aggregate_limit,
        costate_limit,
        aggregate_coeff,
        costate_coeff,
        quality_limit,
        goodwill_limit,
    })
}

/// Long-run limit of every snapshot field under one policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub policy: PolicyKind,
    /// Limits of all instantaneous quantities (`t` is infinite).
    pub snapshot: Snapshot,
}

/// Long-run steady state of the given policy.
///
/// The aggregate/costate pair comes from the stationary point of the reduced
/// dynamics and all remaining fields from the same price/effort/subsidy
/// closures used along trajectories. The customer reimbursement policy
/// reduces to the no-subsidy outcome with a zero reimbursement tag.
pub fn steady_state(policy: PolicyKind, params: &ModelParams) -> Result<SteadyState> {
    let dynamics_policy = match policy {
        PolicyKind::CustomerP => PolicyKind::NoSubsidy,
        other => other,
    };
    let rs = reduced_system(dynamics_policy, params)?;
    let (_, costate_limit) = rs.stationary_point(params);
    let efforts =
        efforts_from_costate(dynamics_policy, params, costate_limit, 2.0 * costate_limit)?;
    let quality = params.theta1 * efforts.tech / params.delta;
    let goodwill =
        (params.theta2 * efforts.blockchain + params.theta3 * efforts.advertising) / params.delta;
    let mut snapshot = assemble_snapshot(
        dynamics_policy,
        params,
        f64::INFINITY,
        quality,
        goodwill,
        costate_limit,
    )?;
    if policy == PolicyKind::CustomerP {
        // Prices, states and demand already coincide with the no-subsidy
        // equilibrium; only the subsidy tag differs (psi = 0 in equilibrium).
        snapshot.subsidy = SubsidyControl::Reimbursement { fraction: 0.0 };
    }
    Ok(SteadyState { policy, snapshot })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closures::prices_from_state;
    use approx::assert_relative_eq;

    /// Independent evaluation of the closed-form long-run limits
    /// (the same expressions the analysis states for each policy).
    fn closed_form_lambda(policy: PolicyKind, p: &ModelParams) -> f64 {
        let rd = p.discount_decay();
        let d = p.delta_aggregate();
        match policy {
            PolicyKind::NoSubsidy => p.alpha * p.delta / (8.0 * p.beta * p.delta * rd - d),
            PolicyKind::ManufacturerQ => {
                let g1t1_sq = p.gamma1 * p.gamma1 * p.theta1 * p.theta1;
                (4.0 * p.alpha * p.delta * rd + p.eta * g1t1_sq)
                    / (4.0 * rd * (8.0 * p.beta * p.delta * rd + g1t1_sq - d))
            }
            PolicyKind::ManufacturerD => {
                (p.alpha + p.beta * p.eta) * p.delta / (32.0 * p.beta * p.delta * rd - d)
            }
            PolicyKind::CustomerP => closed_form_lambda(PolicyKind::NoSubsidy, p),
        }
    }

    #[test]
    fn no_subsidy_steady_state() {
        let p = ModelParams::baseline();
        let s = steady_state(PolicyKind::NoSubsidy, &p).unwrap().snapshot;
        assert_relative_eq!(s.lambda, 3.582_802_547_770_700_6, max_relative = 1e-12);
        assert_relative_eq!(s.quality, 21.496_815_286_624_204, max_relative = 1e-12);
        assert_relative_eq!(s.goodwill, 8.168_789_808_917_197, max_relative = 1e-12);
        assert_relative_eq!(s.wholesale_price, 1.863_057_324_840_764_3, max_relative = 1e-12);
        assert_relative_eq!(s.retail_price, 2.794_585_987_261_146_5, max_relative = 1e-12);
        assert_relative_eq!(s.demand, 6.520_700_636_942_675, max_relative = 1e-12);
        assert_relative_eq!(s.government_profit, 45.644_904_458_598_73, max_relative = 1e-12);
        assert_eq!(s.subsidy, SubsidyControl::None);
    }

    #[test]
    fn manufacturer_q_steady_state() {
        let p = ModelParams::baseline();
        let s = steady_state(PolicyKind::ManufacturerQ, &p).unwrap().snapshot;
        assert_relative_eq!(s.lambda, 5.083_623_331_428_868, max_relative = 1e-12);
        assert_relative_eq!(s.subsidy.value(), 0.451_757_456_938_804_1, max_relative = 1e-12);
        assert_relative_eq!(s.tech_effort, 5.563_548_537_890_199, max_relative = 1e-12);
        assert_relative_eq!(s.demand, 9.252_194_463_200_54, max_relative = 1e-12);
        assert_relative_eq!(s.government_profit, 57.773_720_621_500_37, max_relative = 1e-12);
    }

    #[test]
    fn manufacturer_d_steady_state() {
        let p = ModelParams::baseline();
        let s = steady_state(PolicyKind::ManufacturerD, &p).unwrap().snapshot;
        assert_relative_eq!(s.lambda, 2.494_044_073_853_484_2, max_relative = 1e-12);
        assert_relative_eq!(s.subsidy.value(), 1.812_388_326_384_752_8, max_relative = 1e-12);
        assert_relative_eq!(s.retail_price, 2.078_320_428_826_682_6, max_relative = 1e-12);
        assert_relative_eq!(s.demand, 9.078_320_428_826_683, max_relative = 1e-12);
        assert_relative_eq!(s.government_profit, 47.094_801_033_401_075, max_relative = 1e-12);
    }

    #[test]
    fn steady_lambda_matches_closed_forms() {
        let p = ModelParams::baseline();
        for policy in PolicyKind::DYNAMIC {
            let s = steady_state(policy, &p).unwrap().snapshot;
            assert_relative_eq!(s.lambda, closed_form_lambda(policy, &p), max_relative = 1e-12);
            assert_relative_eq!(s.mu, 2.0 * s.lambda, max_relative = 1e-15);
        }
    }

    #[test]
    fn closures_reproduce_steady_fields_bit_for_bit() {
        let p = ModelParams::baseline();
        for policy in PolicyKind::DYNAMIC {
            let s = steady_state(policy, &p).unwrap().snapshot;
            let prices = prices_from_state(policy, &p, s.aggregate).unwrap();
            let efforts = efforts_from_costate(policy, &p, s.lambda, s.mu).unwrap();
            // same formulas, one code path: exact equality expected
            assert_eq!(prices.wholesale, s.wholesale_price);
            assert_eq!(prices.retail, s.retail_price);
            assert_eq!(efforts.tech, s.tech_effort);
            assert_eq!(efforts.blockchain, s.blockchain_effort);
            assert_eq!(efforts.advertising, s.ad_effort);
        }
    }

    #[test]
    fn customer_p_reduces_to_no_subsidy() {
        let p = ModelParams::baseline();
        let base = steady_state(PolicyKind::NoSubsidy, &p).unwrap().snapshot;
        let cust = steady_state(PolicyKind::CustomerP, &p).unwrap().snapshot;
        assert_eq!(cust.subsidy, SubsidyControl::Reimbursement { fraction: 0.0 });
        assert_eq!(base.retail_price, cust.retail_price);
        assert_eq!(base.demand, cust.demand);
        assert_eq!(base.government_profit, cust.government_profit);
    }

    #[test]
    fn saddle_path_baseline_values() {
        let p = ModelParams::baseline();
        let expected = [
            (PolicyKind::NoSubsidy, -0.080_898_011_300_696_8, 2.898_416_009_977_194),
            (PolicyKind::ManufacturerQ, -0.088_940_230_077_537_49, 3.533_234_617_865_499),
            (PolicyKind::ManufacturerD, -0.095_534_416_101_308_21, 2.382_670_443_265_206),
        ];
        for (policy, k, lambda0) in expected {
            let sp = saddle_path(policy, &p).unwrap();
            assert_relative_eq!(sp.stable_rate, k, max_relative = 1e-12);
            assert_relative_eq!(sp.initial_costate(), lambda0, max_relative = 1e-12);
            assert!(sp.stable_rate < 0.0);
            assert!(sp.aggregate_coeff < 0.0);
            assert_relative_eq!(sp.aggregate_at(0.0), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn no_subsidy_initial_costate_identity() {
        // With no constant forcing, lambda(0) = -k * lambda_inf / delta.
        let p = ModelParams::baseline();
        let sp = saddle_path(PolicyKind::NoSubsidy, &p).unwrap();
        assert_relative_eq!(
            sp.initial_costate(),
            -sp.stable_rate * sp.costate_limit / p.delta,
            max_relative = 1e-12
        );
    }

    #[test]
    fn eigenvector_link_holds() {
        let p = ModelParams::baseline();
        for policy in PolicyKind::DYNAMIC {
            let rs = crate::reduced::reduced_system(policy, &p).unwrap();
            let sp = saddle_path(policy, &p).unwrap();
            assert_relative_eq!(
                sp.costate_coeff * rs.costate_gain,
                (sp.stable_rate + p.delta) * sp.aggregate_coeff,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn zero_effort_channels_flatten_the_path() {
        let p = ModelParams {
            theta1: 0.0,
            theta2: 0.0,
            theta3: 0.0,
            ..ModelParams::baseline()
        };
        let sp = saddle_path(PolicyKind::NoSubsidy, &p).unwrap();
        assert_eq!(sp.aggregate_limit, 0.0);
        assert_eq!(sp.costate_coeff, 0.0);
        let lambda_flat = p.alpha / (8.0 * p.beta * p.discount_decay());
        assert_relative_eq!(sp.costate_limit, lambda_flat, max_relative = 1e-12);
        assert_relative_eq!(sp.costate_at(5.0), lambda_flat, max_relative = 1e-12);
    }
}
