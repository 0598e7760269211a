//! Reduced two-dimensional dynamics of the aggregate level `A` and the
//! retailer shadow price `lambda`.
//!
//! Substituting the equilibrium efforts into the state equations collapses the
//! game to one linear ODE pair per policy,
//!
//! ```text
//! A'      = costate_gain * lambda - delta * A + state_forcing
//! lambda' = (r + delta) * lambda - margin_gain * (A + costate_shift)
//! ```
//!
//! whose stationary point reproduces the closed-form long-run limits and whose
//! stable eigenvalue is the trajectory decay rate. The customer reimbursement
//! policy shares the no-subsidy coefficients: reimbursement moves prices but
//! not states, efforts or demand.

use crate::params::{require_feasible, Error, ModelParams, PolicyKind, Result};

/// Coefficients of the reduced aggregate/costate system for one policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSystem {
    /// Coupling from the costate into aggregate growth (multiplies `lambda`
    /// in `A'`).
    pub costate_gain: f64,
    /// Coupling from the aggregate into the costate equation (multiplies
    /// `A + costate_shift` in `lambda'`).
    pub margin_gain: f64,
    /// Constant forcing in the aggregate equation.
    pub state_forcing: f64,
    /// Constant offset added to the aggregate in the costate equation.
    pub costate_shift: f64,
}

impl ReducedSystem {
    /// Right-hand side of the aggregate equation.
    pub fn aggregate_rate(&self, params: &ModelParams, aggregate: f64, costate: f64) -> f64 {
        self.costate_gain * costate - params.delta * aggregate + self.state_forcing
    }

    /// Right-hand side of the costate equation.
    pub fn costate_rate(&self, params: &ModelParams, aggregate: f64, costate: f64) -> f64 {
        params.discount_decay() * costate - self.margin_gain * (aggregate + self.costate_shift)
    }

    /// Stationary `(aggregate, costate)` pair of the reduced dynamics.
    pub fn stationary_point(&self, params: &ModelParams) -> (f64, f64) {
        let rd = params.discount_decay();
        let mc = self.costate_gain * self.margin_gain;
        // positive under the stability condition
        let denom = params.delta * rd - mc;
        let aggregate = (self.state_forcing * rd + mc * self.costate_shift) / denom;
        let costate = self.margin_gain * (aggregate + self.costate_shift) / rd;
        (aggregate, costate)
    }

    /// The negative (stable) eigenvalue of the system matrix
    /// `[[-delta, costate_gain], [-margin_gain, r+delta]]`.
    pub fn stable_eigenvalue(&self, params: &ModelParams) -> Result<f64> {
        let rd = params.discount_decay();
        let discriminant = params.r * params.r + 4.0 * params.delta * rd
            - 4.0 * self.costate_gain * self.margin_gain;
        if discriminant <= 0.0 {
            return Err(Error::NonRealEigenvalues { discriminant });
        }
        Ok((params.r - discriminant.sqrt()) / 2.0)
    }

    /// Contraction ratio `m*c / (delta*(r+delta))` of the forward-backward
    /// fixed-point map; strictly below one exactly when the system is stable.
    pub fn contraction_ratio(&self, params: &ModelParams) -> f64 {
        self.costate_gain * self.margin_gain / (params.delta * params.discount_decay())
    }
}

/// Reduced-system coefficients for the given policy.
///
/// Requires a feasible parameter set (stability, plus the interior condition
/// for the subsidized policies).
pub fn reduced_system(policy: PolicyKind, params: &ModelParams) -> Result<ReducedSystem> {
    require_feasible(params, policy)?;
    let delta_aggregate = params.delta_aggregate();
    let g1t1_sq = params.gamma1 * params.gamma1 * params.theta1 * params.theta1;
    let system = match policy {
        PolicyKind::NoSubsidy | PolicyKind::CustomerP => ReducedSystem {
            costate_gain: delta_aggregate,
            margin_gain: 1.0 / (8.0 * params.beta),
            state_forcing: 0.0,
            costate_shift: params.alpha,
        },
        PolicyKind::ManufacturerQ => ReducedSystem {
            costate_gain: delta_aggregate - g1t1_sq,
            margin_gain: 1.0 / (8.0 * params.beta),
            state_forcing: g1t1_sq * params.eta / (4.0 * params.discount_decay()),
            costate_shift: params.alpha,
        },
        PolicyKind::ManufacturerD => ReducedSystem {
            costate_gain: delta_aggregate,
            margin_gain: 1.0 / (32.0 * params.beta),
            state_forcing: 0.0,
            costate_shift: params.alpha + params.eta * params.beta,
        },
    };
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coefficients_no_subsidy() {
        let p = ModelParams::baseline();
        let rs = reduced_system(PolicyKind::NoSubsidy, &p).unwrap();
        assert_relative_eq!(rs.costate_gain, 0.2256, max_relative = 1e-14);
        assert_relative_eq!(rs.margin_gain, 1.0 / 56.0, max_relative = 1e-14);
        assert_eq!(rs.state_forcing, 0.0);
        assert_eq!(rs.costate_shift, 18.0);
    }

    #[test]
    fn coefficients_manufacturer_q() {
        let p = ModelParams::baseline();
        let rs = reduced_system(PolicyKind::ManufacturerQ, &p).unwrap();
        assert_relative_eq!(rs.costate_gain, 0.1356, max_relative = 1e-12);
        assert_relative_eq!(rs.state_forcing, 0.09 * 7.0 / 0.52, max_relative = 1e-12);
    }

    #[test]
    fn coefficients_manufacturer_d() {
        let p = ModelParams::baseline();
        let rs = reduced_system(PolicyKind::ManufacturerD, &p).unwrap();
        assert_relative_eq!(rs.margin_gain, 1.0 / 224.0, max_relative = 1e-14);
        assert_eq!(rs.costate_shift, 67.0);
    }

    #[test]
    fn customer_p_shares_no_subsidy_dynamics() {
        let p = ModelParams::baseline();
        let a = reduced_system(PolicyKind::NoSubsidy, &p).unwrap();
        let b = reduced_system(PolicyKind::CustomerP, &p).unwrap();
        assert_eq!(a, b);
    }

    /// Long-run limits of the aggregate/costate pair, written out the way the
    /// closed forms state them. Used as the independent cross-check for the
    /// stationary point.
    fn closed_form_limits(policy: PolicyKind, p: &ModelParams) -> (f64, f64) {
        let rd = p.discount_decay();
        let d = p.delta_aggregate();
        let g1t1_sq = p.gamma1 * p.gamma1 * p.theta1 * p.theta1;
        match policy {
            PolicyKind::NoSubsidy | PolicyKind::CustomerP => {
                let den = 8.0 * p.beta * p.delta * rd - d;
                (p.alpha * d / den, p.alpha * p.delta / den)
            }
            PolicyKind::ManufacturerQ => {
                let lam = (4.0 * p.alpha * p.delta * rd + p.eta * g1t1_sq)
                    / (4.0 * rd * (8.0 * p.beta * p.delta * rd + g1t1_sq - d));
                // A = (m*lam + s_A)/delta with m = Delta - g1t1^2
                let a = ((d - g1t1_sq) * lam + g1t1_sq * p.eta / (4.0 * rd)) / p.delta;
                (a, lam)
            }
            PolicyKind::ManufacturerD => {
                let den = 32.0 * p.beta * p.delta * rd - d;
                (
                    d * (p.alpha + p.beta * p.eta) / den,
                    (p.alpha + p.beta * p.eta) * p.delta / den,
                )
            }
        }
    }

    #[test]
    fn stationary_point_matches_closed_forms() {
        let p = ModelParams::baseline();
        for policy in PolicyKind::DYNAMIC {
            let rs = reduced_system(policy, &p).unwrap();
            let (a, lam) = rs.stationary_point(&p);
            let (a_cf, lam_cf) = closed_form_limits(policy, &p);
            assert_relative_eq!(a, a_cf, max_relative = 1e-12);
            assert_relative_eq!(lam, lam_cf, max_relative = 1e-12);
        }
    }

    #[test]
    fn stationarity_residual_vanishes() {
        let p = ModelParams::baseline();
        for policy in PolicyKind::DYNAMIC {
            let rs = reduced_system(policy, &p).unwrap();
            let (a, lam) = rs.stationary_point(&p);
            let a_rate = rs.aggregate_rate(&p, a, lam);
            let l_rate = rs.costate_rate(&p, a, lam);
            assert!(a_rate.abs() <= 1e-10 * a.max(1.0), "A' = {a_rate}");
            assert!(l_rate.abs() <= 1e-10 * lam.max(1.0), "lambda' = {l_rate}");
        }
    }

    /// Bisection on the characteristic polynomial as an independent route to
    /// the stable eigenvalue.
    fn eigenvalue_by_bisection(rs: &ReducedSystem, p: &ModelParams) -> f64 {
        let chi = |k: f64| {
            (-p.delta - k) * (p.discount_decay() - k)
                + rs.costate_gain * rs.margin_gain
        };
        let (mut lo, mut hi) = (-p.delta, 0.0);
        assert!(chi(lo) >= 0.0 && chi(hi) < 0.0, "root not bracketed");
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if chi(mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn stable_eigenvalues_at_baseline() {
        let p = ModelParams::baseline();
        let expected = [
            (PolicyKind::NoSubsidy, -0.080_898_011_300_696_8),
            (PolicyKind::ManufacturerQ, -0.088_940_230_077_537_49),
            (PolicyKind::ManufacturerD, -0.095_534_416_101_308_21),
        ];
        for (policy, k_expected) in expected {
            let rs = reduced_system(policy, &p).unwrap();
            let k = rs.stable_eigenvalue(&p).unwrap();
            assert_relative_eq!(k, k_expected, max_relative = 1e-12);
            assert_relative_eq!(k, eigenvalue_by_bisection(&rs, &p), max_relative = 1e-9);
            assert!(k < 0.0 && k > -p.delta);
        }
    }

    #[test]
    fn infeasible_params_rejected() {
        let p = ModelParams {
            beta: 0.1,
            ..ModelParams::baseline()
        };
        assert!(matches!(
            reduced_system(PolicyKind::NoSubsidy, &p),
            Err(Error::Unstable { .. })
        ));
    }
}
