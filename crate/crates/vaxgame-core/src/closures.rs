//! Equilibrium closures: prices from the state, efforts from the costates,
//! subsidy controls, demand, and instantaneous profit rates.
//!
//! These are the per-instant pieces that both the steady state and the full
//! trajectory are assembled from. There is exactly one code path for each
//! formula; steady states and trajectories reuse it instead of re-deriving
//! their own copies.

use crate::params::{Error, ModelParams, PolicyKind, Result};

/// Wholesale and retail price pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prices {
    pub wholesale: f64,
    pub retail: f64,
}

/// Investment effort triple (manufacturer technology, manufacturer blockchain,
/// retailer advertising).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Efforts {
    pub tech: f64,
    pub blockchain: f64,
    pub advertising: f64,
}

/// Instantaneous profit rates of the three tiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfitRates {
    pub government: f64,
    pub manufacturer: f64,
    pub retailer: f64,
}

/// The active subsidy control carried by a snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubsidyControl {
    /// No subsidy in effect.
    None,
    /// Share of the technology investment cost paid by the government.
    TechShare { share: f64, clamped: bool },
    /// Payment per vaccinated individual.
    PerDose { rate: f64, clamped: bool },
    /// Fraction of the retail price reimbursed to customers.
    Reimbursement { fraction: f64 },
}

impl SubsidyControl {
    /// Numeric value of the control (zero when no subsidy is active).
    pub fn value(&self) -> f64 {
        match *self {
            SubsidyControl::None => 0.0,
            SubsidyControl::TechShare { share, .. } => share,
            SubsidyControl::PerDose { rate, .. } => rate,
            SubsidyControl::Reimbursement { fraction } => fraction,
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            SubsidyControl::None => "none",
            SubsidyControl::TechShare { .. } => "tech-share",
            SubsidyControl::PerDose { .. } => "per-dose",
            SubsidyControl::Reimbursement { .. } => "reimbursement",
        }
    }

    fn matches(&self, policy: PolicyKind) -> bool {
        matches!(
            (policy, self),
            (PolicyKind::NoSubsidy, SubsidyControl::None)
                | (PolicyKind::ManufacturerQ, SubsidyControl::TechShare { .. })
                | (PolicyKind::ManufacturerD, SubsidyControl::PerDose { .. })
                | (PolicyKind::CustomerP, SubsidyControl::Reimbursement { .. })
        )
    }
}

/// Full instantaneous picture of the supply chain at one moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    /// Accumulated quality level Q.
    pub quality: f64,
    /// Accumulated goodwill level G.
    pub goodwill: f64,
    /// Aggregate non-price demand driver A = gamma1*Q + gamma2*G.
    pub aggregate: f64,
    /// Retailer shadow price of the aggregate level.
    pub lambda: f64,
    /// Manufacturer shadow price of the aggregate level.
    pub mu: f64,
    /// Technology effort q.
    pub tech_effort: f64,
    /// Blockchain effort b.
    pub blockchain_effort: f64,
    /// Advertising effort a.
    pub ad_effort: f64,
    pub wholesale_price: f64,
    pub retail_price: f64,
    pub subsidy: SubsidyControl,
    /// Sales volume D.
    pub demand: f64,
    pub government_profit: f64,
    pub manufacturer_profit: f64,
    pub retailer_profit: f64,
}

/// Equilibrium prices as functions of the aggregate level `A`.
///
/// The per-dose policy requires the interior regime (positive subsidy); when
/// `eta*beta <= alpha + A` the subsidy would clamp to zero, which is a
/// boundary regime this engine does not model.
pub fn prices_from_state(policy: PolicyKind, params: &ModelParams, aggregate: f64) -> Result<Prices> {
    if !aggregate.is_finite() || aggregate < 0.0 {
        return Err(Error::InvalidParameter {
            name: "aggregate",
            requirement: "finite and nonnegative",
            value: aggregate,
        });
    }
    let base = params.alpha + aggregate;
    match policy {
        PolicyKind::NoSubsidy | PolicyKind::ManufacturerQ | PolicyKind::CustomerP => Ok(Prices {
            wholesale: base / (2.0 * params.beta),
            retail: 3.0 * base / (4.0 * params.beta),
        }),
        PolicyKind::ManufacturerD => {
            let eb = params.eta * params.beta;
            if eb <= base {
                return Err(Error::BoundaryRegime {
                    policy,
                    detail: format!("eta*beta = {eb} <= alpha + A = {base}"),
                });
            }
            Ok(Prices {
                wholesale: (3.0 * base - eb) / (4.0 * params.beta),
                retail: (7.0 * base - eb) / (8.0 * params.beta),
            })
        }
    }
}

/// Equilibrium efforts as functions of the shadow prices.
///
/// The customer reimbursement policy shares the no-subsidy first-order
/// conditions. The ManufacturerQ branch is the interior one (`phi > 0`).
pub fn efforts_from_costate(
    policy: PolicyKind,
    params: &ModelParams,
    lambda: f64,
    mu: f64,
) -> Result<Efforts> {
    if lambda < 0.0 || mu < 0.0 || !lambda.is_finite() || !mu.is_finite() {
        return Err(Error::NegativeCostate { lambda, mu });
    }
    let g1t1 = params.gamma1 * params.theta1;
    let g2t2 = params.gamma2 * params.theta2;
    let g2t3 = params.gamma2 * params.theta3;
    let efforts = match policy {
        PolicyKind::NoSubsidy | PolicyKind::CustomerP => Efforts {
            tech: 2.0 * g1t1 * lambda,
            blockchain: 2.0 * g2t2 * lambda,
            advertising: g2t3 * lambda,
        },
        PolicyKind::ManufacturerQ => Efforts {
            tech: g1t1 * (mu / 2.0 + params.eta / (4.0 * params.discount_decay())),
            blockchain: g2t2 * mu,
            advertising: g2t3 * lambda,
        },
        PolicyKind::ManufacturerD => Efforts {
            tech: g1t1 * mu,
            blockchain: g2t2 * mu,
            advertising: g2t3 * lambda,
        },
    };
    Ok(efforts)
}

/// The government's subsidy control, clamped at zero.
///
/// For ManufacturerQ this is the cost share `phi` as a function of `mu`; for
/// ManufacturerD the per-dose payment as a function of the aggregate level.
/// Only defined for the two manufacturer policies.
pub fn subsidy_control(
    policy: PolicyKind,
    params: &ModelParams,
    aggregate: f64,
    mu: f64,
) -> Result<SubsidyControl> {
    match policy {
        PolicyKind::ManufacturerQ => {
            let scaled = 2.0 * params.discount_decay() * mu;
            let denom = params.eta + scaled;
            // eta = mu = 0 leaves the share undefined; treat as a binding clamp.
            let raw = if denom > 0.0 { 1.0 - 2.0 * scaled / denom } else { 0.0 };
            Ok(SubsidyControl::TechShare {
                share: raw.max(0.0),
                clamped: raw <= 0.0,
            })
        }
        PolicyKind::ManufacturerD => {
            let raw = (params.eta * params.beta - (params.alpha + aggregate)) / (2.0 * params.beta);
            Ok(SubsidyControl::PerDose {
                rate: raw.max(0.0),
                clamped: raw <= 0.0,
            })
        }
        PolicyKind::NoSubsidy | PolicyKind::CustomerP => Err(Error::SubsidyUndefined { policy }),
    }
}

/// Sales volume `D = alpha - beta*(1 - psi)*p + gamma1*Q + gamma2*G`.
///
/// `psi` is the reimbursed price fraction; `psi = 0` is the unamended demand.
/// Negative demand is returned as-is; callers treat it as infeasible pricing.
/// A negative retail price is admissible under the per-dose policy (the
/// subsidy can push the equilibrium price below zero at high `eta`).
pub fn demand(params: &ModelParams, retail_price: f64, quality: f64, goodwill: f64, psi: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&psi), "psi out of [0, 1): {psi}");
    debug_assert!(retail_price.is_finite() && quality >= 0.0 && goodwill >= 0.0);
    params.alpha - params.beta * (1.0 - psi) * retail_price
        + params.gamma1 * quality
        + params.gamma2 * goodwill
}

/// Instantaneous profit rates of government, manufacturer and retailer for a
/// snapshot under the given policy.
///
/// The snapshot's subsidy field must match the policy.
pub fn profit_rates(policy: PolicyKind, params: &ModelParams, snap: &Snapshot) -> Result<ProfitRates> {
    if !snap.subsidy.matches(policy) {
        return Err(Error::PolicyMismatch {
            policy,
            found: snap.subsidy.kind_name(),
        });
    }
    let d = snap.demand;
    let tech_cost = snap.tech_effort * snap.tech_effort / 2.0;
    let blockchain_cost = snap.blockchain_effort * snap.blockchain_effort / 2.0;
    let ad_cost = snap.ad_effort * snap.ad_effort / 2.0;
    let margin = snap.retail_price - snap.wholesale_price;
    let rates = match snap.subsidy {
        SubsidyControl::None => ProfitRates {
            government: params.eta * d,
            manufacturer: d * snap.wholesale_price - tech_cost - blockchain_cost,
            retailer: d * margin - ad_cost,
        },
        SubsidyControl::TechShare { share, .. } => ProfitRates {
            government: params.eta * d - share * tech_cost,
            manufacturer: d * snap.wholesale_price - (1.0 - share) * tech_cost - blockchain_cost,
            retailer: d * margin - ad_cost,
        },
        SubsidyControl::PerDose { rate, .. } => ProfitRates {
            government: (params.eta - rate) * d,
            manufacturer: d * (snap.wholesale_price + rate) - tech_cost - blockchain_cost,
            retailer: d * margin - ad_cost,
        },
        SubsidyControl::Reimbursement { fraction } => ProfitRates {
            government: (params.eta - fraction * snap.retail_price) * d,
            manufacturer: d * snap.wholesale_price - tech_cost - blockchain_cost,
            retailer: d * margin - ad_cost,
        },
    };
    Ok(rates)
}

/// Builds the full snapshot from the primitive coordinates `(t, Q, G, lambda)`
/// using the equilibrium closures, with `mu = 2*lambda`.
///
/// Fails when the path leaves the interior regime (a subsidy clamp binds).
pub(crate) fn assemble_snapshot(
    policy: PolicyKind,
    params: &ModelParams,
    t: f64,
    quality: f64,
    goodwill: f64,
    lambda: f64,
) -> Result<Snapshot> {
    let aggregate = params.gamma1 * quality + params.gamma2 * goodwill;
    let mu = 2.0 * lambda;
    let efforts = efforts_from_costate(policy, params, lambda, mu)?;
    let prices = prices_from_state(policy, params, aggregate)?;
    let subsidy = match policy {
        PolicyKind::NoSubsidy => SubsidyControl::None,
        PolicyKind::CustomerP => SubsidyControl::Reimbursement { fraction: 0.0 },
        PolicyKind::ManufacturerQ | PolicyKind::ManufacturerD => {
            let control = subsidy_control(policy, params, aggregate, mu)?;
            let clamped = match control {
                SubsidyControl::TechShare { clamped, .. }
                | SubsidyControl::PerDose { clamped, .. } => clamped,
                _ => false,
            };
            if clamped {
                return Err(Error::BoundaryRegime {
                    policy,
                    detail: format!("subsidy clamps to zero at t = {t}"),
                });
            }
            control
        }
    };
    let psi = match subsidy {
        SubsidyControl::Reimbursement { fraction } => fraction,
        _ => 0.0,
    };
    let d = demand(params, prices.retail, quality, goodwill, psi);
    let mut snap = Snapshot {
        t,
        quality,
        goodwill,
        aggregate,
        lambda,
        mu,
        tech_effort: efforts.tech,
        blockchain_effort: efforts.blockchain,
        ad_effort: efforts.advertising,
        wholesale_price: prices.wholesale,
        retail_price: prices.retail,
        subsidy,
        demand: d,
        government_profit: 0.0,
        manufacturer_profit: 0.0,
        retailer_profit: 0.0,
    };
    let rates = profit_rates(policy, params, &snap)?;
    snap.government_profit = rates.government;
    snap.manufacturer_profit = rates.manufacturer;
    snap.retailer_profit = rates.retailer;
    Ok(snap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn baseline() -> ModelParams {
        ModelParams::baseline()
    }

    #[test]
    fn prices_at_initial_state() {
        let p = baseline();
        let pr = prices_from_state(PolicyKind::NoSubsidy, &p, 0.0).unwrap();
        assert_relative_eq!(pr.wholesale, 18.0 / 14.0, max_relative = 1e-14);
        assert_relative_eq!(pr.retail, 54.0 / 28.0, max_relative = 1e-14);

        let pr = prices_from_state(PolicyKind::ManufacturerD, &p, 0.0).unwrap();
        assert_relative_eq!(pr.wholesale, 5.0 / 28.0, max_relative = 1e-14);
        assert_relative_eq!(pr.retail, 77.0 / 56.0, max_relative = 1e-14);
    }

    #[test]
    fn prices_at_no_subsidy_steady_aggregate() {
        let p = baseline();
        let pr = prices_from_state(PolicyKind::NoSubsidy, &p, 8.082_802_547_770_700_6).unwrap();
        assert_relative_eq!(pr.wholesale, 1.863_057_324_840_764_3, max_relative = 1e-12);
        assert_relative_eq!(pr.retail, 2.794_585_987_261_146_5, max_relative = 1e-12);
    }

    #[test]
    fn per_dose_boundary_regime_rejected() {
        let p = baseline();
        // eta*beta = 49 <= alpha + A for A >= 31
        let err = prices_from_state(PolicyKind::ManufacturerD, &p, 31.0).unwrap_err();
        assert!(matches!(err, Error::BoundaryRegime { .. }));
    }

    #[test]
    fn efforts_no_subsidy_steady() {
        let p = baseline();
        let lambda = 3.582_802_547_770_700_6;
        let e = efforts_from_costate(PolicyKind::NoSubsidy, &p, lambda, 2.0 * lambda).unwrap();
        assert_relative_eq!(e.tech, 2.149_681_528_662_420_4, max_relative = 1e-12);
        assert_relative_eq!(e.blockchain, 0.716_560_509_554_140_1, max_relative = 1e-12);
        assert_relative_eq!(e.advertising, 0.573_248_407_643_312_1, max_relative = 1e-12);
    }

    #[test]
    fn efforts_at_zero_shadow_price() {
        let p = baseline();
        let e = efforts_from_costate(PolicyKind::NoSubsidy, &p, 0.0, 0.0).unwrap();
        assert_eq!((e.tech, e.blockchain, e.advertising), (0.0, 0.0, 0.0));
        // the subsidized tech effort keeps a floor from the subsidy term
        let e = efforts_from_costate(PolicyKind::ManufacturerQ, &p, 0.0, 0.0).unwrap();
        assert_relative_eq!(e.tech, 0.3 * 7.0 / 0.52, max_relative = 1e-14);
        assert!(e.tech > 0.0);
    }

    #[test]
    fn efforts_manufacturer_q_interior() {
        let p = baseline();
        let lambda = 5.083_623_331_428_868;
        let e = efforts_from_costate(PolicyKind::ManufacturerQ, &p, lambda, 2.0 * lambda).unwrap();
        assert_relative_eq!(e.tech, 5.563_548_537_890_199, max_relative = 1e-12);
    }

    #[test]
    fn negative_costates_rejected() {
        let p = baseline();
        assert!(matches!(
            efforts_from_costate(PolicyKind::NoSubsidy, &p, -0.1, 0.0),
            Err(Error::NegativeCostate { .. })
        ));
    }

    #[test]
    fn tech_share_at_steady_costate() {
        let p = baseline();
        let mu = 2.0 * 5.083_623_331_428_868;
        let c = subsidy_control(PolicyKind::ManufacturerQ, &p, 0.0, mu).unwrap();
        match c {
            SubsidyControl::TechShare { share, clamped } => {
                assert_relative_eq!(share, 0.451_757_456_938_804_1, max_relative = 1e-12);
                assert!(!clamped);
            }
            other => panic!("unexpected control {other:?}"),
        }
    }

    #[test]
    fn per_dose_at_initial_state() {
        let p = baseline();
        let c = subsidy_control(PolicyKind::ManufacturerD, &p, 0.0, 0.0).unwrap();
        match c {
            SubsidyControl::PerDose { rate, clamped } => {
                assert_relative_eq!(rate, 31.0 / 14.0, max_relative = 1e-14);
                assert!(!clamped);
            }
            other => panic!("unexpected control {other:?}"),
        }
    }

    #[test]
    fn tech_share_clamps_without_revenue() {
        let p = ModelParams {
            eta: 0.0,
            ..ModelParams::baseline()
        };
        let c = subsidy_control(PolicyKind::ManufacturerQ, &p, 0.0, 1.0).unwrap();
        match c {
            SubsidyControl::TechShare { share, clamped } => {
                assert_eq!(share, 0.0);
                assert!(clamped);
            }
            other => panic!("unexpected control {other:?}"),
        }
    }

    #[test]
    fn subsidy_undefined_for_unsubsidized_policies() {
        let p = baseline();
        assert!(matches!(
            subsidy_control(PolicyKind::NoSubsidy, &p, 0.0, 0.0),
            Err(Error::SubsidyUndefined { .. })
        ));
        assert!(matches!(
            subsidy_control(PolicyKind::CustomerP, &p, 0.0, 0.0),
            Err(Error::SubsidyUndefined { .. })
        ));
    }

    #[test]
    fn demand_examples() {
        let p = baseline();
        assert_eq!(demand(&p, 0.0, 0.0, 0.0, 0.0), 18.0);
        let d = demand(
            &p,
            2.794_585_987_261_146_5,
            21.496_815_286_624_204,
            8.168_789_808_917_197,
            0.0,
        );
        assert_relative_eq!(d, 6.520_700_636_942_675, max_relative = 1e-12);
    }

    #[test]
    fn demand_reimbursement_invariance() {
        let p = baseline();
        let base = demand(&p, 2.0, 5.0, 3.0, 0.0);
        let doubled = demand(&p, 4.0, 5.0, 3.0, 0.5);
        assert_relative_eq!(base, doubled, max_relative = 1e-14);
    }

    #[test]
    fn profits_for_degenerate_snapshot() {
        let p = baseline();
        let snap = Snapshot {
            t: 0.0,
            quality: 0.0,
            goodwill: 0.0,
            aggregate: 0.0,
            lambda: 0.0,
            mu: 0.0,
            tech_effort: 0.0,
            blockchain_effort: 0.0,
            ad_effort: 0.0,
            wholesale_price: 0.0,
            retail_price: 0.0,
            subsidy: SubsidyControl::None,
            demand: p.alpha,
            government_profit: 0.0,
            manufacturer_profit: 0.0,
            retailer_profit: 0.0,
        };
        let rates = profit_rates(PolicyKind::NoSubsidy, &p, &snap).unwrap();
        assert_eq!(rates.government, p.eta * p.alpha);
        assert_eq!(rates.manufacturer, 0.0);
        assert_eq!(rates.retailer, 0.0);
    }

    #[test]
    fn profit_policy_mismatch_rejected() {
        let p = baseline();
        let snap = Snapshot {
            t: 0.0,
            quality: 0.0,
            goodwill: 0.0,
            aggregate: 0.0,
            lambda: 0.0,
            mu: 0.0,
            tech_effort: 0.0,
            blockchain_effort: 0.0,
            ad_effort: 0.0,
            wholesale_price: 0.0,
            retail_price: 0.0,
            subsidy: SubsidyControl::None,
            demand: 0.0,
            government_profit: 0.0,
            manufacturer_profit: 0.0,
            retailer_profit: 0.0,
        };
        assert!(matches!(
            profit_rates(PolicyKind::ManufacturerQ, &p, &snap),
            Err(Error::PolicyMismatch { .. })
        ));
    }
}
