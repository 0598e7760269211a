//! Executable ledger of the comparative-statics propositions: each checkable
//! inequality is evaluated numerically, with its precondition (when the
//! statement has one) evaluated and reported first. The suite never fails as
//! a whole; checks whose equilibria are unavailable are reported as skipped.

use crate::closures::Snapshot;
use crate::params::{ModelParams, PolicyKind};
use crate::saddle::{saddle_path, steady_state};
use crate::trajectory::ClosedFormPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropStatus {
    Pass,
    Fail,
    /// Precondition not met, or a required equilibrium was not computable.
    Skipped,
}

impl std::fmt::Display for PropStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PropStatus::Pass => "pass",
            PropStatus::Fail => "fail",
            PropStatus::Skipped => "skipped",
        })
    }
}

/// An explicitly evaluated precondition.
#[derive(Debug, Clone, PartialEq)]
pub struct Precondition {
    pub description: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// One proposition check.
#[derive(Debug, Clone, PartialEq)]
pub struct PropositionCheck {
    /// Proposition number, e.g. "9(1)".
    pub id: &'static str,
    pub claim: &'static str,
    pub precondition: Option<Precondition>,
    /// Named quantities entering the inequality.
    pub values: Vec<(String, f64)>,
    pub inequality_holds: bool,
    pub status: PropStatus,
    /// Why the check was skipped, when it was.
    pub skip_reason: Option<String>,
}

/// The evaluated suite.
#[derive(Debug, Clone, PartialEq)]
pub struct PropositionLedger {
    /// Early evaluation time used by the initial-ordering checks.
    pub tau: f64,
    pub checks: Vec<PropositionCheck>,
}

impl PropositionLedger {
    pub fn all_passed_or_skipped(&self) -> bool {
        self.checks.iter().all(|c| c.status != PropStatus::Fail)
    }

    pub fn check(&self, id: &str) -> Option<&PropositionCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

// non-strict comparisons get a tiny relative slack for roundoff
fn ge(lhs: f64, rhs: f64) -> bool {
    lhs >= rhs - 1e-12 * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Steady and early snapshots of one policy, when the equilibrium exists.
struct PolicyEval {
    steady: Result<Snapshot, String>,
    early: Result<Snapshot, String>,
}

fn evaluate(policy: PolicyKind, params: &ModelParams, tau: f64) -> PolicyEval {
    PolicyEval {
        steady: steady_state(policy, params)
            .map(|s| s.snapshot)
            .map_err(|e| e.to_string()),
        early: ClosedFormPath::new(policy, params)
            .and_then(|p| p.snapshot(tau))
            .map_err(|e| e.to_string()),
    }
}

struct Builder {
    checks: Vec<PropositionCheck>,
}

impl Builder {
    /// Pushes a check whose inputs may be unavailable: `sources` lists the
    /// snapshots the inequality needs; any missing one skips the check.
    fn push(
        &mut self,
        id: &'static str,
        claim: &'static str,
        precondition: Option<Precondition>,
        sources: &[&Result<Snapshot, String>],
        build: impl FnOnce(&[&Snapshot]) -> (Vec<(String, f64)>, bool),
    ) {
        if let Some(missing) = sources.iter().find_map(|s| s.as_ref().err()) {
            self.checks.push(PropositionCheck {
                id,
                claim,
                precondition,
                values: Vec::new(),
                inequality_holds: false,
                status: PropStatus::Skipped,
                skip_reason: Some(missing.clone()),
            });
            return;
        }
        let snaps: Vec<&Snapshot> = sources.iter().map(|s| s.as_ref().unwrap()).collect();
        let (values, inequality_holds) = build(&snaps);
        let status = match &precondition {
            Some(pre) if !pre.holds => PropStatus::Skipped,
            _ => {
                if inequality_holds {
                    PropStatus::Pass
                } else {
                    PropStatus::Fail
                }
            }
        };
        self.checks.push(PropositionCheck {
            id,
            claim,
            precondition,
            values,
            inequality_holds,
            status,
            skip_reason: None,
        });
    }
}

/// Evaluates every checkable proposition at the given parameters.
///
/// Early-time orderings use the operational small time
/// `min(0.1, 1/(10 max|k|))` over the available policies. The "eta
/// sufficiently large" wording of the per-dose dominance statements is
/// operationalized as twice the demand-dominance threshold.
pub fn proposition_suite(params: &ModelParams) -> PropositionLedger {
    let mut fastest: f64 = 0.0;
    for policy in PolicyKind::DYNAMIC {
        if let Ok(sp) = saddle_path(policy, params) {
            fastest = fastest.max(sp.stable_rate.abs());
        }
    }
    let tau = if fastest > 0.0 {
        (1.0 / (10.0 * fastest)).min(0.1)
    } else {
        0.1
    };

    let base = evaluate(PolicyKind::NoSubsidy, params, tau);
    let tech = evaluate(PolicyKind::ManufacturerQ, params, tau);
    let dose = evaluate(PolicyKind::ManufacturerD, params, tau);

    let rd = params.discount_decay();
    let delta_aggregate = params.delta_aggregate();
    let stability_lhs = params.stability_lhs();
    // demand-dominance threshold on eta for the per-dose policy
    let eta_threshold_demand = params.alpha
        * (16.0 * params.beta * params.delta * rd + delta_aggregate)
        / (2.0 * params.beta * (stability_lhs - delta_aggregate));
    let eta_large = 2.0 * eta_threshold_demand;
    let eta_large_precondition = |claim: &str| Precondition {
        description: format!(
            "eta >= {eta_large} (twice the demand-dominance threshold; operational reading of \
             'eta sufficiently large' for {claim})"
        ),
        lhs: params.eta,
        rhs: eta_large,
        holds: params.eta >= eta_large,
    };

    let mut b = Builder { checks: Vec::new() };

    b.push(
        "9(1)",
        "long-run government profit: tech-share >= no subsidy",
        None,
        &[&tech.steady, &base.steady],
        |s| {
            (
                vec![
                    ("pi_G^T(inf)".into(), s[0].government_profit),
                    ("pi_G^*(inf)".into(), s[1].government_profit),
                ],
                ge(s[0].government_profit, s[1].government_profit),
            )
        },
    );
    b.push(
        "9(2)",
        "long-run government profit: per-dose > no subsidy",
        Some(eta_large_precondition("per-dose government dominance")),
        &[&dose.steady, &base.steady],
        |s| {
            (
                vec![
                    ("pi_G^S(inf)".into(), s[0].government_profit),
                    ("pi_G^*(inf)".into(), s[1].government_profit),
                ],
                s[0].government_profit > s[1].government_profit,
            )
        },
    );
    b.push(
        "10(1)",
        "long-run manufacturer profit: tech-share >= no subsidy",
        None,
        &[&tech.steady, &base.steady],
        |s| {
            (
                vec![
                    ("pi_M^T(inf)".into(), s[0].manufacturer_profit),
                    ("pi_M^*(inf)".into(), s[1].manufacturer_profit),
                ],
                ge(s[0].manufacturer_profit, s[1].manufacturer_profit),
            )
        },
    );
    b.push(
        "10(2)",
        "long-run manufacturer profit: per-dose > no subsidy",
        Some(eta_large_precondition("per-dose manufacturer dominance")),
        &[&dose.steady, &base.steady],
        |s| {
            (
                vec![
                    ("pi_M^S(inf)".into(), s[0].manufacturer_profit),
                    ("pi_M^*(inf)".into(), s[1].manufacturer_profit),
                ],
                s[0].manufacturer_profit > s[1].manufacturer_profit,
            )
        },
    );
    b.push(
        "11(1)",
        "long-run efforts: tech-share >= no subsidy (q, b, a)",
        None,
        &[&tech.steady, &base.steady],
        |s| {
            (
                vec![
                    ("q^T(inf)".into(), s[0].tech_effort),
                    ("q^*(inf)".into(), s[1].tech_effort),
                    ("b^T(inf)".into(), s[0].blockchain_effort),
                    ("b^*(inf)".into(), s[1].blockchain_effort),
                    ("a^T(inf)".into(), s[0].ad_effort),
                    ("a^*(inf)".into(), s[1].ad_effort),
                ],
                ge(s[0].tech_effort, s[1].tech_effort)
                    && ge(s[0].blockchain_effort, s[1].blockchain_effort)
                    && ge(s[0].ad_effort, s[1].ad_effort),
            )
        },
    );
    b.push(
        "11(2)",
        "long-run technology effort: tech-share > per-dose",
        None,
        &[&tech.steady, &dose.steady],
        |s| {
            (
                vec![
                    ("q^T(inf)".into(), s[0].tech_effort),
                    ("q^S(inf)".into(), s[1].tech_effort),
                ],
                s[0].tech_effort > s[1].tech_effort,
            )
        },
    );
    b.push(
        "12(1)",
        "long-run aggregate level: tech-share >= no subsidy",
        None,
        &[&tech.steady, &base.steady],
        |s| {
            (
                vec![
                    ("A^T(inf)".into(), s[0].aggregate),
                    ("A^*(inf)".into(), s[1].aggregate),
                ],
                ge(s[0].aggregate, s[1].aggregate),
            )
        },
    );
    {
        let n = delta_aggregate / stability_lhs;
        let lhs = (6.0 - n) / (1.0 - n);
        let g1t1_sq = params.gamma1 * params.gamma1 * params.theta1 * params.theta1;
        let rhs = params.gamma2
            * params.gamma2
            * (2.0 * params.theta2 * params.theta2 + params.theta3 * params.theta3)
            / g1t1_sq;
        b.push(
            "12(2)",
            "long-run aggregate level: tech-share > per-dose",
            Some(Precondition {
                description: format!(
                    "(6-n)/(1-n) > gamma2^2(2 theta2^2 + theta3^2)/(gamma1 theta1)^2 \
                     with n = Delta/(8 beta delta (r+delta)) = {n}"
                ),
                lhs,
                rhs,
                holds: lhs.is_finite() && rhs.is_finite() && lhs > rhs,
            }),
            &[&tech.steady, &dose.steady],
            |s| {
                (
                    vec![
                        ("A^T(inf)".into(), s[0].aggregate),
                        ("A^S(inf)".into(), s[1].aggregate),
                    ],
                    s[0].aggregate > s[1].aggregate,
                )
            },
        );
    }
    b.push(
        "13(1)",
        "early prices: per-dose < no subsidy < tech-share (p and omega)",
        None,
        &[&dose.early, &base.early, &tech.early],
        |s| {
            (
                vec![
                    ("p^S(tau)".into(), s[0].retail_price),
                    ("p^*(tau)".into(), s[1].retail_price),
                    ("p^T(tau)".into(), s[2].retail_price),
                    ("omega^S(tau)".into(), s[0].wholesale_price),
                    ("omega^*(tau)".into(), s[1].wholesale_price),
                    ("omega^T(tau)".into(), s[2].wholesale_price),
                ],
                s[0].retail_price < s[1].retail_price
                    && s[1].retail_price < s[2].retail_price
                    && s[0].wholesale_price < s[1].wholesale_price
                    && s[1].wholesale_price < s[2].wholesale_price,
            )
        },
    );
    b.push(
        "13(2)",
        "long-run prices: per-dose < no subsidy <= tech-share (p and omega)",
        None,
        &[&dose.steady, &base.steady, &tech.steady],
        |s| {
            (
                vec![
                    ("p^S(inf)".into(), s[0].retail_price),
                    ("p^*(inf)".into(), s[1].retail_price),
                    ("p^T(inf)".into(), s[2].retail_price),
                    ("omega^S(inf)".into(), s[0].wholesale_price),
                    ("omega^*(inf)".into(), s[1].wholesale_price),
                    ("omega^T(inf)".into(), s[2].wholesale_price),
                ],
                s[0].retail_price < s[1].retail_price
                    && ge(s[2].retail_price, s[1].retail_price)
                    && s[0].wholesale_price < s[1].wholesale_price
                    && ge(s[2].wholesale_price, s[1].wholesale_price),
            )
        },
    );
    b.push(
        "14(1)",
        "early sales: per-dose > tech-share > no subsidy",
        None,
        &[&dose.early, &tech.early, &base.early],
        |s| {
            (
                vec![
                    ("D^S(tau)".into(), s[0].demand),
                    ("D^T(tau)".into(), s[1].demand),
                    ("D^*(tau)".into(), s[2].demand),
                ],
                s[0].demand > s[1].demand && s[1].demand > s[2].demand,
            )
        },
    );
    b.push(
        "14(2)",
        "long-run sales: tech-share >= no subsidy",
        None,
        &[&tech.steady, &base.steady],
        |s| {
            (
                vec![
                    ("D^T(inf)".into(), s[0].demand),
                    ("D^*(inf)".into(), s[1].demand),
                ],
                ge(s[0].demand, s[1].demand),
            )
        },
    );
    b.push(
        "14(3)",
        "long-run sales: per-dose > no subsidy",
        Some(Precondition {
            description: format!(
                "eta > alpha(16 beta delta (r+delta) + Delta) / \
                 (2 beta (8 beta delta (r+delta) - Delta)) = {eta_threshold_demand}"
            ),
            lhs: params.eta,
            rhs: eta_threshold_demand,
            holds: params.eta > eta_threshold_demand,
        }),
        &[&dose.steady, &base.steady],
        |s| {
            (
                vec![
                    ("D^S(inf)".into(), s[0].demand),
                    ("D^*(inf)".into(), s[1].demand),
                ],
                s[0].demand > s[1].demand,
            )
        },
    );

    PropositionLedger {
        tau,
        checks: b.checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn baseline_suite_passes_everything_applicable() {
        let p = ModelParams::baseline();
        let ledger = proposition_suite(&p);
        assert!(ledger.all_passed_or_skipped());
        for id in [
            "9(1)",
            "10(1)",
            "11(1)",
            "11(2)",
            "12(1)",
            "12(2)",
            "13(1)",
            "13(2)",
            "14(1)",
            "14(2)",
            "14(3)",
        ] {
            let check = ledger.check(id).unwrap();
            assert_eq!(check.status, PropStatus::Pass, "{id}: {check:?}");
        }
    }

    #[test]
    fn baseline_efforts_gap_11_2() {
        let p = ModelParams::baseline();
        let ledger = proposition_suite(&p);
        let check = ledger.check("11(2)").unwrap();
        let q_t = check.values[0].1;
        let q_s = check.values[1].1;
        assert_relative_eq!(q_t, 5.563_548_537_890_199, max_relative = 1e-9);
        assert_relative_eq!(q_s, 1.496_426_444_312_090_5, max_relative = 1e-9);
    }

    #[test]
    fn precondition_12_2_values() {
        let p = ModelParams::baseline();
        let ledger = proposition_suite(&p);
        let pre = ledger.check("12(2)").unwrap().precondition.clone().unwrap();
        assert!(pre.holds);
        assert_relative_eq!(pre.lhs, 8.245_222_929_936, max_relative = 1e-9);
        assert_relative_eq!(pre.rhs, 0.506_666_666_666_666_6, max_relative = 1e-9);
        let check = ledger.check("12(2)").unwrap();
        assert_relative_eq!(check.values[0].1, 19.008_777_852_802_16, max_relative = 1e-9);
        assert_relative_eq!(check.values[1].1, 5.626_563_430_613_460_4, max_relative = 1e-9);
    }

    #[test]
    fn precondition_14_3_threshold() {
        let p = ModelParams::baseline();
        let ledger = proposition_suite(&p);
        let pre = ledger.check("14(3)").unwrap().precondition.clone().unwrap();
        assert!(pre.holds);
        assert_relative_eq!(pre.rhs, 4.303_457_688_81, max_relative = 1e-9);
    }

    #[test]
    fn eta_large_checks_skip_at_baseline() {
        // baseline eta = 7 is below twice the demand threshold (~8.61), so the
        // 'sufficiently large' statements are reported as skipped
        let p = ModelParams::baseline();
        let ledger = proposition_suite(&p);
        for id in ["9(2)", "10(2)"] {
            let check = ledger.check(id).unwrap();
            assert_eq!(check.status, PropStatus::Skipped);
            // the raw inequality actually holds at baseline
            assert!(check.inequality_holds);
        }
        // and passes outright once eta clears the operational bar
        let p_large = ModelParams {
            eta: 9.0,
            ..ModelParams::baseline()
        };
        let ledger = proposition_suite(&p_large);
        assert_eq!(ledger.check("9(2)").unwrap().status, PropStatus::Pass);
        assert_eq!(ledger.check("10(2)").unwrap().status, PropStatus::Pass);
    }

    #[test]
    fn infeasible_per_dose_policy_skips_its_checks() {
        // eta below the per-dose interior threshold: checks touching the
        // per-dose equilibrium are skipped with a reason, the rest still run
        let p = ModelParams {
            eta: 2.5,
            ..ModelParams::baseline()
        };
        let ledger = proposition_suite(&p);
        let skipped = ledger.check("11(2)").unwrap();
        assert_eq!(skipped.status, PropStatus::Skipped);
        assert!(skipped.skip_reason.as_deref().unwrap().contains("interior"));
        assert_eq!(ledger.check("9(1)").unwrap().status, PropStatus::Pass);
        assert_eq!(ledger.check("14(2)").unwrap().status, PropStatus::Pass);
    }
}
