//! Model parameters, subsidy policy selection, and feasibility checks.
//!
//! The whole engine is driven by the ten scalars in [`ModelParams`]. Everything
//! downstream (closed forms, saddle paths, the numerical oracle) assumes the
//! stability condition `8*beta*delta*(r + delta) > Delta`, where `Delta` is the
//! combined strength of the effort channels; [`validate`] checks it together
//! with the interior-subsidy conditions of the two manufacturer policies.

use thiserror::Error;

/// Government intervention scheme for the vaccine supply chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    /// No subsidy: manufacturer and retailer interact on their own.
    NoSubsidy,
    /// Proportional subsidy of the manufacturer's technology investment cost
    /// (policy T).
    ManufacturerQ,
    /// Per-dose payment to the manufacturer based on sales volume (policy S).
    ManufacturerD,
    /// Proportional reimbursement of the retail price to vaccine recipients.
    /// Neutralised by price responses; shares the no-subsidy dynamics.
    CustomerP,
}

impl PolicyKind {
    /// All four policies.
    pub const ALL: [PolicyKind; 4] = [
        PolicyKind::NoSubsidy,
        PolicyKind::ManufacturerQ,
        PolicyKind::ManufacturerD,
        PolicyKind::CustomerP,
    ];

    /// The three policies with their own closed-form equilibrium dynamics.
    pub const DYNAMIC: [PolicyKind; 3] = [
        PolicyKind::NoSubsidy,
        PolicyKind::ManufacturerQ,
        PolicyKind::ManufacturerD,
    ];

    /// Stable identifier used by the CLI and in file names.
    pub fn label(&self) -> &'static str {
        match self {
            PolicyKind::NoSubsidy => "none",
            PolicyKind::ManufacturerQ => "manu-q",
            PolicyKind::ManufacturerD => "manu-d",
            PolicyKind::CustomerP => "customer-p",
        }
    }

    pub fn from_label(label: &str) -> Option<PolicyKind> {
        PolicyKind::ALL.iter().copied().find(|p| p.label() == label)
    }
}

impl std::fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Error type shared by the whole engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parameter `{name}` must be {requirement} (got {value})")]
    InvalidParameter {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error(
        "stability condition 8*beta*delta*(r+delta) > Delta violated: \
         {lhs} <= {delta_aggregate}"
    )]
    Unstable { lhs: f64, delta_aggregate: f64 },
    #[error(
        "{policy}: subsidy leaves the interior regime in the long run; \
         requires eta >= {threshold} (eta = {eta})"
    )]
    NotInterior {
        policy: PolicyKind,
        eta: f64,
        threshold: f64,
    },
    #[error("{policy}: subsidy clamps to zero (boundary regime is not modeled): {detail}")]
    BoundaryRegime { policy: PolicyKind, detail: String },
    #[error("costates must be nonnegative (lambda = {lambda}, mu = {mu})")]
    NegativeCostate { lambda: f64, mu: f64 },
    #[error(
        "initial costate would be negative (lambda(0) = {lambda0}); \
         equilibrium efforts would leave their admissible range"
    )]
    NegativeInitialCostate { lambda0: f64 },
    #[error("reduced system has non-real eigenvalues (discriminant {discriminant}); stability violated")]
    NonRealEigenvalues { discriminant: f64 },
    #[error("subsidy control is undefined for policy {policy}")]
    SubsidyUndefined { policy: PolicyKind },
    #[error("snapshot does not belong to policy {policy}: subsidy field is {found}")]
    PolicyMismatch {
        policy: PolicyKind,
        found: &'static str,
    },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("`{name}` must be a fraction in [0, 1) (got {value})")]
    InvalidFraction { name: &'static str, value: f64 },
    #[error("profit series is empty")]
    EmptySeries,
    #[error("series grid is not uniform at index {index}")]
    NonUniformGrid { index: usize },
    #[error(
        "horizon {horizon} too short for tail extrapolation: \
         exp(-r*horizon) = {tail} >= tolerance {tolerance}"
    )]
    HorizonTooShort {
        horizon: f64,
        tail: f64,
        tolerance: f64,
    },
    #[error("oracle config `{name}` must be {requirement} (got {value})")]
    InvalidConfig {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error(
        "forward-backward sweep did not converge after {iterations} iterations \
         (last residual {residual}); residual history: {history:?}"
    )]
    NonConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
    #[error(
        "no sign change in bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
    )]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("inconsistent comparison signs: {0}")]
    SignConflict(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// The ten model scalars. Field names follow the conventional symbols of the
/// demand/goodwill literature so that config files and CSV headers can use
/// them verbatim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Market capacity (doses per unit time).
    pub alpha: f64,
    /// Price sensitivity of customers (doses per unit time per currency).
    pub beta: f64,
    /// Effect of the technology effort on the quality level.
    pub theta1: f64,
    /// Effect of the blockchain effort on the goodwill level.
    pub theta2: f64,
    /// Effect of the advertising effort on the goodwill level.
    pub theta3: f64,
    /// Effect of the quality level on sales volume.
    pub gamma1: f64,
    /// Effect of the goodwill level on sales volume.
    pub gamma2: f64,
    /// Government marginal sales revenue (currency per dose).
    pub eta: f64,
    /// Common natural decay rate of quality and goodwill (1/time).
    pub delta: f64,
    /// Continuous-time discount rate (1/time).
    pub r: f64,
}

impl ModelParams {
    /// Baseline parameter set used throughout the numerical experiments.
    pub fn baseline() -> ModelParams {
        ModelParams {
            alpha: 18.0,
            beta: 7.0,
            theta1: 1.0,
            theta2: 0.5,
            theta3: 0.8,
            gamma1: 0.3,
            gamma2: 0.2,
            eta: 7.0,
            delta: 0.1,
            r: 0.03,
        }
    }

    /// Sum of discount and decay rates, `r + delta`.
    pub fn discount_decay(&self) -> f64 {
        self.r + self.delta
    }

    /// Combined effort-channel strength
    /// `Delta = 2*theta1^2*gamma1^2 + (2*theta2^2 + theta3^2)*gamma2^2`.
    pub fn delta_aggregate(&self) -> f64 {
        2.0 * self.theta1 * self.theta1 * self.gamma1 * self.gamma1
            + (2.0 * self.theta2 * self.theta2 + self.theta3 * self.theta3)
                * self.gamma2
                * self.gamma2
    }

    /// Left-hand side of the stability condition, `8*beta*delta*(r+delta)`.
    pub fn stability_lhs(&self) -> f64 {
        8.0 * self.beta * self.delta * self.discount_decay()
    }

    /// Whether the saddle-path stability condition holds.
    pub fn is_stable(&self) -> bool {
        self.stability_lhs() > self.delta_aggregate()
    }

    /// Lower bound on `eta` for the subsidy of the given policy to stay
    /// positive forever. `None` for policies without their own subsidy control.
    pub fn interior_threshold(&self, policy: PolicyKind) -> Option<f64> {
        let rd = self.discount_decay();
        match policy {
            PolicyKind::ManufacturerQ => {
                Some(4.0 * self.alpha * self.delta * rd / (self.stability_lhs() - self.delta_aggregate()))
            }
            PolicyKind::ManufacturerD => Some(
                16.0 * self.alpha * self.delta * rd
                    / (16.0 * self.beta * self.delta * rd - self.delta_aggregate()),
            ),
            _ => None,
        }
    }

    /// Checks finiteness and sign constraints of every field, naming the
    /// offending symbol on failure.
    pub fn check_fields(&self) -> Result<()> {
        let positive = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("delta", self.delta),
            ("r", self.r),
        ];
        for (name, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    requirement: "finite and positive",
                    value,
                });
            }
        }
        let nonnegative = [
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("theta3", self.theta3),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("eta", self.eta),
        ];
        for (name, value) in nonnegative {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    requirement: "finite and nonnegative",
                    value,
                });
            }
        }
        Ok(())
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams::baseline()
    }
}

/// Outcome of an interior-regime check for a subsidized policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorCheck {
    /// Minimal `eta` keeping the subsidy positive on the whole path.
    pub threshold: f64,
    pub ok: bool,
}

/// Feasibility diagnosis for a parameter set under a given policy.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub delta_aggregate: f64,
    /// `8*beta*delta*(r+delta)`, compared against `delta_aggregate`.
    pub stability_lhs: f64,
    pub stability_ok: bool,
    /// Present only when validating the ManufacturerQ policy.
    pub interior_t: Option<InteriorCheck>,
    /// Present only when validating the ManufacturerD policy.
    pub interior_s: Option<InteriorCheck>,
    pub messages: Vec<String>,
}

impl FeasibilityReport {
    /// True when stability and any applicable interior condition hold.
    pub fn all_ok(&self) -> bool {
        self.stability_ok
            && self.interior_t.map_or(true, |c| c.ok)
            && self.interior_s.map_or(true, |c| c.ok)
    }
}

/// Diagnoses the parameter set for the given policy.
///
/// Field-level violations (non-finite or wrongly signed scalars) are returned
/// as errors naming the offending symbol; stability and interior findings are
/// reported through the flags.
pub fn validate(params: &ModelParams, policy: PolicyKind) -> Result<FeasibilityReport> {
    params.check_fields()?;
    let delta_aggregate = params.delta_aggregate();
    let stability_lhs = params.stability_lhs();
    let stability_ok = stability_lhs > delta_aggregate;

    let mut messages = Vec::new();
    if stability_ok {
        messages.push(format!(
            "stability: 8*beta*delta*(r+delta) = {stability_lhs} > Delta = {delta_aggregate}"
        ));
    } else {
        messages.push(format!(
            "stability violated: 8*beta*delta*(r+delta) = {stability_lhs} <= Delta = {delta_aggregate}"
        ));
    }

    let mut interior = |policy_kind: PolicyKind, label: &str| -> Option<InteriorCheck> {
        if policy != policy_kind {
            return None;
        }
        let threshold = params.interior_threshold(policy_kind)?;
        // A nonpositive denominator above shows up as a nonpositive or
        // non-finite threshold; only meaningful under stability.
        let ok = stability_ok && threshold.is_finite() && params.eta >= threshold;
        if stability_ok {
            messages.push(format!(
                "interior ({label}): eta = {} vs threshold {threshold} -> {}",
                params.eta,
                if ok { "ok" } else { "violated" }
            ));
        } else {
            messages.push(format!(
                "interior ({label}): not evaluable while stability is violated"
            ));
        }
        Some(InteriorCheck { threshold, ok })
    };
    let interior_t = interior(PolicyKind::ManufacturerQ, "manu-q");
    let interior_s = interior(PolicyKind::ManufacturerD, "manu-d");

    Ok(FeasibilityReport {
        delta_aggregate,
        stability_lhs,
        stability_ok,
        interior_t,
        interior_s,
        messages,
    })
}

/// Like [`validate`] but turns a failed stability or interior check into an
/// error. Used as the precondition gate by the equilibrium constructors.
pub fn require_feasible(params: &ModelParams, policy: PolicyKind) -> Result<FeasibilityReport> {
    let report = validate(params, policy)?;
    if !report.stability_ok {
        return Err(Error::Unstable {
            lhs: report.stability_lhs,
            delta_aggregate: report.delta_aggregate,
        });
    }
    for check in [report.interior_t, report.interior_s].into_iter().flatten() {
        if !check.ok {
            return Err(Error::NotInterior {
                policy,
                eta: params.eta,
                threshold: check.threshold,
            });
        }
    }
    Ok(report)
}
