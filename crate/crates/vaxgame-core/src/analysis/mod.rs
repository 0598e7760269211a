//! Cross-policy comparison, parameter sweeps, threshold location, blockchain
//! impact, and the executable proposition suite.

mod blockchain;
mod compare;
mod props;
mod sweep;
mod threshold;

pub use blockchain::{blockchain_impact, BlockchainImpact, PointwiseComparison};
pub use compare::{
    compare_policies, default_tau, ComparisonEntry, ComparisonTable, Orderings, Sign,
    Table5Pattern,
};
pub use props::{
    proposition_suite, Precondition, PropStatus, PropositionCheck, PropositionLedger,
};
pub use sweep::{sweep, Direction, ParamName, SweepOutcome, SweepPoint, SweepResult};
pub use threshold::{find_beta_crossing, ProfitParty, ThresholdResult};

use crate::closures::Snapshot;

/// A named snapshot quantity, used for comparisons and sweep verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    TechEffort,
    BlockchainEffort,
    AdEffort,
    Quality,
    Goodwill,
    Aggregate,
    Wholesale,
    Retail,
    Demand,
    Subsidy,
    GovProfit,
    ManProfit,
    RetProfit,
}

impl Quantity {
    pub const ALL: [Quantity; 13] = [
        Quantity::TechEffort,
        Quantity::BlockchainEffort,
        Quantity::AdEffort,
        Quantity::Quality,
        Quantity::Goodwill,
        Quantity::Aggregate,
        Quantity::Wholesale,
        Quantity::Retail,
        Quantity::Demand,
        Quantity::Subsidy,
        Quantity::GovProfit,
        Quantity::ManProfit,
        Quantity::RetProfit,
    ];

    /// Column label, matching the trajectory CSV schema.
    pub fn label(&self) -> &'static str {
        match self {
            Quantity::TechEffort => "q",
            Quantity::BlockchainEffort => "b",
            Quantity::AdEffort => "a",
            Quantity::Quality => "Q",
            Quantity::Goodwill => "G",
            Quantity::Aggregate => "A",
            Quantity::Wholesale => "omega",
            Quantity::Retail => "p",
            Quantity::Demand => "D",
            Quantity::Subsidy => "subsidy",
            Quantity::GovProfit => "pi_G",
            Quantity::ManProfit => "pi_M",
            Quantity::RetProfit => "pi_R",
        }
    }

    /// Reads the quantity out of a snapshot.
    pub fn of(&self, snap: &Snapshot) -> f64 {
        match self {
            Quantity::TechEffort => snap.tech_effort,
            Quantity::BlockchainEffort => snap.blockchain_effort,
            Quantity::AdEffort => snap.ad_effort,
            Quantity::Quality => snap.quality,
            Quantity::Goodwill => snap.goodwill,
            Quantity::Aggregate => snap.aggregate,
            Quantity::Wholesale => snap.wholesale_price,
            Quantity::Retail => snap.retail_price,
            Quantity::Demand => snap.demand,
            Quantity::Subsidy => snap.subsidy.value(),
            Quantity::GovProfit => snap.government_profit,
            Quantity::ManProfit => snap.manufacturer_profit,
            Quantity::RetProfit => snap.retailer_profit,
        }
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Maps items to results in parallel when the `parallel` feature is on,
/// always gathering by index so output order is deterministic.
pub(crate) fn map_indexed<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
