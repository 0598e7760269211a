//! Effect of switching the blockchain channel on in the no-subsidy model:
//! pointwise comparison against the same parameters with `theta2 = 0`, and
//! the time at which the manufacturer's profit rate overtakes its
//! blockchain-free counterpart.

use super::Quantity;
use crate::params::{Error, ModelParams, PolicyKind, Result};
use crate::trajectory::{trajectory, ClosedFormPath, TimeSeries};

/// Pointwise verdict for one quantity over the positive grid times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseComparison {
    pub quantity: Quantity,
    /// Strictly larger with blockchain at every grid time `t > 0`.
    pub strictly_larger: bool,
    /// Smallest difference over the positive grid times.
    pub min_difference: f64,
}

/// Comparison of the no-subsidy equilibrium with and without the blockchain
/// channel.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockchainImpact {
    pub with_blockchain: TimeSeries,
    pub without_blockchain: TimeSeries,
    /// q, b, a, Q, G, D, omega, p over the positive grid times.
    pub comparisons: Vec<PointwiseComparison>,
    /// Time after which the manufacturer's profit rate stays above the
    /// blockchain-free one: zero when it never falls below, `None` when it
    /// never recovers within the grid.
    pub profit_crossover: Option<f64>,
}

const COMPARED: [Quantity; 8] = [
    Quantity::TechEffort,
    Quantity::BlockchainEffort,
    Quantity::AdEffort,
    Quantity::Quality,
    Quantity::Goodwill,
    Quantity::Demand,
    Quantity::Wholesale,
    Quantity::Retail,
];

/// Compares the no-subsidy equilibrium of `params` (which must have
/// `theta2 > 0`) against the same parameters with the blockchain channel off.
pub fn blockchain_impact(params: &ModelParams, grid: &[f64]) -> Result<BlockchainImpact> {
    if !(params.theta2 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "theta2",
            requirement: "positive for a blockchain comparison",
            value: params.theta2,
        });
    }
    let off = ModelParams {
        theta2: 0.0,
        ..*params
    };
    let with_blockchain = trajectory(PolicyKind::NoSubsidy, params, grid)?;
    let without_blockchain = trajectory(PolicyKind::NoSubsidy, &off, grid)?;

    let comparisons = COMPARED
        .iter()
        .map(|&quantity| {
            let mut strictly_larger = true;
            let mut min_difference = f64::INFINITY;
            for (on, out) in with_blockchain
                .snapshots
                .iter()
                .zip(&without_blockchain.snapshots)
                .skip(1)
            {
                let diff = quantity.of(on) - quantity.of(out);
                strictly_larger &= diff > 0.0;
                min_difference = min_difference.min(diff);
            }
            PointwiseComparison {
                quantity,
                strictly_larger,
                min_difference,
            }
        })
        .collect();

    // locate the last time the profit gap is still negative, then bisect the
    // underlying closed forms inside that bracket (grid-independent result)
    let gap_series: Vec<f64> = with_blockchain
        .snapshots
        .iter()
        .zip(&without_blockchain.snapshots)
        .map(|(on, out)| on.manufacturer_profit - out.manufacturer_profit)
        .collect();
    let last_negative = gap_series.iter().rposition(|&g| g < 0.0);
    let profit_crossover = match last_negative {
        None => Some(0.0),
        Some(i) if i + 1 >= gap_series.len() => None,
        Some(i) => {
            let on_path = ClosedFormPath::new(PolicyKind::NoSubsidy, params)?;
            let off_path = ClosedFormPath::new(PolicyKind::NoSubsidy, &off)?;
            let gap_at = |t: f64| -> Result<f64> {
                Ok(on_path.snapshot(t)?.manufacturer_profit
                    - off_path.snapshot(t)?.manufacturer_profit)
            };
            let (mut lo, mut hi) = (
                with_blockchain.snapshots[i].t,
                with_blockchain.snapshots[i + 1].t,
            );
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if gap_at(mid)? < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some(0.5 * (lo + hi))
        }
    };

    Ok(BlockchainImpact {
        with_blockchain,
        without_blockchain,
        comparisons,
        profit_crossover,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::uniform_grid;

    #[test]
    fn all_eight_quantities_strictly_larger() {
        let p = ModelParams::baseline();
        let grid = uniform_grid(100.0, 501).unwrap();
        let impact = blockchain_impact(&p, &grid).unwrap();
        for c in &impact.comparisons {
            assert!(c.strictly_larger, "{} not strictly larger", c.quantity);
            assert!(c.min_difference > 0.0);
        }
    }

    #[test]
    fn finite_profit_crossover_at_baseline() {
        let p = ModelParams::baseline();
        let grid = uniform_grid(100.0, 501).unwrap();
        let impact = blockchain_impact(&p, &grid).unwrap();
        let crossover = impact.profit_crossover.expect("crossover exists");
        // early costs make the gap negative, later gains positive
        assert!(crossover > 0.0 && crossover < 100.0);
        let base = &impact.with_blockchain.snapshots[1];
        let off = &impact.without_blockchain.snapshots[1];
        assert!(base.manufacturer_profit < off.manufacturer_profit);
    }

    #[test]
    fn crossover_stable_under_grid_refinement() {
        let p = ModelParams::baseline();
        let coarse = blockchain_impact(&p, &uniform_grid(100.0, 501).unwrap()).unwrap();
        let fine = blockchain_impact(&p, &uniform_grid(100.0, 2001).unwrap()).unwrap();
        let (a, b) = (
            coarse.profit_crossover.unwrap(),
            fine.profit_crossover.unwrap(),
        );
        assert!((a - b).abs() / a < 0.01, "coarse {a} vs fine {b}");
    }

    #[test]
    fn blockchain_effort_rises_with_its_effect() {
        let grid = uniform_grid(60.0, 121).unwrap();
        let mut previous: Option<TimeSeries> = None;
        for theta2 in [0.3, 0.5, 0.7] {
            let p = ModelParams {
                theta2,
                ..ModelParams::baseline()
            };
            let ts = trajectory(PolicyKind::NoSubsidy, &p, &grid).unwrap();
            if let Some(prev) = &previous {
                for (hi, lo) in ts.snapshots.iter().zip(&prev.snapshots).skip(1) {
                    assert!(hi.blockchain_effort > lo.blockchain_effort);
                }
            }
            previous = Some(ts);
        }
    }

    #[test]
    fn requires_active_blockchain_channel() {
        let p = ModelParams {
            theta2: 0.0,
            ..ModelParams::baseline()
        };
        let grid = uniform_grid(10.0, 11).unwrap();
        assert!(matches!(
            blockchain_impact(&p, &grid),
            Err(Error::InvalidParameter { name: "theta2", .. })
        ));
    }
}
