//! Symmetric supply/demand schedules, limit-price assignments and the
//! theoretical market equilibrium.

use crate::error::ScheduleError;
use crate::types::{Price, Side, TraderId};

/// Parameters of the periodic symmetric schedule.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScheduleConfig {
    /// Traders per side.
    pub n: usize,
    pub price_low: Price,
    pub price_high: Price,
    /// Steps between assignment replenishments.
    pub replenish_interval: u32,
    /// Session length in steps.
    pub session_length: u32,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            n: 10,
            price_low: Price::from_currency(0.10),
            price_high: Price::from_currency(1.90),
            replenish_interval: 30,
            session_length: 330,
        }
    }
}

impl ScheduleConfig {
    pub fn validate(&self) -> Result<(), ScheduleError> {
        if self.n < 1 {
            return Err(ScheduleError::InvalidConfig("n must be at least 1".into()));
        }
        if self.n == 1 && self.price_low != self.price_high {
            return Err(ScheduleError::DegenerateSpacing);
        }
        if self.price_low > self.price_high {
            return Err(ScheduleError::InvalidConfig("price_low must not exceed price_high".into()));
        }
        if self.replenish_interval < 1 {
            return Err(ScheduleError::InvalidConfig("replenish_interval must be at least 1".into()));
        }
        if self.session_length < self.replenish_interval {
            return Err(ScheduleError::InvalidConfig(
                "session_length must be at least one replenish interval".into(),
            ));
        }
        Ok(())
    }

    /// Evenly spaced limit prices across `[price_low, price_high]`,
    /// ascending, rounded to the tick grid.
    pub fn limit_prices(&self) -> Result<Vec<Price>, ScheduleError> {
        self.validate()?;
        let lo = f64::from(self.price_low.ticks());
        let hi = f64::from(self.price_high.ticks());
        if self.n == 1 {
            return Ok(vec![self.price_low]);
        }
        let step = (hi - lo) / (self.n as f64 - 1.0);
        Ok((0..self.n)
            .map(|i| Price::from_ticks((lo + step * i as f64).round() as u32))
            .collect())
    }
}

/// An instruction to buy or sell one unit at no worse than `limit`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub trader_id: TraderId,
    pub side: Side,
    pub limit: Price,
    pub issued_step: u32,
}

/// Theoretical equilibrium of a schedule: the intersection of the supply
/// and demand curves.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumInfo {
    /// Price range supporting the equilibrium quantity; `None` when the
    /// curves do not cross.
    pub p0: Option<(Price, Price)>,
    /// Expected quantity transacted.
    pub q0: usize,
}

impl EquilibriumInfo {
    /// Midpoint of the equilibrium price range, in currency units.
    pub fn midpoint(&self) -> Option<f64> {
        self.p0.map(|(lo, hi)| (lo.as_currency() + hi.as_currency()) / 2.0)
    }
}

/// One assignment per trader: buyer `i` and seller `i` hold the `i`-th
/// limit of the evenly spaced schedule. Buyers' and sellers' sorted limits
/// are identical (symmetric schedule).
pub fn generate_symmetric_schedule(config: &ScheduleConfig) -> Result<Vec<Assignment>, ScheduleError> {
    let limits = config.limit_prices()?;
    let mut assignments = Vec::with_capacity(2 * config.n);
    for (i, &limit) in limits.iter().enumerate() {
        assignments.push(Assignment {
            trader_id: TraderId::buyer(i as u16),
            side: Side::Bid,
            limit,
            issued_step: 0,
        });
    }
    for (i, &limit) in limits.iter().enumerate() {
        assignments.push(Assignment {
            trader_id: TraderId::seller(i as u16),
            side: Side::Ask,
            limit,
            issued_step: 0,
        });
    }
    Ok(assignments)
}

/// Computes the equilibrium quantity and price range.
///
/// `q0` is the largest `q` such that the q-th highest buyer limit is at
/// least the q-th lowest seller limit; the price range is then bounded by
/// the q0-th lowest seller limit and the q0-th highest buyer limit.
pub fn theoretical_equilibrium(assignments: &[Assignment]) -> Result<EquilibriumInfo, ScheduleError> {
    let mut buyer_limits: Vec<Price> = assignments
        .iter()
        .filter(|a| a.side == Side::Bid)
        .map(|a| a.limit)
        .collect();
    let mut seller_limits: Vec<Price> = assignments
        .iter()
        .filter(|a| a.side == Side::Ask)
        .map(|a| a.limit)
        .collect();
    if buyer_limits.is_empty() || seller_limits.is_empty() {
        return Err(ScheduleError::EmptySide);
    }
    buyer_limits.sort_unstable_by(|a, b| b.cmp(a)); // descending demand curve
    seller_limits.sort_unstable(); // ascending supply curve

    let mut q0 = 0;
    for q in 1..=buyer_limits.len().min(seller_limits.len()) {
        if buyer_limits[q - 1] >= seller_limits[q - 1] {
            q0 = q;
        } else {
            break;
        }
    }
    let p0 = (q0 > 0).then(|| (seller_limits[q0 - 1], buyer_limits[q0 - 1]));
    Ok(EquilibriumInfo { p0, q0 })
}

/// Steps at which assignments are replenished: `0, interval, 2*interval, ...`
/// strictly below the session length.
pub fn replenishment_steps(config: &ScheduleConfig) -> Vec<u32> {
    (0..config.session_length)
        .step_by(config.replenish_interval as usize)
        .collect()
}
