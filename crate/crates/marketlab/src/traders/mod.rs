//! Trading strategies and the trader contract.
//!
//! Each trader exposes two methods: `get_order`, called when the trader is
//! selected to act, returns an optional quote price for its current
//! assignment; `respond`, called after every market event, updates internal
//! state. GVWY, SHVR and ZIC are stateless and do nothing on `respond`;
//! ZIP and AA adapt an internal profit margin.
//!
//! Every quote obeys the no-loss bound: a buyer never quotes above its
//! limit, a seller never below.

mod aa;
mod zip;

pub use aa::{AaParams, AaState};
pub use zip::{ZipParams, ZipState};

use rand::Rng;

use crate::error::AccountingError;
use crate::exchange::{LobSnapshot, MarketEvent, Trade};
use crate::schedule::Assignment;
use crate::types::{MarketParams, Price, Side, Strategy, TraderId};

/// Rounds a raw tick value to the grid, halves going away from the
/// crossing side: buyers round half-down, sellers half-up.
pub(crate) fn round_quote(side: Side, ticks: f64) -> i64 {
    match side {
        Side::Bid => (ticks - 0.5).ceil() as i64,
        Side::Ask => (ticks + 0.5).floor() as i64,
    }
}

/// Clamps a rounded quote to the no-loss bound and the system price domain.
pub(crate) fn clamp_quote(side: Side, ticks: i64, limit: Price, params: &MarketParams) -> Price {
    let bounded = match side {
        Side::Bid => ticks.min(i64::from(limit.ticks())),
        Side::Ask => ticks.max(i64::from(limit.ticks())),
    };
    params.clamp_ticks(bounded)
}

/// GVWY: always quote the limit price.
pub fn gvwy_quote(limit: Price, _side: Side) -> Price {
    limit
}

/// The best price on one side of the book as seen by a trader whose own
/// order may be resting there: a solitary own order at the best level does
/// not count as a price to shave against.
fn best_excluding_own(
    levels: &[(Price, u32)],
    best: Option<Price>,
    own: Option<Price>,
) -> Option<Price> {
    let best = best?;
    if own == Some(best) && levels.first().is_some_and(|&(_, volume)| volume == 1) {
        levels.get(1).map(|&(price, _)| price)
    } else {
        Some(best)
    }
}

/// SHVR: quote one tick inside the best price posted by anyone else, no
/// better than the limit. On an empty side of the book, fall back to the
/// worst-price stub. `own` is the trader's resting order price, if any;
/// shaving one's own quote would just escalate against nobody.
pub fn shvr_quote(
    limit: Price,
    side: Side,
    book: &LobSnapshot,
    own: Option<Price>,
    params: &MarketParams,
) -> Price {
    let raw = match side {
        Side::Bid => match best_excluding_own(&book.bids, book.best_bid, own) {
            Some(bb) => bb.offset_ticks(1).min(i64::from(limit.ticks())),
            None => i64::from(params.bid_stub().ticks().min(limit.ticks())),
        },
        Side::Ask => match best_excluding_own(&book.asks, book.best_ask, own) {
            Some(ba) => ba.offset_ticks(-1).max(i64::from(limit.ticks())),
            None => i64::from(params.ask_stub().ticks().max(limit.ticks())),
        },
    };
    clamp_quote(side, raw, limit, params)
}

/// ZIC: quote uniformly at random between the system minimum and the limit
/// (buyers), or between the limit and the system maximum (sellers).
pub fn zic_quote<R: Rng + ?Sized>(
    limit: Price,
    side: Side,
    params: &MarketParams,
    rng: &mut R,
) -> Price {
    let ticks = match side {
        Side::Bid => rng.random_range(params.price_min.ticks()..=limit.ticks()),
        Side::Ask => rng.random_range(limit.ticks()..=params.price_max.ticks()),
    };
    Price::from_ticks(ticks)
}

/// Parameter ranges for the adaptive strategies; per-trader values are
/// drawn once at session setup.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StrategyParams {
    pub zip: ZipParams,
    pub aa: AaParams,
}

/// Strategy-specific internal state.
#[derive(Clone, Debug, PartialEq)]
pub enum StrategyState {
    Gvwy,
    Shvr,
    Zic,
    Zip(ZipState),
    Aa(AaState),
}

/// A market participant: identity, strategy state, current assignment and
/// accumulated profit.
#[derive(Clone, Debug, PartialEq)]
pub struct Trader {
    pub id: TraderId,
    pub strategy: Strategy,
    pub state: StrategyState,
    assignment: Option<Assignment>,
    /// Price of this trader's resting order on the book, if any; kept in
    /// sync by the session.
    resting: Option<Price>,
    /// Lifetime profit in ticks.
    pub profit_ticks: i64,
    pub trades: u32,
}

impl Trader {
    pub fn new<R: Rng + ?Sized>(
        id: TraderId,
        strategy: Strategy,
        params: &StrategyParams,
        rng: &mut R,
    ) -> Trader {
        let state = match strategy {
            Strategy::Gvwy => StrategyState::Gvwy,
            Strategy::Shvr => StrategyState::Shvr,
            Strategy::Zic => StrategyState::Zic,
            Strategy::Zip => StrategyState::Zip(ZipState::new(id.side, &params.zip, rng)),
            Strategy::Aa => StrategyState::Aa(AaState::new(id.side, &params.aa, rng)),
        };
        Trader { id, strategy, state, assignment: None, resting: None, profit_ticks: 0, trades: 0 }
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        self.assignment.as_ref()
    }

    pub fn has_assignment(&self) -> bool {
        self.assignment.is_some()
    }

    /// Issues a fresh assignment, replacing any unfilled one.
    pub fn assign(&mut self, assignment: Assignment) {
        debug_assert_eq!(assignment.trader_id, self.id);
        self.assignment = Some(assignment);
    }

    pub fn clear_assignment(&mut self) {
        self.assignment = None;
    }

    /// The trader's resting order price, if it has one on the book.
    pub fn resting(&self) -> Option<Price> {
        self.resting
    }

    /// Session bookkeeping: records where (or whether) this trader's order
    /// now rests.
    pub fn set_resting(&mut self, price: Option<Price>) {
        self.resting = price;
    }

    /// Profit accumulated so far, in currency units.
    pub fn profit(&self) -> f64 {
        self.profit_ticks as f64 * crate::types::TICK_SIZE
    }

    /// Produces a quote for the current assignment, if the strategy wants
    /// to act on the market right now.
    pub fn get_order<R: Rng + ?Sized>(
        &mut self,
        book: &LobSnapshot,
        params: &MarketParams,
        rng: &mut R,
    ) -> Option<Price> {
        let assignment = self.assignment?;
        let (limit, side) = (assignment.limit, assignment.side);
        match &mut self.state {
            StrategyState::Gvwy => Some(gvwy_quote(limit, side)),
            StrategyState::Shvr => Some(shvr_quote(limit, side, book, self.resting, params)),
            StrategyState::Zic => Some(zic_quote(limit, side, params, rng)),
            StrategyState::Zip(state) => Some(state.quote(limit, params)),
            StrategyState::Aa(state) => state.quote(limit, book, params, rng),
        }
    }

    /// Processes a market event; stateless strategies take no action.
    pub fn respond<R: Rng + ?Sized>(
        &mut self,
        event: &MarketEvent,
        book: &LobSnapshot,
        params: &MarketParams,
        rng: &mut R,
    ) {
        let active = self.assignment.is_some();
        match &mut self.state {
            StrategyState::Gvwy | StrategyState::Shvr | StrategyState::Zic => {}
            StrategyState::Zip(state) => state.respond(event, book, params, active, rng),
            StrategyState::Aa(state) => state.respond(event, book, params, rng),
        }
    }

    /// Books the profit from a trade against the active assignment and
    /// completes it. Buyer profit is `limit - price`; seller profit is
    /// `price - limit`.
    pub fn record_fill(&mut self, trade: &Trade) -> Result<i64, AccountingError> {
        let assignment = self
            .assignment
            .take()
            .ok_or(AccountingError::NoActiveAssignment(self.id))?;
        let price = i64::from(trade.price.ticks());
        let limit = i64::from(assignment.limit.ticks());
        let profit = match assignment.side {
            Side::Bid => limit - price,
            Side::Ask => price - limit,
        };
        self.profit_ticks += profit;
        self.trades += 1;
        Ok(profit)
    }
}
