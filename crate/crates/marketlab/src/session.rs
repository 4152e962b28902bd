//! A market session: one run of the exchange over a fixed number of time
//! steps, with periodic assignment replenishment and a pluggable selection
//! model deciding who acts when.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::error::{AccountingError, ExchangeError, ScheduleError, SelectionError};
use crate::exchange::{Exchange, MarketEvent, Order, Trade};
use crate::schedule::{Assignment, ScheduleConfig};
use crate::scheduler::{Scheduler, SelectionModel, TraderPool};
use crate::traders::{StrategyParams, Trader};
use crate::types::{MarketParams, Price, Side, Strategy, TraderId, TICK_SIZE};

/// Full configuration of one market session.
#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub schedule: ScheduleConfig,
    /// Strategies per side: each entry contributes `count` buyers and
    /// `count` sellers. Counts must sum to `schedule.n`.
    pub mix: Vec<(Strategy, usize)>,
    pub selection: SelectionModel,
    pub market: MarketParams,
    pub strategy_params: StrategyParams,
    pub seed: u64,
    /// Permute the limit-to-trader mapping once per session (the mapping
    /// stays fixed within the session). Keeps trader indices comparable
    /// across repetitions without tying them to particular limits.
    pub shuffle_limits: bool,
}

impl SessionConfig {
    pub fn new(mix: Vec<(Strategy, usize)>, selection: SelectionModel, seed: u64) -> SessionConfig {
        let n = mix.iter().map(|&(_, c)| c).sum();
        SessionConfig {
            schedule: ScheduleConfig { n, ..ScheduleConfig::default() },
            mix,
            selection,
            market: MarketParams::default(),
            strategy_params: StrategyParams::default(),
            seed,
            shuffle_limits: true,
        }
    }

    pub fn with_seed(&self, seed: u64) -> SessionConfig {
        SessionConfig { seed, ..self.clone() }
    }

    fn validate(&self) -> Result<(), SessionError> {
        let total: usize = self.mix.iter().map(|&(_, c)| c).sum();
        if self.mix.is_empty() || total == 0 {
            return Err(SessionError::BadMix("trader mix is empty".into()));
        }
        if total != self.schedule.n {
            return Err(SessionError::BadMix(format!(
                "mix places {total} traders per side but the schedule expects {}",
                self.schedule.n
            )));
        }
        self.schedule.validate()?;
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("invalid trader mix: {0}")]
    BadMix(String),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Exchange(#[from] ExchangeError),
    #[error(transparent)]
    Accounting(#[from] AccountingError),
}

/// One quote submitted to the exchange.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct QuoteRecord {
    pub step: u32,
    pub trader_id: TraderId,
    pub side: Side,
    pub price: Price,
}

/// A trade together with the limits of the two assignments it filled.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FillRecord {
    pub trade: Trade,
    pub buyer_limit: Price,
    pub seller_limit: Price,
}

/// Per-trader outcome of a session.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct TraderOutcome {
    pub trader_id: TraderId,
    pub strategy: Strategy,
    pub profit_ticks: i64,
    pub trades: u32,
}

/// Everything a session produced.
#[derive(Clone, Debug, PartialEq)]
pub struct SessionResult {
    pub seed: u64,
    pub fills: Vec<FillRecord>,
    pub quotes: Vec<QuoteRecord>,
    pub outcomes: Vec<TraderOutcome>,
}

impl SessionResult {
    pub fn trades(&self) -> impl Iterator<Item = &Trade> {
        self.fills.iter().map(|f| &f.trade)
    }

    /// Per-trader profits (in ticks) grouped by strategy.
    pub fn profits_by_strategy(&self) -> BTreeMap<Strategy, Vec<i64>> {
        let mut map: BTreeMap<Strategy, Vec<i64>> = BTreeMap::new();
        for o in &self.outcomes {
            map.entry(o.strategy).or_default().push(o.profit_ticks);
        }
        map
    }

    /// Mean profit per trader of one strategy group, in currency units.
    pub fn strategy_mean_profit(&self, strategy: Strategy) -> Option<f64> {
        let profits: Vec<i64> = self
            .outcomes
            .iter()
            .filter(|o| o.strategy == strategy)
            .map(|o| o.profit_ticks)
            .collect();
        if profits.is_empty() {
            return None;
        }
        Some(profits.iter().sum::<i64>() as f64 * TICK_SIZE / profits.len() as f64)
    }

    pub fn profit_of(&self, id: TraderId) -> Option<i64> {
        self.outcomes.iter().find(|o| o.trader_id == id).map(|o| o.profit_ticks)
    }

    pub fn total_profit_ticks(&self) -> i64 {
        self.outcomes.iter().map(|o| o.profit_ticks).sum()
    }
}

/// Runs one session to completion. Deterministic for a given config.
pub fn run_session(config: &SessionConfig) -> Result<SessionResult, SessionError> {
    config.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let n = config.schedule.n;
    let market = config.market;

    // per-side strategy roster in mix order
    let side_strategies: Vec<Strategy> = config
        .mix
        .iter()
        .flat_map(|&(s, c)| std::iter::repeat_n(s, c))
        .collect();

    // traders: buyers then sellers, parameter draws in id order
    let mut traders: Vec<Trader> = Vec::with_capacity(2 * n);
    for (i, &strategy) in side_strategies.iter().enumerate() {
        traders.push(Trader::new(TraderId::buyer(i as u16), strategy, &config.strategy_params, &mut rng));
    }
    for (i, &strategy) in side_strategies.iter().enumerate() {
        traders.push(Trader::new(TraderId::seller(i as u16), strategy, &config.strategy_params, &mut rng));
    }
    let slot = |id: TraderId| -> usize {
        match id.side {
            Side::Bid => usize::from(id.index),
            Side::Ask => n + usize::from(id.index),
        }
    };

    // limit-to-trader mapping, fixed for the whole session
    let base_limits = config.schedule.limit_prices()?;
    let mut buyer_limits = base_limits.clone();
    let mut seller_limits = base_limits;
    if config.shuffle_limits {
        buyer_limits.shuffle(&mut rng);
        seller_limits.shuffle(&mut rng);
    }

    let pool = TraderPool::with_sides(n, n);
    let all_ids = pool.all();
    let mut exchange = Exchange::new(market, all_ids.iter().copied());
    let scheduler = Scheduler::new(config.selection.clone(), &pool, &mut rng)?;

    let mut fills = Vec::new();
    let mut quotes = Vec::new();

    for step in 0..config.schedule.session_length {
        if step % config.schedule.replenish_interval == 0 {
            // withdraw stale quotes, then issue fresh assignments
            for &id in &all_ids {
                if let Some(record) = exchange.cancel_order(id) {
                    traders[slot(id)].set_resting(None);
                    for trader in traders.iter_mut() {
                        trader.respond(&record.event, &record.book_after, &market, &mut rng);
                    }
                }
            }
            for i in 0..n {
                let id = TraderId::buyer(i as u16);
                traders[slot(id)].assign(Assignment {
                    trader_id: id,
                    side: Side::Bid,
                    limit: buyer_limits[i],
                    issued_step: step,
                });
                let id = TraderId::seller(i as u16);
                traders[slot(id)].assign(Assignment {
                    trader_id: id,
                    side: Side::Ask,
                    limit: seller_limits[i],
                    issued_step: step,
                });
            }
        }

        for actor in scheduler.step_sequence(&pool, step, &mut rng) {
            let actor_slot = slot(actor);
            if !traders[actor_slot].has_assignment() {
                continue; // filled this period: pass the turn
            }
            let book = exchange.snapshot();
            let Some(price) = traders[actor_slot].get_order(&book, &market, &mut rng) else {
                continue;
            };
            if traders[actor_slot].resting() == Some(price) {
                continue; // already resting there: hold queue position
            }
            let side = traders[actor_slot].assignment().expect("checked above").side;
            quotes.push(QuoteRecord { step, trader_id: actor, side, price });
            let submission = exchange.submit_order(Order::new(actor, side, price, step))?;
            for record in &submission.events {
                match record.event {
                    MarketEvent::OrderCancelled(order) => {
                        traders[slot(order.trader_id)].set_resting(None);
                    }
                    MarketEvent::OrderPosted(order) => {
                        traders[slot(order.trader_id)].set_resting(Some(order.price));
                    }
                    MarketEvent::Trade(trade) => {
                        let buyer_slot = slot(trade.buyer_id);
                        let seller_slot = slot(trade.seller_id);
                        let buyer_limit = traders[buyer_slot]
                            .assignment()
                            .ok_or(AccountingError::NoActiveAssignment(trade.buyer_id))?
                            .limit;
                        let seller_limit = traders[seller_slot]
                            .assignment()
                            .ok_or(AccountingError::NoActiveAssignment(trade.seller_id))?
                            .limit;
                        traders[buyer_slot].record_fill(&trade)?;
                        traders[seller_slot].record_fill(&trade)?;
                        traders[buyer_slot].set_resting(None);
                        traders[seller_slot].set_resting(None);
                        fills.push(FillRecord { trade, buyer_limit, seller_limit });
                    }
                }
            }
            // one broadcast per action: the action's outcome (trade, or the
            // posted order) with the book as the action left it, so a
            // replacement at an unchanged price does not read as two moves
            let outcome = submission
                .events
                .last()
                .expect("a submission posts or trades");
            for trader in traders.iter_mut() {
                trader.respond(&outcome.event, &outcome.book_after, &market, &mut rng);
            }
        }
    }

    let outcomes = traders
        .iter()
        .map(|t| TraderOutcome {
            trader_id: t.id,
            strategy: t.strategy,
            profit_ticks: t.profit_ticks,
            trades: t.trades,
        })
        .collect();

    Ok(SessionResult { seed: config.seed, fills, quotes, outcomes })
}
