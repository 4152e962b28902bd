//! Single-exchange limit order book with continuous-double-auction matching.
//!
//! The book holds at most one resting order per trader. Submitting a new
//! order first cancels any previous one from the same trader (replacement
//! semantics), then either executes against the best opposing level if it
//! crosses the spread, or rests at its own price. Trades always execute at
//! the resting order's price.

use std::collections::{BTreeMap, VecDeque};
use std::collections::BTreeSet;

use crate::error::ExchangeError;
use crate::types::{MarketParams, Price, Side, TraderId};

/// A single-unit order as submitted to the exchange.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Order {
    pub trader_id: TraderId,
    pub side: Side,
    pub price: Price,
    /// Always 1; assignments are for a single unit.
    pub quantity: u32,
    /// Time step of submission.
    pub step: u32,
}

impl Order {
    pub fn new(trader_id: TraderId, side: Side, price: Price, step: u32) -> Order {
        Order { trader_id, side, price, quantity: 1, step }
    }
}

/// An execution between a buyer and a seller.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Trade {
    pub buyer_id: TraderId,
    pub seller_id: TraderId,
    /// Execution price: the resting (passive) order's price at match time.
    pub price: Price,
    pub step: u32,
    /// Side of the aggressing (crossing) order.
    pub taker: Side,
}

/// Public market events, broadcast to traders in causal order.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum MarketEvent {
    OrderPosted(Order),
    OrderCancelled(Order),
    Trade(Trade),
}

/// Aggregated book state published to traders.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LobSnapshot {
    /// (price, volume) levels sorted price-descending.
    pub bids: Vec<(Price, u32)>,
    /// (price, volume) levels sorted price-ascending.
    pub asks: Vec<(Price, u32)>,
    pub best_bid: Option<Price>,
    pub best_ask: Option<Price>,
    pub last_trade: Option<Trade>,
}

impl LobSnapshot {
    /// Volume resting at the best bid, zero when the side is empty.
    pub fn best_bid_volume(&self) -> u32 {
        self.bids.first().map(|&(_, v)| v).unwrap_or(0)
    }

    pub fn best_ask_volume(&self) -> u32 {
        self.asks.first().map(|&(_, v)| v).unwrap_or(0)
    }
}

/// Spread, midprice and microprice of a two-sided book.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct LobMetrics {
    pub spread: Price,
    /// Midprice in currency units; may fall between ticks.
    pub midprice: f64,
    /// Volume-weighted midprice in currency units. Each best price is
    /// weighted by its own side's volume: (Vb*BB + Va*BA) / (Vb + Va).
    pub microprice: f64,
}

/// Book metrics, or `None` when either side of the book is empty.
pub fn lob_metrics(book: &LobSnapshot) -> Option<LobMetrics> {
    let bb = book.best_bid?;
    let ba = book.best_ask?;
    let vb = f64::from(book.best_bid_volume());
    let va = f64::from(book.best_ask_volume());
    let spread = Price::from_ticks(ba.ticks() - bb.ticks());
    let midprice = (bb.as_currency() + ba.as_currency()) / 2.0;
    let microprice = (vb * bb.as_currency() + va * ba.as_currency()) / (vb + va);
    Some(LobMetrics { spread, midprice, microprice })
}

/// One market event together with the book state immediately after it.
#[derive(Clone, Debug, PartialEq)]
pub struct EventRecord {
    pub event: MarketEvent,
    pub book_after: LobSnapshot,
}

/// Outcome of a submission: the events it caused, in causal order
/// (cancellation of a replaced order first, then post or trade).
#[derive(Clone, Debug, PartialEq)]
pub struct Submission {
    pub events: Vec<EventRecord>,
}

impl Submission {
    /// The trade produced by this submission, if it crossed the spread.
    pub fn trade(&self) -> Option<Trade> {
        self.events.iter().find_map(|r| match r.event {
            MarketEvent::Trade(t) => Some(t),
            _ => None,
        })
    }
}

/// Orders at a level queue in arrival order (price-time priority).
#[derive(Copy, Clone, Debug)]
struct RestingOrder {
    order: Order,
}

/// The exchange: order book plus trader registry.
#[derive(Clone, Debug)]
pub struct Exchange {
    params: MarketParams,
    /// Price level -> FIFO queue of resting orders.
    bids: BTreeMap<u32, VecDeque<RestingOrder>>,
    asks: BTreeMap<u32, VecDeque<RestingOrder>>,
    /// Trader -> price of its resting order, if any.
    owners: BTreeMap<TraderId, (Side, Price)>,
    known: BTreeSet<TraderId>,
    last_trade: Option<Trade>,
}

impl Exchange {
    pub fn new(params: MarketParams, traders: impl IntoIterator<Item = TraderId>) -> Exchange {
        Exchange {
            params,
            bids: BTreeMap::new(),
            asks: BTreeMap::new(),
            owners: BTreeMap::new(),
            known: traders.into_iter().collect(),
            last_trade: None,
        }
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    pub fn best_bid(&self) -> Option<Price> {
        self.bids.keys().next_back().map(|&t| Price::from_ticks(t))
    }

    pub fn best_ask(&self) -> Option<Price> {
        self.asks.keys().next().map(|&t| Price::from_ticks(t))
    }

    /// Builds the aggregated public view of the book.
    pub fn snapshot(&self) -> LobSnapshot {
        let level = |(&ticks, queue): (&u32, &VecDeque<RestingOrder>)| {
            (Price::from_ticks(ticks), queue.len() as u32)
        };
        LobSnapshot {
            bids: self.bids.iter().rev().map(level).collect(),
            asks: self.asks.iter().map(level).collect(),
            best_bid: self.best_bid(),
            best_ask: self.best_ask(),
            last_trade: self.last_trade,
        }
    }

    /// Submits an order under continuous-double-auction rules.
    ///
    /// Any previous resting order from the same trader is cancelled first,
    /// even when the new order would immediately cross. A crossing order
    /// executes at the best opposing price; a passive one rests in the book.
    pub fn submit_order(&mut self, order: Order) -> Result<Submission, ExchangeError> {
        if order.quantity != 1 {
            return Err(ExchangeError::BadQuantity(order.quantity));
        }
        if !self.params.contains(order.price) {
            return Err(ExchangeError::PriceOutOfBounds {
                price: order.price,
                min: self.params.price_min,
                max: self.params.price_max,
            });
        }
        if !self.known.contains(&order.trader_id) {
            return Err(ExchangeError::UnknownTrader(order.trader_id));
        }

        let mut events = Vec::with_capacity(2);
        if let Some(cancelled) = self.remove_resting(order.trader_id) {
            events.push(self.record(MarketEvent::OrderCancelled(cancelled)));
        }

        let crossed = match order.side {
            Side::Bid => self.best_ask().is_some_and(|ba| order.price >= ba),
            Side::Ask => self.best_bid().is_some_and(|bb| order.price <= bb),
        };

        if crossed {
            let resting = self.pop_best(order.side.opposite());
            let trade = match order.side {
                Side::Bid => Trade {
                    buyer_id: order.trader_id,
                    seller_id: resting.order.trader_id,
                    price: resting.order.price,
                    step: order.step,
                    taker: Side::Bid,
                },
                Side::Ask => Trade {
                    buyer_id: resting.order.trader_id,
                    seller_id: order.trader_id,
                    price: resting.order.price,
                    step: order.step,
                    taker: Side::Ask,
                },
            };
            self.last_trade = Some(trade);
            events.push(self.record(MarketEvent::Trade(trade)));
        } else {
            self.side_mut(order.side)
                .entry(order.price.ticks())
                .or_default()
                .push_back(RestingOrder { order });
            self.owners.insert(order.trader_id, (order.side, order.price));
            events.push(self.record(MarketEvent::OrderPosted(order)));
        }

        debug_assert!(self.not_crossed(), "book must never rest crossed");
        Ok(Submission { events })
    }

    /// Cancels a trader's resting order, if any. Used at replenishment.
    pub fn cancel_order(&mut self, trader_id: TraderId) -> Option<EventRecord> {
        let cancelled = self.remove_resting(trader_id)?;
        Some(self.record(MarketEvent::OrderCancelled(cancelled)))
    }

    fn record(&self, event: MarketEvent) -> EventRecord {
        EventRecord { event, book_after: self.snapshot() }
    }

    fn side_mut(&mut self, side: Side) -> &mut BTreeMap<u32, VecDeque<RestingOrder>> {
        match side {
            Side::Bid => &mut self.bids,
            Side::Ask => &mut self.asks,
        }
    }

    fn remove_resting(&mut self, trader_id: TraderId) -> Option<Order> {
        let (side, price) = self.owners.remove(&trader_id)?;
        let book = self.side_mut(side);
        let queue = book.get_mut(&price.ticks())?;
        let pos = queue
            .iter()
            .position(|r| r.order.trader_id == trader_id)
            .expect("owner index out of sync with book");
        let resting = queue.remove(pos).unwrap();
        if queue.is_empty() {
            book.remove(&price.ticks());
        }
        Some(resting.order)
    }

    /// Removes and returns the oldest order at the best price of `side`.
    fn pop_best(&mut self, side: Side) -> RestingOrder {
        let ticks = match side {
            Side::Bid => *self.bids.keys().next_back().expect("pop_best on empty side"),
            Side::Ask => *self.asks.keys().next().expect("pop_best on empty side"),
        };
        let book = self.side_mut(side);
        let queue = book.get_mut(&ticks).unwrap();
        let best = queue.pop_front().unwrap();
        if queue.is_empty() {
            book.remove(&ticks);
        }
        self.owners.remove(&best.order.trader_id);
        best
    }

    fn not_crossed(&self) -> bool {
        match (self.best_bid(), self.best_ask()) {
            (Some(bb), Some(ba)) => bb < ba,
            _ => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn px(value: f64) -> Price {
        Price::from_currency(value)
    }

    fn roster() -> Vec<TraderId> {
        (0..10)
            .map(TraderId::buyer)
            .chain((0..10).map(TraderId::seller))
            .collect()
    }

    /// Book with BB=0.97 (volume 2) and BA=0.99 (volume 1).
    fn worked_example_book() -> Exchange {
        let mut ex = Exchange::new(MarketParams::default(), roster());
        ex.submit_order(Order::new(TraderId::buyer(0), Side::Bid, px(0.97), 0)).unwrap();
        ex.submit_order(Order::new(TraderId::buyer(1), Side::Bid, px(0.97), 0)).unwrap();
        ex.submit_order(Order::new(TraderId::seller(0), Side::Ask, px(0.99), 0)).unwrap();
        ex
    }

    #[test]
    fn metrics_match_worked_example() {
        let ex = worked_example_book();
        let m = lob_metrics(&ex.snapshot()).unwrap();
        assert_eq!(m.spread, px(0.02));
        assert_eq!(m.midprice, 0.98);
        let expected_micro = (2.0 * 0.97 + 1.0 * 0.99) / 3.0;
        assert_eq!(m.microprice, expected_micro);
        assert_eq!(format!("{:.3}", m.microprice), "0.977");
    }

    #[test]
    fn metrics_equal_volumes_tick_spread() {
        // one-tick spread with equal volumes: microprice equals midprice
        let mut ex = Exchange::new(MarketParams::default(), roster());
        ex.submit_order(Order::new(TraderId::buyer(0), Side::Bid, px(0.98), 0)).unwrap();
        ex.submit_order(Order::new(TraderId::seller(0), Side::Ask, px(0.99), 0)).unwrap();
        let m = lob_metrics(&ex.snapshot()).unwrap();
        assert_eq!(m.microprice, m.midprice);
    }

    #[test]
    fn metrics_unavailable_on_one_sided_book() {
        let mut ex = Exchange::new(MarketParams::default(), roster());
        assert!(lob_metrics(&ex.snapshot()).is_none());
        ex.submit_order(Order::new(TraderId::buyer(0), Side::Bid, px(0.97), 0)).unwrap();
        assert!(lob_metrics(&ex.snapshot()).is_none());
    }

    #[test]
    fn crossing_ask_trades_at_best_bid() {
        let mut ex = worked_example_book();
        let sub = ex
            .submit_order(Order::new(TraderId::seller(1), Side::Ask, px(0.96), 1))
            .unwrap();
        let trade = sub.trade().expect("ask at 0.96 crosses BB=0.97");
        assert_eq!(trade.price, px(0.97));
        assert_eq!(trade.buyer_id, TraderId::buyer(0));
        assert_eq!(trade.seller_id, TraderId::seller(1));
    }

    #[test]
    fn crossing_bid_trades_at_best_ask() {
        let mut ex = worked_example_book();
        let sub = ex
            .submit_order(Order::new(TraderId::buyer(2), Side::Bid, px(0.99), 1))
            .unwrap();
        let trade = sub.trade().expect("bid at 0.99 crosses BA=0.99");
        assert_eq!(trade.price, px(0.99));
        assert_eq!(trade.seller_id, TraderId::seller(0));
    }

    #[test]
    fn passive_bid_rests_below_best() {
        let mut ex = worked_example_book();
        let sub = ex
            .submit_order(Order::new(TraderId::buyer(2), Side::Bid, px(0.95), 1))
            .unwrap();
        assert!(sub.trade().is_none());
        let snap = ex.snapshot();
        assert_eq!(snap.best_bid, Some(px(0.97)));
        assert!(snap.bids.contains(&(px(0.95), 1)));
    }

    #[test]
    fn replacement_cancels_previous_order_first() {
        let mut ex = worked_example_book();
        let sub = ex
            .submit_order(Order::new(TraderId::buyer(0), Side::Bid, px(0.98), 1))
            .unwrap();
        assert!(matches!(sub.events[0].event, MarketEvent::OrderCancelled(o) if o.price == px(0.97)));
        assert!(matches!(sub.events[1].event, MarketEvent::OrderPosted(_)));
        // volume at 0.97 dropped to 1, new best is 0.98
        let snap = ex.snapshot();
        assert_eq!(snap.best_bid, Some(px(0.98)));
        assert_eq!(snap.bids, vec![(px(0.98), 1), (px(0.97), 1)]);
    }

    #[test]
    fn replacement_happens_even_when_crossing() {
        let mut ex = worked_example_book();
        let sub = ex
            .submit_order(Order::new(TraderId::buyer(0), Side::Bid, px(0.99), 1))
            .unwrap();
        assert!(matches!(sub.events[0].event, MarketEvent::OrderCancelled(_)));
        let trade = sub.trade().unwrap();
        assert_eq!(trade.price, px(0.99));
        // the replaced bid is gone from the book
        assert_eq!(ex.snapshot().bids, vec![(px(0.97), 1)]);
    }

    #[test]
    fn price_time_priority_at_level() {
        let mut ex = worked_example_book();
        // buyer(0) posted at 0.97 before buyer(1); the first ask to cross
        // matches the older order.
        let sub = ex
            .submit_order(Order::new(TraderId::seller(1), Side::Ask, px(0.90), 1))
            .unwrap();
        assert_eq!(sub.trade().unwrap().buyer_id, TraderId::buyer(0));
        let sub = ex
            .submit_order(Order::new(TraderId::seller(2), Side::Ask, px(0.90), 1))
            .unwrap();
        assert_eq!(sub.trade().unwrap().buyer_id, TraderId::buyer(1));
    }

    #[test]
    fn rejects_out_of_bounds_and_unknown() {
        let mut ex = worked_example_book();
        let err = ex
            .submit_order(Order::new(TraderId::buyer(0), Side::Bid, px(2.50), 0))
            .unwrap_err();
        assert!(matches!(err, ExchangeError::PriceOutOfBounds { .. }));
        let err = ex
            .submit_order(Order::new(TraderId::buyer(99), Side::Bid, px(1.00), 0))
            .unwrap_err();
        assert_eq!(err, ExchangeError::UnknownTrader(TraderId::buyer(99)));
        let mut bad = Order::new(TraderId::buyer(0), Side::Bid, px(1.00), 0);
        bad.quantity = 2;
        assert_eq!(ex.submit_order(bad).unwrap_err(), ExchangeError::BadQuantity(2));
    }

    #[test]
    fn cancel_removes_resting_order() {
        let mut ex = worked_example_book();
        let rec = ex.cancel_order(TraderId::seller(0)).unwrap();
        assert!(matches!(rec.event, MarketEvent::OrderCancelled(o) if o.price == px(0.99)));
        assert_eq!(ex.snapshot().best_ask, None);
        assert!(ex.cancel_order(TraderId::seller(0)).is_none());
    }
}
