//! ZIP: margin-adaptive trading via a Widrow-Hoff update toward perturbed
//! target prices.
//!
//! The trader keeps a profit margin `mu`; a buyer quotes `L*(1 - mu)`, a
//! seller `L*(1 + mu)`. The margin moves after each market event according
//! to the classic decision tree:
//!
//! * a trade at price `q` with my quote on the winning side of `q` means I
//!   left money on the table, so the margin grows (buyer with quote >= q
//!   drops its bid toward `q`; seller with quote <= q raises its ask);
//! * a trade I would not have got while working an order shrinks the margin
//!   toward the trade price;
//! * a better bid (ask) appearing above (below) my quote shrinks the margin
//!   to stay competitive.
//!
//! The magnitude of each move is a learning-rate step toward a randomly
//! perturbed target, smoothed by a momentum term.

use rand::Rng;

use crate::exchange::{LobSnapshot, MarketEvent};
use crate::types::{MarketParams, Price, Side};

use super::{clamp_quote, round_quote};

/// Per-trader parameter ranges; values are drawn once per trader.
#[derive(Clone, Debug, PartialEq)]
pub struct ZipParams {
    pub beta_range: (f64, f64),
    pub momentum_range: (f64, f64),
    pub initial_margin_range: (f64, f64),
    /// Absolute target perturbation, in ticks.
    pub perturb_abs: f64,
    /// Relative target perturbation.
    pub perturb_rel: f64,
}

impl Default for ZipParams {
    fn default() -> Self {
        ZipParams {
            beta_range: (0.1, 0.5),
            momentum_range: (0.0, 0.1),
            initial_margin_range: (0.05, 0.35),
            perturb_abs: 0.05,
            perturb_rel: 0.05,
        }
    }
}

/// ZIP internal state.
#[derive(Clone, Debug, PartialEq)]
pub struct ZipState {
    side: Side,
    /// Learning rate.
    pub beta: f64,
    /// Momentum coefficient.
    pub momentum: f64,
    /// Profit margin `mu`. Buyers stay in [0, 1); seller margins are
    /// unbounded above (a low-limit seller asking near equilibrium can sit
    /// at several times its limit) and the quote is capped by the system
    /// maximum instead.
    pub margin: f64,
    momentum_acc: f64,
    /// Current working quote in ticks, if the trader has ever quoted.
    pub last_quote: Option<f64>,
    /// Last known limit, in ticks.
    limit: Option<f64>,
    perturb_abs: f64,
    perturb_rel: f64,
    prev_best_bid: Option<(u32, u32)>,
    prev_best_ask: Option<(u32, u32)>,
}

impl ZipState {
    pub fn new<R: Rng + ?Sized>(side: Side, params: &ZipParams, rng: &mut R) -> ZipState {
        ZipState {
            side,
            beta: rng.random_range(params.beta_range.0..=params.beta_range.1),
            momentum: rng.random_range(params.momentum_range.0..=params.momentum_range.1),
            margin: rng
                .random_range(params.initial_margin_range.0..=params.initial_margin_range.1),
            momentum_acc: 0.0,
            last_quote: None,
            limit: None,
            perturb_abs: params.perturb_abs,
            perturb_rel: params.perturb_rel,
            prev_best_bid: None,
            prev_best_ask: None,
        }
    }

    /// Quote from the current margin: `L*(1 - mu)` for buyers, `L*(1 + mu)`
    /// for sellers, tick-rounded and clamped.
    pub fn quote(&mut self, limit: Price, params: &MarketParams) -> Price {
        let l = f64::from(limit.ticks());
        self.limit = Some(l);
        let raw = match self.side {
            Side::Bid => l * (1.0 - self.margin),
            Side::Ask => l * (1.0 + self.margin),
        };
        let price = clamp_quote(self.side, round_quote(self.side, raw), limit, params);
        self.last_quote = Some(f64::from(price.ticks()));
        price
    }

    /// Applies the decision tree to one market event.
    pub fn respond<R: Rng + ?Sized>(
        &mut self,
        event: &MarketEvent,
        book: &LobSnapshot,
        params: &MarketParams,
        active: bool,
        rng: &mut R,
    ) {
        let best_bid = book.best_bid.map(|p| (p.ticks(), book.best_bid_volume()));
        let best_ask = book.best_ask.map(|p| (p.ticks(), book.best_ask_volume()));
        let is_trade = matches!(event, MarketEvent::Trade(_));

        // What happened on each side of the book since the last event?
        let mut bid_improved = false;
        let mut bid_hit = false;
        match (self.prev_best_bid, best_bid) {
            (Some((pp, pq)), Some((bp, bq))) => {
                if pp < bp {
                    bid_improved = true;
                } else if is_trade && (pp > bp || (pp == bp && pq > bq)) {
                    bid_hit = true;
                }
            }
            (Some(_), None) => bid_hit = is_trade, // emptied: hit unless cancelled
            _ => {}
        }
        let mut ask_improved = false;
        let mut ask_lifted = false;
        match (self.prev_best_ask, best_ask) {
            (Some((pp, pq)), Some((ap, aq))) => {
                if pp > ap {
                    ask_improved = true;
                } else if is_trade && (pp < ap || (pp == ap && pq > aq)) {
                    ask_lifted = true;
                }
            }
            (Some(_), None) => ask_lifted = is_trade,
            _ => {}
        }
        self.prev_best_bid = best_bid;
        self.prev_best_ask = best_ask;

        let deal = bid_hit || ask_lifted;
        let trade_price = match event {
            MarketEvent::Trade(t) => Some(f64::from(t.price.ticks())),
            _ => None,
        };

        let (quote, _limit) = match (self.last_quote, self.limit) {
            (Some(q), Some(l)) => (q, l),
            _ => return, // nothing to adapt until the first quote
        };

        match self.side {
            Side::Bid => {
                if deal {
                    let q = trade_price.expect("deal implies a trade event");
                    if quote >= q {
                        // could have bought for less: grow the margin
                        let target = self.target_down(q, rng);
                        self.alter_margin(target);
                    } else if bid_hit && active {
                        // missed a deal I was not willing to take: shrink it
                        let target = self.target_up(q, rng);
                        self.alter_margin(target);
                    }
                } else if bid_improved && quote < f64::from(best_bid.unwrap().0) {
                    // outbid: aim just under the best ask
                    let anchor = best_ask
                        .map(|(p, _)| f64::from(p))
                        .unwrap_or(f64::from(params.price_min.ticks()));
                    let target = self.target_down(anchor, rng);
                    self.alter_margin(target);
                }
            }
            Side::Ask => {
                if deal {
                    let q = trade_price.expect("deal implies a trade event");
                    if quote <= q {
                        // could have sold for more: grow the margin
                        let target = self.target_up(q, rng);
                        self.alter_margin(target);
                    } else if ask_lifted && active {
                        let target = self.target_down(q, rng);
                        self.alter_margin(target);
                    }
                } else if ask_improved && quote > f64::from(best_ask.unwrap().0) {
                    // undercut: aim just over the best bid
                    let anchor = best_bid
                        .map(|(p, _)| f64::from(p))
                        .unwrap_or(f64::from(params.price_max.ticks()));
                    let target = self.target_up(anchor, rng);
                    self.alter_margin(target);
                }
            }
        }
    }

    fn target_up<R: Rng + ?Sized>(&self, price: f64, rng: &mut R) -> f64 {
        let rel = price * (1.0 + self.perturb_rel * rng.random::<f64>());
        let abs = self.perturb_abs * rng.random::<f64>();
        rel + abs
    }

    fn target_down<R: Rng + ?Sized>(&self, price: f64, rng: &mut R) -> f64 {
        let rel = price * (1.0 - self.perturb_rel * rng.random::<f64>());
        let abs = self.perturb_abs * rng.random::<f64>();
        rel - abs
    }

    /// Widrow-Hoff step of the working quote toward `target`, folded back
    /// into the margin. The move is only adopted while it keeps the margin
    /// profitable.
    fn alter_margin(&mut self, target: f64) {
        let (quote, limit) = match (self.last_quote, self.limit) {
            (Some(q), Some(l)) if l > 0.0 => (q, l),
            _ => return,
        };
        let diff = target - quote;
        let change = (1.0 - self.momentum) * self.beta * diff + self.momentum * self.momentum_acc;
        self.momentum_acc = change;
        let new_price = quote + change;
        let signed_margin = new_price / limit - 1.0;
        match self.side {
            Side::Bid => {
                if signed_margin < 0.0 && signed_margin > -1.0 {
                    self.margin = -signed_margin;
                    self.last_quote = Some((limit * (1.0 + signed_margin)).round());
                }
            }
            Side::Ask => {
                if signed_margin > 0.0 {
                    self.margin = signed_margin;
                    self.last_quote = Some((limit * (1.0 + signed_margin)).round());
                }
            }
        }
    }
}
