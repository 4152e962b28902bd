//! AA: adaptive-aggressive trading.
//!
//! The trader keeps a long-term view of the market: an exponential moving
//! average of transaction prices estimates the equilibrium price, and the
//! root-mean-square deviation of recent trades around that estimate
//! measures volatility, which adapts a shape parameter `theta`. A
//! short-term aggressiveness level `r` in [-1, 1] maps through a target
//! price function `tau(r)`: at `r = 0` the target is the equilibrium
//! estimate; a fully aggressive intra-marginal trader targets its limit
//! price; passive traders retreat toward the market boundary.
//!
//! A trader whose limit is on the profitable side of the equilibrium
//! estimate (buyer with `L >= p_hat`, seller with `L <= p_hat`) is
//! intra-marginal and trades patiently; an extra-marginal trader caps its
//! target at the limit price.
//!
//! Quoting is book-driven: a buyer steps a fraction of the way from the
//! best bid toward (just past) the best ask, never beyond its target; a
//! seller mirrors. Aggressiveness adapts on each transaction, nudging the
//! target toward the price level the market is actually printing.
//!
//! Before any transaction exists the equilibrium estimate is undefined and
//! the trader falls back to a uniform draw within its no-loss bounds.

use std::collections::VecDeque;

use rand::Rng;

use crate::exchange::{LobSnapshot, MarketEvent};
use crate::types::{MarketParams, Price, Side};

use super::{clamp_quote, round_quote, zic_quote};

/// AA parameters; learning rates and the initial aggressiveness are drawn
/// per trader.
#[derive(Clone, Debug, PartialEq)]
pub struct AaParams {
    /// Transaction-history window for the volatility estimate.
    pub window: usize,
    /// Weight of the newest trade in the equilibrium-estimate EMA.
    pub ema_alpha: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_init: f64,
    /// Relative and absolute margins applied to aggressiveness targets and
    /// to the opposite-best price when quoting.
    pub lambda_rel: f64,
    pub lambda_abs: f64,
    /// Fraction of the gap toward the opposite best covered per quote.
    pub eta: f64,
    pub short_term_rate_range: (f64, f64),
    pub long_term_rate_range: (f64, f64),
    pub initial_r_range: (f64, f64),
}

impl Default for AaParams {
    fn default() -> Self {
        AaParams {
            window: 30,
            ema_alpha: 1.0 / 3.0,
            theta_min: -8.0,
            theta_max: 2.0,
            theta_init: -2.0,
            lambda_rel: 0.05,
            lambda_abs: 0.05,
            eta: 3.0,
            short_term_rate_range: (0.1, 0.5),
            long_term_rate_range: (0.1, 0.5),
            initial_r_range: (-0.3, 0.0),
        }
    }
}

/// AA internal state.
#[derive(Clone, Debug, PartialEq)]
pub struct AaState {
    side: Side,
    /// Short-term learning rate for aggressiveness.
    beta1: f64,
    /// Long-term learning rate for theta.
    beta2: f64,
    /// Aggressiveness in [-1, 1].
    pub r: f64,
    /// Long-term shape parameter.
    pub theta: f64,
    /// Equilibrium estimate in ticks; defined once a trade has printed.
    p_hat: Option<f64>,
    /// Volatility: RMSD of the window around `p_hat`, in ticks.
    sigma: f64,
    window: VecDeque<f64>,
    window_cap: usize,
    ema_alpha: f64,
    sum: f64,
    sum_sq: f64,
    /// Observed range of normalised volatility, for theta adaptation.
    alpha_lo: f64,
    alpha_hi: f64,
    /// Current target price, in ticks.
    target: Option<f64>,
    lambda_rel: f64,
    lambda_abs: f64,
    eta: f64,
    theta_min: f64,
    theta_max: f64,
    /// Last known limit, in ticks.
    limit: Option<f64>,
}

impl AaState {
    pub fn new<R: Rng + ?Sized>(side: Side, params: &AaParams, rng: &mut R) -> AaState {
        AaState {
            side,
            beta1: rng
                .random_range(params.short_term_rate_range.0..=params.short_term_rate_range.1),
            beta2: rng
                .random_range(params.long_term_rate_range.0..=params.long_term_rate_range.1),
            r: rng.random_range(params.initial_r_range.0..=params.initial_r_range.1),
            theta: params.theta_init,
            p_hat: None,
            sigma: 0.0,
            window: VecDeque::with_capacity(params.window),
            window_cap: params.window.max(1),
            ema_alpha: params.ema_alpha,
            sum: 0.0,
            sum_sq: 0.0,
            alpha_lo: f64::INFINITY,
            alpha_hi: f64::NEG_INFINITY,
            target: None,
            lambda_rel: params.lambda_rel,
            lambda_abs: params.lambda_abs,
            eta: params.eta,
            theta_min: params.theta_min,
            theta_max: params.theta_max,
            limit: None,
        }
    }

    /// Equilibrium estimate in ticks, once defined.
    pub fn equilibrium_estimate(&self) -> Option<f64> {
        self.p_hat
    }

    /// Volatility estimate (RMSD around `p_hat`), in ticks.
    pub fn volatility(&self) -> f64 {
        self.sigma
    }

    /// Intra/extra-marginal classification of a limit price against the
    /// current equilibrium estimate; `None` before any transaction.
    pub fn is_intra_marginal(&self, limit: Price) -> Option<bool> {
        let p = self.p_hat?;
        let l = f64::from(limit.ticks());
        Some(match self.side {
            Side::Bid => l >= p,
            Side::Ask => l <= p,
        })
    }

    /// Folds a transaction price (in ticks) into the long-term estimates:
    /// EMA equilibrium, RMSD volatility, and theta.
    pub fn observe_trade(&mut self, price: f64) {
        self.window.push_back(price);
        self.sum += price;
        self.sum_sq += price * price;
        if self.window.len() > self.window_cap {
            let old = self.window.pop_front().unwrap();
            self.sum -= old;
            self.sum_sq -= old * old;
        }
        let p = match self.p_hat {
            None => price,
            Some(p) => p + (price - p) * self.ema_alpha,
        };
        self.p_hat = Some(p);
        let n = self.window.len() as f64;
        // RMSD around p via E[q^2] - 2p E[q] + p^2
        let msd = (self.sum_sq / n - 2.0 * p * (self.sum / n) + p * p).max(0.0);
        self.sigma = msd.sqrt();

        // adapt theta from normalised volatility
        let alpha = self.sigma / p;
        self.alpha_lo = self.alpha_lo.min(alpha);
        self.alpha_hi = self.alpha_hi.max(alpha);
        let span = self.alpha_hi - self.alpha_lo;
        let alpha_norm = if span > 1e-12 { (alpha - self.alpha_lo) / span } else { 0.4 };
        let theta_star = self.theta_min
            + (self.theta_max - self.theta_min)
                * (1.0 - alpha_norm * (2.0 * (alpha_norm - 1.0)).exp());
        self.theta += self.beta2 * (theta_star - self.theta);
    }

    /// Target price for the current aggressiveness, in ticks.
    pub fn target(&self, limit: f64, params: &MarketParams) -> Option<f64> {
        let p = self.p_hat?;
        Some(target_price(self.side, self.r, self.theta, p, limit, params))
    }

    /// Processes one market event: transactions drive the long-term
    /// estimates and pull the aggressiveness toward the level the market
    /// is printing at; a competing quote on the trader's own side that
    /// reaches its target pushes aggressiveness up.
    pub fn respond<R: Rng + ?Sized>(
        &mut self,
        event: &MarketEvent,
        _book: &LobSnapshot,
        params: &MarketParams,
        _rng: &mut R,
    ) {
        match event {
            MarketEvent::Trade(trade) => {
                let q = f64::from(trade.price.ticks());
                self.observe_trade(q);
                let (Some(limit), Some(p)) = (self.limit, self.p_hat) else { return };
                let standing = self.target.unwrap_or_else(|| {
                    target_price(self.side, self.r, self.theta, p, limit, params)
                });
                // relax when the market prints on the profitable side of
                // the standing target, tighten otherwise; either way move
                // toward the aggressiveness the print implies
                let relax = match self.side {
                    Side::Bid => standing >= q,
                    Side::Ask => standing <= q,
                };
                let r_shout = inverse_target(self.side, q, self.theta, p, limit, params);
                self.nudge_aggressiveness(r_shout, !relax);
                self.target = Some(target_price(self.side, self.r, self.theta, p, limit, params));
            }
            MarketEvent::OrderPosted(order) => {
                if order.side != self.side {
                    return;
                }
                let (Some(limit), Some(p)) = (self.limit, self.p_hat) else { return };
                let shout = f64::from(order.price.ticks());
                let standing = self.target.unwrap_or_else(|| {
                    target_price(self.side, self.r, self.theta, p, limit, params)
                });
                let outdone = match self.side {
                    Side::Bid => shout >= standing,
                    Side::Ask => shout <= standing,
                };
                if outdone {
                    let r_shout = inverse_target(self.side, shout, self.theta, p, limit, params);
                    self.nudge_aggressiveness(r_shout, true);
                    self.target =
                        Some(target_price(self.side, self.r, self.theta, p, limit, params));
                }
            }
            MarketEvent::OrderCancelled(_) => {}
        }
    }

    fn nudge_aggressiveness(&mut self, r_shout: f64, tighten: bool) {
        let t = std::env::var("AA_TIGHTEN").map(|v| v.parse().unwrap_or(1.0)).unwrap_or(1.0); // PROBE
        let delta = if tighten {
            (1.0 + t * self.lambda_rel) * r_shout + t * self.lambda_abs
        } else {
            (1.0 - self.lambda_rel) * r_shout - self.lambda_abs
        };
        self.r = (self.r + self.beta1 * (delta - self.r)).clamp(-1.0, 1.0);
    }

    /// Quote for the current assignment, or `None` when the best price on
    /// this trader's own side already beats its limit.
    pub fn quote<R: Rng + ?Sized>(
        &mut self,
        limit: Price,
        book: &LobSnapshot,
        params: &MarketParams,
        rng: &mut R,
    ) -> Option<Price> {
        let l = f64::from(limit.ticks());
        self.limit = Some(l);
        let Some(p) = self.p_hat else {
            // cold start: no equilibrium estimate yet
            return Some(zic_quote(limit, self.side, params, rng));
        };
        let tau = target_price(self.side, self.r, self.theta, p, l, params);
        self.target = Some(tau);

        let o_bid = book.best_bid.map(|b| f64::from(b.ticks())).unwrap_or(0.0);
        let o_ask = book
            .best_ask
            .map(|a| f64::from(a.ticks()))
            .unwrap_or(f64::from(params.price_max.ticks()));
        let raw = match self.side {
            Side::Bid => {
                if l <= o_bid {
                    return None; // cannot improve the bid without a loss
                }
                if book.best_ask.is_some() && o_ask <= tau {
                    // the standing ask already meets the target: accept it
                    o_ask
                } else {
                    let o_ask_plus = (1.0 + self.lambda_rel) * o_ask + self.lambda_abs;
                    let q = o_bid + (l.min(o_ask_plus) - o_bid) / self.eta;
                    if std::env::var("AA_NOCAP").is_ok() { q } else { q.min(tau) } // PROBE
                }
            }
            Side::Ask => {
                if l >= o_ask {
                    return None;
                }
                if book.best_bid.is_some() && o_bid >= tau {
                    o_bid
                } else {
                    let o_bid_minus = (1.0 - self.lambda_rel) * o_bid - self.lambda_abs;
                    let q = o_ask - (o_ask - l.max(o_bid_minus)) / self.eta;
                    if std::env::var("AA_NOCAP").is_ok() { q } else { q.max(tau) } // PROBE
                }
            }
        };
        Some(clamp_quote(self.side, round_quote(self.side, raw), limit, params))
    }
}

/// `(e^{x*theta} - 1) / (e^theta - 1)`: 0 at x=0, 1 at x=1, monotone in x;
/// tends to `x` as theta tends to 0.
fn expu(x: f64, theta: f64) -> f64 {
    if theta.abs() < 1e-9 {
        x
    } else {
        ((x * theta).exp() - 1.0) / (theta.exp() - 1.0)
    }
}

/// Inverse of `expu` on [0, 1].
fn expu_inv(v: f64, theta: f64) -> f64 {
    let v = v.clamp(0.0, 1.0);
    if theta.abs() < 1e-9 {
        v
    } else {
        (1.0 + v * (theta.exp() - 1.0)).ln() / theta
    }
}

/// The target price `tau(r)`, in ticks.
///
/// For an intra-marginal trader: `tau(0) = p_hat`, `tau(1)` is the limit,
/// and `tau(-1)` retreats to the market boundary (zero for buyers, the
/// system maximum for sellers). Extra-marginal targets are capped at the
/// limit price. Monotone non-decreasing in `r` for buyers, non-increasing
/// for sellers.
pub fn target_price(
    side: Side,
    r: f64,
    theta: f64,
    p_hat: f64,
    limit: f64,
    params: &MarketParams,
) -> f64 {
    let r = r.clamp(-1.0, 1.0);
    match side {
        Side::Bid => {
            if limit >= p_hat {
                if r >= 0.0 {
                    p_hat + (limit - p_hat) * expu(r, theta)
                } else {
                    p_hat * (1.0 - expu(-r, theta))
                }
            } else if r >= 0.0 {
                limit
            } else {
                limit * (1.0 - expu(-r, theta))
            }
        }
        Side::Ask => {
            let max = f64::from(params.price_max.ticks());
            if limit <= p_hat {
                if r >= 0.0 {
                    p_hat - (p_hat - limit) * expu(r, theta)
                } else {
                    p_hat + (max - p_hat) * expu(-r, theta)
                }
            } else if r >= 0.0 {
                limit
            } else {
                limit + (max - limit) * expu(-r, theta)
            }
        }
    }
}

/// The aggressiveness whose target equals `price`: the inverse of
/// [`target_price`] in `r`, clamped to [-1, 1].
pub fn inverse_target(
    side: Side,
    price: f64,
    theta: f64,
    p_hat: f64,
    limit: f64,
    params: &MarketParams,
) -> f64 {
    let r = match side {
        Side::Bid => {
            if limit >= p_hat {
                if price >= p_hat {
                    if limit - p_hat < 1e-9 {
                        0.0
                    } else {
                        expu_inv((price - p_hat) / (limit - p_hat), theta)
                    }
                } else {
                    -expu_inv(1.0 - price / p_hat, theta)
                }
            } else if price >= limit {
                0.0
            } else {
                -expu_inv(1.0 - price / limit, theta)
            }
        }
        Side::Ask => {
            let max = f64::from(params.price_max.ticks());
            if limit <= p_hat {
                if price <= p_hat {
                    if p_hat - limit < 1e-9 {
                        0.0
                    } else {
                        expu_inv((p_hat - price) / (p_hat - limit), theta)
                    }
                } else {
                    -expu_inv((price - p_hat) / (max - p_hat), theta)
                }
            } else if price <= limit {
                0.0
            } else {
                -expu_inv((price - limit) / (max - limit), theta)
            }
        }
    };
    r.clamp(-1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn px(v: f64) -> Price {
        Price::from_currency(v)
    }

    fn aa(side: Side) -> AaState {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        AaState::new(side, &AaParams::default(), &mut rng)
    }

    fn trade_event(price: f64) -> MarketEvent {
        MarketEvent::Trade(crate::exchange::Trade {
            buyer_id: crate::types::TraderId::buyer(1),
            seller_id: crate::types::TraderId::seller(1),
            price: px(price),
            step: 0,
            taker: Side::Bid,
        })
    }

    #[test]
    fn first_trade_defines_the_estimate_with_zero_volatility() {
        let mut state = aa(Side::Bid);
        assert_eq!(state.equilibrium_estimate(), None);
        state.observe_trade(100.0);
        assert_eq!(state.equilibrium_estimate(), Some(100.0));
        assert_eq!(state.volatility(), 0.0);
    }

    #[test]
    fn constant_history_has_zero_volatility() {
        let mut state = aa(Side::Bid);
        for _ in 0..3 {
            state.observe_trade(100.0);
        }
        assert_eq!(state.equilibrium_estimate(), Some(100.0));
        assert!(state.volatility() < 1e-9);
    }

    #[test]
    fn ema_and_rmsd_match_hand_computation() {
        let mut state = aa(Side::Bid);
        state.observe_trade(100.0);
        state.observe_trade(130.0);
        // EMA with alpha = 1/3: 100 + (130-100)/3 = 110
        let p = state.equilibrium_estimate().unwrap();
        assert_relative_eq!(p, 110.0, epsilon = 1e-9);
        // RMSD of {100, 130} around 110: sqrt((100 + 400)/2)
        let expected = ((100.0f64 - 110.0).powi(2) + (130.0f64 - 110.0).powi(2)) / 2.0;
        assert_relative_eq!(state.volatility(), expected.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn classification_compares_limit_to_estimate() {
        let mut buyer = aa(Side::Bid);
        buyer.observe_trade(100.0);
        assert_eq!(buyer.is_intra_marginal(px(1.50)), Some(true));
        assert_eq!(buyer.is_intra_marginal(px(0.50)), Some(false));
        let mut seller = aa(Side::Ask);
        seller.observe_trade(100.0);
        assert_eq!(seller.is_intra_marginal(px(0.50)), Some(true));
        assert_eq!(seller.is_intra_marginal(px(1.50)), Some(false));
    }

    #[test]
    fn target_boundaries_for_intra_marginal_traders() {
        let params = MarketParams::default();
        for theta in [-6.0, -2.0, -1e-12, 1.5] {
            // buyer: tau(0) = p_hat, tau(1) = L
            assert_relative_eq!(target_price(Side::Bid, 0.0, theta, 100.0, 150.0, &params), 100.0);
            assert_relative_eq!(
                target_price(Side::Bid, 1.0, theta, 100.0, 150.0, &params),
                150.0,
                epsilon = 1e-9
            );
            // seller mirror
            assert_relative_eq!(target_price(Side::Ask, 0.0, theta, 100.0, 50.0, &params), 100.0);
            assert_relative_eq!(
                target_price(Side::Ask, 1.0, theta, 100.0, 50.0, &params),
                50.0,
                epsilon = 1e-9
            );
            // fully passive retreats to the boundary
            assert_relative_eq!(
                target_price(Side::Bid, -1.0, theta, 100.0, 150.0, &params),
                0.0,
                epsilon = 1e-9
            );
            assert_relative_eq!(
                target_price(Side::Ask, -1.0, theta, 100.0, 50.0, &params),
                200.0,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn target_is_monotone_in_aggressiveness() {
        let params = MarketParams::default();
        for &(p_hat, limit) in &[(100.0, 150.0), (100.0, 80.0)] {
            for theta in [-6.0, -2.0, 0.5, 2.0] {
                let mut prev_buy = f64::NEG_INFINITY;
                let mut prev_sell = f64::INFINITY;
                for i in 0..=40 {
                    let r = -1.0 + f64::from(i) * 0.05;
                    let tb = target_price(Side::Bid, r, theta, p_hat, limit, &params);
                    assert!(tb >= prev_buy - 1e-9, "buyer tau not monotone at r={r}");
                    prev_buy = tb;
                    let ts = target_price(Side::Ask, r, theta, p_hat, limit, &params);
                    assert!(ts <= prev_sell + 1e-9, "seller tau not monotone at r={r}");
                    prev_sell = ts;
                }
            }
        }
    }

    #[test]
    fn inverse_target_round_trips() {
        let params = MarketParams::default();
        for &(side, p_hat, limit) in &[
            (Side::Bid, 100.0, 150.0),
            (Side::Bid, 100.0, 70.0),
            (Side::Ask, 100.0, 50.0),
            (Side::Ask, 100.0, 130.0),
        ] {
            for theta in [-4.0, -1.0, 1.0] {
                for i in 0..=20 {
                    let r = -0.95 + f64::from(i) * 0.09;
                    let tau = target_price(side, r, theta, p_hat, limit, &params);
                    let back = inverse_target(side, tau, theta, p_hat, limit, &params);
                    let again = target_price(side, back, theta, p_hat, limit, &params);
                    assert_relative_eq!(tau, again, epsilon = 1e-6);
                }
            }
        }
    }

    #[test]
    fn cold_start_quotes_within_no_loss_bounds() {
        let params = MarketParams::default();
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let mut buyer = aa(Side::Bid);
        let book = LobSnapshot::default();
        for _ in 0..500 {
            let q = buyer.quote(px(1.50), &book, &params, &mut rng).unwrap();
            assert!(q <= px(1.50) && q >= px(0.01));
        }
    }

    #[test]
    fn quotes_step_toward_the_opposite_best_without_passing_the_target() {
        let params = MarketParams::default();
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let mut buyer = aa(Side::Bid);
        buyer.observe_trade(100.0);
        buyer.r = 0.0; // target = p_hat = 100 ticks
        let book = LobSnapshot {
            bids: vec![(px(0.60), 1)],
            asks: vec![(px(1.20), 1)],
            best_bid: Some(px(0.60)),
            best_ask: Some(px(1.20)),
            last_trade: None,
        };
        let q = buyer.quote(px(1.50), &book, &params, &mut rng).unwrap();
        // step from 60 toward min(150, 1.05*120+0.05) is 60 + 66.05/3 = 82
        assert_eq!(q, px(0.82));
        assert!(f64::from(q.ticks()) <= 100.0, "never past the target");

        // with a tight spread the step crosses: quote pinned at the target
        let book = LobSnapshot {
            bids: vec![(px(0.97), 1)],
            asks: vec![(px(0.99), 1)],
            best_bid: Some(px(0.97)),
            best_ask: Some(px(0.99)),
            last_trade: None,
        };
        let q = buyer.quote(px(1.50), &book, &params, &mut rng).unwrap();
        assert_eq!(q, px(0.99), "tight spread: quote reaches the ask, capped by target");
    }

    #[test]
    fn buyer_declines_when_best_bid_meets_its_limit() {
        let params = MarketParams::default();
        let mut rng = ChaCha12Rng::seed_from_u64(44);
        let mut buyer = aa(Side::Bid);
        buyer.observe_trade(100.0);
        let book = LobSnapshot {
            bids: vec![(px(0.80), 1)],
            asks: vec![],
            best_bid: Some(px(0.80)),
            best_ask: None,
            last_trade: None,
        };
        assert_eq!(buyer.quote(px(0.75), &book, &params, &mut rng), None);
    }

    #[test]
    fn prints_above_standing_target_raise_buyer_aggressiveness() {
        let params = MarketParams::default();
        let mut rng = ChaCha12Rng::seed_from_u64(45);
        let mut buyer = aa(Side::Bid);
        buyer.limit = Some(150.0);
        buyer.observe_trade(100.0);
        buyer.r = -0.2;
        buyer.target = Some(90.0);
        let r0 = buyer.r;
        // print at 130 above the standing 90 target: become more aggressive
        buyer.respond(&trade_event(1.30), &LobSnapshot::default(), &params, &mut rng);
        assert!(buyer.r > r0, "r should rise: {} -> {}", r0, buyer.r);

        // print below the standing target: relax
        let mut buyer = aa(Side::Bid);
        buyer.limit = Some(150.0);
        buyer.observe_trade(100.0);
        buyer.r = 0.5;
        buyer.target = Some(120.0);
        let r0 = buyer.r;
        buyer.respond(&trade_event(0.60), &LobSnapshot::default(), &params, &mut rng);
        assert!(buyer.r < r0, "r should fall: {} -> {}", r0, buyer.r);
    }

    #[test]
    fn competing_bids_past_the_target_raise_aggressiveness() {
        let params = MarketParams::default();
        let mut rng = ChaCha12Rng::seed_from_u64(46);
        let mut buyer = aa(Side::Bid);
        buyer.limit = Some(150.0);
        buyer.observe_trade(100.0);
        buyer.r = -0.2;
        buyer.target = Some(95.0);
        let r0 = buyer.r;
        let posted = |price: f64| {
            MarketEvent::OrderPosted(crate::exchange::Order::new(
                crate::types::TraderId::buyer(2),
                Side::Bid,
                px(price),
                0,
            ))
        };
        buyer.respond(&posted(1.10), &LobSnapshot::default(), &params, &mut rng);
        assert!(buyer.r > r0, "outbid past target: {} -> {}", r0, buyer.r);

        // a bid below the target is no threat, and opposite-side quotes
        // are ignored
        let mut buyer2 = aa(Side::Bid);
        buyer2.limit = Some(150.0);
        buyer2.observe_trade(100.0);
        buyer2.target = Some(95.0);
        let before = buyer2.clone();
        buyer2.respond(&posted(0.50), &LobSnapshot::default(), &params, &mut rng);
        assert_eq!(buyer2, before);
        let ask = MarketEvent::OrderPosted(crate::exchange::Order::new(
            crate::types::TraderId::seller(2),
            Side::Ask,
            px(1.10),
            0,
        ));
        buyer2.respond(&ask, &LobSnapshot::default(), &params, &mut rng);
        assert_eq!(buyer2, before);
    }
}
