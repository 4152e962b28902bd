//! Domain primitives shared across the simulator.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// Smallest price increment, in currency units.
pub const TICK_SIZE: f64 = 0.01;

/// A price expressed as a whole number of ticks (1 tick = 0.01 currency units).
///
/// Keeping prices integral eliminates floating-point drift when comparing
/// book states or replaying sessions.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Price(u32);

impl Price {
    /// Builds a price from a tick count. Zero is not a price: the system
    /// minimum is one tick.
    pub fn from_ticks(ticks: u32) -> Price {
        debug_assert!(ticks >= 1, "prices start at one tick");
        Price(ticks)
    }

    /// Builds a price from currency units, rounding to the nearest tick.
    pub fn from_currency(value: f64) -> Price {
        Price::from_ticks((value / TICK_SIZE).round() as u32)
    }

    pub fn ticks(self) -> u32 {
        self.0
    }

    pub fn as_currency(self) -> f64 {
        f64::from(self.0) * TICK_SIZE
    }

    pub fn offset_ticks(self, delta: i64) -> i64 {
        i64::from(self.0) + delta
    }
}

impl fmt::Debug for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Price({:.2})", self.as_currency())
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.as_currency())
    }
}

/// Order book side.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    /// Buy side.
    Bid,
    /// Sell side.
    Ask,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Bid => Side::Ask,
            Side::Ask => Side::Bid,
        }
    }
}

/// Identifies a trader by side and index within that side.
///
/// Buyers order before sellers, then by index; broadcast loops and CSV
/// output follow this ordering.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TraderId {
    pub side: Side,
    pub index: u16,
}

impl TraderId {
    pub fn buyer(index: u16) -> TraderId {
        TraderId { side: Side::Bid, index }
    }

    pub fn seller(index: u16) -> TraderId {
        TraderId { side: Side::Ask, index }
    }
}

impl fmt::Display for TraderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            Side::Bid => 'B',
            Side::Ask => 'S',
        };
        write!(f, "{}{:02}", tag, self.index)
    }
}

impl FromStr for TraderId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::BadTraderId(s.to_string());
        let (tag, digits) = s.split_at(s.len().min(1));
        let index: u16 = digits.parse().map_err(|_| bad())?;
        match tag {
            "B" => Ok(TraderId::buyer(index)),
            "S" => Ok(TraderId::seller(index)),
            _ => Err(bad()),
        }
    }
}

/// Trading strategy selector, matching the name tokens accepted in configs.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Strategy {
    Gvwy,
    Shvr,
    Zic,
    Zip,
    Aa,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Gvwy,
        Strategy::Shvr,
        Strategy::Zic,
        Strategy::Zip,
        Strategy::Aa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Gvwy => "GVWY",
            Strategy::Shvr => "SHVR",
            Strategy::Zic => "ZIC",
            Strategy::Zip => "ZIP",
            Strategy::Aa => "AA",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "GVWY" => Ok(Strategy::Gvwy),
            "SHVR" => Ok(Strategy::Shvr),
            "ZIC" => Ok(Strategy::Zic),
            "ZIP" => Ok(Strategy::Zip),
            "AA" => Ok(Strategy::Aa),
            _ => Err(ParseError::UnknownStrategy(s.to_string())),
        }
    }
}

/// System-wide price domain plus the stub price quoted into an empty book.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MarketParams {
    /// Lowest admissible price (one tick by default).
    pub price_min: Price,
    /// Highest admissible price.
    pub price_max: Price,
    /// Lowest schedule limit; used as the bid-side stub when the book is
    /// empty.
    pub schedule_low: Price,
}

impl Default for MarketParams {
    fn default() -> Self {
        MarketParams {
            price_min: Price::from_ticks(1),
            price_max: Price::from_currency(2.00),
            schedule_low: Price::from_currency(0.10),
        }
    }
}

impl MarketParams {
    pub fn contains(&self, price: Price) -> bool {
        price >= self.price_min && price <= self.price_max
    }

    /// Clamps a raw tick count into the system price domain.
    pub fn clamp_ticks(&self, ticks: i64) -> Price {
        let lo = i64::from(self.price_min.ticks());
        let hi = i64::from(self.price_max.ticks());
        Price::from_ticks(ticks.clamp(lo, hi) as u32)
    }

    /// Bid price quoted when the bid side of the book is empty.
    pub fn bid_stub(&self) -> Price {
        self.schedule_low.max(self.price_min)
    }

    /// Ask price quoted when the ask side of the book is empty.
    pub fn ask_stub(&self) -> Price {
        self.price_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn price_round_trips_currency() {
        let p = Price::from_currency(0.97);
        assert_eq!(p.ticks(), 97);
        assert!((p.as_currency() - 0.97).abs() < 1e-12);
        assert_eq!(p.to_string(), "0.97");
    }

    #[test]
    fn trader_ids_order_buyers_first() {
        let mut ids = vec![TraderId::seller(0), TraderId::buyer(1), TraderId::buyer(0)];
        ids.sort();
        assert_eq!(ids[0], TraderId::buyer(0));
        assert_eq!(ids[2], TraderId::seller(0));
        assert_eq!(TraderId::seller(7).to_string(), "S07");
        assert_eq!("B03".parse::<TraderId>().unwrap(), TraderId::buyer(3));
    }

    #[test]
    fn strategy_tokens_parse() {
        assert_eq!("AA".parse::<Strategy>().unwrap(), Strategy::Aa);
        assert_eq!("shvr".parse::<Strategy>().unwrap(), Strategy::Shvr);
        assert!("GDX".parse::<Strategy>().is_err());
    }
}
