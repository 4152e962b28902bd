//! Error types.

use thiserror::Error;

use crate::types::{Price, TraderId};

/// Rejections raised by the exchange when an order cannot be accepted.
#[derive(Debug, Error, PartialEq)]
pub enum ExchangeError {
    #[error("order price {price} outside system bounds [{min}, {max}]")]
    PriceOutOfBounds { price: Price, min: Price, max: Price },
    #[error("order quantity {0} rejected: assignments are for a single unit")]
    BadQuantity(u32),
    #[error("unknown trader id {0}")]
    UnknownTrader(TraderId),
}

/// Errors from schedule generation and equilibrium computation.
#[derive(Debug, Error, PartialEq)]
pub enum ScheduleError {
    #[error("degenerate spacing: n=1 requires price_low == price_high")]
    DegenerateSpacing,
    #[error("invalid schedule config: {0}")]
    InvalidConfig(String),
    #[error("equilibrium needs at least one buyer and one seller assignment")]
    EmptySide,
}

/// Errors from selection-model construction.
#[derive(Debug, Error, PartialEq)]
pub enum SelectionError {
    #[error("fixed order selection requires balanced sides ({buyers} buyers vs {sellers} sellers)")]
    UnbalancedSides { buyers: usize, sellers: usize },
    #[error("tournament selection requires a rank for every trader (missing {0})")]
    MissingRank(TraderId),
    #[error("reaction time for {0} must be strictly positive")]
    NonPositiveReactionTime(TraderId),
    #[error("selection model has no traders")]
    Empty,
}

/// Errors from statistical summaries.
#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("baseline mean is zero; ratios are undefined")]
    ZeroBaseline,
}

/// Errors from trade accounting.
#[derive(Debug, Error, PartialEq)]
pub enum AccountingError {
    #[error("trade recorded for {0} without an active assignment")]
    NoActiveAssignment(TraderId),
}

/// Token-level parse failures.
#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("unknown strategy token `{0}` (expected GVWY|SHVR|ZIC|ZIP|AA)")]
    UnknownStrategy(String),
    #[error("unknown selection model `{0}` (expected random|fixed|rank|proportional)")]
    UnknownSelectionModel(String),
    #[error("malformed trader id `{0}`")]
    BadTraderId(String),
}

/// Errors raised while reading or validating a run configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    MalformedLine { line: usize, text: String },
    #[error("line {line}: unknown section [{0}]", .section)]
    UnknownSection { line: usize, section: String },
    #[error("key `{key}`: {source}")]
    BadToken {
        key: String,
        #[source]
        source: ParseError,
    },
    #[error("key `{key}`: cannot parse value `{value}`")]
    BadValue { key: String, value: String },
    #[error("unknown key `{key}` in section [{section}]")]
    UnknownKey { key: String, section: String },
    #[error("{0}")]
    Invalid(String),
    #[error("selection=proportional needs reaction times: supply `times = <csv path>` or `times = table2`")]
    MissingReactionTimes,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("reaction time csv: {0}")]
    BadTimesCsv(String),
}
