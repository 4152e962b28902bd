//! marketlab: a discrete-time simulation of a single-exchange financial
//! market with a public limit order book, continuous-double-auction
//! matching, five reference trading strategies, and selection models that
//! make trader reaction time part of the experiment.
//!
//! # Layout
//!
//! - [`exchange`] - the limit order book and matching rules
//! - [`schedule`] - symmetric supply/demand schedules and the theoretical
//!   equilibrium
//! - [`traders`] - the trader contract and the GVWY, SHVR, ZIC, ZIP and AA
//!   strategies
//! - [`scheduler`] - random, fixed-order, tournament-rank and
//!   speed-proportional selection models
//! - [`session`] - runs one market session deterministically from a seed
//! - [`experiment`] - repetition harness, statistics and the headline
//!   experiment families
//! - [`profiler`] - wall-clock profiling of strategy compute times
//! - [`config`] - the `key = value` run-configuration format
//! - [`report`] - CSV import/export of tapes, schedules, summaries and
//!   profiles
//!
//! Each major capability has a runnable example under `examples/`; the
//! `marketlab` binary wraps the same entry points behind `run`, `sweep`,
//! `profile` and `replay` subcommands.

pub mod config;
pub mod error;
pub mod exchange;
pub mod experiment;
pub mod profiler;
pub mod report;
pub mod schedule;
pub mod scheduler;
pub mod session;
pub mod stats;
pub mod traders;
pub mod types;

pub use exchange::{lob_metrics, Exchange, LobMetrics, LobSnapshot, MarketEvent, Order, Trade};
pub use schedule::{
    generate_symmetric_schedule, replenishment_steps, theoretical_equilibrium, Assignment,
    EquilibriumInfo, ScheduleConfig,
};
pub use scheduler::{ReactionTimeTable, Scheduler, SelectionModel, TraderPool};
pub use session::{run_session, SessionConfig, SessionResult};
pub use types::{MarketParams, Price, Side, Strategy, TraderId};
