//! Wall-clock profiling of strategy compute times.
//!
//! Each strategy's `get_order` and `respond` methods are timed against a
//! recorded corpus of market situations (books, assignments and events
//! captured from live mixed-population sessions at several population
//! sizes and replenishment intervals). Per-call durations subtract the
//! measured clock overhead; when the clock is coarser than a microsecond,
//! calls are timed in batches of 1000 instead.
//!
//! Absolute times are machine-dependent. Only orderings and
//! baseline-relative ratios are meaningful across machines, which is why
//! the published reference times can be loaded as a fixed table.
//!
//! Timing runs must be single-threaded with no concurrent load.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::StatsError;
use crate::exchange::{Exchange, LobSnapshot, MarketEvent, Order};
use crate::schedule::{Assignment, ScheduleConfig};
use crate::scheduler::{random_step, TraderPool};
use crate::traders::{StrategyParams, Trader};
use crate::types::{MarketParams, Price, Side, Strategy, TraderId};

/// Published reference reaction times, in microseconds.
pub fn table2_times() -> BTreeMap<Strategy, f64> {
    BTreeMap::from([
        (Strategy::Gvwy, 4.2),
        (Strategy::Shvr, 6.9),
        (Strategy::Zic, 7.1),
        (Strategy::Zip, 8.4),
        (Strategy::Aa, 9.5),
    ])
}

/// Timing results for one strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileEntry {
    pub strategy: Strategy,
    /// Mean `get_order` duration, microseconds.
    pub get_order_us: f64,
    /// Mean `respond` duration, microseconds.
    pub respond_us: f64,
    /// Pooled mean over all timed method calls, microseconds. Used for
    /// ratios; the per-method means are reported alongside because the
    /// reference table does not say which it used.
    pub combined_us: f64,
    /// Total timed method calls.
    pub calls: u64,
}

/// A full profiling report.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileReport {
    pub entries: Vec<ProfileEntry>,
    /// Measured clock resolution in nanoseconds.
    pub clock_resolution_ns: u64,
    /// Set when the clock is coarser than one microsecond.
    pub precision_warning: bool,
    /// Description of the workload corpus.
    pub workload: String,
}

impl ProfileReport {
    pub fn entry(&self, strategy: Strategy) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| e.strategy == strategy)
    }

    /// Per-strategy combined means, usable directly as a reaction-time
    /// table for the scheduler.
    pub fn reaction_times(&self) -> BTreeMap<Strategy, f64> {
        self.entries.iter().map(|e| (e.strategy, e.combined_us)).collect()
    }

    /// Each strategy's combined mean relative to `baseline`.
    pub fn ratios(&self, baseline: Strategy) -> Result<BTreeMap<Strategy, f64>, StatsError> {
        ratios_to_baseline(&self.reaction_times(), baseline)
    }
}

/// Divides each strategy's time by the baseline's.
pub fn ratios_to_baseline(
    times: &BTreeMap<Strategy, f64>,
    baseline: Strategy,
) -> Result<BTreeMap<Strategy, f64>, StatsError> {
    let base = times.get(&baseline).copied().unwrap_or(0.0);
    if base == 0.0 {
        return Err(StatsError::ZeroBaseline);
    }
    Ok(times.iter().map(|(&s, &t)| (s, t / base)).collect())
}

/// One recorded market situation.
#[derive(Clone, Debug)]
enum CorpusItem {
    /// A selected trader quoting: book state plus its assignment limit.
    Quote { book: LobSnapshot, limit: Price },
    /// A broadcast event with the book state after it.
    Event { event: MarketEvent, book: LobSnapshot },
}

/// Records market situations from short mixed-population sessions at
/// several population sizes and replenishment intervals.
fn record_corpus(seed: u64) -> Vec<CorpusItem> {
    let market = MarketParams::default();
    let strategy_params = StrategyParams::default();
    let mut corpus = Vec::new();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    for (count, replenish) in [(1usize, 20u32), (2, 30), (3, 50)] {
        let n = 5 * count;
        let schedule = ScheduleConfig {
            n,
            replenish_interval: replenish,
            session_length: 120,
            ..ScheduleConfig::default()
        };
        let side_strategies: Vec<Strategy> = Strategy::ALL
            .iter()
            .flat_map(|&s| std::iter::repeat_n(s, count))
            .collect();
        let mut traders: Vec<Trader> = Vec::new();
        for (i, &s) in side_strategies.iter().enumerate() {
            traders.push(Trader::new(TraderId::buyer(i as u16), s, &strategy_params, &mut rng));
        }
        for (i, &s) in side_strategies.iter().enumerate() {
            traders.push(Trader::new(TraderId::seller(i as u16), s, &strategy_params, &mut rng));
        }
        let slot = |id: TraderId| match id.side {
            Side::Bid => usize::from(id.index),
            Side::Ask => n + usize::from(id.index),
        };
        let limits = schedule.limit_prices().expect("valid schedule");
        let pool = TraderPool::with_sides(n, n);
        let mut exchange = Exchange::new(market, pool.all());
        for step in 0..schedule.session_length {
            if step % replenish == 0 {
                for id in pool.all() {
                    if let Some(record) = exchange.cancel_order(id) {
                        corpus.push(CorpusItem::Event {
                            event: record.event,
                            book: record.book_after.clone(),
                        });
                        for t in traders.iter_mut() {
                            t.respond(&record.event, &record.book_after, &market, &mut rng);
                        }
                    }
                }
                for i in 0..n {
                    for id in [TraderId::buyer(i as u16), TraderId::seller(i as u16)] {
                        traders[slot(id)].assign(Assignment {
                            trader_id: id,
                            side: id.side,
                            limit: limits[i],
                            issued_step: step,
                        });
                    }
                }
            }
            for actor in random_step(&pool, &mut rng) {
                let s = slot(actor);
                if !traders[s].has_assignment() {
                    continue;
                }
                let book = exchange.snapshot();
                let limit = traders[s].assignment().unwrap().limit;
                corpus.push(CorpusItem::Quote { book: book.clone(), limit });
                let Some(price) = traders[s].get_order(&book, &market, &mut rng) else {
                    continue;
                };
                let side = traders[s].assignment().unwrap().side;
                let submission = exchange
                    .submit_order(Order::new(actor, side, price, step))
                    .expect("corpus quotes stay in bounds");
                for record in &submission.events {
                    if let MarketEvent::Trade(trade) = record.event {
                        let _ = traders[slot(trade.buyer_id)].record_fill(&trade);
                        let _ = traders[slot(trade.seller_id)].record_fill(&trade);
                    }
                    corpus.push(CorpusItem::Event {
                        event: record.event,
                        book: record.book_after.clone(),
                    });
                    for t in traders.iter_mut() {
                        t.respond(&record.event, &record.book_after, &market, &mut rng);
                    }
                }
            }
        }
    }
    corpus
}

/// Smallest positive step the monotonic clock can resolve, in nanoseconds.
pub fn clock_resolution_ns() -> u64 {
    let mut best = u64::MAX;
    for _ in 0..4096 {
        let t0 = Instant::now();
        let mut t1 = Instant::now();
        while t1 == t0 {
            t1 = Instant::now();
        }
        let dt = t1 - t0;
        best = best.min(u64::from(dt.subsec_nanos()) + dt.as_secs() * 1_000_000_000);
    }
    best.max(1)
}

/// Mean cost of one timing pair, in nanoseconds; subtracted from per-call
/// measurements so ratios reflect strategy work, not the clock.
fn clock_overhead_ns() -> f64 {
    let reps = 200_000u32;
    let start = Instant::now();
    for _ in 0..reps {
        let t = Instant::now();
        std::hint::black_box(t.elapsed());
    }
    start.elapsed().as_nanos() as f64 / f64::from(reps)
}

/// Profiles all five strategies over roughly `calls_per_strategy` timed
/// method calls each, replaying the same recorded workload corpus.
pub fn profile_strategies(calls_per_strategy: u64, seed: u64) -> ProfileReport {
    let corpus = record_corpus(seed);
    let resolution = clock_resolution_ns();
    let batched = resolution > 1_000;
    let overhead_ns = if batched { 0.0 } else { clock_overhead_ns() };
    let market = MarketParams::default();
    let strategy_params = StrategyParams::default();

    let mut entries = Vec::new();
    for &strategy in &Strategy::ALL {
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xABCD);
        // a buyer and a seller, alternated so both sides of the logic run
        let mut sides = [
            Trader::new(TraderId::buyer(0), strategy, &strategy_params, &mut rng),
            Trader::new(TraderId::seller(0), strategy, &strategy_params, &mut rng),
        ];

        let warmup = corpus.len().min(2048);
        let mut get_ns = 0.0f64;
        let mut get_calls = 0u64;
        let mut respond_ns = 0.0f64;
        let mut respond_calls = 0u64;
        let mut timed: u64 = 0;
        let mut iteration = 0usize;
        while timed < calls_per_strategy {
            let item = &corpus[iteration % corpus.len()];
            let warm = iteration < warmup;
            let trader = &mut sides[iteration % 2];
            match item {
                CorpusItem::Quote { book, limit } => {
                    trader.assign(Assignment {
                        trader_id: trader.id,
                        side: trader.id.side,
                        limit: *limit,
                        issued_step: 0,
                    });
                    let (mut dt_ns, n) = if batched {
                        let t0 = Instant::now();
                        for _ in 0..1000 {
                            std::hint::black_box(trader.get_order(book, &market, &mut rng));
                        }
                        (t0.elapsed().as_nanos() as f64, 1000u64)
                    } else {
                        let t0 = Instant::now();
                        std::hint::black_box(trader.get_order(book, &market, &mut rng));
                        ((t0.elapsed().as_nanos() as f64 - overhead_ns).max(0.0), 1)
                    };
                    if warm {
                        dt_ns = 0.0;
                    } else {
                        get_calls += n;
                        timed += n;
                    }
                    get_ns += dt_ns;
                }
                CorpusItem::Event { event, book } => {
                    let (mut dt_ns, n) = if batched {
                        let t0 = Instant::now();
                        for _ in 0..1000 {
                            trader.respond(event, book, &market, &mut rng);
                        }
                        (t0.elapsed().as_nanos() as f64, 1000u64)
                    } else {
                        let t0 = Instant::now();
                        trader.respond(event, book, &market, &mut rng);
                        ((t0.elapsed().as_nanos() as f64 - overhead_ns).max(0.0), 1)
                    };
                    if warm {
                        dt_ns = 0.0;
                    } else {
                        respond_calls += n;
                        timed += n;
                    }
                    respond_ns += dt_ns;
                }
            }
            iteration += 1;
        }

        let calls = get_calls + respond_calls;
        entries.push(ProfileEntry {
            strategy,
            get_order_us: get_ns / get_calls.max(1) as f64 / 1000.0,
            respond_us: respond_ns / respond_calls.max(1) as f64 / 1000.0,
            combined_us: (get_ns + respond_ns) / calls.max(1) as f64 / 1000.0,
            calls,
        });
    }

    ProfileReport {
        entries,
        clock_resolution_ns: resolution,
        precision_warning: batched,
        workload: format!(
            "recorded mixed-population sessions (5/10/15 traders per side, replenish 20/30/50); \
             combined mean pools get_order and respond calls; corpus of {} situations",
            corpus.len()
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table2_ratios_reproduce_published_columns() {
        let times = table2_times();
        let ratios = ratios_to_baseline(&times, Strategy::Shvr).unwrap();
        let expected = [
            (Strategy::Gvwy, 0.61),
            (Strategy::Shvr, 1.00),
            (Strategy::Zic, 1.03),
            (Strategy::Zip, 1.22),
            (Strategy::Aa, 1.38),
        ];
        for (strategy, want) in expected {
            let got = ratios[&strategy];
            assert!((got - want).abs() < 0.005, "{strategy}: {got:.4} vs {want}");
        }
        // fastest to slowest spans roughly a factor of two
        let vs_gvwy = ratios_to_baseline(&times, Strategy::Gvwy).unwrap();
        assert!((vs_gvwy[&Strategy::Aa] - 2.26).abs() < 0.005);
        // baseline relative to itself is exactly 1
        assert_eq!(vs_gvwy[&Strategy::Gvwy], 1.0);
    }

    #[test]
    fn zero_baseline_is_rejected() {
        let times = BTreeMap::from([(Strategy::Gvwy, 0.0), (Strategy::Aa, 1.0)]);
        assert_eq!(
            ratios_to_baseline(&times, Strategy::Gvwy).unwrap_err(),
            StatsError::ZeroBaseline
        );
    }

    #[test]
    fn corpus_has_both_quote_and_event_items() {
        let corpus = record_corpus(5);
        let quotes = corpus.iter().filter(|i| matches!(i, CorpusItem::Quote { .. })).count();
        let events = corpus.iter().filter(|i| matches!(i, CorpusItem::Event { .. })).count();
        assert!(quotes > 500, "quotes {quotes}");
        assert!(events > 500, "events {events}");
    }

    #[test]
    fn quick_profile_reports_all_strategies() {
        let report = profile_strategies(4_000, 9);
        assert_eq!(report.entries.len(), 5);
        for e in &report.entries {
            assert!(e.calls >= 4_000);
            assert!(e.combined_us >= 0.0);
        }
        assert!(report.clock_resolution_ns > 0);
    }
}
