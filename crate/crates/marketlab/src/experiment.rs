//! Repetition harness: runs independently seeded sessions, aggregates
//! profits per strategy, and computes the statistics used to compare
//! conditions.

use std::collections::BTreeMap;

use crate::scheduler::{ReactionTimeTable, SelectionModel};
use crate::session::{run_session, SessionConfig, SessionError};
use crate::stats::{confidence_interval_95, two_sample_t_test, TTest};
use crate::types::{Strategy, TraderId, TICK_SIZE};

/// Counter-based seed derivation (splitmix64): every repetition gets an
/// independent, reproducible seed from the master seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-strategy totals of one session.
#[derive(Clone, Debug, PartialEq)]
pub struct SessionStrategyRecord {
    pub session: usize,
    pub seed: u64,
    pub strategy: Strategy,
    /// Sum of member traders' profits, in ticks (exact).
    pub total_ticks: i64,
    pub traders: usize,
}

impl SessionStrategyRecord {
    /// Mean profit per trader for this strategy in this session.
    pub fn mean_profit(&self) -> f64 {
        self.total_ticks as f64 * TICK_SIZE / self.traders as f64
    }
}

/// Aggregated outcome of one strategy across repetitions.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategySummary {
    pub strategy: Strategy,
    /// Mean over sessions of the per-trader mean profit.
    pub mean: f64,
    /// 95% confidence half-width over the session means.
    pub ci_half: f64,
    pub n: usize,
}

/// Outcome of a repeated experiment condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSummary {
    pub condition: String,
    pub master_seed: u64,
    pub repetitions: usize,
    pub strategies: Vec<StrategySummary>,
    /// Two-sample t-test between the two strategy groups, when the mix is
    /// a pairwise balanced test.
    pub pairwise: Option<(Strategy, Strategy, TTest)>,
    pub sessions: Vec<SessionStrategyRecord>,
}

impl ExperimentSummary {
    pub fn strategy(&self, strategy: Strategy) -> Option<&StrategySummary> {
        self.strategies.iter().find(|s| s.strategy == strategy)
    }

    /// Per-session mean profits of one strategy, in repetition order.
    pub fn session_means(&self, strategy: Strategy) -> Vec<f64> {
        self.sessions
            .iter()
            .filter(|r| r.strategy == strategy)
            .map(|r| r.mean_profit())
            .collect()
    }
}

/// Runs `repetitions` independently seeded sessions of `base` and
/// aggregates per-strategy statistics. The base config's own seed is
/// ignored; session seeds derive from `master_seed`.
pub fn run_experiment(
    condition: &str,
    base: &SessionConfig,
    repetitions: usize,
    master_seed: u64,
) -> Result<ExperimentSummary, SessionError> {
    let mut sessions = Vec::new();
    let mut means: BTreeMap<Strategy, Vec<f64>> = BTreeMap::new();
    for rep in 0..repetitions {
        let seed = derive_seed(master_seed, rep as u64);
        let result = run_session(&base.with_seed(seed))?;
        let mut totals: BTreeMap<Strategy, (i64, usize)> = BTreeMap::new();
        for outcome in &result.outcomes {
            let entry = totals.entry(outcome.strategy).or_insert((0, 0));
            entry.0 += outcome.profit_ticks;
            entry.1 += 1;
        }
        for (strategy, (total_ticks, traders)) in totals {
            let record =
                SessionStrategyRecord { session: rep, seed, strategy, total_ticks, traders };
            means.entry(strategy).or_default().push(record.mean_profit());
            sessions.push(record);
        }
    }

    let strategies = means
        .iter()
        .map(|(&strategy, samples)| {
            let (mean, ci_half) = confidence_interval_95(samples)
                .unwrap_or((samples.first().copied().unwrap_or(0.0), 0.0));
            StrategySummary { strategy, mean, ci_half, n: samples.len() }
        })
        .collect();

    let pairwise = if means.len() == 2 && repetitions >= 2 {
        let keys: Vec<Strategy> = means.keys().copied().collect();
        let test = two_sample_t_test(&means[&keys[0]], &means[&keys[1]])
            .expect("groups have >= 2 samples");
        Some((keys[0], keys[1], test))
    } else {
        None
    };

    Ok(ExperimentSummary {
        condition: condition.to_string(),
        master_seed,
        repetitions,
        strategies,
        pairwise,
        sessions,
    })
}

/// Balanced pairwise market: `count` traders of each strategy on each side.
pub fn balanced_pair(
    a: Strategy,
    b: Strategy,
    count: usize,
    selection: SelectionModel,
    seed: u64,
) -> SessionConfig {
    SessionConfig::new(vec![(a, count), (b, count)], selection, seed)
}

/// Reaction times keyed by strategy, expanded to every trader of the mix.
pub fn strategy_reaction_times(
    mix: &[(Strategy, usize)],
    times: &BTreeMap<Strategy, f64>,
) -> ReactionTimeTable {
    let mut entries = Vec::new();
    let mut index = 0u16;
    for &(strategy, count) in mix {
        let r = times.get(&strategy).copied().unwrap_or(1.0);
        for _ in 0..count {
            entries.push((TraderId::buyer(index), r));
            entries.push((TraderId::seller(index), r));
            index += 1;
        }
    }
    ReactionTimeTable::new(entries).expect("reaction times are positive")
}

/// One point of a reaction-time sensitivity sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    /// AA's reaction time relative to the competitor (competitor = 1).
    pub r: f64,
    pub mean_aa: f64,
    pub ci_aa: f64,
    pub mean_other: f64,
    pub ci_other: f64,
    pub t: f64,
    pub p: f64,
}

/// Sensitivity sweep: balanced AA-vs-`other` markets under speed
/// proportional selection, with AA's reaction time varied over `r_values`
/// (competitor fixed at one abstract unit).
pub fn sensitivity_sweep(
    other: Strategy,
    r_values: &[f64],
    count_per_strategy: usize,
    repetitions: usize,
    master_seed: u64,
) -> Result<Vec<SweepPoint>, SessionError> {
    let mut points = Vec::with_capacity(r_values.len());
    for (i, &r) in r_values.iter().enumerate() {
        let mix = vec![(Strategy::Aa, count_per_strategy), (other, count_per_strategy)];
        let times =
            strategy_reaction_times(&mix, &BTreeMap::from([(Strategy::Aa, r), (other, 1.0)]));
        let base = SessionConfig::new(mix, SelectionModel::SpeedProportional { times }, 0);
        let condition = format!("AA:{other} R={r}");
        let summary =
            run_experiment(&condition, &base, repetitions, derive_seed(master_seed, 1000 + i as u64))?;
        let aa = summary.strategy(Strategy::Aa).expect("AA present").clone();
        let comp = summary.strategy(other).expect("competitor present").clone();
        let (_, _, test) = summary.pairwise.expect("pairwise test for two strategies");
        points.push(SweepPoint {
            r,
            mean_aa: aa.mean,
            ci_aa: aa.ci_half,
            mean_other: comp.mean,
            ci_other: comp.ci_half,
            t: test.t,
            p: test.p,
        });
    }
    Ok(points)
}

/// The relative reaction time at which AA's mean profit first drops below
/// the competitor's.
pub fn inversion_point(points: &[SweepPoint]) -> Option<f64> {
    points.iter().find(|p| p.mean_aa < p.mean_other).map(|p| p.r)
}

/// Profit samples by trader position for homogeneous-market experiments:
/// `buyers[i]` / `sellers[i]` hold the per-session profits of the trader
/// with index `i` across repetitions, in currency units.
#[derive(Clone, Debug, PartialEq)]
pub struct PositionProfits {
    pub buyers: Vec<Vec<f64>>,
    pub sellers: Vec<Vec<f64>>,
}

/// Runs a homogeneous market and collects profits by trader index.
pub fn position_profits(
    base: &SessionConfig,
    repetitions: usize,
    master_seed: u64,
) -> Result<PositionProfits, SessionError> {
    let n = base.schedule.n;
    let mut buyers = vec![Vec::with_capacity(repetitions); n];
    let mut sellers = vec![Vec::with_capacity(repetitions); n];
    for rep in 0..repetitions {
        let seed = derive_seed(master_seed, rep as u64);
        let result = run_session(&base.with_seed(seed))?;
        for i in 0..n {
            let b = result.profit_of(TraderId::buyer(i as u16)).unwrap_or(0);
            let s = result.profit_of(TraderId::seller(i as u16)).unwrap_or(0);
            buyers[i].push(b as f64 * TICK_SIZE);
            sellers[i].push(s as f64 * TICK_SIZE);
        }
    }
    Ok(PositionProfits { buyers, sellers })
}

/// Rank table splitting a homogeneous 2n population into a fast half
/// (buyers and sellers with index below n/2, ranks 1..n) and a slow half
/// (ranks n+1..2n). Lower rank is faster.
pub fn split_speed_ranks(n: usize) -> BTreeMap<TraderId, u32> {
    let mut ranks = BTreeMap::new();
    let half = n / 2;
    let mut next_rank = 1u32;
    for i in 0..half {
        ranks.insert(TraderId::buyer(i as u16), next_rank);
        ranks.insert(TraderId::seller(i as u16), next_rank + 1);
        next_rank += 2;
    }
    for i in half..n {
        ranks.insert(TraderId::buyer(i as u16), next_rank);
        ranks.insert(TraderId::seller(i as u16), next_rank + 1);
        next_rank += 2;
    }
    ranks
}
