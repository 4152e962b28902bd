//! CSV import and export.
//!
//! All files are UTF-8, comma-separated, with a header row. Prices and
//! profits are written in currency units with two decimals (they sit on
//! the tick grid, so two decimals are exact); statistical aggregates keep
//! full precision so written files round-trip.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::ConfigError;
use crate::exchange::Trade;
use crate::experiment::{ExperimentSummary, SweepPoint};
use crate::profiler::{ProfileEntry, ProfileReport};
use crate::schedule::Assignment;
use crate::scheduler::ReactionTimeTable;
use crate::session::QuoteRecord;
use crate::types::{Side, Strategy, TraderId, TICK_SIZE};

fn side_token(side: Side) -> &'static str {
    match side {
        Side::Bid => "buy",
        Side::Ask => "sell",
    }
}

/// Trade tape: `step,buyer_id,seller_id,price`.
pub fn write_trade_tape<W: Write>(w: W, trades: &[Trade]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["step", "buyer_id", "seller_id", "price"])?;
    for t in trades {
        wtr.write_record([
            t.step.to_string(),
            t.buyer_id.to_string(),
            t.seller_id.to_string(),
            format!("{:.2}", t.price.as_currency()),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Quote tape: `step,trader_id,side,price`.
pub fn write_quote_tape<W: Write>(w: W, quotes: &[QuoteRecord]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["step", "trader_id", "side", "price"])?;
    for q in quotes {
        wtr.write_record([
            q.step.to_string(),
            q.trader_id.to_string(),
            side_token(q.side).to_string(),
            format!("{:.2}", q.price.as_currency()),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Schedule export: `trader_id,side,limit`.
pub fn write_schedule<W: Write>(w: W, assignments: &[Assignment]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["trader_id", "side", "limit"])?;
    for a in assignments {
        wtr.write_record([
            a.trader_id.to_string(),
            side_token(a.side).to_string(),
            format!("{:.2}", a.limit.as_currency()),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Summary rows: `condition,strategy,mean,ci_half,n`.
pub fn write_summary<W: Write>(w: W, summaries: &[ExperimentSummary]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["condition", "strategy", "mean", "ci_half", "n"])?;
    for summary in summaries {
        for s in &summary.strategies {
            wtr.write_record([
                summary.condition.clone(),
                s.strategy.to_string(),
                s.mean.to_string(),
                s.ci_half.to_string(),
                s.n.to_string(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// One parsed summary row.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub condition: String,
    pub strategy: Strategy,
    pub mean: f64,
    pub ci_half: f64,
    pub n: usize,
}

pub fn read_summary<R: Read>(r: R) -> Result<Vec<SummaryRow>, ConfigError> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| ConfigError::Invalid(e.to_string()))?;
        rows.push(SummaryRow {
            condition: record[0].to_string(),
            strategy: record[1].parse().map_err(|e| ConfigError::BadToken {
                key: "strategy".into(),
                source: e,
            })?,
            mean: parse_f64(&record[2], "mean")?,
            ci_half: parse_f64(&record[3], "ci_half")?,
            n: record[4]
                .parse()
                .map_err(|_| bad_value("n", &record[4]))?,
        });
    }
    Ok(rows)
}

/// Per-session rows: `condition,session,seed,strategy,total_profit,traders,mean_profit`.
pub fn write_sessions<W: Write>(w: W, summaries: &[ExperimentSummary]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record([
        "condition",
        "session",
        "seed",
        "strategy",
        "total_profit",
        "traders",
        "mean_profit",
    ])?;
    for summary in summaries {
        for s in &summary.sessions {
            wtr.write_record([
                summary.condition.clone(),
                s.session.to_string(),
                s.seed.to_string(),
                s.strategy.to_string(),
                format!("{:.2}", s.total_ticks as f64 * TICK_SIZE),
                s.traders.to_string(),
                s.mean_profit().to_string(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// One parsed per-session row.
#[derive(Clone, Debug, PartialEq)]
pub struct SessionRow {
    pub condition: String,
    pub session: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub total_ticks: i64,
    pub traders: usize,
    pub mean_profit: f64,
}

pub fn read_sessions<R: Read>(r: R) -> Result<Vec<SessionRow>, ConfigError> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let total: f64 = parse_f64(&record[4], "total_profit")?;
        rows.push(SessionRow {
            condition: record[0].to_string(),
            session: record[1].parse().map_err(|_| bad_value("session", &record[1]))?,
            seed: record[2].parse().map_err(|_| bad_value("seed", &record[2]))?,
            strategy: record[3].parse().map_err(|e| ConfigError::BadToken {
                key: "strategy".into(),
                source: e,
            })?,
            total_ticks: (total / TICK_SIZE).round() as i64,
            traders: record[5].parse().map_err(|_| bad_value("traders", &record[5]))?,
            mean_profit: parse_f64(&record[6], "mean_profit")?,
        });
    }
    Ok(rows)
}

/// Sweep rows: `R,mean_AA,mean_other,ci_AA,ci_other,p`.
pub fn write_sweep<W: Write>(w: W, points: &[SweepPoint]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["R", "mean_AA", "mean_other", "ci_AA", "ci_other", "p"])?;
    for p in points {
        wtr.write_record([
            p.r.to_string(),
            p.mean_aa.to_string(),
            p.mean_other.to_string(),
            p.ci_aa.to_string(),
            p.ci_other.to_string(),
            p.p.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Profile report: `strategy,get_order_us,respond_us,combined_us,calls`
/// plus a `r_shvr` ratio column. Import ignores extra columns, so the
/// written file doubles as a reaction-time input.
pub fn write_profile<W: Write>(w: W, report: &ProfileReport) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["strategy", "get_order_us", "respond_us", "combined_us", "calls", "r_shvr"])?;
    let ratios = report.ratios(Strategy::Shvr).ok();
    for e in &report.entries {
        let r_shvr = ratios
            .as_ref()
            .and_then(|r| r.get(&e.strategy))
            .map(|r| format!("{r:.4}"))
            .unwrap_or_default();
        wtr.write_record([
            e.strategy.to_string(),
            e.get_order_us.to_string(),
            e.respond_us.to_string(),
            e.combined_us.to_string(),
            e.calls.to_string(),
            r_shvr,
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads a profile CSV back into entries (extra columns ignored).
pub fn read_profile<R: Read>(r: R) -> Result<Vec<ProfileEntry>, ConfigError> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers().map_err(|e| ConfigError::Invalid(e.to_string()))?.clone();
    if headers.len() < 5 || &headers[0] != "strategy" {
        return Err(ConfigError::BadTimesCsv(
            "expected header strategy,get_order_us,respond_us,combined_us,calls".into(),
        ));
    }
    let mut entries = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| ConfigError::Invalid(e.to_string()))?;
        entries.push(ProfileEntry {
            strategy: record[0].parse().map_err(|e| ConfigError::BadToken {
                key: "strategy".into(),
                source: e,
            })?,
            get_order_us: parse_f64(&record[1], "get_order_us")?,
            respond_us: parse_f64(&record[2], "respond_us")?,
            combined_us: parse_f64(&record[3], "combined_us")?,
            calls: record[4].parse().map_err(|_| bad_value("calls", &record[4]))?,
        });
    }
    Ok(entries)
}

/// Reads a `trader_id,value` CSV into per-trader reaction times.
pub fn read_trader_times<R: Read>(r: R) -> Result<ReactionTimeTable, ConfigError> {
    let map = read_trader_values(r)?;
    ReactionTimeTable::new(map).map_err(|e| ConfigError::BadTimesCsv(e.to_string()))
}

/// Reads a `trader_id,value` CSV into per-trader ranks.
pub fn read_trader_ranks<R: Read>(r: R) -> Result<BTreeMap<TraderId, u32>, ConfigError> {
    let map = read_trader_values(r)?;
    map.into_iter()
        .map(|(id, v)| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok((id, v as u32))
            } else {
                Err(ConfigError::BadTimesCsv(format!("rank for {id} must be a whole number")))
            }
        })
        .collect()
}

fn read_trader_values<R: Read>(r: R) -> Result<Vec<(TraderId, f64)>, ConfigError> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers().map_err(|e| ConfigError::Invalid(e.to_string()))?.clone();
    if headers.len() < 2 || &headers[0] != "trader_id" {
        return Err(ConfigError::BadTimesCsv("expected header trader_id,value".into()));
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let id: TraderId = record[0].parse().map_err(|e| ConfigError::BadToken {
            key: "trader_id".into(),
            source: e,
        })?;
        out.push((id, parse_f64(&record[1], "value")?));
    }
    Ok(out)
}

fn parse_f64(text: &str, key: &str) -> Result<f64, ConfigError> {
    text.parse().map_err(|_| bad_value(key, text))
}

fn bad_value(key: &str, value: &str) -> ConfigError {
    ConfigError::BadValue { key: key.into(), value: value.into() }
}
