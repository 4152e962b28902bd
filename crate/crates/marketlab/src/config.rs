//! Run configuration: a small `key = value` format with four sections.
//!
//! ```text
//! [market]
//! price_low = 0.10      # schedule interval
//! price_high = 1.90
//! system_min = 0.01     # exchange price domain
//! system_max = 2.00
//!
//! [traders]             # strategy = count per side
//! AA = 5
//! SHVR = 5
//!
//! [selection]
//! model = proportional  # random | fixed | rank | proportional
//! times = table2        # or a CSV path (profile report or trader_id,value)
//! # ranks = ranks.csv   # rank model only; defaults to a fast/slow split
//!
//! [experiment]
//! reps = 100
//! session_length = 330
//! replenish_interval = 30
//! seed = 1
//! ```
//!
//! Missing keys take the defaults shown above. `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{ConfigError, ParseError};
use crate::experiment::{split_speed_ranks, strategy_reaction_times};
use crate::profiler::table2_times;
use crate::report::{read_profile, read_trader_ranks, read_trader_times};
use crate::schedule::ScheduleConfig;
use crate::scheduler::{ReactionTimeTable, SelectionModel};
use crate::session::SessionConfig;
use crate::types::{MarketParams, Price, Strategy, TraderId};

/// Where reaction times for proportional selection come from.
#[derive(Clone, Debug, PartialEq)]
pub enum TimesSource {
    /// The published reference table.
    Table2,
    /// A CSV file: either a profile report or `trader_id,value` rows.
    Csv(String),
}

/// Where tournament ranks come from.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum RanksSource {
    /// Fast half / slow half by trader index.
    #[default]
    Split,
    /// A `trader_id,value` CSV.
    Csv(String),
}

/// Selection model token plus its parameter sources.
#[derive(Clone, Debug, PartialEq)]
pub enum SelectionSpec {
    Random,
    Fixed,
    Rank(RanksSource),
    Proportional(TimesSource),
}

/// A parsed and validated configuration, before external CSVs are loaded.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub schedule: ScheduleConfig,
    pub market: MarketParams,
    pub mix: Vec<(Strategy, usize)>,
    pub selection: SelectionSpec,
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schedule: ScheduleConfig::default(),
            market: MarketParams::default(),
            mix: vec![(Strategy::Zic, 10)],
            selection: SelectionSpec::Random,
            repetitions: 100,
            seed: 1,
        }
    }
}

/// Parses the text of a configuration file. Pure: referenced CSV files are
/// loaded later by [`RunConfig::build_session`].
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut sections: BTreeMap<String, Vec<(usize, String, String)>> = BTreeMap::new();
    let mut current = String::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_ascii_lowercase();
            if !["market", "traders", "selection", "experiment"].contains(&name.as_str()) {
                return Err(ConfigError::UnknownSection { line: line_no, section: name });
            }
            current = name;
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::MalformedLine { line: line_no, text: line.to_string() });
        };
        if current.is_empty() {
            return Err(ConfigError::MalformedLine {
                line: line_no,
                text: format!("`{line}` appears before any [section]"),
            });
        }
        sections.entry(current.clone()).or_default().push((
            line_no,
            key.trim().to_string(),
            value.trim().to_string(),
        ));
    }

    let mut config = RunConfig::default();

    // [market]
    let mut declared_n: Option<usize> = None;
    for (_, key, value) in sections.remove("market").unwrap_or_default() {
        match key.to_ascii_lowercase().as_str() {
            "n" => declared_n = Some(parse_num(&key, &value)?),
            "price_low" => config.schedule.price_low = parse_price(&key, &value)?,
            "price_high" => config.schedule.price_high = parse_price(&key, &value)?,
            "system_min" => config.market.price_min = parse_price(&key, &value)?,
            "system_max" => config.market.price_max = parse_price(&key, &value)?,
            _ => return Err(ConfigError::UnknownKey { key, section: "market".into() }),
        }
    }

    // [traders]
    if let Some(entries) = sections.remove("traders") {
        let mut mix = Vec::new();
        for (_, key, value) in entries {
            let strategy: Strategy = key.parse().map_err(|e: ParseError| {
                ConfigError::BadToken { key: key.clone(), source: e }
            })?;
            let count: usize = parse_num(&key, &value)?;
            mix.push((strategy, count));
        }
        config.mix = mix;
    }
    let n: usize = config.mix.iter().map(|&(_, c)| c).sum();
    if n == 0 {
        return Err(ConfigError::Invalid("[traders] must place at least one trader".into()));
    }
    if let Some(declared) = declared_n {
        if declared != n {
            return Err(ConfigError::Invalid(format!(
                "[market] n = {declared} disagrees with the {n} traders per side in [traders]"
            )));
        }
    }
    config.schedule.n = n;
    // pairwise tests must be balanced
    if config.mix.len() == 2 && config.mix[0].1 != config.mix[1].1 {
        return Err(ConfigError::Invalid(format!(
            "pairwise mixes must be balanced: {} {} vs {} {}",
            config.mix[0].1, config.mix[0].0, config.mix[1].1, config.mix[1].0
        )));
    }

    // [selection]
    let mut model_token = "random".to_string();
    let mut times: Option<TimesSource> = None;
    let mut ranks: Option<RanksSource> = None;
    for (_, key, value) in sections.remove("selection").unwrap_or_default() {
        match key.to_ascii_lowercase().as_str() {
            "model" => model_token = value.to_ascii_lowercase(),
            "times" => {
                times = Some(if value.eq_ignore_ascii_case("table2") {
                    TimesSource::Table2
                } else {
                    TimesSource::Csv(value)
                })
            }
            "ranks" => {
                ranks = Some(if value.eq_ignore_ascii_case("split") {
                    RanksSource::Split
                } else {
                    RanksSource::Csv(value)
                })
            }
            _ => return Err(ConfigError::UnknownKey { key, section: "selection".into() }),
        }
    }
    config.selection = match model_token.as_str() {
        "random" => SelectionSpec::Random,
        "fixed" => SelectionSpec::Fixed,
        "rank" => SelectionSpec::Rank(ranks.unwrap_or_default()),
        "proportional" => {
            SelectionSpec::Proportional(times.ok_or(ConfigError::MissingReactionTimes)?)
        }
        other => {
            return Err(ConfigError::BadToken {
                key: "model".into(),
                source: ParseError::UnknownSelectionModel(other.to_string()),
            })
        }
    };

    // [experiment]
    for (_, key, value) in sections.remove("experiment").unwrap_or_default() {
        match key.to_ascii_lowercase().as_str() {
            "reps" => config.repetitions = parse_num(&key, &value)?,
            "session_length" => config.schedule.session_length = parse_num(&key, &value)?,
            "replenish_interval" => config.schedule.replenish_interval = parse_num(&key, &value)?,
            "seed" => config.seed = parse_num(&key, &value)?,
            _ => return Err(ConfigError::UnknownKey { key, section: "experiment".into() }),
        }
    }

    config.schedule.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(config)
}

impl RunConfig {
    /// Resolves external CSVs (relative to `base_dir`) and produces the
    /// session configuration.
    pub fn build_session(&self, base_dir: &Path) -> Result<SessionConfig, ConfigError> {
        let selection = match &self.selection {
            SelectionSpec::Random => SelectionModel::RandomOrder,
            SelectionSpec::Fixed => SelectionModel::FixedOrder,
            SelectionSpec::Rank(source) => {
                let ranks = match source {
                    RanksSource::Split => split_speed_ranks(self.schedule.n),
                    RanksSource::Csv(path) => {
                        let file = std::fs::File::open(base_dir.join(path))?;
                        let ranks = read_trader_ranks(file)?;
                        self.check_roster_coverage(ranks.keys().copied(), path)?;
                        ranks
                    }
                };
                SelectionModel::TournamentRank { ranks }
            }
            SelectionSpec::Proportional(source) => {
                let times = self.resolve_times(source, base_dir)?;
                SelectionModel::SpeedProportional { times }
            }
        };
        Ok(SessionConfig {
            schedule: self.schedule,
            mix: self.mix.clone(),
            selection,
            market: self.market,
            strategy_params: Default::default(),
            seed: self.seed,
            shuffle_limits: true,
        })
    }

    fn resolve_times(
        &self,
        source: &TimesSource,
        base_dir: &Path,
    ) -> Result<ReactionTimeTable, ConfigError> {
        match source {
            TimesSource::Table2 => Ok(strategy_reaction_times(&self.mix, &table2_times())),
            TimesSource::Csv(path) => {
                let text = std::fs::read_to_string(base_dir.join(path))?;
                if text.lines().next().is_some_and(|h| h.starts_with("strategy")) {
                    let entries = read_profile(text.as_bytes())?;
                    let times: BTreeMap<Strategy, f64> =
                        entries.iter().map(|e| (e.strategy, e.combined_us)).collect();
                    for &(strategy, _) in &self.mix {
                        if !times.contains_key(&strategy) {
                            return Err(ConfigError::BadTimesCsv(format!(
                                "{path} has no entry for {strategy}"
                            )));
                        }
                    }
                    Ok(strategy_reaction_times(&self.mix, &times))
                } else {
                    let table = read_trader_times(text.as_bytes())?;
                    self.check_roster_coverage(table.iter().map(|(id, _)| id), path)?;
                    Ok(table)
                }
            }
        }
    }

    fn check_roster_coverage(
        &self,
        provided: impl IntoIterator<Item = TraderId>,
        path: &str,
    ) -> Result<(), ConfigError> {
        let have: std::collections::BTreeSet<TraderId> = provided.into_iter().collect();
        for i in 0..self.schedule.n {
            for id in [TraderId::buyer(i as u16), TraderId::seller(i as u16)] {
                if !have.contains(&id) {
                    return Err(ConfigError::BadTimesCsv(format!("{path} has no row for {id}")));
                }
            }
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::BadValue { key: key.into(), value: value.into() })
}

fn parse_price(key: &str, value: &str) -> Result<Price, ConfigError> {
    let currency: f64 =
        value.parse().map_err(|_| ConfigError::BadValue { key: key.into(), value: value.into() })?;
    if !(currency > 0.0) {
        return Err(ConfigError::BadValue { key: key.into(), value: value.into() });
    }
    Ok(Price::from_currency(currency))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_experiment_section_takes_protocol_defaults() {
        let config = parse_config("[traders]\nZIC = 10\n[experiment]\n").unwrap();
        assert_eq!(config.repetitions, 100);
        assert_eq!(config.schedule.session_length, 330);
        assert_eq!(config.schedule.replenish_interval, 30);
        assert_eq!(config.schedule.n, 10);
        assert_eq!(config.schedule.price_low, Price::from_currency(0.10));
        assert_eq!(config.schedule.price_high, Price::from_currency(1.90));
    }

    #[test]
    fn proportional_without_times_is_an_instructive_error() {
        let err = parse_config("[traders]\nAA = 5\nSHVR = 5\n[selection]\nmodel = proportional\n")
            .unwrap_err();
        assert!(matches!(err, ConfigError::MissingReactionTimes));
        assert!(err.to_string().contains("table2"));
    }

    #[test]
    fn table2_times_expand_to_the_roster() {
        let text = "[traders]\nAA = 5\nSHVR = 5\n[selection]\nmodel = proportional\ntimes = table2\n";
        let config = parse_config(text).unwrap();
        let session = config.build_session(Path::new(".")).unwrap();
        match session.selection {
            SelectionModel::SpeedProportional { times } => {
                // mix order: AA first, so buyers 0..5 are AA at 9.5
                assert_eq!(times.get(TraderId::buyer(0)), Some(9.5));
                assert_eq!(times.get(TraderId::buyer(5)), Some(6.9));
                assert_eq!(times.get(TraderId::seller(9)), Some(6.9));
            }
            other => panic!("expected proportional, got {other:?}"),
        }
    }

    #[test]
    fn unknown_tokens_name_the_offending_key() {
        let err = parse_config("[traders]\nGDX = 10\n").unwrap_err();
        assert!(err.to_string().contains("GDX"), "{err}");
        let err = parse_config("[traders]\nZIC = 10\n[selection]\nmodel = fastest\n").unwrap_err();
        assert!(err.to_string().contains("fastest"), "{err}");
        let err = parse_config("[market]\nbogus = 1\n[traders]\nZIC = 4\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn unbalanced_pairwise_mixes_are_rejected() {
        let err = parse_config("[traders]\nAA = 3\nSHVR = 7\n").unwrap_err();
        assert!(err.to_string().contains("balanced"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# headline test\n[traders]\nAA = 5 # per side\nSHVR = 5\n\n[selection]\nmodel = random\n";
        let config = parse_config(text).unwrap();
        assert_eq!(config.mix, vec![(Strategy::Aa, 5), (Strategy::Shvr, 5)]);
        assert_eq!(config.selection, SelectionSpec::Random);
    }

    #[test]
    fn n_cross_check_against_traders() {
        let err = parse_config("[market]\nn = 12\n[traders]\nZIC = 10\n").unwrap_err();
        assert!(err.to_string().contains("disagrees"), "{err}");
        assert!(parse_config("[market]\nn = 10\n[traders]\nZIC = 10\n").is_ok());
    }

    #[test]
    fn rank_model_defaults_to_index_split() {
        let config = parse_config("[traders]\nAA = 10\n[selection]\nmodel = rank\n").unwrap();
        let session = config.build_session(Path::new(".")).unwrap();
        match session.selection {
            SelectionModel::TournamentRank { ranks } => {
                assert_eq!(ranks.len(), 20);
                assert!(ranks[&TraderId::buyer(0)] < ranks[&TraderId::buyer(9)]);
            }
            other => panic!("expected rank model, got {other:?}"),
        }
    }

    #[test]
    fn malformed_lines_report_their_location() {
        let err = parse_config("[traders]\nZIC 10\n").unwrap_err();
        match err {
            ConfigError::MalformedLine { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected: {other}"),
        }
    }
}
