//! Selection models: who acts at each time step, and in what order.
//!
//! Four models are supported. Random, fixed and tournament selection let
//! every trader act exactly once per step; speed proportional selection
//! lets faster traders act more often, in proportion to inverse reaction
//! time.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::SelectionError;
use crate::types::TraderId;

/// The traders taking part in a session, by side, in index order.
#[derive(Clone, Debug, Default)]
pub struct TraderPool {
    pub buyers: Vec<TraderId>,
    pub sellers: Vec<TraderId>,
}

impl TraderPool {
    pub fn with_sides(n_buyers: usize, n_sellers: usize) -> TraderPool {
        TraderPool {
            buyers: (0..n_buyers).map(|i| TraderId::buyer(i as u16)).collect(),
            sellers: (0..n_sellers).map(|i| TraderId::seller(i as u16)).collect(),
        }
    }

    /// All traders, buyers first.
    pub fn all(&self) -> Vec<TraderId> {
        self.buyers.iter().chain(self.sellers.iter()).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.buyers.len() + self.sellers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Per-trader reaction times. `R^A_B = R_A / R_B` expresses A's time
/// relative to B's; smaller is faster.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ReactionTimeTable {
    times: BTreeMap<TraderId, f64>,
}

impl ReactionTimeTable {
    pub fn new(entries: impl IntoIterator<Item = (TraderId, f64)>) -> Result<Self, SelectionError> {
        let times: BTreeMap<TraderId, f64> = entries.into_iter().collect();
        for (&id, &r) in &times {
            if !(r > 0.0) {
                return Err(SelectionError::NonPositiveReactionTime(id));
            }
        }
        Ok(ReactionTimeTable { times })
    }

    pub fn get(&self, id: TraderId) -> Option<f64> {
        self.times.get(&id).copied()
    }

    /// `R^A_B`: A's reaction time relative to B's.
    pub fn relative(&self, a: TraderId, b: TraderId) -> Option<f64> {
        Some(self.get(a)? / self.get(b)?)
    }

    pub fn iter(&self) -> impl Iterator<Item = (TraderId, f64)> + '_ {
        self.times.iter().map(|(&id, &r)| (id, r))
    }
}

/// Which of the two fixed orderings a session starts with.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FixedOrdering {
    /// `s1, b1, s2, b2, ..., sn, bn`
    SellersFirst,
    /// `b1, s1, b2, s2, ..., bn, sn`
    BuyersFirst,
}

impl FixedOrdering {
    pub fn flipped(self) -> FixedOrdering {
        match self {
            FixedOrdering::SellersFirst => FixedOrdering::BuyersFirst,
            FixedOrdering::BuyersFirst => FixedOrdering::SellersFirst,
        }
    }
}

/// Scheduler configuration: one of the four selection models.
#[derive(Clone, Debug, PartialEq)]
pub enum SelectionModel {
    RandomOrder,
    FixedOrder,
    TournamentRank { ranks: BTreeMap<TraderId, u32> },
    SpeedProportional { times: ReactionTimeTable },
}

impl SelectionModel {
    pub fn token(&self) -> &'static str {
        match self {
            SelectionModel::RandomOrder => "random",
            SelectionModel::FixedOrder => "fixed",
            SelectionModel::TournamentRank { .. } => "rank",
            SelectionModel::SpeedProportional { .. } => "proportional",
        }
    }
}

/// A uniformly random permutation of the pool; every trader acts once.
pub fn random_step<R: Rng>(pool: &TraderPool, rng: &mut R) -> Vec<TraderId> {
    let mut sequence = pool.all();
    sequence.shuffle(rng);
    sequence
}

/// The alternating fixed ordering for `step_index`, starting from
/// `initial` at step 0. Requires balanced sides.
pub fn fixed_order_step(
    pool: &TraderPool,
    step_index: u32,
    initial: FixedOrdering,
) -> Result<Vec<TraderId>, SelectionError> {
    if pool.buyers.len() != pool.sellers.len() {
        return Err(SelectionError::UnbalancedSides {
            buyers: pool.buyers.len(),
            sellers: pool.sellers.len(),
        });
    }
    let ordering = if step_index % 2 == 0 { initial } else { initial.flipped() };
    let mut sequence = Vec::with_capacity(pool.len());
    for (b, s) in pool.buyers.iter().zip(pool.sellers.iter()) {
        match ordering {
            FixedOrdering::SellersFirst => {
                sequence.push(*s);
                sequence.push(*b);
            }
            FixedOrdering::BuyersFirst => {
                sequence.push(*b);
                sequence.push(*s);
            }
        }
    }
    Ok(sequence)
}

/// Tournament ranking selection: repeatedly draw two distinct traders at
/// random; the lower-ranked one acts and leaves the pool, with ties going
/// to the second trader drawn. The final remaining trader acts last.
pub fn tournament_step<R: Rng>(
    pool: &TraderPool,
    ranks: &BTreeMap<TraderId, u32>,
    rng: &mut R,
) -> Result<Vec<TraderId>, SelectionError> {
    let mut remaining = pool.all();
    for &id in &remaining {
        if !ranks.contains_key(&id) {
            return Err(SelectionError::MissingRank(id));
        }
    }
    if remaining.is_empty() {
        return Err(SelectionError::Empty);
    }
    let mut sequence = Vec::with_capacity(remaining.len());
    while remaining.len() > 1 {
        let i = rng.random_range(0..remaining.len());
        let mut j = rng.random_range(0..remaining.len() - 1);
        if j >= i {
            j += 1;
        }
        let (first, second) = (remaining[i], remaining[j]);
        let winner_index = if ranks[&second] > ranks[&first] { i } else { j };
        sequence.push(remaining.swap_remove(winner_index));
    }
    sequence.push(remaining[0]);
    Ok(sequence)
}

/// Builds the biased pool for one step of speed proportional selection.
///
/// Each trader receives references inversely proportional to its reaction
/// time, normalised so the slowest trader expects one reference per step.
/// Fractional expectations are realised as `floor(w)` references plus one
/// more with probability `frac(w)`, keeping expected action rates exact.
pub fn proportional_pool<R: Rng>(
    pool: &TraderPool,
    times: &ReactionTimeTable,
    rng: &mut R,
) -> Result<Vec<TraderId>, SelectionError> {
    if pool.is_empty() {
        return Err(SelectionError::Empty);
    }
    let mut slowest = 0.0f64;
    for id in pool.all() {
        let r = times.get(id).ok_or(SelectionError::NonPositiveReactionTime(id))?;
        if !(r > 0.0) {
            return Err(SelectionError::NonPositiveReactionTime(id));
        }
        slowest = slowest.max(r);
    }
    let mut refs = Vec::with_capacity(pool.len() * 2);
    for id in pool.all() {
        let weight = slowest / times.get(id).unwrap();
        let whole = weight.floor();
        let mut count = whole as usize;
        if rng.random::<f64>() < weight - whole {
            count += 1;
        }
        refs.extend(std::iter::repeat_n(id, count));
    }
    Ok(refs)
}

/// Draws the biased pool in random order without replacement; a trader
/// with k references acts k times this step.
pub fn proportional_step<R: Rng>(refs: &[TraderId], rng: &mut R) -> Vec<TraderId> {
    let mut sequence = refs.to_vec();
    sequence.shuffle(rng);
    sequence
}

/// Session-facing scheduler: validates the model against the pool once and
/// produces each step's action sequence.
#[derive(Clone, Debug)]
pub struct Scheduler {
    model: SelectionModel,
    initial_ordering: FixedOrdering,
}

impl Scheduler {
    /// `rng` decides the initial fixed ordering; other models ignore it here.
    pub fn new<R: Rng>(
        model: SelectionModel,
        pool: &TraderPool,
        rng: &mut R,
    ) -> Result<Scheduler, SelectionError> {
        if pool.is_empty() {
            return Err(SelectionError::Empty);
        }
        let initial_ordering = if rng.random::<bool>() {
            FixedOrdering::SellersFirst
        } else {
            FixedOrdering::BuyersFirst
        };
        match &model {
            SelectionModel::FixedOrder => {
                fixed_order_step(pool, 0, initial_ordering)?;
            }
            SelectionModel::TournamentRank { ranks } => {
                for id in pool.all() {
                    if !ranks.contains_key(&id) {
                        return Err(SelectionError::MissingRank(id));
                    }
                }
            }
            SelectionModel::SpeedProportional { times } => {
                for id in pool.all() {
                    match times.get(id) {
                        Some(r) if r > 0.0 => {}
                        _ => return Err(SelectionError::NonPositiveReactionTime(id)),
                    }
                }
            }
            SelectionModel::RandomOrder => {}
        }
        Ok(Scheduler { model, initial_ordering })
    }

    pub fn model(&self) -> &SelectionModel {
        &self.model
    }

    pub fn initial_ordering(&self) -> FixedOrdering {
        self.initial_ordering
    }

    /// The action sequence for one step.
    pub fn step_sequence<R: Rng>(
        &self,
        pool: &TraderPool,
        step_index: u32,
        rng: &mut R,
    ) -> Vec<TraderId> {
        match &self.model {
            SelectionModel::RandomOrder => random_step(pool, rng),
            SelectionModel::FixedOrder => {
                fixed_order_step(pool, step_index, self.initial_ordering)
                    .expect("sides validated at construction")
            }
            SelectionModel::TournamentRank { ranks } => {
                tournament_step(pool, ranks, rng).expect("ranks validated at construction")
            }
            SelectionModel::SpeedProportional { times } => {
                let refs = proportional_pool(pool, times, rng)
                    .expect("times validated at construction");
                proportional_step(&refs, rng)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn counts(seq: &[TraderId]) -> BTreeMap<TraderId, usize> {
        let mut m = BTreeMap::new();
        for &id in seq {
            *m.entry(id).or_insert(0) += 1;
        }
        m
    }

    #[test]
    fn random_step_is_a_permutation() {
        let pool = TraderPool::with_sides(10, 10);
        let mut r = rng(1);
        let seq = random_step(&pool, &mut r);
        assert_eq!(seq.len(), 20);
        assert!(counts(&seq).values().all(|&c| c == 1));

        let single = TraderPool::with_sides(1, 0);
        assert_eq!(random_step(&single, &mut r), vec![TraderId::buyer(0)]);
    }

    #[test]
    fn random_step_first_positions_are_uniform() {
        let pool = TraderPool::with_sides(2, 2);
        let mut r = rng(2);
        let mut firsts: BTreeMap<TraderId, usize> = BTreeMap::new();
        for _ in 0..10_000 {
            let seq = random_step(&pool, &mut r);
            *firsts.entry(seq[0]).or_insert(0) += 1;
        }
        for (&id, &count) in &firsts {
            assert!(
                (count as i64 - 2500).abs() <= 150,
                "{id} first {count} times, expected about 2500"
            );
        }
    }

    #[test]
    fn fixed_order_alternates_from_initial() {
        let pool = TraderPool::with_sides(3, 3);
        let step0 = fixed_order_step(&pool, 0, FixedOrdering::SellersFirst).unwrap();
        let step1 = fixed_order_step(&pool, 1, FixedOrdering::SellersFirst).unwrap();
        let step2 = fixed_order_step(&pool, 2, FixedOrdering::SellersFirst).unwrap();
        assert_eq!(step0[0], TraderId::seller(0));
        assert_eq!(step0[1], TraderId::buyer(0));
        assert_eq!(step1[0], TraderId::buyer(0));
        assert_eq!(step1[1], TraderId::seller(0));
        assert_eq!(step0, step2);
        // first pair is always {s1, b1}; last pair is always {sn, bn}
        for step in 0..8u32 {
            let seq = fixed_order_step(&pool, step, FixedOrdering::BuyersFirst).unwrap();
            let first_two = [seq[0], seq[1]];
            let last_two = [seq[4], seq[5]];
            assert!(first_two.contains(&TraderId::buyer(0)) && first_two.contains(&TraderId::seller(0)));
            assert!(last_two.contains(&TraderId::buyer(2)) && last_two.contains(&TraderId::seller(2)));
        }
    }

    #[test]
    fn fixed_order_single_pair_alternates() {
        let pool = TraderPool::with_sides(1, 1);
        let a = fixed_order_step(&pool, 0, FixedOrdering::SellersFirst).unwrap();
        let b = fixed_order_step(&pool, 1, FixedOrdering::SellersFirst).unwrap();
        assert_eq!(a, vec![TraderId::seller(0), TraderId::buyer(0)]);
        assert_eq!(b, vec![TraderId::buyer(0), TraderId::seller(0)]);
    }

    #[test]
    fn fixed_order_rejects_unbalanced_sides() {
        let pool = TraderPool::with_sides(2, 3);
        assert_eq!(
            fixed_order_step(&pool, 0, FixedOrdering::SellersFirst).unwrap_err(),
            SelectionError::UnbalancedSides { buyers: 2, sellers: 3 }
        );
    }

    #[test]
    fn two_consecutive_fixed_steps_cover_everyone_twice() {
        let pool = TraderPool::with_sides(4, 4);
        let mut both = fixed_order_step(&pool, 6, FixedOrdering::BuyersFirst).unwrap();
        both.extend(fixed_order_step(&pool, 7, FixedOrdering::BuyersFirst).unwrap());
        assert!(counts(&both).values().all(|&c| c == 2));
    }

    #[test]
    fn tournament_two_traders_lower_rank_acts_first() {
        let pool = TraderPool::with_sides(1, 1);
        let ranks: BTreeMap<_, _> =
            [(TraderId::buyer(0), 1), (TraderId::seller(0), 2)].into_iter().collect();
        let mut r = rng(3);
        for _ in 0..200 {
            let seq = tournament_step(&pool, &ranks, &mut r).unwrap();
            assert_eq!(seq, vec![TraderId::buyer(0), TraderId::seller(0)]);
        }
    }

    #[test]
    fn tournament_every_trader_acts_once() {
        let pool = TraderPool::with_sides(5, 5);
        let ranks: BTreeMap<_, _> = pool.all().into_iter().zip(1..).collect();
        let mut r = rng(4);
        for _ in 0..100 {
            let seq = tournament_step(&pool, &ranks, &mut r).unwrap();
            assert_eq!(seq.len(), 10);
            assert!(counts(&seq).values().all(|&c| c == 1));
        }
    }

    #[test]
    fn tournament_pairwise_order_respects_rank() {
        // with 2 traders the outcome is deterministic; with equal ranks the
        // second-drawn trader acts, so both orders appear
        let pool = TraderPool::with_sides(1, 1);
        let equal: BTreeMap<_, _> =
            [(TraderId::buyer(0), 1), (TraderId::seller(0), 1)].into_iter().collect();
        let mut r = rng(5);
        let mut seller_first = 0;
        for _ in 0..2000 {
            let seq = tournament_step(&pool, &equal, &mut r).unwrap();
            if seq[0] == TraderId::seller(0) {
                seller_first += 1;
            }
        }
        // second-drawn is uniform over the pair, so roughly half each way
        assert!((seller_first as i64 - 1000).abs() < 150, "seller first {seller_first}");
    }

    /// Literal transcription of the tournament routine, kept independent of
    /// the implementation above; used as a Monte-Carlo oracle.
    fn tournament_oracle<R: Rng>(
        ids: &[TraderId],
        ranks: &BTreeMap<TraderId, u32>,
        rng: &mut R,
    ) -> Vec<TraderId> {
        let mut p: Vec<TraderId> = ids.to_vec();
        let mut acted = Vec::new();
        while p.len() > 1 {
            let a_idx = rng.random_range(0..p.len());
            let mut b_idx = rng.random_range(0..p.len() - 1);
            if b_idx >= a_idx {
                b_idx += 1;
            }
            let a = p[a_idx];
            let b = p[b_idx];
            if ranks[&b] > ranks[&a] {
                acted.push(a);
                p.retain(|&t| t != a);
            } else {
                acted.push(b);
                p.retain(|&t| t != b);
            }
        }
        acted.push(p[0]);
        acted
    }

    #[test]
    fn tournament_matches_pseudocode_oracle_frequencies() {
        let pool = TraderPool::with_sides(2, 2);
        let ids = pool.all();
        let ranks: BTreeMap<_, _> = ids.iter().copied().zip(1..).collect();
        let steps = 40_000;

        let mut impl_rng = rng(6);
        let mut oracle_rng = rng(7);
        // frequency of each trader acting at each position
        let mut impl_freq = vec![[0u32; 4]; 4];
        let mut oracle_freq = vec![[0u32; 4]; 4];
        for _ in 0..steps {
            let seq = tournament_step(&pool, &ranks, &mut impl_rng).unwrap();
            for (pos, id) in seq.iter().enumerate() {
                let t = ids.iter().position(|x| x == id).unwrap();
                impl_freq[t][pos] += 1;
            }
            let seq = tournament_oracle(&ids, &ranks, &mut oracle_rng);
            for (pos, id) in seq.iter().enumerate() {
                let t = ids.iter().position(|x| x == id).unwrap();
                oracle_freq[t][pos] += 1;
            }
        }
        for t in 0..4 {
            for pos in 0..4 {
                let a = impl_freq[t][pos] as f64 / steps as f64;
                let b = oracle_freq[t][pos] as f64 / steps as f64;
                assert!(
                    (a - b).abs() < 0.01,
                    "trader {t} position {pos}: impl {a:.4} vs oracle {b:.4}"
                );
            }
        }
    }

    #[test]
    fn proportional_pool_matches_worked_example() {
        // R_A = 1, R_B = 2 gives the biased pool {A, A, B}
        let pool = TraderPool::with_sides(1, 1);
        let a = TraderId::buyer(0);
        let b = TraderId::seller(0);
        let times = ReactionTimeTable::new([(a, 1.0), (b, 2.0)]).unwrap();
        let mut r = rng(8);
        let refs = proportional_pool(&pool, &times, &mut r).unwrap();
        assert_eq!(counts(&refs), [(a, 2), (b, 1)].into_iter().collect());

        // equal speeds degenerate to one reference each
        let times = ReactionTimeTable::new([(a, 3.0), (b, 3.0)]).unwrap();
        let refs = proportional_pool(&pool, &times, &mut r).unwrap();
        assert_eq!(counts(&refs), [(a, 1), (b, 1)].into_iter().collect());
    }

    #[test]
    fn proportional_step_draws_without_replacement() {
        let a = TraderId::buyer(0);
        let b = TraderId::seller(0);
        let mut r = rng(9);
        let seq = proportional_step(&[a, a, b], &mut r);
        assert_eq!(counts(&seq), [(a, 2), (b, 1)].into_iter().collect());
        assert_eq!(proportional_step(&[a], &mut r), vec![a]);
    }

    #[test]
    fn slower_trader_leads_a_third_of_steps() {
        // pool {A, A, B}: B is first with probability 1/3
        let a = TraderId::buyer(0);
        let b = TraderId::seller(0);
        let mut r = rng(10);
        let steps = 10_000;
        let mut b_first = 0;
        for _ in 0..steps {
            if proportional_step(&[a, a, b], &mut r)[0] == b {
                b_first += 1;
            }
        }
        let freq = f64::from(b_first) / f64::from(steps);
        assert!((freq - 1.0 / 3.0).abs() < 0.02, "B first with frequency {freq:.4}");
    }

    #[test]
    fn proportional_rates_follow_published_times() {
        // GVWY at 4.2us vs AA at 9.5us: expected action ratio 9.5/4.2 = 2.26
        let pool = TraderPool::with_sides(1, 1);
        let fast = TraderId::buyer(0);
        let slow = TraderId::seller(0);
        let times = ReactionTimeTable::new([(fast, 4.2), (slow, 9.5)]).unwrap();
        let mut r = rng(11);
        let mut fast_actions = 0u64;
        let mut slow_actions = 0u64;
        for _ in 0..100_000 {
            let refs = proportional_pool(&pool, &times, &mut r).unwrap();
            for id in refs {
                if id == fast {
                    fast_actions += 1;
                } else {
                    slow_actions += 1;
                }
            }
        }
        let ratio = fast_actions as f64 / slow_actions as f64;
        assert!((ratio - 2.26).abs() <= 0.05, "action ratio {ratio:.4}");
    }

    #[test]
    fn proportional_requires_positive_times() {
        let pool = TraderPool::with_sides(1, 1);
        let times =
            ReactionTimeTable::new([(TraderId::buyer(0), 1.0)]).unwrap();
        let mut r = rng(12);
        assert!(matches!(
            proportional_pool(&pool, &times, &mut r),
            Err(SelectionError::NonPositiveReactionTime(_))
        ));
        assert!(ReactionTimeTable::new([(TraderId::buyer(0), 0.0)]).is_err());
    }

    #[test]
    fn long_run_action_counts_track_inverse_times() {
        let pool = TraderPool::with_sides(2, 2);
        let ids = pool.all();
        let times = ReactionTimeTable::new([
            (ids[0], 2.0),
            (ids[1], 3.0),
            (ids[2], 5.0),
            (ids[3], 7.5),
        ])
        .unwrap();
        let mut r = rng(13);
        let mut actions: BTreeMap<TraderId, u64> = BTreeMap::new();
        let steps = 100_000;
        for _ in 0..steps {
            for id in proportional_pool(&pool, &times, &mut r).unwrap() {
                *actions.entry(id).or_insert(0) += 1;
            }
        }
        // action counts should be proportional to 1/R within 2%
        let base = actions[&ids[3]] as f64; // slowest, expected 1 per step
        for (&id, &count) in &actions {
            let expected = 7.5 / times.get(id).unwrap();
            let observed = count as f64 / base;
            assert!(
                (observed / expected - 1.0).abs() < 0.02,
                "{id}: observed {observed:.3} expected {expected:.3}"
            );
        }
    }

    #[test]
    fn scheduler_dispatches_all_models() {
        let pool = TraderPool::with_sides(2, 2);
        let mut r = rng(14);
        let ranks: BTreeMap<_, _> = pool.all().into_iter().zip(1..).collect();
        let times = ReactionTimeTable::new(pool.all().into_iter().map(|id| (id, 1.0))).unwrap();
        for model in [
            SelectionModel::RandomOrder,
            SelectionModel::FixedOrder,
            SelectionModel::TournamentRank { ranks },
            SelectionModel::SpeedProportional { times },
        ] {
            let scheduler = Scheduler::new(model, &pool, &mut r).unwrap();
            let seq = scheduler.step_sequence(&pool, 0, &mut r);
            assert_eq!(seq.len(), 4, "{}", scheduler.model().token());
            assert!(counts(&seq).values().all(|&c| c == 1));
        }
    }
}
