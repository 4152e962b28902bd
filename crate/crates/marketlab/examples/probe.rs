//! Scratch probe for the headline effects (work in progress).

use std::collections::BTreeMap;

use marketlab::experiment::{
    balanced_pair, position_profits, run_experiment, sensitivity_sweep, split_speed_ranks,
    strategy_reaction_times,
};
use marketlab::profiler::table2_times;
use marketlab::scheduler::SelectionModel;
use marketlab::session::SessionConfig;
use marketlab::stats::two_sample_t_test;
use marketlab::types::Strategy;

fn main() {
    let reps = 100;

    println!("== balanced AA vs X, random selection (equal speeds) ==");
    for other in [Strategy::Gvwy, Strategy::Shvr, Strategy::Zic, Strategy::Zip] {
        let base = balanced_pair(Strategy::Aa, other, 5, SelectionModel::RandomOrder, 0);
        let s = run_experiment("r1", &base, reps, 42).unwrap();
        let aa = s.strategy(Strategy::Aa).unwrap();
        let x = s.strategy(other).unwrap();
        let (_, _, t) = s.pairwise.unwrap();
        println!(
            "AA {:.3}+-{:.3} vs {} {:.3}+-{:.3}  t={:+.2} p={:.4} {}",
            aa.mean, aa.ci_half, other, x.mean, x.ci_half, t.t, t.p,
            if aa.mean > x.mean { "AA ahead" } else { "AA BEHIND" }
        );
    }

    println!("\n== AA vs SHVR / ZIP vs SHVR with table2 times, proportional ==");
    for pair in [(Strategy::Aa, Strategy::Shvr), (Strategy::Zip, Strategy::Shvr)] {
        let mix = vec![(pair.0, 5), (pair.1, 5)];
        let times = strategy_reaction_times(&mix, &table2_times());
        let base = SessionConfig::new(mix, SelectionModel::SpeedProportional { times }, 0);
        let s = run_experiment("t2", &base, reps, 43).unwrap();
        let a = s.strategy(pair.0).unwrap();
        let b = s.strategy(pair.1).unwrap();
        let (_, _, t) = s.pairwise.unwrap();
        println!(
            "{} {:.3}+-{:.3} vs {} {:.3}+-{:.3}  t={:+.2} p={:.4}",
            pair.0, a.mean, a.ci_half, pair.1, b.mean, b.ci_half, t.t, t.p
        );
    }

    println!("\n== AA:SHVR sweep ==");
    let points = sensitivity_sweep(Strategy::Shvr, &[1.0, 1.25, 1.5, 2.0, 4.0], 5, reps, 44).unwrap();
    for p in &points {
        println!(
            "R={:<5} AA {:.3}+-{:.3}  SHVR {:.3}+-{:.3}  p={:.4}",
            p.r, p.mean_aa, p.ci_aa, p.mean_other, p.ci_other, p.p
        );
    }

    println!("\n== R=40 for all four competitors ==");
    for other in [Strategy::Gvwy, Strategy::Shvr, Strategy::Zic, Strategy::Zip] {
        let points = sensitivity_sweep(other, &[40.0], 5, reps, 45).unwrap();
        let p = &points[0];
        println!(
            "vs {}: AA {:.3} other {:.3}  {}",
            other, p.mean_aa, p.mean_other,
            if p.mean_aa < p.mean_other { "inverted" } else { "NOT inverted" }
        );
    }

    println!("\n== fixed-order position effects (buyer/seller 0 vs {}) ==", 9);
    for strategy in Strategy::ALL {
        let base = SessionConfig::new(vec![(strategy, 10)], SelectionModel::FixedOrder, 0);
        let p = position_profits(&base, reps, 46).unwrap();
        let tb = two_sample_t_test(&p.buyers[0], &p.buyers[9]).unwrap();
        let ts = two_sample_t_test(&p.sellers[0], &p.sellers[9]).unwrap();
        let mean = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
        println!(
            "{strategy}: buyers p0={:.3} p9={:.3} t={:+.2} p={:.4} | sellers p0={:.3} p9={:.3} t={:+.2} p={:.4}",
            mean(&p.buyers[0]), mean(&p.buyers[9]), tb.t, tb.p,
            mean(&p.sellers[0]), mean(&p.sellers[9]), ts.t, ts.p
        );
        if strategy == Strategy::Aa {
            // last-selected vs first-selected across both sides
            let first: Vec<f64> = p.buyers[0].iter().zip(&p.sellers[0]).map(|(a, b)| (a + b) / 2.0).collect();
            let last: Vec<f64> = p.buyers[9].iter().zip(&p.sellers[9]).map(|(a, b)| (a + b) / 2.0).collect();
            let t = two_sample_t_test(&last, &first).unwrap();
            println!(
                "  AA last {:.3} vs first {:.3}: t={:+.2} p={:.4}",
                mean(&last), mean(&first), t.t, t.p
            );
        }
    }

    println!("\n== tournament: homogeneous AA fast/slow halves ==");
    let ranks = split_speed_ranks(10);
    let base = SessionConfig::new(
        vec![(Strategy::Aa, 10)],
        SelectionModel::TournamentRank { ranks },
        0,
    );
    let p = position_profits(&base, reps, 47).unwrap();
    let half = |v: &[Vec<f64>], lo: usize, hi: usize| -> Vec<f64> {
        (0..v[0].len())
            .map(|rep| (lo..hi).map(|i| v[i][rep]).sum::<f64>() / (hi - lo) as f64)
            .collect()
    };
    let fast_buyers = half(&p.buyers, 0, 5);
    let slow_buyers = half(&p.buyers, 5, 10);
    let fast_sellers = half(&p.sellers, 0, 5);
    let slow_sellers = half(&p.sellers, 5, 10);
    let mean = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let tb = two_sample_t_test(&fast_buyers, &slow_buyers).unwrap();
    let ts = two_sample_t_test(&slow_sellers, &fast_sellers).unwrap();
    println!(
        "buyers: fast {:.3} slow {:.3} t={:+.2} p={:.4}",
        mean(&fast_buyers), mean(&slow_buyers), tb.t, tb.p
    );
    println!(
        "sellers: slow {:.3} fast {:.3} t={:+.2} p={:.4}",
        mean(&slow_sellers), mean(&fast_sellers), ts.t, ts.p
    );
    let buyers_all: Vec<f64> = (0..fast_buyers.len())
        .map(|i| (fast_buyers[i] + slow_buyers[i]) / 2.0)
        .collect();
    let sellers_all: Vec<f64> = (0..fast_sellers.len())
        .map(|i| (fast_sellers[i] + slow_sellers[i]) / 2.0)
        .collect();
    let t = two_sample_t_test(&sellers_all, &buyers_all).unwrap();
    println!(
        "sellers {:.3} vs buyers {:.3}: t={:+.2} p={:.4}",
        mean(&sellers_all), mean(&buyers_all), t.t, t.p
    );

    let mut map = BTreeMap::new();
    map.insert("done", true);
}
