//! Parameter grid probe for AA calibration (work in progress).

use std::collections::BTreeMap;

use marketlab::experiment::{run_experiment, strategy_reaction_times};
use marketlab::profiler::table2_times;
use marketlab::scheduler::SelectionModel;
use marketlab::session::SessionConfig;
use marketlab::traders::AaParams;
use marketlab::types::Strategy;

fn main() {
    let reps = 60;
    for eta in [2.0, 3.0] {
        for init_r in [(-0.3, 0.0), (-0.1, 0.1), (0.0, 0.3)] {
            let aa = AaParams { eta, initial_r_range: init_r, ..AaParams::default() };
            print!("eta={eta} r0={init_r:?} | ");
            for other in [Strategy::Gvwy, Strategy::Shvr, Strategy::Zic, Strategy::Zip] {
                let mut base = SessionConfig::new(
                    vec![(Strategy::Aa, 5), (other, 5)],
                    SelectionModel::RandomOrder,
                    0,
                );
                base.strategy_params.aa = aa.clone();
                let s = run_experiment("x", &base, reps, 42).unwrap();
                let d = s.strategy(Strategy::Aa).unwrap().mean - s.strategy(other).unwrap().mean;
                let (_, _, t) = s.pairwise.unwrap();
                print!("{other}:{d:+.2}(p{:.2}) ", t.p);
            }
            // table2 proportional AA vs SHVR
            let mix = vec![(Strategy::Aa, 5), (Strategy::Shvr, 5)];
            let times = strategy_reaction_times(&mix, &table2_times());
            let mut base =
                SessionConfig::new(mix, SelectionModel::SpeedProportional { times }, 0);
            base.strategy_params.aa = aa.clone();
            let s = run_experiment("x", &base, reps, 43).unwrap();
            let d = s.strategy(Strategy::Aa).unwrap().mean - s.strategy(Strategy::Shvr).unwrap().mean;
            let (_, _, t) = s.pairwise.unwrap();
            print!("| T2:{d:+.2}(p{:.2}) ", t.p);
            // homogeneous AA liquidity
            let mut base = SessionConfig::new(vec![(Strategy::Aa, 10)], SelectionModel::RandomOrder, 0);
            base.strategy_params.aa = aa.clone();
            let s = run_experiment("x", &base, 20, 44).unwrap();
            println!("| homog {:.2}", s.strategy(Strategy::Aa).unwrap().mean);
        }
    }
    let _ = BTreeMap::from([(0, 0)]);
}
