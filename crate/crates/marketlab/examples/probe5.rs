//! Everyone-vs-SHVR and pairwise matrix under random selection (probe).

use marketlab::experiment::{balanced_pair, run_experiment};
use marketlab::scheduler::SelectionModel;
use marketlab::types::Strategy;

fn main() {
    let reps = 100;
    println!("pairwise balanced 5+5 per side, random selection, {reps} reps:");
    let all = Strategy::ALL;
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            let (a, b) = (all[i], all[j]);
            let base = balanced_pair(a, b, 5, SelectionModel::RandomOrder, 0);
            let s = run_experiment("m", &base, reps, 42).unwrap();
            let ma = s.strategy(a).unwrap().mean;
            let mb = s.strategy(b).unwrap().mean;
            let (_, _, t) = s.pairwise.unwrap();
            println!("  {a:>4} {ma:5.2} vs {b:>4} {mb:5.2}   d={:+5.2} p={:.3}", ma - mb, t.p);
        }
    }
}
