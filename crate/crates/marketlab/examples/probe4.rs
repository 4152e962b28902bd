//! Per-limit fill diagnostics for AA:SHVR (work in progress).

use marketlab::experiment::derive_seed;
use marketlab::scheduler::SelectionModel;
use marketlab::session::{run_session, SessionConfig};
use marketlab::types::{Side, Strategy, TraderId};

fn main() {
    let base = SessionConfig::new(
        vec![(Strategy::Zip, 5), (Strategy::Shvr, 5)],
        SelectionModel::RandomOrder,
        0,
    );
    let strat = |id: TraderId| if id.index < 5 { 0usize } else { 1usize }; // 0=AA 1=SHVR
    let names = ["ZIP ", "SHVR"];

    // per (strategy, side, intra?) : fills, profit ticks, price sum
    let mut stats = [[[(0u32, 0i64, 0f64); 2]; 2]; 2];
    let mut zero_fill_sessions = [[0u32; 2]; 2]; // intra traders with zero fills
    for rep in 0..100 {
        let result = run_session(&base.with_seed(derive_seed(7, rep))).unwrap();
        let mut filled: std::collections::BTreeSet<TraderId> = Default::default();
        let mut limits: std::collections::BTreeMap<TraderId, (f64, u32)> = Default::default();
        for f in &result.fills {
            let price = f.trade.price.as_currency();
            for (id, limit, side) in [
                (f.trade.buyer_id, f.buyer_limit, Side::Bid),
                (f.trade.seller_id, f.seller_limit, Side::Ask),
            ] {
                let intra = match side {
                    Side::Bid => limit.as_currency() >= 1.0,
                    Side::Ask => limit.as_currency() <= 1.0,
                };
                let profit = match side {
                    Side::Bid => limit.as_currency() - price,
                    Side::Ask => price - limit.as_currency(),
                };
                let e = &mut stats[strat(id)][usize::from(side == Side::Ask)][usize::from(intra)];
                e.0 += 1;
                e.1 += (profit * 100.0).round() as i64;
                e.2 += price;
                filled.insert(id);
                limits.entry(id).or_insert((limit.as_currency(), 0)).1 += 1;
            }
        }
    }
    println!("per (strategy, side, class): fills | profit ticks | avg price  [100 sessions]");
    for s in 0..2 {
        for side in 0..2 {
            for intra in 0..2 {
                let (n, p, sum) = stats[s][side][intra];
                let side_name = if side == 0 { "buy " } else { "sell" };
                let class = if intra == 1 { "intra" } else { "extra" };
                println!(
                    "  {} {} {}: {:5} fills  {:8} ticks  avg px {:.3}  ({:.1} ticks/fill)",
                    names[s],
                    side_name,
                    class,
                    n,
                    p,
                    if n > 0 { sum / f64::from(n) } else { 0.0 },
                    if n > 0 { p as f64 / f64::from(n) } else { 0.0 },
                );
            }
        }
    }
    let _ = zero_fill_sessions;
}
