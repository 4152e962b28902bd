//! Fill-flow instrumentation for AA:SHVR markets (work in progress).

use marketlab::experiment::derive_seed;
use marketlab::scheduler::SelectionModel;
use marketlab::session::{run_session, SessionConfig};
use marketlab::types::{Side, Strategy, TraderId};

fn main() {
    let base = SessionConfig::new(
        vec![(Strategy::Aa, 5), (Strategy::Shvr, 5)],
        SelectionModel::RandomOrder,
        0,
    );
    // strategy of a trader: indices 0..5 are AA, 5..10 SHVR (mix order)
    let strat = |id: TraderId| if id.index < 5 { "AA " } else { "SHVR" };

    let mut flows: std::collections::BTreeMap<String, (u32, f64)> = Default::default();
    let mut maker_profit = [0i64; 2]; // AA, SHVR as maker (resting side)
    let mut taker_profit = [0i64; 2];
    let mut fills_by = [0u32; 2];
    let mut profit_by = [0i64; 2];
    for rep in 0..60 {
        let result = run_session(&base.with_seed(derive_seed(7, rep))).unwrap();
        for f in &result.fills {
            let (taker_id, maker_id, taker_limit, maker_limit) = match f.trade.taker {
                Side::Bid => (f.trade.buyer_id, f.trade.seller_id, f.buyer_limit, f.seller_limit),
                Side::Ask => (f.trade.seller_id, f.trade.buyer_id, f.seller_limit, f.buyer_limit),
            };
            let key = format!(
                "{} takes {} ({:?})",
                strat(taker_id),
                strat(maker_id),
                f.trade.taker
            );
            let e = flows.entry(key).or_insert((0, 0.0));
            e.0 += 1;
            e.1 += f.trade.price.as_currency();
            let t_idx = usize::from(taker_id.index >= 5);
            let m_idx = usize::from(maker_id.index >= 5);
            let price = i64::from(f.trade.price.ticks());
            let (tp, mp) = match f.trade.taker {
                Side::Bid => (
                    i64::from(taker_limit.ticks()) - price,
                    price - i64::from(maker_limit.ticks()),
                ),
                Side::Ask => (
                    price - i64::from(taker_limit.ticks()),
                    i64::from(maker_limit.ticks()) - price,
                ),
            };
            taker_profit[t_idx] += tp;
            maker_profit[m_idx] += mp;
            fills_by[t_idx] += 1;
            fills_by[m_idx] += 1;
            profit_by[t_idx] += tp;
            profit_by[m_idx] += mp;
        }
    }
    println!("fill flows over 60 sessions (count, avg price):");
    for (k, (n, sum)) in &flows {
        println!("  {k}: {n}  avg {:.3}", sum / f64::from(*n));
    }
    println!("\nAA:   fills {:5}  profit {:8}  as-taker {:8}  as-maker {:8}", fills_by[0], profit_by[0], taker_profit[0], maker_profit[0]);
    println!("SHVR: fills {:5}  profit {:8}  as-taker {:8}  as-maker {:8}", fills_by[1], profit_by[1], taker_profit[1], maker_profit[1]);
}
