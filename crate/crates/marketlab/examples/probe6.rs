//! Sweep curve probe.
use marketlab::experiment::sensitivity_sweep;
use marketlab::types::Strategy;
fn main() {
    let pts = sensitivity_sweep(Strategy::Shvr, &[1.0, 1.25, 1.38, 1.5, 2.0, 4.0, 8.0], 5, 100, 44).unwrap();
    for p in &pts {
        println!("R={:<5} AA {:.3}  SHVR {:.3}  d={:+.3} p={:.4}", p.r, p.mean_aa, p.mean_other, p.mean_aa - p.mean_other, p.p);
    }
}
