//! Scan the half-period and pick the value maximizing the raw subharmonic
//! power of the tracked entanglement energy.
//!
//! Run with: cargo run --example optimize_drive_time

use floquet_ssh::config::RunConfig;
use floquet_ssh::scan::optimize_t_half;

fn main() -> floquet_ssh::Result<()> {
    let mut cfg = RunConfig::default();
    cfg.l = 100;
    cfg.workers = Some(1);

    // a coarse scan keeps the example quick; the experiments use 80 points
    // in [0.1, 4.0] with 200 periods each
    let scan = optimize_t_half(&cfg, (0.5, 3.5), 16, 100)?;
    println!("t_half      p_half");
    for p in &scan.curve {
        match p.p_half {
            Some(power) => println!("{:6.3}   {:12.4e}", p.t_half, power),
            None => println!("{:6.3}   (fallback)", p.t_half),
        }
    }
    println!("optimum: T_half = {:.3}", scan.best_t_half);
    Ok(())
}
