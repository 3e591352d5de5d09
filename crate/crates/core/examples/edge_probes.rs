//! Demonstrate the chiral selection rule: the window density n_edge stays
//! flat while the window bond coherence b_edge inherits the period-2T
//! oscillation, because the zero-pi cross term of any diagonal observable
//! vanishes identically.
//!
//! Run with: cargo run --example edge_probes

use ndarray::Array1;

use floquet_ssh::config::RunConfig;
use floquet_ssh::floquet::{left_edge_weight, ModeClass};
use floquet_ssh::observables::zero_pi_interference;
use floquet_ssh::scan::{prepare_run, run_trajectory};
use floquet_ssh::spectral::subharmonic_fraction;

fn main() -> floquet_ssh::Result<()> {
    let mut cfg = RunConfig::default();
    cfg.l = 100;
    cfg.n_periods = 200;
    cfg.workers = Some(1);
    let t_half = 2.0;
    let w = cfg.w();

    // the selection rule itself, on the best-localized edge mode pair
    let prep = prepare_run(&cfg, t_half)?;
    let best = |class: ModeClass| {
        prep.modes
            .indices_of(class)
            .into_iter()
            .max_by(|&a, &b| {
                left_edge_weight(prep.modes.vector(a), w)
                    .unwrap()
                    .total_cmp(&left_edge_weight(prep.modes.vector(b), w).unwrap())
            })
            .expect("edge modes exist at these parameters")
    };
    let mut f = Array1::<f64>::zeros(cfg.l);
    for i in 0..w {
        f[i] = 1.0;
    }
    let cross = zero_pi_interference(
        f.view(),
        prep.modes.vector(best(ModeClass::Zero)),
        prep.modes.vector(best(ModeClass::Pi)),
    )?;
    println!("|<Phi_0| O_f |Phi_pi>| = {:.3e} (diagonal window operator)", cross.norm());

    let (_, out) = run_trajectory(&cfg, t_half, cfg.n_periods, false)?;
    let n_edge: Vec<f64> = out.records.iter().map(|r| r.n_edge).collect();
    let b_edge: Vec<f64> = out.records.iter().map(|r| r.b_edge).collect();
    let mean = n_edge.iter().sum::<f64>() / n_edge.len() as f64;
    let sd = (n_edge.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n_edge.len() as f64).sqrt();
    println!("n_edge: mean {mean:.6}, relative std {:.3e}", sd / mean.abs());
    println!(
        "b_edge: subharmonic fraction {:.4}",
        subharmonic_fraction(&b_edge)?.fraction
    );
    Ok(())
}
