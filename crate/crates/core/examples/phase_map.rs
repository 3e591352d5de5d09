//! Sweep the (delta_K, T_half) plane on a reduced grid and render an ASCII
//! map of the subharmonic fraction with proxy masking.
//!
//! Run with: cargo run --example phase_map

use floquet_ssh::config::RunConfig;
use floquet_ssh::scan::{phase_diagram, ScanGrid};

fn main() {
    let mut cfg = RunConfig::default();
    cfg.l = 100;
    cfg.workers = Some(1);
    let mut grid = ScanGrid::default_phase_grid(cfg);
    grid.delta_k_values = (0..13).map(|i| -0.9 + 0.15 * i as f64).collect();
    grid.t_half_values = (0..13).map(|i| 0.2 + 0.18 * i as f64).collect();
    grid.base.n_periods = 100;

    let cells = phase_diagram(&grid);
    let ncols = grid.delta_k_values.len();
    println!("rows: T_half {:.2}..{:.2} (top to bottom)", grid.t_half_values[12], grid.t_half_values[0]);
    println!("cols: delta_K {:.2}..{:.2} | '.' masked, 0-9 ~ F x 10", -0.9, 0.9);
    for row in (0..grid.t_half_values.len()).rev() {
        let mut line = String::new();
        for col in 0..ncols {
            let c = &cells[row * ncols + col];
            line.push(match c.fraction {
                Some(f) => char::from_digit((f * 9.999).floor() as u32, 10).unwrap(),
                None => '.',
            });
            line.push(' ');
        }
        println!("  {line}");
    }
    let unmasked = cells.iter().filter(|c| c.fraction.is_some()).count();
    println!("{unmasked}/{} cells unmasked", cells.len());
}
