use floquet_ssh::config::RunConfig;
use floquet_ssh::scan::run_trajectory;
use floquet_ssh::spectral::rank_table;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n_periods: usize = args[0].parse().unwrap();
    for t in &args[1..] {
        let t_half: f64 = t.parse().unwrap();
        let mut cfg = RunConfig::default();
        cfg.workers = Some(1);
        cfg.n_periods = n_periods;
        match run_trajectory(&cfg, t_half, n_periods, true) {
            Ok((_, out)) => {
                match rank_table(&out.records, cfg.snr_min, 5, 0) {
                    Ok(rows) => {
                        print!("T {t_half:.6} sup |");
                        for r in &rows {
                            print!(
                                " r{} {:5.2}% {:>8} F {:.3} |",
                                r.rank,
                                r.mean_overlap_pct,
                                r.reported_amplitude
                                    .map(|a| format!("{a:.3}"))
                                    .unwrap_or_else(|| "-".into()),
                                r.fraction
                            );
                        }
                        println!();
                    }
                    Err(e) => println!("T {t_half:.6} rank error: {e}"),
                }
            }
            Err(e) => println!("T {t_half:.6} sup error: {e}"),
        }
    }
}
