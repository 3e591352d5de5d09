use floquet_ssh::config::RunConfig;
use floquet_ssh::scan::run_trajectory;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n_periods: usize = args[0].parse().unwrap();
    let t_half: f64 = args[1].parse().unwrap();
    let mut cfg = RunConfig::default();
    cfg.workers = Some(1);
    cfg.n_periods = n_periods;
    let (_, out) = run_trajectory(&cfg, t_half, n_periods, true).unwrap();
    // print full (eta, overlap) table for first periods, sorted by overlap desc
    for n in 0..8 {
        let mut lv = out.records[n].full_levels.clone().unwrap();
        lv.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        print!("n={n}:");
        for (eta, ov) in lv.iter().take(8) {
            print!("  ({eta:+.4}, {:.6})", ov);
        }
        println!();
    }
    // sorted-eta set view: is the sorted spectrum period-2?
    for n in 0..4 {
        let mut et: Vec<f64> = out.records[n].full_levels.as_ref().unwrap().iter().map(|x| x.0).collect();
        et.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let s: Vec<String> = et.iter().map(|e| format!("{e:+.3}")).collect();
        println!("etaset n={n}: {}", s.join(" "));
    }
}
