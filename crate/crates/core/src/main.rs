use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use floquet_ssh::config::RunConfig;
use floquet_ssh::driver::{
    cmd_phase_diagram, cmd_rank_table, cmd_scan_thalf, cmd_simulate, exit_code, GridSpec,
    SCAN_PERIODS, SCAN_POINTS, SCAN_RANGE,
};
use floquet_ssh::error::Error;

/// Stroboscopic simulator for period-doubled entanglement-spectrum
/// dynamics in a two-step driven dimerized chain.
#[derive(Parser)]
#[command(name = "floquet-ssh", version)]
struct Cli {
    /// Flat key-value config file (key = value per line, # comments)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV/JSON artifacts
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    #[command(flatten)]
    overrides: ConfigOverrides,

    #[command(subcommand)]
    command: Command,
}

/// CLI overrides; precedence is CLI > config file > defaults.
#[derive(Args)]
struct ConfigOverrides {
    /// Chain length (even)
    #[arg(long, global = true)]
    l: Option<usize>,
    /// Subsystem size (default floor(sqrt(L)))
    #[arg(long, global = true)]
    l_a: Option<usize>,
    /// Edge probe window (default floor(sqrt(L)))
    #[arg(long, global = true)]
    w: Option<usize>,
    /// Static dimerization
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta0: Option<f64>,
    /// Kick dimerization
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta_k: Option<f64>,
    /// Static hopping scale
    #[arg(long, global = true)]
    t0: Option<f64>,
    /// Kick hopping scale
    #[arg(long, global = true)]
    t_k: Option<f64>,
    /// Half-period, or "auto" to optimize by scan
    #[arg(long, global = true)]
    t_half: Option<String>,
    /// Stroboscopic periods to evolve
    #[arg(long, global = true)]
    n_periods: Option<usize>,
    /// Initial state: superposition | pi_eigenstate | ground_state
    #[arg(long, global = true)]
    state: Option<String>,
    /// Eigenphase classification window
    #[arg(long, global = true)]
    delta_tol: Option<f64>,
    /// Edge-weight threshold of the proxy flag
    #[arg(long, global = true)]
    w_thr: Option<f64>,
    /// Occupation clipping epsilon
    #[arg(long, global = true)]
    clip_eps: Option<f64>,
    /// Signal-to-noise threshold for reported amplitudes
    #[arg(long, global = true)]
    snr_min: Option<f64>,
    /// Parallel workers for scans (also FLOQUET_SSH_WORKERS)
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one trajectory and write its probe series and summary
    Simulate {
        /// Exit with an error instead of using the ground-state fallback
        #[arg(long)]
        disallow_fallback: bool,
    },
    /// Optimize the half-period by maximizing raw subharmonic power
    ScanThalf {
        #[arg(long, default_value_t = SCAN_RANGE.0)]
        range_min: f64,
        #[arg(long, default_value_t = SCAN_RANGE.1)]
        range_max: f64,
        #[arg(long, default_value_t = SCAN_POINTS)]
        points: usize,
        #[arg(long, default_value_t = SCAN_PERIODS)]
        scan_periods: usize,
    },
    /// Sweep the (delta_k, t_half) plane with proxy masking
    PhaseDiagram {
        #[arg(long, allow_hyphen_values = true)]
        dk_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        dk_max: Option<f64>,
        #[arg(long)]
        dk_points: Option<usize>,
        #[arg(long)]
        th_min: Option<f64>,
        #[arg(long)]
        th_max: Option<f64>,
        #[arg(long)]
        th_points: Option<usize>,
        /// Periods per cell (default 100)
        #[arg(long)]
        grid_periods: Option<usize>,
    },
    /// Overlap-ranked level table with the eigenstate control columns
    RankTable {
        #[arg(long, default_value_t = 5)]
        keep_top: usize,
        #[arg(long, default_value_t = 5)]
        keep_bottom: usize,
    },
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    let o = &cli.overrides;
    if let Some(v) = o.l {
        cfg.l = v;
    }
    if let Some(v) = o.l_a {
        cfg.l_a = Some(v);
    }
    if let Some(v) = o.w {
        cfg.w = Some(v);
    }
    if let Some(v) = o.delta0 {
        cfg.delta0 = v;
    }
    if let Some(v) = o.delta_k {
        cfg.delta_k = v;
    }
    if let Some(v) = o.t0 {
        cfg.t0 = v;
    }
    if let Some(v) = o.t_k {
        cfg.t_k = v;
    }
    if let Some(v) = &o.t_half {
        cfg.apply_pair("t_half", v)?;
    }
    if let Some(v) = o.n_periods {
        cfg.n_periods = v;
    }
    if let Some(v) = &o.state {
        cfg.apply_pair("state", v)?;
    }
    if let Some(v) = o.delta_tol {
        cfg.delta_tol = v;
    }
    if let Some(v) = o.w_thr {
        cfg.w_thr = v;
    }
    if let Some(v) = o.clip_eps {
        cfg.clip_eps = v;
    }
    if let Some(v) = o.snr_min {
        cfg.snr_min = v;
    }
    if let Some(v) = o.workers {
        cfg.workers = Some(v);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<PathBuf, Error> {
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::Simulate { disallow_fallback } => {
            cmd_simulate(&cfg, &cli.out_dir, !disallow_fallback)
        }
        Command::ScanThalf {
            range_min,
            range_max,
            points,
            scan_periods,
        } => cmd_scan_thalf(
            &cfg,
            &cli.out_dir,
            (*range_min, *range_max),
            *points,
            *scan_periods,
        ),
        Command::PhaseDiagram {
            dk_min,
            dk_max,
            dk_points,
            th_min,
            th_max,
            th_points,
            grid_periods,
        } => {
            let spec = GridSpec {
                dk_min: *dk_min,
                dk_max: *dk_max,
                dk_points: *dk_points,
                th_min: *th_min,
                th_max: *th_max,
                th_points: *th_points,
                grid_periods: *grid_periods,
            };
            cmd_phase_diagram(&cfg, &cli.out_dir, &spec)
        }
        Command::RankTable {
            keep_top,
            keep_bottom,
        } => cmd_rank_table(&cfg, &cli.out_dir, *keep_top, *keep_bottom),
    }
}

fn main() -> ExitCode {
    // pi-eigenstate requests in the trivial phase should fall back unless
    // explicitly disallowed, so only simulate carries the flag
    let cli = Cli::parse();
    match run(&cli) {
        Ok(path) => {
            println!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
