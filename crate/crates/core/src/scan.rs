//! Drive-time optimization scan and two-parameter sweeps with proxy
//! masking, sharing one per-point simulation pipeline.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{RunConfig, StateSelect};
use crate::entanglement::{reference_vector, ReferenceVector};
use crate::error::{Error, Result};
use crate::evolve::{evolve, EvolveOutput, ProbeConfig};
use crate::floquet::{
    build_floquet, classify_modes, diagonalize_floquet, proxy_report, FloquetModeSet,
    FloquetOperator, ProxyReport,
};
use crate::lattice::build_ssh_hamiltonian;
use crate::spectral::{power_spectrum, subharmonic_fraction};
use crate::state::{
    build_ground_state, build_pi_eigenstate, build_superposition_state, PreparationOutcome,
};

/// Everything assembled for one parameter point, before time evolution.
pub struct PreparedRun {
    pub u: FloquetOperator,
    pub modes: FloquetModeSet,
    pub proxy: ProxyReport,
    pub outcome: PreparationOutcome,
    pub v_ref: Option<ReferenceVector>,
}

/// Build the drive, classify its modes, and prepare the configured initial
/// state at the given half-period.
pub fn prepare_run(cfg: &RunConfig, t_half: f64) -> Result<PreparedRun> {
    let h0 = build_ssh_hamiltonian(cfg.l, cfg.t0, cfg.delta0)?;
    let hk = build_ssh_hamiltonian(cfg.l, cfg.t_k, cfg.delta_k)?;
    let u = build_floquet(&h0, &hk, t_half)?;
    let modes = classify_modes(&diagonalize_floquet(&u)?, cfg.delta_tol)?;
    let proxy = proxy_report(&modes, cfg.delta_tol, cfg.w_thr, cfg.w())?;
    let outcome = match cfg.state {
        StateSelect::Superposition => build_superposition_state(&modes, &h0, cfg.w())?,
        StateSelect::PiEigenstate => build_pi_eigenstate(&modes, &h0, cfg.w())?,
        StateSelect::GroundState => build_ground_state(&h0)?,
    };
    let v_ref = reference_vector(&modes, cfg.l_a(), cfg.w())?;
    Ok(PreparedRun {
        u,
        modes,
        proxy,
        outcome,
        v_ref,
    })
}

/// Prepare and evolve one parameter point.
pub fn run_trajectory(
    cfg: &RunConfig,
    t_half: f64,
    n_periods: usize,
    record_full_spectrum: bool,
) -> Result<(PreparedRun, EvolveOutput)> {
    let prep = prepare_run(cfg, t_half)?;
    let probes = ProbeConfig {
        l_a: cfg.l_a(),
        w: cfg.w(),
        clip_eps: cfg.clip_eps,
        v_ref: prep.v_ref.clone(),
        record_full_spectrum,
    };
    let out = evolve(&prep.outcome, &prep.u, n_periods, &probes)?;
    Ok((prep, out))
}

/// One point of the half-period optimization curve.
#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub t_half: f64,
    /// Raw windowed power at the bin nearest f = 1/2; absent when the
    /// state preparation fell back at this point.
    pub p_half: Option<f64>,
    pub fallback: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub best_t_half: f64,
    pub curve: Vec<ScanPoint>,
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool construction cannot fail for a positive count")
}

/// Maximize the raw subharmonic power of the tracked entanglement energy
/// over an equally spaced half-period grid; ties resolve toward the
/// smaller half-period.
pub fn optimize_t_half(
    cfg: &RunConfig,
    range: (f64, f64),
    points: usize,
    scan_periods: usize,
) -> Result<ScanResult> {
    if points < 1 || !(range.0 > 0.0) || range.1 < range.0 {
        return Err(Error::InvalidParameter {
            field: "scan_range",
            reason: format!("need 0 < lo <= hi and points >= 1, got {range:?} x {points}"),
        });
    }
    let mut scan_cfg = cfg.clone();
    scan_cfg.state = StateSelect::Superposition;
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            if points == 1 {
                range.0
            } else {
                range.0 + (range.1 - range.0) * i as f64 / (points - 1) as f64
            }
        })
        .collect();
    let curve: Vec<ScanPoint> = pool(cfg.effective_workers()).install(|| {
        grid.par_iter()
            .map(|&t_half| {
                let prep = prepare_run(&scan_cfg, t_half)?;
                if prep.outcome.fallback_triggered {
                    return Ok(ScanPoint {
                        t_half,
                        p_half: None,
                        fallback: true,
                    });
                }
                let probes = ProbeConfig {
                    l_a: scan_cfg.l_a(),
                    w: scan_cfg.w(),
                    clip_eps: scan_cfg.clip_eps,
                    v_ref: prep.v_ref.clone(),
                    record_full_spectrum: false,
                };
                let out = evolve(&prep.outcome, &prep.u, scan_periods, &probes)?;
                let series: Vec<f64> = out.records.iter().map(|r| r.tracked_eta).collect();
                let spec = power_spectrum(&series)?;
                let k = (1..spec.frequencies.len())
                    .min_by(|&a, &b| {
                        (spec.frequencies[a] - 0.5)
                            .abs()
                            .partial_cmp(&(spec.frequencies[b] - 0.5).abs())
                            .unwrap()
                    })
                    .unwrap();
                Ok(ScanPoint {
                    t_half,
                    p_half: Some(spec.powers[k]),
                    fallback: false,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let best = curve
        .iter()
        .filter(|p| !p.fallback)
        .max_by(|a, b| {
            a.p_half
                .partial_cmp(&b.p_half)
                .unwrap()
                .then(b.t_half.partial_cmp(&a.t_half).unwrap())
        })
        .map(|p| p.t_half);
    match best {
        Some(t) => Ok(ScanResult {
            best_t_half: t,
            curve,
        }),
        None => Err(Error::NoValidScanPoint(
            "state preparation fell back at every scan point".into(),
        )),
    }
}

/// Two-parameter sweep layout; the base config supplies everything except
/// the swept coordinates.
#[derive(Debug, Clone)]
pub struct ScanGrid {
    pub delta_k_values: Vec<f64>,
    pub t_half_values: Vec<f64>,
    pub base: RunConfig,
}

impl ScanGrid {
    /// 39 drive dimerizations x 49 half-periods at 100 periods each.
    pub fn default_phase_grid(mut base: RunConfig) -> Self {
        base.n_periods = 100;
        Self {
            delta_k_values: (0..39).map(|i| -0.95 + 0.05 * i as f64).collect(),
            t_half_values: (0..49).map(|i| 0.10 + 0.05 * i as f64).collect(),
            base,
        }
    }
}

/// One evaluated sweep cell; `fraction` is present only when the proxy
/// flags the point and the preparation did not fall back.
#[derive(Debug, Clone, Serialize)]
pub struct GridCell {
    pub delta_k: f64,
    pub t_half: f64,
    pub proxy: ProxyReport,
    pub pair_count: usize,
    pub fallback_triggered: bool,
    pub fraction: Option<f64>,
    pub error: Option<String>,
}

fn evaluate_cell(base: &RunConfig, delta_k: f64, t_half: f64) -> GridCell {
    let mut cfg = base.clone();
    cfg.delta_k = delta_k;
    let masked_cell = |proxy, pair_count, fallback, fraction, error| GridCell {
        delta_k,
        t_half,
        proxy,
        pair_count,
        fallback_triggered: fallback,
        fraction,
        error,
    };
    let prep = match prepare_run(&cfg, t_half) {
        Ok(p) => p,
        Err(e) => {
            return masked_cell(ProxyReport::empty(), 0, false, None, Some(e.to_string()))
        }
    };
    let pair_count = prep.proxy.n0.min(prep.proxy.n_pi);
    let fallback = prep.outcome.fallback_triggered;
    if !prep.proxy.flag || fallback {
        return masked_cell(prep.proxy, pair_count, fallback, None, None);
    }
    let probes = ProbeConfig {
        l_a: cfg.l_a(),
        w: cfg.w(),
        clip_eps: cfg.clip_eps,
        v_ref: prep.v_ref.clone(),
        record_full_spectrum: false,
    };
    match evolve(&prep.outcome, &prep.u, cfg.n_periods, &probes) {
        Ok(out) => {
            let series: Vec<f64> = out.records.iter().map(|r| r.tracked_eta).collect();
            match subharmonic_fraction(&series) {
                Ok(sub) => masked_cell(
                    prep.proxy,
                    pair_count,
                    fallback,
                    Some(sub.fraction),
                    None,
                ),
                Err(e) => masked_cell(prep.proxy, pair_count, fallback, None, Some(e.to_string())),
            }
        }
        Err(e) => masked_cell(prep.proxy, pair_count, fallback, None, Some(e.to_string())),
    }
}

/// Evaluate every cell of the sweep; output order is row-major with the
/// half-period as the outer coordinate.
pub fn phase_diagram(grid: &ScanGrid) -> Vec<GridCell> {
    let coords: Vec<(f64, f64)> = grid
        .t_half_values
        .iter()
        .flat_map(|&th| grid.delta_k_values.iter().map(move |&dk| (dk, th)))
        .collect();
    pool(grid.base.effective_workers()).install(|| {
        coords
            .par_iter()
            .map(|&(dk, th)| evaluate_cell(&grid.base, dk, th))
            .collect()
    })
}

/// Run one sweep per labeled variation for side-by-side diffing.
pub fn robustness_suite(variations: &[(String, ScanGrid)]) -> Vec<(String, Vec<GridCell>)> {
    variations
        .iter()
        .map(|(label, grid)| (label.clone(), phase_diagram(grid)))
        .collect()
}
