//! Command implementations behind the CLI: each takes a resolved
//! configuration, runs the corresponding experiment, and writes CSV/JSON
//! artifacts into an output directory.

use std::path::{Path, PathBuf};

use serde_json::json;

use crate::config::{RunConfig, StateSelect, THalf};
use crate::error::{Error, Result};
use crate::output::{
    write_grid_csv, write_json, write_rank_csv, write_scan_csv, write_trajectory_csv,
};
use crate::scan::{optimize_t_half, phase_diagram, run_trajectory, ScanGrid, ScanResult};
use crate::spectral::{even_odd_diagnostic, rank_table, subharmonic_fraction};

/// Default optimization scan: 80 equally spaced half-periods in [0.1, 4.0]
/// evolved for 200 periods each.
pub const SCAN_RANGE: (f64, f64) = (0.1, 4.0);
pub const SCAN_POINTS: usize = 80;
pub const SCAN_PERIODS: usize = 200;

/// Process exit code for an error, per the documented contract: 2 for
/// configuration problems, 3 for a disallowed preparation fallback, 4 for
/// the numerical guard, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParameter { .. } | Error::Io(_) => 2,
        Error::FallbackDisallowed => 3,
        Error::ImaginaryGuard { .. } => 4,
        _ => 1,
    }
}

/// Resolve `auto` to the scan optimum; pass fixed values through.
pub fn resolve_t_half(cfg: &RunConfig) -> Result<(f64, Option<ScanResult>)> {
    match cfg.t_half {
        THalf::Fixed(v) => Ok((v, None)),
        THalf::Auto => {
            let scan = optimize_t_half(cfg, SCAN_RANGE, SCAN_POINTS, SCAN_PERIODS)?;
            Ok((scan.best_t_half, Some(scan)))
        }
    }
}

fn series(records: &[crate::evolve::TrajectoryRecord], f: impl Fn(&crate::evolve::TrajectoryRecord) -> f64) -> Vec<f64> {
    records.iter().map(f).collect()
}

/// Full single-trajectory experiment: trajectory CSV plus a JSON summary
/// with the subharmonic and even-odd diagnostics of every probe series.
pub fn cmd_simulate(cfg: &RunConfig, out_dir: &Path, allow_fallback: bool) -> Result<PathBuf> {
    let mut cfg = cfg.clone();
    cfg.validate()?;
    let mut notes = Vec::new();
    if cfg.delta0 > 0.0 && cfg.state != StateSelect::GroundState {
        // trivial static phase: no edge-mode construction exists
        cfg.state = StateSelect::GroundState;
        notes.push("trivial-phase control: state forced to ground_state".to_string());
    }
    let (t_half, _) = resolve_t_half(&cfg)?;
    let (prep, out) = run_trajectory(&cfg, t_half, cfg.n_periods, false)?;
    if prep.outcome.fallback_triggered && !allow_fallback {
        return Err(Error::FallbackDisallowed);
    }

    let eta = series(&out.records, |r| r.tracked_eta);
    let n_edge = series(&out.records, |r| r.n_edge);
    let b_edge = series(&out.records, |r| r.b_edge);
    let sub_eta = subharmonic_fraction(&eta)?;
    let sub_n = subharmonic_fraction(&n_edge)?;
    let sub_b = subharmonic_fraction(&b_edge)?;
    let eo_eta = even_odd_diagnostic(&eta, cfg.snr_min)?;

    let pairs = cfg.resolved_pairs();
    let extra = vec![("t_half_resolved", crate::output::format_sig12(t_half))];
    let traj_path = out_dir.join("trajectory.csv");
    write_trajectory_csv(&traj_path, &pairs, &extra, &out.records)?;

    let summary = json!({
        "artifact_version": crate::output::ARTIFACT_VERSION,
        "config": pairs.iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
        "t_half_resolved": t_half,
        "state_kind": prep.outcome.kind,
        "fallback_triggered": prep.outcome.fallback_triggered,
        "notes": notes.iter().chain(std::iter::once(&prep.outcome.notes))
                      .filter(|s| !s.is_empty()).collect::<Vec<_>>(),
        "n_pairs": prep.outcome.n_pairs,
        "proxy": prep.proxy,
        "subharmonic": {
            "tracked_eta": sub_eta,
            "n_edge": sub_n,
            "b_edge": sub_b,
        },
        "even_odd_tracked_eta": {
            "delta_eo": eo_eta.delta_eo,
            "snr": if eo_eta.snr.is_finite() { json!(eo_eta.snr) } else { json!("exact") },
            "reported_amplitude": eo_eta.reported_amplitude,
        },
        "max_orthonormality_residual": out.max_orthonormality_residual,
    });
    let summary_path = out_dir.join("summary.json");
    write_json(&summary_path, &summary)?;
    Ok(summary_path)
}

/// Emit the optimization curve and the chosen optimum.
pub fn cmd_scan_thalf(
    cfg: &RunConfig,
    out_dir: &Path,
    range: (f64, f64),
    points: usize,
    scan_periods: usize,
) -> Result<PathBuf> {
    cfg.validate()?;
    let scan = optimize_t_half(cfg, range, points, scan_periods)?;
    let pairs = cfg.resolved_pairs();
    let extra = vec![
        ("scan_points", points.to_string()),
        ("scan_periods", scan_periods.to_string()),
        ("best_t_half", crate::output::format_sig12(scan.best_t_half)),
    ];
    let path = out_dir.join("scan_thalf.csv");
    write_scan_csv(&path, &pairs, &extra, &scan.curve)?;
    write_json(
        &out_dir.join("scan_thalf.json"),
        &json!({
            "artifact_version": crate::output::ARTIFACT_VERSION,
            "best_t_half": scan.best_t_half,
            "points": points,
            "scan_periods": scan_periods,
            "range": [range.0, range.1],
        }),
    )?;
    Ok(path)
}

/// Grid override for the sweep command; `None` fields keep the defaults.
#[derive(Debug, Clone, Default)]
pub struct GridSpec {
    pub dk_min: Option<f64>,
    pub dk_max: Option<f64>,
    pub dk_points: Option<usize>,
    pub th_min: Option<f64>,
    pub th_max: Option<f64>,
    pub th_points: Option<usize>,
    pub grid_periods: Option<usize>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn build_grid(cfg: &RunConfig, spec: &GridSpec) -> Result<ScanGrid> {
    let mut grid = ScanGrid::default_phase_grid(cfg.clone());
    if let Some(n) = spec.grid_periods {
        grid.base.n_periods = n;
    }
    let dk_custom = spec.dk_min.is_some() || spec.dk_max.is_some() || spec.dk_points.is_some();
    if dk_custom {
        let lo = spec.dk_min.unwrap_or(-0.95);
        let hi = spec.dk_max.unwrap_or(0.95);
        let n = spec.dk_points.unwrap_or(39);
        if !(lo <= hi && n >= 1 && lo.abs() < 1.0 && hi.abs() < 1.0) {
            return Err(Error::InvalidParameter {
                field: "dk_grid",
                reason: format!("need -1 < lo <= hi < 1 and points >= 1, got [{lo}, {hi}] x {n}"),
            });
        }
        grid.delta_k_values = linspace(lo, hi, n);
    }
    let th_custom = spec.th_min.is_some() || spec.th_max.is_some() || spec.th_points.is_some();
    if th_custom {
        let lo = spec.th_min.unwrap_or(0.10);
        let hi = spec.th_max.unwrap_or(2.50);
        let n = spec.th_points.unwrap_or(49);
        if !(lo > 0.0 && lo <= hi && n >= 1) {
            return Err(Error::InvalidParameter {
                field: "th_grid",
                reason: format!("need 0 < lo <= hi and points >= 1, got [{lo}, {hi}] x {n}"),
            });
        }
        grid.t_half_values = linspace(lo, hi, n);
    }
    Ok(grid)
}

/// Sweep the (delta_K, T_half) plane and emit the masked fraction map.
pub fn cmd_phase_diagram(cfg: &RunConfig, out_dir: &Path, spec: &GridSpec) -> Result<PathBuf> {
    cfg.validate()?;
    let grid = build_grid(cfg, spec)?;
    let cells = phase_diagram(&grid);
    let pairs = grid.base.resolved_pairs();
    let extra = vec![
        ("dk_points", grid.delta_k_values.len().to_string()),
        ("th_points", grid.t_half_values.len().to_string()),
    ];
    let path = out_dir.join("phase_diagram.csv");
    write_grid_csv(&path, &pairs, &extra, &cells)?;
    let unmasked = cells.iter().filter(|c| c.fraction.is_some()).count();
    let errors = cells.iter().filter(|c| c.error.is_some()).count();
    write_json(
        &out_dir.join("phase_diagram.json"),
        &json!({
            "artifact_version": crate::output::ARTIFACT_VERSION,
            "cells": cells.len(),
            "unmasked_cells": unmasked,
            "cells_with_errors": errors,
            "dk_points": grid.delta_k_values.len(),
            "th_points": grid.t_half_values.len(),
            "fraction_scale": "fraction in [0,1]; multiply by 100 for percent",
        }),
    )?;
    Ok(path)
}

/// Overlap-ranked top/bottom table for the configured run, with the
/// stationary eigenstate control in adjacent columns.
pub fn cmd_rank_table(
    cfg: &RunConfig,
    out_dir: &Path,
    keep_top: usize,
    keep_bottom: usize,
) -> Result<PathBuf> {
    cfg.validate()?;
    let (t_half, _) = resolve_t_half(cfg)?;
    let (_, main_out) = run_trajectory(cfg, t_half, cfg.n_periods, true)?;
    let main_rows = rank_table(&main_out.records, cfg.snr_min, keep_top, keep_bottom)?;
    let mut control_cfg = cfg.clone();
    control_cfg.state = StateSelect::PiEigenstate;
    let (_, control_out) = run_trajectory(&control_cfg, t_half, cfg.n_periods, true)?;
    let control_rows = rank_table(&control_out.records, cfg.snr_min, keep_top, keep_bottom)?;

    let pairs = cfg.resolved_pairs();
    let extra = vec![
        ("t_half_resolved", crate::output::format_sig12(t_half)),
        ("keep_top", keep_top.to_string()),
        ("keep_bottom", keep_bottom.to_string()),
    ];
    let path = out_dir.join("rank_table.csv");
    write_rank_csv(&path, &pairs, &extra, &main_rows, &control_rows)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> RunConfig {
        let mut cfg = RunConfig::default();
        cfg.l = 60;
        cfg.n_periods = 60;
        cfg.t_half = THalf::Fixed(2.0);
        cfg.workers = Some(1);
        cfg
    }

    #[test]
    fn exit_codes_match_contract() {
        assert_eq!(
            exit_code(&Error::InvalidParameter {
                field: "l",
                reason: "x".into()
            }),
            2
        );
        assert_eq!(exit_code(&Error::FallbackDisallowed), 3);
        assert_eq!(
            exit_code(&Error::ImaginaryGuard {
                period: 1,
                residual: 1.0
            }),
            4
        );
        assert_eq!(exit_code(&Error::MissingSpectra), 1);
    }

    #[test]
    fn simulate_writes_summary_and_trajectory() {
        let dir = tempfile::tempdir().unwrap();
        let summary_path = cmd_simulate(&small_cfg(), dir.path(), true).unwrap();
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&summary_path).unwrap()).unwrap();
        assert_eq!(summary["fallback_triggered"], false);
        let f = summary["subharmonic"]["tracked_eta"]["fraction"]
            .as_f64()
            .unwrap();
        assert!(f > 0.5, "F = {f}");
        assert!(summary["subharmonic"]["n_edge"]["guard_triggered"]
            .as_bool()
            .is_some());
        let traj = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
        assert_eq!(
            traj.lines().filter(|l| !l.starts_with('#')).count(),
            62 // header + 61 records
        );
    }

    #[test]
    fn simulate_forces_ground_state_control() {
        let mut cfg = small_cfg();
        cfg.delta0 = 0.3;
        cfg.n_periods = 40;
        let dir = tempfile::tempdir().unwrap();
        let summary_path = cmd_simulate(&cfg, dir.path(), true).unwrap();
        let summary: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&summary_path).unwrap()).unwrap();
        assert_eq!(summary["state_kind"], "ground_state");
        assert!(summary["notes"]
            .as_array()
            .unwrap()
            .iter()
            .any(|n| n.as_str().unwrap().contains("trivial-phase control")));
    }

    #[test]
    fn simulate_disallowed_fallback_exits_3() {
        let mut cfg = small_cfg();
        // pi-eigenstate requested but no pi mode at weak drive
        cfg.state = StateSelect::PiEigenstate;
        cfg.delta_k = -0.3;
        cfg.t_half = THalf::Fixed(0.1);
        cfg.n_periods = 20;
        let dir = tempfile::tempdir().unwrap();
        let err = cmd_simulate(&cfg, dir.path(), false).unwrap_err();
        assert_eq!(exit_code(&err), 3);
        assert!(cmd_simulate(&cfg, dir.path(), true).is_ok());
    }

    #[test]
    fn scan_command_emits_curve() {
        let mut cfg = small_cfg();
        cfg.n_periods = 40;
        let dir = tempfile::tempdir().unwrap();
        let path = cmd_scan_thalf(&cfg, dir.path(), (1.8, 2.2), 5, 40).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let rows: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("t_half"))
            .collect();
        assert_eq!(rows.len(), 5);
        assert!(text.lines().any(|l| l.starts_with("# best_t_half")));
    }

    #[test]
    fn phase_diagram_command_smoke_grid() {
        let cfg = small_cfg();
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec {
            dk_min: Some(-0.8),
            dk_max: Some(0.8),
            dk_points: Some(3),
            th_min: Some(0.5),
            th_max: Some(2.0),
            th_points: Some(2),
            grid_periods: Some(40),
        };
        let path = cmd_phase_diagram(&cfg, dir.path(), &spec).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let rows = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("delta_k"))
            .count();
        assert_eq!(rows, 6);
    }

    #[test]
    fn rank_table_command_writes_control_columns() {
        let mut cfg = small_cfg();
        cfg.n_periods = 40;
        let dir = tempfile::tempdir().unwrap();
        let path = cmd_rank_table(&cfg, dir.path(), 2, 1).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let rows: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("rank"))
            .collect();
        assert_eq!(rows.len(), 3);
        // the control columns of every row must have an empty amplitude
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            assert_eq!(cols.len(), 9);
            assert_eq!(cols[6], "", "control amplitude should be absent: {row}");
        }
    }
}
