//! Plot-ready CSV and JSON emitters. Every file starts with a comment
//! header holding the fully resolved configuration so a run can be
//! reproduced bit-identically from its own output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::evolve::TrajectoryRecord;
use crate::scan::{GridCell, ScanPoint};
use crate::spectral::RankRow;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Decimal rendering with 12 significant digits; plain notation inside a
/// readable exponent range, scientific outside it.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            let t = s.trim_end_matches('0').trim_end_matches('.');
            t.to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        // trim trailing zeros in the mantissa: 1.200000000000e-7 -> 1.2e-7
        match s.split_once('e') {
            Some((m, e)) => {
                let m = if m.contains('.') {
                    m.trim_end_matches('0').trim_end_matches('.')
                } else {
                    m
                };
                format!("{m}e{e}")
            }
            None => s,
        }
    }
}

fn opt_sig12(x: Option<f64>) -> String {
    x.map(format_sig12).unwrap_or_default()
}

fn write_header<W: Write>(
    out: &mut W,
    pairs: &[(String, String)],
    extra: &[(&str, String)],
) -> std::io::Result<()> {
    writeln!(out, "# artifact_version = {ARTIFACT_VERSION}")?;
    for (k, v) in pairs {
        writeln!(out, "# {k} = {v}")?;
    }
    for (k, v) in extra {
        writeln!(out, "# {k} = {v}")?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Per-period trajectory table.
pub fn write_trajectory_csv(
    path: &Path,
    pairs: &[(String, String)],
    extra: &[(&str, String)],
    records: &[TrajectoryRecord],
) -> Result<()> {
    let mut out = create(path)?;
    write_header(&mut out, pairs, extra)?;
    writeln!(out, "n,tracked_eta,tracked_overlap,tracked_mode,n_edge,b_edge")?;
    for r in records {
        let mode = match r.tracked_mode {
            crate::entanglement::TrackMode::ReferenceOverlap => "reference_overlap",
            crate::entanglement::TrackMode::FallbackNearestZero => "fallback_nearest_zero",
        };
        writeln!(
            out,
            "{},{},{},{mode},{},{}",
            r.n,
            format_sig12(r.tracked_eta),
            format_sig12(r.tracked_overlap),
            format_sig12(r.n_edge),
            format_sig12(r.b_edge),
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Half-period optimization curve; fallback points leave the power empty.
pub fn write_scan_csv(
    path: &Path,
    pairs: &[(String, String)],
    extra: &[(&str, String)],
    curve: &[ScanPoint],
) -> Result<()> {
    let mut out = create(path)?;
    write_header(&mut out, pairs, extra)?;
    writeln!(out, "t_half,p_half,fallback")?;
    for p in curve {
        writeln!(
            out,
            "{},{},{}",
            format_sig12(p.t_half),
            opt_sig12(p.p_half),
            u8::from(p.fallback),
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Sweep grid; masked fractions are empty fields.
pub fn write_grid_csv(
    path: &Path,
    pairs: &[(String, String)],
    extra: &[(&str, String)],
    cells: &[GridCell],
) -> Result<()> {
    let mut out = create(path)?;
    write_header(&mut out, pairs, extra)?;
    writeln!(
        out,
        "delta_k,t_half,n0,n_pi,gap0,gap_pi,proxy_flag,fraction"
    )?;
    for c in cells {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_sig12(c.delta_k),
            format_sig12(c.t_half),
            c.proxy.n0,
            c.proxy.n_pi,
            format_sig12(c.proxy.gap0),
            format_sig12(c.proxy.gap_pi),
            u8::from(c.proxy.flag),
            opt_sig12(c.fraction),
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Overlap-ranked table for a main run and its control; absent amplitudes
/// are empty fields.
pub fn write_rank_csv(
    path: &Path,
    pairs: &[(String, String)],
    extra: &[(&str, String)],
    main_rows: &[RankRow],
    control_rows: &[RankRow],
) -> Result<()> {
    let mut out = create(path)?;
    write_header(&mut out, pairs, extra)?;
    writeln!(
        out,
        "rank,mean_overlap_pct,amplitude,snr,fraction,\
         control_mean_overlap_pct,control_amplitude,control_snr,control_fraction"
    )?;
    for (m, c) in main_rows.iter().zip(control_rows) {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            m.rank,
            format_sig12(m.mean_overlap_pct),
            opt_sig12(m.reported_amplitude),
            format_sig12(m.snr),
            format_sig12(m.fraction),
            format_sig12(c.mean_overlap_pct),
            opt_sig12(c.reported_amplitude),
            format_sig12(c.snr),
            format_sig12(c.fraction),
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Pretty-printed JSON value.
pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::Other, e))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
