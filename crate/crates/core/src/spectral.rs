//! Windowed Fourier diagnostics of stroboscopic series: subharmonic power
//! fraction with its floating-point guard, the even-odd sub-sequence
//! amplitude, and the overlap-ranked level table.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolve::TrajectoryRecord;

const MIN_SPECTRUM_LEN: usize = 8;
const GUARD_RELATIVE: f64 = 1e-8;
const GUARD_ABSOLUTE: f64 = 1e-12;

/// One-sided power spectrum in cycles per period.
#[derive(Debug, Clone)]
pub struct PowerSpectrum {
    pub frequencies: Vec<f64>,
    pub powers: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SubharmonicResult {
    /// Raw power at the bin nearest f = 1/2 (windowed, mean-subtracted).
    pub p_half: f64,
    /// P at that bin over the total power in all k >= 1 bins.
    pub fraction: f64,
    pub guard_triggered: bool,
    pub sigma_over_mean: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EvenOddResult {
    pub delta_eo: f64,
    /// |delta_eo| / max(sigma_even, sigma_odd); infinite when both
    /// sub-sequences are exactly constant.
    pub snr: f64,
    /// |delta_eo| when snr clears the threshold, absent otherwise.
    pub reported_amplitude: Option<f64>,
}

/// One row of the overlap-ranked diagnostic table.
#[derive(Debug, Clone, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub mean_overlap_pct: f64,
    pub reported_amplitude: Option<f64>,
    pub snr: f64,
    pub fraction: f64,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn population_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
}

fn hann(n: usize, m: usize) -> f64 {
    0.5 * (1.0 - (std::f64::consts::TAU * n as f64 / (m - 1) as f64).cos())
}

/// Mean-subtracted, Hann-windowed one-sided power spectrum.
pub fn power_spectrum(series: &[f64]) -> Result<PowerSpectrum> {
    let m = series.len();
    if m < MIN_SPECTRUM_LEN {
        return Err(Error::SeriesTooShort {
            len: m,
            min: MIN_SPECTRUM_LEN,
        });
    }
    let xbar = mean(series);
    let mut buf: Vec<Complex64> = series
        .iter()
        .enumerate()
        .map(|(n, &x)| Complex64::new((x - xbar) * hann(n, m), 0.0))
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let half = (m - 1) / 2;
    Ok(PowerSpectrum {
        frequencies: (0..=half).map(|k| k as f64 / m as f64).collect(),
        powers: buf[..=half].iter().map(|y| y.norm_sqr()).collect(),
    })
}

/// Index of the bin nearest f = 1/2 among k >= 1, ties toward lower k.
fn half_bin(spec: &PowerSpectrum) -> usize {
    let mut best = 1;
    for k in 2..spec.frequencies.len() {
        if (spec.frequencies[k] - 0.5).abs() < (spec.frequencies[best] - 0.5).abs() {
            best = k;
        }
    }
    best
}

/// Fraction of oscillatory power in the bin nearest f = 1/2.
///
/// A series that is flat to machine precision would divide noise by noise;
/// the guard zeroes the fraction instead.
pub fn subharmonic_fraction(series: &[f64]) -> Result<SubharmonicResult> {
    if series.len() < MIN_SPECTRUM_LEN {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: MIN_SPECTRUM_LEN,
        });
    }
    let xbar = mean(series);
    let sigma = population_std(series);
    let (sigma_over_mean, guard_triggered) = if xbar == 0.0 {
        (f64::INFINITY, sigma < GUARD_ABSOLUTE)
    } else {
        let r = sigma / xbar.abs();
        (r, r < GUARD_RELATIVE)
    };
    if guard_triggered {
        return Ok(SubharmonicResult {
            p_half: 0.0,
            fraction: 0.0,
            guard_triggered: true,
            sigma_over_mean,
        });
    }
    let spec = power_spectrum(series)?;
    let k = half_bin(&spec);
    let total: f64 = spec.powers[1..].iter().sum();
    Ok(SubharmonicResult {
        p_half: spec.powers[k],
        fraction: spec.powers[k] / total,
        guard_triggered: false,
        sigma_over_mean,
    })
}

/// Signed difference of the even- and odd-period means, with its
/// signal-to-noise ratio.
pub fn even_odd_diagnostic(series: &[f64], snr_min: f64) -> Result<EvenOddResult> {
    if series.len() < 4 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: 4,
        });
    }
    let even: Vec<f64> = series.iter().copied().step_by(2).collect();
    let odd: Vec<f64> = series.iter().copied().skip(1).step_by(2).collect();
    let delta_eo = mean(&even) - mean(&odd);
    let noise = population_std(&even).max(population_std(&odd));
    // zero noise with a real split is an exact period-2 signal; zero noise
    // with zero split is no signal at all
    let snr = if noise == 0.0 {
        if delta_eo == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        delta_eo.abs() / noise
    };
    let reported_amplitude = (snr >= snr_min).then(|| delta_eo.abs());
    Ok(EvenOddResult {
        delta_eo,
        snr,
        reported_amplitude,
    })
}

/// Per-rank series over time and their metrics, for the requested top and
/// bottom ranks.
///
/// At each recorded time the levels are sorted by descending squared overlap
/// (ties toward the lower level index); the rank-r series collects the
/// entanglement energy at rank r across time.
pub fn rank_table(
    records: &[TrajectoryRecord],
    snr_min: f64,
    keep_top: usize,
    keep_bottom: usize,
) -> Result<Vec<RankRow>> {
    let first = records
        .first()
        .and_then(|r| r.full_levels.as_ref())
        .ok_or(Error::MissingSpectra)?;
    let n_levels = first.len();
    // per time step: level order sorted by descending overlap
    let mut eta_by_rank = vec![Vec::with_capacity(records.len()); n_levels];
    let mut overlap_by_rank = vec![Vec::with_capacity(records.len()); n_levels];
    for rec in records {
        let levels = rec.full_levels.as_ref().ok_or(Error::MissingSpectra)?;
        if levels.len() != n_levels {
            return Err(Error::SizeMismatch(format!(
                "level count changed along trajectory: {} vs {n_levels}",
                levels.len()
            )));
        }
        let mut order: Vec<usize> = (0..n_levels).collect();
        order.sort_by(|&a, &b| {
            levels[b].1.partial_cmp(&levels[a].1).unwrap().then(a.cmp(&b))
        });
        for (r, &l) in order.iter().enumerate() {
            eta_by_rank[r].push(levels[l].0);
            overlap_by_rank[r].push(levels[l].1);
        }
    }
    let mut ranks: Vec<usize> = (0..keep_top.min(n_levels)).collect();
    for r in n_levels.saturating_sub(keep_bottom)..n_levels {
        if !ranks.contains(&r) {
            ranks.push(r);
        }
    }
    ranks
        .into_iter()
        .map(|r| {
            let eo = even_odd_diagnostic(&eta_by_rank[r], snr_min)?;
            let sub = subharmonic_fraction(&eta_by_rank[r])?;
            Ok(RankRow {
                rank: r + 1,
                mean_overlap_pct: 100.0 * mean(&overlap_by_rank[r]),
                reported_amplitude: eo.reported_amplitude,
                snr: eo.snr,
                fraction: sub.fraction,
            })
        })
        .collect()
}
