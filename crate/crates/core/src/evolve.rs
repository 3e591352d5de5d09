//! Stroboscopic evolution of the occupied-orbital matrix with per-period QR
//! stabilization, and the per-period probe records.

use ndarray::prelude::*;
use ndarray_linalg::c64;

use crate::entanglement::{entanglement_spectrum, track_level, ReferenceVector, TrackMode};
use crate::error::{Error, Result};
use crate::floquet::FloquetOperator;
use crate::observables::{edge_bond, edge_density};
use crate::state::{orthonormalize, OrbitalMatrix, PreparationOutcome};

/// Two-point correlation matrix C_ij = <c_j^dag c_i>, Hermitian after
/// symmetrization; a projector for the pure Gaussian states used here.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    matrix: Array2<c64>,
}

impl CorrelationMatrix {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<c64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.size()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Max-abs entry of C^2 - C.
    pub fn projector_residual(&self) -> f64 {
        let sq = self.matrix.dot(&self.matrix);
        sq.iter()
            .zip(self.matrix.iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
    }

    #[doc(hidden)]
    pub fn from_matrix_unchecked(matrix: Array2<c64>) -> Self {
        Self { matrix }
    }
}

/// One stroboscopic sample of every probe.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub n: usize,
    pub tracked_eta: f64,
    pub tracked_overlap: f64,
    pub tracked_mode: TrackMode,
    pub n_edge: f64,
    pub b_edge: f64,
    /// Per level, ascending in occupation: (eta, squared overlap with the
    /// reference vector). Recorded only when requested.
    pub full_levels: Option<Vec<(f64, f64)>>,
}

/// What to measure each period.
#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub l_a: usize,
    pub w: usize,
    pub clip_eps: f64,
    pub v_ref: Option<ReferenceVector>,
    pub record_full_spectrum: bool,
}

#[derive(Debug, Clone)]
pub struct EvolveOutput {
    pub records: Vec<TrajectoryRecord>,
    /// Worst per-period orthonormality drift of the orbital matrix; bounds
    /// the projector residual of C at every recorded time.
    pub max_orthonormality_residual: f64,
    pub final_orbitals: OrbitalMatrix,
}

/// One stroboscopic period: QR-orthonormalized U.V.
pub fn step(v: &OrbitalMatrix, u: &FloquetOperator) -> Result<OrbitalMatrix> {
    if u.size() != v.sites() {
        return Err(Error::SizeMismatch(format!(
            "operator size {} vs orbital sites {}",
            u.size(),
            v.sites()
        )));
    }
    orthonormalize(&u.matrix().dot(v.matrix()))
}

/// C = V V^dag, explicitly symmetrized.
pub fn correlation_matrix(v: &OrbitalMatrix) -> CorrelationMatrix {
    let raw = v.matrix().dot(&v.matrix().t().mapv(|z| z.conj()));
    let sym = (&raw + &raw.t().mapv(|z| z.conj())).mapv(|z| z * 0.5);
    CorrelationMatrix { matrix: sym }
}

/// Top-left m x m block of C computed from the first m rows of V only;
/// avoids materializing the full L x L matrix every period.
fn leading_block(v: &OrbitalMatrix, m: usize) -> CorrelationMatrix {
    let rows = v.matrix().slice(s![..m, ..]);
    let raw = rows.dot(&rows.t().mapv(|z| z.conj()));
    let sym = (&raw + &raw.t().mapv(|z| z.conj())).mapv(|z| z * 0.5);
    CorrelationMatrix { matrix: sym }
}

fn record_probes(
    v: &OrbitalMatrix,
    n: usize,
    probes: &ProbeConfig,
) -> Result<TrajectoryRecord> {
    let m = probes.l_a.max(probes.w);
    let block = leading_block(v, m);
    let c_a = block.matrix().slice(s![..probes.l_a, ..probes.l_a]).to_owned();
    let spec = entanglement_spectrum(&c_a, probes.clip_eps, n)?;
    let tracked = track_level(&spec, probes.v_ref.as_ref());
    let full_levels = if probes.record_full_spectrum {
        let overlaps: Vec<f64> = match &probes.v_ref {
            Some(r) => (0..spec.len())
                .map(|l| {
                    let amp: c64 = r
                        .entries
                        .iter()
                        .zip(spec.vectors.column(l))
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    amp.norm_sqr()
                })
                .collect(),
            None => vec![0.0; spec.len()],
        };
        Some(spec.eta.iter().copied().zip(overlaps).collect())
    } else {
        None
    };
    Ok(TrajectoryRecord {
        n,
        tracked_eta: tracked.eta,
        tracked_overlap: tracked.overlap,
        tracked_mode: tracked.mode,
        n_edge: edge_density(&block, probes.w)?,
        b_edge: edge_bond(&block, probes.w)?,
        full_levels,
    })
}

/// Evolve for n_periods, recording probes at n = 0 through n_periods
/// inclusive.
pub fn evolve(
    outcome: &PreparationOutcome,
    u: &FloquetOperator,
    n_periods: usize,
    probes: &ProbeConfig,
) -> Result<EvolveOutput> {
    if n_periods < 1 {
        return Err(Error::InvalidParameter {
            field: "n_periods",
            reason: "must be at least 1".into(),
        });
    }
    let l = outcome.orbitals.sites();
    if probes.l_a < 1 || probes.l_a > l {
        return Err(Error::WindowOutOfRange {
            w: probes.l_a,
            limit: l,
        });
    }
    let mut v = outcome.orbitals.clone();
    let mut records = Vec::with_capacity(n_periods + 1);
    let mut max_resid = v.orthonormality_residual();
    records.push(record_probes(&v, 0, probes)?);
    for n in 1..=n_periods {
        v = step(&v, u)?;
        max_resid = max_resid.max(v.orthonormality_residual());
        records.push(record_probes(&v, n, probes)?);
    }
    Ok(EvolveOutput {
        records,
        max_orthonormality_residual: max_resid,
        final_orbitals: v,
    })
}
