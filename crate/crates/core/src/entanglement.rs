//! Single-particle entanglement spectrum of a subsystem correlation block,
//! plus overlap-based level tracking against a frozen reference vector.

use ndarray::prelude::*;
use ndarray_linalg::{c64, Eigh, UPLO};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolve::CorrelationMatrix;
use crate::floquet::{left_edge_weight, FloquetModeSet, ModeClass};

/// Eigen-decomposition of a subsystem correlation block.
///
/// Levels are sorted by ascending occupation xi; eta_l = ln[(1 - xi_l)/xi_l]
/// is therefore descending. `vectors` columns align with the sorted levels.
#[derive(Debug, Clone)]
pub struct EntanglementSpectrum {
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub vectors: Array2<c64>,
}

impl EntanglementSpectrum {
    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }
}

/// Left-edge profile of the chosen pi mode, truncated to the subsystem and
/// renormalized; computed once per run and frozen.
#[derive(Debug, Clone)]
pub struct ReferenceVector {
    pub entries: Array1<c64>,
    pub source_mode_index: usize,
}

/// Which rule picked the tracked level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackMode {
    ReferenceOverlap,
    FallbackNearestZero,
}

#[derive(Debug, Clone, Copy)]
pub struct TrackedLevel {
    pub index: usize,
    pub eta: f64,
    pub overlap: f64,
    pub mode: TrackMode,
}

/// Top-left L_A x L_A principal submatrix of C.
pub fn restrict_subsystem(c: &CorrelationMatrix, l_a: usize) -> Result<Array2<c64>> {
    let l = c.size();
    if l_a < 1 || l_a > l {
        return Err(Error::WindowOutOfRange { w: l_a, limit: l });
    }
    Ok(c.matrix().slice(s![..l_a, ..l_a]).to_owned())
}

/// Occupation spectrum of C_A with clipping, and the entanglement energies
/// eta_l = ln[(1 - xi_l)/xi_l].
///
/// C_A must be Hermitian to 1e-12; a larger residual means the eigenvalues
/// would acquire imaginary parts, and the run must abort.
pub fn entanglement_spectrum(
    c_a: &Array2<c64>,
    clip_eps: f64,
    period: usize,
) -> Result<EntanglementSpectrum> {
    let mut herm = 0.0f64;
    for i in 0..c_a.nrows() {
        for j in 0..=i {
            herm = herm.max((c_a[(i, j)] - c_a[(j, i)].conj()).norm() / 2.0);
        }
    }
    if herm > 1e-12 {
        return Err(Error::ImaginaryGuard {
            period,
            residual: herm,
        });
    }
    let sym = (c_a + &c_a.t().mapv(|z| z.conj())).mapv(|z| z * 0.5);
    let (xi_raw, vectors_raw) = sym
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver(format!("entanglement spectrum eigh: {e}")))?;
    // The backend reads the row-major buffer as column-major and hence
    // diagonalizes the transpose; for a Hermitian matrix the true
    // eigenvectors are the conjugates of the returned columns.
    let vectors = vectors_raw.mapv(|z| z.conj());
    // eigh returns ascending eigenvalues with aligned columns
    let xi: Vec<f64> = xi_raw
        .iter()
        .map(|&x| x.clamp(clip_eps, 1.0 - clip_eps))
        .collect();
    let eta: Vec<f64> = xi.iter().map(|&x| ((1.0 - x) / x).ln()).collect();
    Ok(EntanglementSpectrum { xi, eta, vectors })
}

/// Truncate the most left-localized pi mode to the first L_A sites and
/// normalize. `None` when no pi mode exists; an error when the chosen mode
/// has essentially no weight on the subsystem.
pub fn reference_vector(
    modes: &FloquetModeSet,
    l_a: usize,
    w: usize,
) -> Result<Option<ReferenceVector>> {
    let pis = modes.indices_of(ModeClass::Pi);
    if pis.is_empty() {
        return Ok(None);
    }
    let mut best = pis[0];
    let mut best_w = f64::NEG_INFINITY;
    for &a in &pis {
        let lw = left_edge_weight(modes.vector(a), w)?;
        if lw > best_w {
            best_w = lw;
            best = a;
        }
    }
    // Restrict the eigensolver's own vector for the selected mode, not the
    // symmetry-rotated working copy: the restriction of a chirality
    // eigenvector is exactly sublattice-polarized, which leaves the two
    // particle-hole-partnered entanglement vectors with identical overlaps
    // and makes the argmax selection degenerate. The solver's vector keeps
    // the exponentially small opposite-sublattice admixture that resolves
    // that tie the same way at every stroboscopic time.
    let truncated = modes.raw_vector(best).slice(s![..l_a]).to_owned();
    let norm = truncated.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::ZeroNormRestriction { norm });
    }
    Ok(Some(ReferenceVector {
        entries: truncated.mapv(|z| z / norm),
        source_mode_index: best,
    }))
}

fn squared_overlap(v_ref: &ReferenceVector, phi: ArrayView1<'_, c64>) -> f64 {
    let amp: c64 = v_ref
        .entries
        .iter()
        .zip(phi.iter())
        .map(|(a, b)| a.conj() * b)
        .sum();
    amp.norm_sqr()
}

/// Pick the level maximizing the squared overlap with `v_ref`; without a
/// reference, fall back to the level with |eta| closest to zero. Ties break
/// toward the lowest level index.
pub fn track_level(spec: &EntanglementSpectrum, v_ref: Option<&ReferenceVector>) -> TrackedLevel {
    match v_ref {
        Some(r) => {
            let mut best = 0;
            let mut best_o = f64::NEG_INFINITY;
            for l in 0..spec.len() {
                let o = squared_overlap(r, spec.vectors.column(l));
                if o > best_o {
                    best_o = o;
                    best = l;
                }
            }
            TrackedLevel {
                index: best,
                eta: spec.eta[best],
                overlap: best_o,
                mode: TrackMode::ReferenceOverlap,
            }
        }
        None => {
            let mut best = 0;
            for l in 1..spec.len() {
                if spec.eta[l].abs() < spec.eta[best].abs() {
                    best = l;
                }
            }
            TrackedLevel {
                index: best,
                eta: spec.eta[best],
                overlap: 0.0,
                mode: TrackMode::FallbackNearestZero,
            }
        }
    }
}

/// Level indices by descending squared overlap with `v_ref`, together with
/// the overlap values; ties break by ascending level index.
pub fn overlap_rank(spec: &EntanglementSpectrum, v_ref: &ReferenceVector) -> Vec<(usize, f64)> {
    let mut rows: Vec<(usize, f64)> = (0..spec.len())
        .map(|l| (l, squared_overlap(v_ref, spec.vectors.column(l))))
        .collect();
    rows.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::correlation_matrix;
    use crate::floquet::{build_floquet, classify_modes, diagonalize_floquet};
    use crate::lattice::build_ssh_hamiltonian;
    use crate::state::build_ground_state;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn diag_c(values: &[f64]) -> CorrelationMatrix {
        let n = values.len();
        let mut m = Array2::<c64>::zeros((n, n));
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = c64::new(v, 0.0);
        }
        CorrelationMatrix::from_matrix_unchecked(m)
    }

    #[test]
    fn restriction_examples() {
        let c = diag_c(&[1.0, 0.0, 1.0, 0.0]);
        let full = restrict_subsystem(&c, 4).unwrap();
        assert_eq!(full, c.matrix().clone());
        let block = restrict_subsystem(&c, 2).unwrap();
        assert_abs_diff_eq!(block[(0, 0)].re, 1.0);
        assert_abs_diff_eq!(block[(1, 1)].re, 0.0);
        assert!(restrict_subsystem(&c, 5).is_err());
        assert!(restrict_subsystem(&c, 0).is_err());
    }

    #[test]
    fn two_site_ground_state_block() {
        let h0 = build_ssh_hamiltonian(2, 0.7, 0.0).unwrap();
        let gs = build_ground_state(&h0).unwrap();
        let c = correlation_matrix(&gs.orbitals);
        let block = restrict_subsystem(&c, 1).unwrap();
        assert_abs_diff_eq!(block[(0, 0)].re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn eta_from_xi_values() {
        let c_a = {
            let mut m = Array2::<c64>::zeros((3, 3));
            m[(0, 0)] = c64::new(0.5, 0.0);
            m[(1, 1)] = c64::new(1.0 / (1.0 + std::f64::consts::E), 0.0);
            m[(2, 2)] = c64::new(0.0, 0.0);
            m
        };
        let spec = entanglement_spectrum(&c_a, 1e-15, 0).unwrap();
        // sorted ascending in xi: 0 (clipped), 1/(1+e), 0.5
        assert_abs_diff_eq!(spec.xi[0], 1e-15, epsilon = 1e-30);
        assert_abs_diff_eq!(spec.eta[0], ((1.0 - 1e-15) / 1e-15f64).ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(spec.eta[0], 34.538776, epsilon = 1e-5);
        assert_abs_diff_eq!(spec.eta[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.eta[2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hermiticity_guard_aborts() {
        let mut m = Array2::<c64>::zeros((2, 2));
        m[(0, 1)] = c64::new(0.3, 0.0);
        m[(1, 0)] = c64::new(0.3, 1e-6);
        let err = entanglement_spectrum(&m, 1e-15, 7).unwrap_err();
        assert!(matches!(err, Error::ImaginaryGuard { period: 7, .. }));
    }

    #[test]
    fn reference_vector_selection() {
        let h0 = build_ssh_hamiltonian(100, 1.0, -0.3).unwrap();
        let hk = build_ssh_hamiltonian(100, 1.0, 0.8).unwrap();
        let u = build_floquet(&h0, &hk, 2.0).unwrap();
        let modes = classify_modes(&diagonalize_floquet(&u).unwrap(), 0.05).unwrap();
        let v_ref = reference_vector(&modes, 10, 10).unwrap().unwrap();
        let n2: f64 = v_ref.entries.iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-12);
        // chosen mode must have the max left weight among pi modes
        let pis = modes.indices_of(ModeClass::Pi);
        let w_best = left_edge_weight(modes.vector(v_ref.source_mode_index), 10).unwrap();
        for &a in &pis {
            assert!(left_edge_weight(modes.vector(a), 10).unwrap() <= w_best + 1e-15);
        }
    }

    #[test]
    fn reference_vector_absent_without_pi_modes() {
        let h0 = build_ssh_hamiltonian(20, 1.0, 0.3).unwrap();
        let u = build_floquet(&h0, &h0, 0.1).unwrap();
        let modes = classify_modes(&diagonalize_floquet(&u).unwrap(), 0.05).unwrap();
        assert!(reference_vector(&modes, 4, 4).unwrap().is_none());
    }

    #[test]
    fn tracking_exact_match_and_fallback() {
        let c_a = {
            let mut m = Array2::<c64>::zeros((3, 3));
            m[(0, 0)] = c64::new(0.1, 0.0);
            m[(1, 1)] = c64::new(0.4, 0.0);
            m[(2, 2)] = c64::new(0.9, 0.0);
            m
        };
        let spec = entanglement_spectrum(&c_a, 1e-15, 0).unwrap();
        // reference equal to level-2 eigenvector exactly
        let v_ref = ReferenceVector {
            entries: spec.vectors.column(2).to_owned(),
            source_mode_index: 0,
        };
        let t = track_level(&spec, Some(&v_ref));
        assert_eq!(t.index, 2);
        assert_abs_diff_eq!(t.overlap, 1.0, epsilon = 1e-12);
        assert_eq!(t.mode, TrackMode::ReferenceOverlap);

        // fallback: eta for xi = {0.1, 0.4, 0.9} is {2.197, 0.405, -2.197};
        // closest to zero is the middle level
        let f = track_level(&spec, None);
        assert_eq!(f.index, 1);
        assert_eq!(f.mode, TrackMode::FallbackNearestZero);
    }

    #[test]
    fn overlap_rank_order_and_ties() {
        let spec = EntanglementSpectrum {
            xi: vec![0.2, 0.5, 0.8],
            eta: vec![1.386, 0.0, -1.386],
            vectors: Array2::eye(3).mapv(|x: f64| c64::new(x, 0.0)),
        };
        let v_ref = ReferenceVector {
            entries: array![
                c64::new(0.3f64.sqrt(), 0.0),
                c64::new(0.5f64.sqrt(), 0.0),
                c64::new(0.2f64.sqrt(), 0.0)
            ],
            source_mode_index: 0,
        };
        let ranks = overlap_rank(&spec, &v_ref);
        assert_eq!(
            ranks.iter().map(|r| r.0).collect::<Vec<_>>(),
            vec![1, 0, 2]
        );
        assert_abs_diff_eq!(ranks[0].1, 0.5, epsilon = 1e-12);

        // exact degeneracy resolves by ascending level index
        let v_eq = ReferenceVector {
            entries: array![
                c64::new(1.0 / 3f64.sqrt(), 0.0),
                c64::new(1.0 / 3f64.sqrt(), 0.0),
                c64::new(1.0 / 3f64.sqrt(), 0.0)
            ],
            source_mode_index: 0,
        };
        let tied = overlap_rank(&spec, &v_eq);
        assert_eq!(tied.iter().map(|r| r.0).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn tracking_is_phase_invariant(ph_ref in 0.0..std::f64::consts::TAU,
                                       ph0 in 0.0..std::f64::consts::TAU,
                                       ph1 in 0.0..std::f64::consts::TAU,
                                       a in 0.05f64..0.95,
                                       b in 0.05f64..0.95) {
            let c_a = {
                let mut m = Array2::<c64>::zeros((2, 2));
                m[(0, 0)] = c64::new(a.min(b), 0.0);
                m[(1, 1)] = c64::new(a.max(b) + 0.01, 0.0);
                m
            };
            let spec = entanglement_spectrum(&c_a, 1e-15, 0).unwrap();
            let v_ref = ReferenceVector {
                entries: array![c64::new(0.8, 0.0), c64::new(0.6, 0.0)],
                source_mode_index: 0,
            };
            let base = track_level(&spec, Some(&v_ref));

            let mut spec2 = spec.clone();
            let r0 = c64::new(0.0, ph0).exp();
            let r1 = c64::new(0.0, ph1).exp();
            spec2.vectors.column_mut(0).mapv_inplace(|z| z * r0);
            spec2.vectors.column_mut(1).mapv_inplace(|z| z * r1);
            let v2 = ReferenceVector {
                entries: v_ref.entries.mapv(|z| z * c64::new(0.0, ph_ref).exp()),
                source_mode_index: 0,
            };
            let rot = track_level(&spec2, Some(&v2));
            prop_assert_eq!(base.index, rot.index);
            prop_assert!((base.overlap - rot.overlap).abs() <= 1e-12);
        }

        #[test]
        fn clipping_identity_inside_safe_band(x in 1e-10f64..1.0) {
            let x = x.min(1.0 - 1e-10);
            let mut m = Array2::<c64>::zeros((1, 1));
            m[(0, 0)] = c64::new(x, 0.0);
            let spec = entanglement_spectrum(&m, 1e-15, 0).unwrap();
            prop_assert!((spec.xi[0] - x).abs() <= 1e-15);
            // eta strictly decreasing in xi
            prop_assert!((spec.eta[0] - ((1.0 - x) / x).ln()).abs() <= 1e-9);
        }
    }
}
