//! Initial-state preparation: three half-filled Slater determinants built
//! from Floquet modes or from the ground state of H0.

use ndarray::prelude::*;
use ndarray_linalg::{c64, Eigh, QR, UPLO};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::floquet::{left_edge_weight, FloquetModeSet, ModeClass};
use crate::lattice::SingleParticleHamiltonian;

/// Complex L x N matrix whose columns are the occupied orbitals.
#[derive(Debug, Clone)]
pub struct OrbitalMatrix {
    matrix: Array2<c64>,
}

impl OrbitalMatrix {
    pub fn sites(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn occupied(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &Array2<c64> {
        &self.matrix
    }

    /// Max-abs entry of V^H V - 1.
    pub fn orthonormality_residual(&self) -> f64 {
        let g = self.matrix.t().mapv(|z| z.conj()).dot(&self.matrix);
        let mut max = 0.0f64;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let d = if i == j { g[(i, j)] - 1.0 } else { g[(i, j)] };
                max = max.max(d.norm());
            }
        }
        max
    }

    #[doc(hidden)]
    pub fn from_matrix_unchecked(matrix: Array2<c64>) -> Self {
        Self { matrix }
    }
}

/// How the occupied orbitals were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Superposition,
    PiEigenstate,
    /// Ground state of H0 requested directly (trivial-phase control).
    GroundState,
    /// Ground state of H0 reached because an edge-mode construction failed.
    GroundStateFallback,
}

/// Prepared initial state plus provenance of the construction.
#[derive(Debug, Clone)]
pub struct PreparationOutcome {
    pub orbitals: OrbitalMatrix,
    pub kind: StateKind,
    pub n_pairs: usize,
    pub fallback_triggered: bool,
    pub notes: String,
}

/// QR-orthonormalize the columns of a raw orbital matrix; errors on rank
/// deficiency (relative diagonal-R pivot below 1e-10).
pub fn orthonormalize(v_raw: &Array2<c64>) -> Result<OrbitalMatrix> {
    let (q, r) = v_raw
        .qr()
        .map_err(|e| Error::Eigensolver(format!("QR factorization: {e}")))?;
    let rmax = r.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    for k in 0..r.nrows() {
        let pivot = r[(k, k)].norm();
        if pivot < 1e-10 * rmax.max(1.0) {
            return Err(Error::RankDeficient { index: k, pivot });
        }
    }
    Ok(OrbitalMatrix { matrix: q })
}

fn require_even(l: usize) -> Result<usize> {
    if l % 2 != 0 {
        return Err(Error::InvalidParameter {
            field: "L",
            reason: format!("half-filling requires even L, got {l}"),
        });
    }
    Ok(l / 2)
}

/// Indices of one classified set sorted by descending left-edge weight over
/// the first w sites; ties by ascending mode index.
fn sort_by_left_weight(modes: &FloquetModeSet, class: ModeClass, w: usize) -> Result<Vec<usize>> {
    let mut idx = modes.indices_of(class);
    let weights: Vec<f64> = idx
        .iter()
        .map(|&a| left_edge_weight(modes.vector(a), w))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..idx.len()).collect();
    order.sort_by(|&a, &b| {
        weights[b]
            .partial_cmp(&weights[a])
            .unwrap()
            .then(idx[a].cmp(&idx[b]))
    });
    idx = order.into_iter().map(|k| idx[k]).collect();
    Ok(idx)
}

/// Adjust an occupied-orbital list to exactly `target` columns.
///
/// A deficit is filled with bulk_pos modes in ascending theta; a surplus is
/// trimmed by dropping the bulk_neg modes with theta closest to zero (ties by
/// ascending mode index). Returns None when adjustment is impossible.
fn adjust_filling(
    modes: &FloquetModeSet,
    mut bulk_neg: Vec<usize>,
    extra_cols: usize,
    target: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let thetas = modes.thetas();
    let mut bulk_pos_used: Vec<usize> = Vec::new();
    let current = bulk_neg.len() + extra_cols;
    if current < target {
        let deficit = target - current;
        // bulk_pos in ascending theta; modes are already theta-sorted so the
        // class listing is ascending, ties already resolved by index order.
        let pos = modes.indices_of(ModeClass::BulkPos);
        if pos.len() < deficit {
            return None;
        }
        bulk_pos_used.extend_from_slice(&pos[..deficit]);
    } else if current > target {
        let surplus = current - target;
        if bulk_neg.len() < surplus {
            return None;
        }
        // drop the bulk_neg entries with |theta| smallest
        let mut order: Vec<usize> = (0..bulk_neg.len()).collect();
        order.sort_by(|&a, &b| {
            thetas[bulk_neg[a]]
                .abs()
                .partial_cmp(&thetas[bulk_neg[b]].abs())
                .unwrap()
                .then(bulk_neg[a].cmp(&bulk_neg[b]))
        });
        let drop: std::collections::HashSet<usize> =
            order[..surplus].iter().map(|&k| bulk_neg[k]).collect();
        bulk_neg.retain(|k| {
            let pos_in_vec = k; // mode index
            !drop.contains(pos_in_vec)
        });
    }
    Some((bulk_neg, bulk_pos_used))
}

fn assemble(
    modes: &FloquetModeSet,
    bulk_neg: &[usize],
    bulk_pos: &[usize],
    extra: &[Array1<c64>],
) -> Array2<c64> {
    let l = modes.vectors().nrows();
    let n = bulk_neg.len() + bulk_pos.len() + extra.len();
    let mut v = Array2::<c64>::zeros((l, n));
    let mut col = 0;
    for &a in bulk_neg {
        v.column_mut(col).assign(&modes.vector(a));
        col += 1;
    }
    for e in extra {
        v.column_mut(col).assign(e);
        col += 1;
    }
    for &a in bulk_pos {
        v.column_mut(col).assign(&modes.vector(a));
        col += 1;
    }
    v
}

/// Superposition initial state: all bulk_neg modes plus equal-weight
/// zero-pi combinations of rank-matched edge pairs, filled to L/2.
///
/// Falls back to the half-filled ground state of `h0` when no pair exists or
/// the filling cannot be adjusted.
pub fn build_superposition_state(
    modes: &FloquetModeSet,
    h0: &SingleParticleHamiltonian,
    w: usize,
) -> Result<PreparationOutcome> {
    let l = modes.vectors().nrows();
    let target = require_even(l)?;
    if modes.classes().is_none() {
        return Err(Error::InvalidParameter {
            field: "modes",
            reason: "modes must be classified".into(),
        });
    }

    let zeros = sort_by_left_weight(modes, ModeClass::Zero, w)?;
    let pis = sort_by_left_weight(modes, ModeClass::Pi, w)?;
    let n_pairs = zeros.len().min(pis.len());
    if n_pairs == 0 {
        let mut out = build_ground_state(h0)?;
        out.kind = StateKind::GroundStateFallback;
        out.fallback_triggered = true;
        out.notes = format!(
            "superposition impossible: n0 = {}, n_pi = {}",
            zeros.len(),
            pis.len()
        );
        return Ok(out);
    }

    let sqrt_half = c64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let superposed: Vec<Array1<c64>> = (0..n_pairs)
        .map(|k| {
            let z = modes.vector(zeros[k]);
            let p = modes.vector(pis[k]);
            (&z + &p).mapv(|x| x * sqrt_half)
        })
        .collect();

    let bulk_neg = modes.indices_of(ModeClass::BulkNeg);
    match adjust_filling(modes, bulk_neg, n_pairs, target) {
        Some((neg, pos)) => {
            let v_raw = assemble(modes, &neg, &pos, &superposed);
            let orbitals = orthonormalize(&v_raw)?;
            Ok(PreparationOutcome {
                orbitals,
                kind: StateKind::Superposition,
                n_pairs,
                fallback_triggered: false,
                notes: String::new(),
            })
        }
        None => {
            let mut out = build_ground_state(h0)?;
            out.kind = StateKind::GroundStateFallback;
            out.fallback_triggered = true;
            out.notes = "superposition filling adjustment impossible".into();
            Ok(out)
        }
    }
}

/// Pi-mode Floquet eigenstate: all bulk_neg modes plus the most
/// left-localized pi mode, filled to L/2. The occupied subspace is
/// Floquet-invariant.
pub fn build_pi_eigenstate(
    modes: &FloquetModeSet,
    h0: &SingleParticleHamiltonian,
    w: usize,
) -> Result<PreparationOutcome> {
    let l = modes.vectors().nrows();
    let target = require_even(l)?;
    let pis = sort_by_left_weight(modes, ModeClass::Pi, w)?;
    let Some(&best_pi) = pis.first() else {
        let mut out = build_ground_state(h0)?;
        out.kind = StateKind::GroundStateFallback;
        out.fallback_triggered = true;
        out.notes = "no pi mode present".into();
        return Ok(out);
    };

    let bulk_neg = modes.indices_of(ModeClass::BulkNeg);
    match adjust_filling(modes, bulk_neg, 1, target) {
        Some((neg, pos)) => {
            let pi_col = modes.vector(best_pi).to_owned();
            let v_raw = assemble(modes, &neg, &pos, &[pi_col]);
            let orbitals = orthonormalize(&v_raw)?;
            Ok(PreparationOutcome {
                orbitals,
                kind: StateKind::PiEigenstate,
                n_pairs: 0,
                fallback_triggered: false,
                notes: String::new(),
            })
        }
        None => {
            let mut out = build_ground_state(h0)?;
            out.kind = StateKind::GroundStateFallback;
            out.fallback_triggered = true;
            out.notes = "pi-eigenstate filling adjustment impossible".into();
            Ok(out)
        }
    }
}

/// Half-filled ground state of H0: the L/2 lowest eigenvectors, ascending
/// eigenvalue with ties broken by eigensolver index order.
pub fn build_ground_state(h0: &SingleParticleHamiltonian) -> Result<PreparationOutcome> {
    let l = h0.size();
    let n = require_even(l)?;
    let (_evals, q) = h0
        .matrix()
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver(format!("ground state eigh: {e}")))?;
    // eigh returns ascending eigenvalues
    let v = q.slice(s![.., ..n]).mapv(|x| c64::new(x, 0.0));
    let orbitals = orthonormalize(&v)?;
    Ok(PreparationOutcome {
        orbitals,
        kind: StateKind::GroundState,
        n_pairs: 0,
        fallback_triggered: false,
        notes: "half-filled ground state of H0".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{build_floquet, classify_modes, diagonalize_floquet};
    use crate::lattice::build_ssh_hamiltonian;
    use approx::assert_abs_diff_eq;

    fn projector(v: &Array2<c64>) -> Array2<c64> {
        v.dot(&v.t().mapv(|z| z.conj()))
    }

    fn max_abs_diff(a: &Array2<c64>, b: &Array2<c64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
    }

    /// Small working point in the topological regime with one zero and one
    /// pi edge mode (checked in `small_point_has_edge_modes`).
    fn small_modes(l: usize, t_half: f64) -> (FloquetModeSet, SingleParticleHamiltonian) {
        let h0 = build_ssh_hamiltonian(l, 1.0, -0.3).unwrap();
        let hk = build_ssh_hamiltonian(l, 1.0, 0.8).unwrap();
        let u = build_floquet(&h0, &hk, t_half).unwrap();
        let modes = classify_modes(&diagonalize_floquet(&u).unwrap(), 0.05).unwrap();
        (modes, h0)
    }

    #[test]
    fn ground_state_two_sites() {
        let h0 = build_ssh_hamiltonian(2, 0.7, 0.0).unwrap();
        let out = build_ground_state(&h0).unwrap();
        let v = out.orbitals.matrix();
        assert_eq!(v.dim(), (2, 1));
        // lower eigenvalue -0.7 has eigenvector (1, -1)/sqrt(2) up to phase
        let ratio = v[(1, 0)] / v[(0, 0)];
        assert_abs_diff_eq!(ratio.re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ratio.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ground_state_headline_size() {
        let h0 = build_ssh_hamiltonian(500, 1.0, 0.3).unwrap();
        let out = build_ground_state(&h0).unwrap();
        assert_eq!(out.orbitals.occupied(), 250);
        assert!(out.orbitals.orthonormality_residual() <= 1e-12);
    }

    #[test]
    fn orthonormalize_preserves_column_space() {
        let h0 = build_ssh_hamiltonian(8, 1.0, -0.3).unwrap();
        let gs = build_ground_state(&h0).unwrap();
        let v = gs.orbitals.matrix().clone();

        let q = orthonormalize(&v).unwrap();
        assert!(q.orthonormality_residual() <= 1e-14);

        let scaled = v.mapv(|z| z * 2.0);
        let q2 = orthonormalize(&scaled).unwrap();
        assert!(max_abs_diff(&projector(q.matrix()), &projector(q2.matrix())) <= 1e-12);
    }

    #[test]
    fn orthonormalize_rejects_near_parallel_columns() {
        let mut v = Array2::<c64>::zeros((6, 2));
        for i in 0..6 {
            v[(i, 0)] = c64::new(1.0 / (6f64).sqrt(), 0.0);
            v[(i, 1)] = v[(i, 0)];
        }
        v[(0, 1)] += c64::new(1e-12, 0.0);
        assert!(matches!(
            orthonormalize(&v),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn small_point_has_edge_modes() {
        let (modes, _) = small_modes(100, 2.0);
        let n0 = modes.indices_of(ModeClass::Zero).len();
        let npi = modes.indices_of(ModeClass::Pi).len();
        assert!(n0 >= 1, "expected a zero mode, got {n0}");
        assert!(npi >= 1, "expected a pi mode, got {npi}");
    }

    #[test]
    fn superposition_state_half_filled_orthonormal() {
        let (modes, h0) = small_modes(100, 2.0);
        let out = build_superposition_state(&modes, &h0, 10).unwrap();
        assert_eq!(out.kind, StateKind::Superposition);
        assert!(!out.fallback_triggered);
        assert!(out.n_pairs >= 1);
        assert_eq!(out.orbitals.occupied(), 50);
        assert!(out.orbitals.orthonormality_residual() <= 1e-12);
    }

    #[test]
    fn superposed_orbital_maps_to_orthogonal_partner() {
        let (modes, h0) = small_modes(100, 2.0);
        let hk = build_ssh_hamiltonian(100, 1.0, 0.8).unwrap();
        let u = build_floquet(&h0, &hk, 2.0).unwrap();
        let zeros = sort_by_left_weight(&modes, ModeClass::Zero, 10).unwrap();
        let pis = sort_by_left_weight(&modes, ModeClass::Pi, 10).unwrap();
        let sqrt_half = c64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = (&modes.vector(zeros[0]) + &modes.vector(pis[0])).mapv(|x| x * sqrt_half);
        let stepped = u.matrix().dot(&psi);
        let overlap: c64 = psi
            .iter()
            .zip(stepped.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        // the two eigenphases are only near 0 and pi at finite size, so the
        // exact one-period overlap is (e^{-i theta_0} + e^{-i theta_pi}) / 2
        let th0 = modes.thetas()[zeros[0]];
        let thp = modes.thetas()[pis[0]];
        let expect = (c64::new(0.0, -th0).exp() + c64::new(0.0, -thp).exp()) / 2.0;
        assert_abs_diff_eq!(overlap.norm(), expect.norm(), epsilon = 1e-10);
        assert!(overlap.norm() < 0.05, "overlap {}", overlap.norm());
    }

    #[test]
    fn pi_eigenstate_subspace_is_floquet_invariant() {
        let (modes, h0) = small_modes(100, 2.0);
        let hk = build_ssh_hamiltonian(100, 1.0, 0.8).unwrap();
        let u = build_floquet(&h0, &hk, 2.0).unwrap();
        let out = build_pi_eigenstate(&modes, &h0, 10).unwrap();
        assert_eq!(out.kind, StateKind::PiEigenstate);
        let c = projector(out.orbitals.matrix());
        let uc = u.matrix().dot(&c).dot(&u.matrix().t().mapv(|z| z.conj()));
        assert!(max_abs_diff(&uc, &c) <= 1e-10);
    }

    #[test]
    fn superposition_state_is_not_floquet_invariant() {
        let (modes, h0) = small_modes(100, 2.0);
        let hk = build_ssh_hamiltonian(100, 1.0, 0.8).unwrap();
        let u = build_floquet(&h0, &hk, 2.0).unwrap();
        let out = build_superposition_state(&modes, &h0, 10).unwrap();
        let c = projector(out.orbitals.matrix());
        let uc = u.matrix().dot(&c).dot(&u.matrix().t().mapv(|z| z.conj()));
        assert!(max_abs_diff(&uc, &c) > 1e-6);
    }

    #[test]
    fn fallback_when_no_pi_mode() {
        // trivial static phase at tiny drive: no pi modes at all
        let h0 = build_ssh_hamiltonian(20, 1.0, 0.3).unwrap();
        let hk = build_ssh_hamiltonian(20, 1.0, 0.3).unwrap();
        let u = build_floquet(&h0, &hk, 0.1).unwrap();
        let modes = classify_modes(&diagonalize_floquet(&u).unwrap(), 0.05).unwrap();
        assert!(modes.indices_of(ModeClass::Pi).is_empty());

        let sup = build_superposition_state(&modes, &h0, 4).unwrap();
        assert_eq!(sup.kind, StateKind::GroundStateFallback);
        assert!(sup.fallback_triggered);

        let pi = build_pi_eigenstate(&modes, &h0, 4).unwrap();
        assert_eq!(pi.kind, StateKind::GroundStateFallback);
        assert!(pi.fallback_triggered);
    }

    #[test]
    fn odd_size_rejected() {
        let (modes, h0) = small_modes(100, 2.0);
        let _ = (modes, h0);
        let h = build_ssh_hamiltonian(7, 1.0, -0.3).unwrap();
        assert!(build_ground_state(&h).is_err());
    }
}
