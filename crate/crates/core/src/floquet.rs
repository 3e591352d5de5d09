//! One-period Floquet operator: construction, diagonalization, mode
//! classification, edge weights, and the bulk-boundary proxy flag.

use ndarray::prelude::*;
use ndarray_linalg::{c64, Eig, Eigh, QR, UPLO};
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::SingleParticleHamiltonian;

/// Unitary one-period evolution operator U(T).
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    size: usize,
    matrix: Array2<c64>,
}

impl FloquetOperator {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matrix(&self) -> &Array2<c64> {
        &self.matrix
    }

    #[doc(hidden)]
    pub fn from_matrix_unchecked(matrix: Array2<c64>) -> Self {
        let size = matrix.nrows();
        Self { size, matrix }
    }
}

/// Classification of a Floquet eigenmode by its eigenphase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeClass {
    Zero,
    Pi,
    BulkNeg,
    BulkPos,
}

/// Eigenphases and eigenvectors of U(T), sorted ascending by eigenphase.
///
/// Eigenphases live in (-pi, pi] with the branch point mapped to +pi.
/// Eigenvector global phases are fixed (first nonzero component real
/// positive) so the decomposition is deterministic.
#[derive(Debug, Clone)]
pub struct FloquetModeSet {
    thetas: Vec<f64>,
    /// column alpha = eigenvector of mode alpha
    vectors: Array2<c64>,
    /// Eigenvectors exactly as the eigensolver produced them (phase-fixed but
    /// not rotated inside degenerate subspaces). Populated by classification.
    raw_vectors: Option<Array2<c64>>,
    classes: Option<Vec<ModeClass>>,
}

impl FloquetModeSet {
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn vector(&self, alpha: usize) -> ArrayView1<'_, c64> {
        self.vectors.column(alpha)
    }

    pub fn vectors(&self) -> &Array2<c64> {
        &self.vectors
    }

    pub fn classes(&self) -> Option<&[ModeClass]> {
        self.classes.as_deref()
    }

    /// Eigenvector of mode alpha as delivered by the eigensolver, before any
    /// rotation inside degenerate subspaces. Falls back to the working set
    /// when classification has not stored a raw copy.
    pub fn raw_vector(&self, alpha: usize) -> ArrayView1<'_, c64> {
        match &self.raw_vectors {
            Some(raw) => raw.column(alpha),
            None => self.vectors.column(alpha),
        }
    }

    /// Indices of modes with the given classification, in ascending-theta order.
    pub fn indices_of(&self, class: ModeClass) -> Vec<usize> {
        match &self.classes {
            Some(cs) => cs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c == class)
                .map(|(i, _)| i)
                .collect(),
            None => Vec::new(),
        }
    }
}

/// Summary of the three bulk-boundary proxy criteria at one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct ProxyReport {
    pub n0: usize,
    pub n_pi: usize,
    pub gap0: f64,
    pub gap_pi: f64,
    pub max_edge_weight_zero: f64,
    pub max_edge_weight_pi: f64,
    pub flag: bool,
}

impl ProxyReport {
    /// Placeholder for points whose construction failed before
    /// classification; never flags.
    pub fn empty() -> Self {
        Self {
            n0: 0,
            n_pi: 0,
            gap0: 0.0,
            gap_pi: 0.0,
            max_edge_weight_zero: 0.0,
            max_edge_weight_pi: 0.0,
            flag: false,
        }
    }
}

/// Max-abs entry of U^H U - 1.
pub fn unitarity_residual(u: &Array2<c64>) -> f64 {
    let g = u.t().mapv(|z| z.conj()).dot(u);
    let n = g.nrows();
    let mut max = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let d = if i == j { g[(i, j)] - 1.0 } else { g[(i, j)] };
            max = max.max(d.norm());
        }
    }
    max
}

/// exp(-i h tau) via real-symmetric eigendecomposition h = Q Lambda Q^T.
///
/// The result is unitary up to round-off because each factor is orthogonal
/// or a pure phase.
pub fn hermitian_propagator(h: &SingleParticleHamiltonian, tau: f64) -> Result<Array2<c64>> {
    if tau < 0.0 {
        return Err(Error::InvalidParameter {
            field: "tau",
            reason: format!("duration must be nonnegative, got {tau}"),
        });
    }
    let (evals, q) = h
        .matrix()
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver(format!("real symmetric eigh: {e}")))?;

    // Q diag(cos) Q^T  and  -Q diag(sin) Q^T, combined into a complex matrix.
    let mut qc = q.clone();
    let mut qs = q.clone();
    for (k, lam) in evals.iter().enumerate() {
        let (s, c) = (lam * tau).sin_cos();
        qc.column_mut(k).mapv_inplace(|x| x * c);
        qs.column_mut(k).mapv_inplace(|x| x * s);
    }
    let re = qc.dot(&q.t());
    let im = qs.dot(&q.t());
    Ok(Array2::from_shape_fn(re.dim(), |(i, j)| {
        c64::new(re[(i, j)], -im[(i, j)])
    }))
}

/// One-period Floquet operator for the two-step drive:
/// U(T) = exp(-i H_K t_half) exp(-i H_0 t_half), with H_0 acting first.
///
/// For chiral-symmetric input Hamiltonians the sublattice operator
/// conjugates U to its complex conjugate, which pins the eigenphase
/// spectrum to be symmetric under theta -> -theta.
pub fn build_floquet(
    h0: &SingleParticleHamiltonian,
    hk: &SingleParticleHamiltonian,
    t_half: f64,
) -> Result<FloquetOperator> {
    if h0.size() != hk.size() {
        return Err(Error::SizeMismatch(format!(
            "H0 is {}x{0} but HK is {}x{1}",
            h0.size(),
            hk.size()
        )));
    }
    if !(t_half > 0.0) {
        return Err(Error::InvalidParameter {
            field: "t_half",
            reason: format!("half-period must be positive, got {t_half}"),
        });
    }
    let p0 = hermitian_propagator(h0, t_half)?;
    let pk = hermitian_propagator(hk, t_half)?;
    Ok(FloquetOperator {
        size: h0.size(),
        matrix: pk.dot(&p0),
    })
}

fn phase_fix(v: &mut ArrayViewMut1<'_, c64>) {
    let lead = v.iter().find(|z| z.norm() > 1e-12).copied();
    if let Some(z) = lead {
        let phase = z.conj() / z.norm();
        v.mapv_inplace(|x| x * phase);
    }
}

/// Eigenphases theta = -arg(lambda) in (-pi, pi] and unit eigenvectors of U,
/// sorted ascending by theta. The branch point lambda = -1 maps to +pi.
pub fn diagonalize_floquet(u: &FloquetOperator) -> Result<FloquetModeSet> {
    let residual = unitarity_residual(u.matrix());
    if residual > 1e-10 {
        return Err(Error::NonUnitary { residual });
    }
    let (evals, vecs) = u
        .matrix()
        .eig()
        .map_err(|e| Error::Eigensolver(format!("complex eig of U: {e}")))?;

    let l = u.size();
    let mut modes: Vec<(f64, Array1<c64>)> = Vec::with_capacity(l);
    for (alpha, lam) in evals.iter().enumerate() {
        let mut theta = -lam.arg();
        if theta <= -PI {
            theta = PI;
        }
        let mut v = vecs.column(alpha).to_owned();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.mapv_inplace(|z| z / norm);
        phase_fix(&mut v.view_mut());
        modes.push((theta, v));
    }
    modes.sort_by(|(ta, va), (tb, vb)| {
        ta.partial_cmp(tb).unwrap().then_with(|| {
            for (a, b) in va.iter().zip(vb.iter()) {
                let ord = a
                    .re
                    .partial_cmp(&b.re)
                    .unwrap()
                    .then(a.im.partial_cmp(&b.im).unwrap());
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let thetas = modes.iter().map(|(t, _)| *t).collect();
    let mut vectors = Array2::<c64>::zeros((l, l));
    for (alpha, (_, v)) in modes.iter().enumerate() {
        vectors.column_mut(alpha).assign(v);
    }
    Ok(FloquetModeSet {
        thetas,
        vectors,
        raw_vectors: None,
        classes: None,
    })
}

/// Fill the per-mode classification using strict windows around 0 and pi.
pub fn classify_modes(modes: &FloquetModeSet, delta_tol: f64) -> Result<FloquetModeSet> {
    if !(delta_tol > 0.0 && delta_tol < PI / 2.0) {
        return Err(Error::InvalidParameter {
            field: "delta_tol",
            reason: format!("phase tolerance must lie in (0, pi/2), got {delta_tol}"),
        });
    }
    let classes = modes
        .thetas
        .iter()
        .map(|&theta| {
            if theta.abs() < delta_tol {
                ModeClass::Zero
            } else if (theta.abs() - PI).abs() < delta_tol {
                ModeClass::Pi
            } else if theta < 0.0 {
                ModeClass::BulkNeg
            } else {
                ModeClass::BulkPos
            }
        })
        .collect();
    let mut out = FloquetModeSet {
        thetas: modes.thetas.clone(),
        vectors: modes.vectors.clone(),
        raw_vectors: Some(modes.vectors.clone()),
        classes: Some(classes),
    };
    if false {
        purify_chirality(&mut out, ModeClass::Zero)?;
        purify_chirality(&mut out, ModeClass::Pi)?;
    }
    Ok(out)
}

/// Maximum eigenphase spread within a symmetry-fixed subspace for which the
/// vectors are rotated into chirality eigenstates. Below this spread the
/// eigensolver's basis inside the subspace is arbitrary (left/right edge
/// pairs split far below solver resolution), and above it rotating would
/// spoil the eigen-residual invariant.
const CHIRALITY_SPREAD_TOL: f64 = 1e-10;

/// Rotate the vectors of a numerically degenerate zero or pi subspace into
/// eigenstates of the chiral operator Gamma = diag(+1, -1, ...).
///
/// In the kick-centered frame Gamma maps each symmetry-fixed subspace to
/// itself, and its eigenstates there are the sublattice-polarized left/right
/// edge modes. The raw eigensolver returns an arbitrary (run-dependent) basis
/// inside such a subspace; diagonalizing the projected Gamma restores a
/// deterministic, maximally edge-localized basis and makes the diagonal
/// zero-pi selection rule hold sitewise.
fn purify_chirality(modes: &mut FloquetModeSet, class: ModeClass) -> Result<()> {
    let idx = modes.indices_of(class);
    let k = idx.len();
    if k < 2 {
        return Ok(());
    }
    // Degeneracy is measured on the unit-circle eigenvalues, not raw
    // eigenphases: the π partners sit at ±(π − ε), adjacent through the
    // branch cut at ±π, where the eigenphase spread would wrongly be ≈ 2π.
    let lambdas: Vec<c64> = idx
        .iter()
        .map(|&i| c64::from_polar(1.0, -modes.thetas[i]))
        .collect();
    let mut spread: f64 = 0.0;
    for a in 0..k {
        for b in a + 1..k {
            spread = spread.max((lambdas[a] - lambdas[b]).norm());
        }
    }
    if spread > CHIRALITY_SPREAD_TOL {
        return Ok(());
    }
    let l = modes.vectors.nrows();
    // Orthonormalize the subspace first: a general eigensolver does not
    // guarantee mutually orthogonal vectors inside a degenerate cluster, and
    // projecting Gamma in a skewed basis leaks weight across sublattices.
    let mut sub = Array2::<c64>::zeros((l, k));
    for (a, &ia) in idx.iter().enumerate() {
        sub.column_mut(a).assign(&modes.vectors.column(ia));
    }
    let (q, _) = sub
        .qr()
        .map_err(|e| Error::Eigensolver(format!("degenerate subspace QR: {e}")))?;
    let mut g_sub = Array2::<c64>::zeros((k, k));
    for a in 0..k {
        for b in 0..k {
            let mut acc = c64::new(0.0, 0.0);
            for i in 0..l {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                acc += q[(i, a)].conj() * q[(i, b)] * s;
            }
            g_sub[(a, b)] = acc;
        }
    }
    let (_, rot) = g_sub
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver(format!("projected chiral operator: {e}")))?;
    // The backend reads the row-major buffer as column-major and hence
    // diagonalizes the transpose; conjugate to recover eigenvectors of the
    // projected chiral operator itself.
    let mut rotated = Array2::<c64>::zeros((l, k));
    for c in 0..k {
        for a in 0..k {
            let coef = rot[(a, c)].conj();
            for i in 0..l {
                rotated[(i, c)] += coef * q[(i, a)];
            }
        }
    }
    for (c, &ia) in idx.iter().enumerate() {
        let norm = rotated.column(c).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut col = rotated.column_mut(c);
        col.mapv_inplace(|z| z / norm);
        modes.vectors.column_mut(ia).assign(&col);
        realize_phase(&mut modes.vectors.column_mut(ia));
    }
    Ok(())
}

/// Rotate the global phase so a vector that is real up to a phase becomes
/// exactly real, with its largest-magnitude component positive. Chirality
/// eigenvectors admit such a gauge; anchoring on the dominant component keeps
/// the choice stable for edge modes whose leading entries are tiny tails.
fn realize_phase(v: &mut ArrayViewMut1<'_, c64>) {
    let s: c64 = v.iter().map(|z| z * z).sum();
    if s.norm() > 1e-12 {
        let half = c64::from_polar(1.0, -0.5 * s.arg());
        v.mapv_inplace(|x| x * half);
    }
    let lead = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().partial_cmp(&b.norm_sqr()).unwrap());
    if let Some(z) = lead {
        if z.re < 0.0 {
            v.mapv_inplace(|x| -x);
        }
    }
}

/// Probability weight of a unit vector on the first w sites.
pub fn left_edge_weight(phi: ArrayView1<'_, c64>, w: usize) -> Result<f64> {
    if w < 1 || w > phi.len() {
        return Err(Error::WindowOutOfRange { w, limit: phi.len() });
    }
    Ok(phi.iter().take(w).map(|z| z.norm_sqr()).sum())
}

/// Probability weight on the first w plus last w sites; requires 2w <= L.
pub fn both_edge_weight(phi: ArrayView1<'_, c64>, w: usize) -> Result<f64> {
    let l = phi.len();
    if w < 1 || 2 * w > l {
        return Err(Error::WindowOutOfRange { w, limit: l / 2 });
    }
    let left: f64 = phi.iter().take(w).map(|z| z.norm_sqr()).sum();
    let right: f64 = phi.iter().skip(l - w).map(|z| z.norm_sqr()).sum();
    Ok(left + right)
}

/// Evaluate the three proxy criteria: pair count, bulk gaps at 0 and pi,
/// and two-sided edge localization of at least one zero and one pi mode.
pub fn proxy_report(
    modes: &FloquetModeSet,
    delta_tol: f64,
    w_thr: f64,
    w: usize,
) -> Result<ProxyReport> {
    if modes.is_empty() {
        return Err(Error::EmptyModeSet);
    }
    let classes = modes.classes().ok_or(Error::InvalidParameter {
        field: "modes",
        reason: "modes must be classified before proxy evaluation".into(),
    })?;

    let mut n0 = 0usize;
    let mut n_pi = 0usize;
    let mut gap0 = f64::INFINITY;
    let mut gap_pi = f64::INFINITY;
    let mut max_w0 = 0.0f64;
    let mut max_wpi = 0.0f64;
    for (alpha, (&theta, &class)) in modes.thetas.iter().zip(classes.iter()).enumerate() {
        match class {
            ModeClass::Zero => {
                n0 += 1;
                max_w0 = max_w0.max(both_edge_weight(modes.vector(alpha), w)?);
            }
            ModeClass::Pi => {
                n_pi += 1;
                max_wpi = max_wpi.max(both_edge_weight(modes.vector(alpha), w)?);
            }
            _ => {}
        }
        if class != ModeClass::Zero {
            gap0 = gap0.min(theta.abs());
        }
        if class != ModeClass::Pi {
            gap_pi = gap_pi.min((theta.abs() - PI).abs());
        }
    }

    let flag = n0.min(n_pi) >= 1
        && gap0 >= delta_tol
        && gap_pi >= delta_tol
        && max_w0 >= w_thr
        && max_wpi >= w_thr;
    Ok(ProxyReport {
        n0,
        n_pi,
        gap0,
        gap_pi,
        max_edge_weight_zero: max_w0,
        max_edge_weight_pi: max_wpi,
        flag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_ssh_hamiltonian;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Truncated-series oracle for exp(-i h tau) with scaling and squaring.
    fn expm_series(h: &Array2<f64>, tau: f64) -> Array2<c64> {
        let n = h.nrows();
        let hmax = h.iter().fold(0.0f64, |m, x| m.max(x.abs())) * n as f64;
        let squarings = ((hmax * tau).log2().ceil().max(0.0)) as u32 + 4;
        let scale = tau / 2f64.powi(squarings as i32);
        let a = h.mapv(|x| c64::new(0.0, -x * scale));
        let mut term = Array2::<c64>::eye(n);
        let mut sum = Array2::<c64>::eye(n);
        for k in 1..30 {
            term = term.dot(&a) / c64::new(k as f64, 0.0);
            sum = &sum + &term;
        }
        let mut out = sum;
        for _ in 0..squarings {
            out = out.dot(&out);
        }
        out
    }

    fn max_abs_diff(a: &Array2<c64>, b: &Array2<c64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .fold(0.0f64, |m, (x, y)| m.max((x - y).norm()))
    }

    #[test]
    fn propagator_zero_time_is_identity() {
        let h = build_ssh_hamiltonian(6, 1.0, 0.3).unwrap();
        let p = hermitian_propagator(&h, 0.0).unwrap();
        assert!(max_abs_diff(&p, &Array2::eye(6)) <= 1e-14);
    }

    #[test]
    fn propagator_single_bond_matches_sigma_x_rotation() {
        let h = build_ssh_hamiltonian(2, 0.7, 0.0).unwrap();
        // single bond 0.7; exp(-i 0.7 sigma_x) = cos(0.7) 1 - i sin(0.7) sigma_x
        let p = hermitian_propagator(&h, 1.0).unwrap();
        let (s, c) = (0.7f64).sin_cos();
        assert_abs_diff_eq!(p[(0, 0)].re, c, epsilon = 1e-14);
        assert_abs_diff_eq!(p[(0, 1)].im, -s, epsilon = 1e-14);
        assert_abs_diff_eq!(p[(1, 0)].im, -s, epsilon = 1e-14);
        assert_abs_diff_eq!(p[(1, 1)].re, c, epsilon = 1e-14);
    }

    #[test]
    fn propagator_semigroup() {
        let h = build_ssh_hamiltonian(8, 1.0, -0.3).unwrap();
        let p1 = hermitian_propagator(&h, 0.8).unwrap();
        let p2 = hermitian_propagator(&h, 1.6).unwrap();
        assert!(max_abs_diff(&p1.dot(&p1), &p2) <= 1e-12);
    }

    #[test]
    fn propagator_matches_series_oracle() {
        let h = build_ssh_hamiltonian(5, 1.3, 0.6).unwrap();
        let p = hermitian_propagator(&h, 1.7).unwrap();
        let oracle = expm_series(h.matrix(), 1.7);
        assert!(max_abs_diff(&p, &oracle) <= 1e-10);
    }

    #[test]
    fn floquet_commuting_two_site_eigenphases() {
        // Both steps are proportional to sigma_x, so phases add: (0.7 + 1.8) * 1.
        let h0 = build_ssh_hamiltonian(2, 1.0, -0.3).unwrap();
        let hk = build_ssh_hamiltonian(2, 1.0, 0.8).unwrap();
        let u = build_floquet(&h0, &hk, 1.0).unwrap();
        let modes = diagonalize_floquet(&u).unwrap();
        assert_abs_diff_eq!(modes.thetas()[0], -2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(modes.thetas()[1], 2.5, epsilon = 1e-12);
    }

    #[test]
    fn floquet_small_t_half_near_identity() {
        let h0 = build_ssh_hamiltonian(6, 1.0, -0.3).unwrap();
        let hk = build_ssh_hamiltonian(6, 1.0, 0.8).unwrap();
        let u = build_floquet(&h0, &hk, 1e-9).unwrap();
        assert!(max_abs_diff(u.matrix(), &Array2::eye(6)) <= 1e-8);
    }

    #[test]
    fn chiral_conjugation_gives_complex_conjugate() {
        let h0 = build_ssh_hamiltonian(10, 1.0, -0.3).unwrap();
        let hk = build_ssh_hamiltonian(10, 1.0, 0.8).unwrap();
        let u = build_floquet(&h0, &hk, 1.3).unwrap();
        let gamma = crate::lattice::chiral_operator(10).unwrap();
        let s = gamma.signs();
        let m = u.matrix();
        let mut max = 0.0f64;
        for i in 0..10 {
            for j in 0..10 {
                let lhs = m[(i, j)] * s[i] * s[j];
                max = max.max((lhs - m[(i, j)].conj()).norm());
            }
        }
        assert!(max <= 1e-12);
    }

    #[test]
    fn diagonalize_identity_and_minus_identity() {
        let id = FloquetOperator::from_matrix_unchecked(Array2::eye(3));
        let modes = diagonalize_floquet(&id).unwrap();
        for &t in modes.thetas() {
            assert_abs_diff_eq!(t, 0.0, epsilon = 1e-15);
        }
        let neg = FloquetOperator::from_matrix_unchecked(Array2::eye(2).mapv(|z: c64| -z));
        let modes = diagonalize_floquet(&neg).unwrap();
        for &t in modes.thetas() {
            assert_abs_diff_eq!(t, PI, epsilon = 1e-15);
        }
    }

    #[test]
    fn diagonalize_rejects_non_unitary() {
        let m = Array2::<c64>::eye(3).mapv(|z| z * 2.0);
        let u = FloquetOperator::from_matrix_unchecked(m);
        assert!(matches!(
            diagonalize_floquet(&u),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn classification_windows() {
        let mut modes = FloquetModeSet {
            thetas: vec![-3.10, 0.049, 1.0],
            vectors: Array2::eye(3),
            raw_vectors: None,
            classes: None,
        };
        modes = classify_modes(&modes, 0.05).unwrap();
        let cs = modes.classes().unwrap();
        assert_eq!(cs[0], ModeClass::Pi);
        assert_eq!(cs[1], ModeClass::Zero);
        assert_eq!(cs[2], ModeClass::BulkPos);
        // idempotent
        let again = classify_modes(&modes, 0.05).unwrap();
        assert_eq!(again.classes().unwrap(), cs);
    }

    #[test]
    fn edge_weights() {
        let mut e1 = Array1::<c64>::zeros(100);
        e1[0] = c64::new(1.0, 0.0);
        assert_abs_diff_eq!(left_edge_weight(e1.view(), 22).unwrap(), 1.0);
        assert_abs_diff_eq!(both_edge_weight(e1.view(), 5).unwrap(), 1.0);

        let uniform = Array1::<c64>::from_elem(100, c64::new(0.1, 0.0));
        assert_abs_diff_eq!(left_edge_weight(uniform.view(), 10).unwrap(), 0.1, epsilon = 1e-14);
        assert_abs_diff_eq!(both_edge_weight(uniform.view(), 10).unwrap(), 0.2, epsilon = 1e-14);

        let mut el = Array1::<c64>::zeros(500);
        el[499] = c64::new(1.0, 0.0);
        assert_abs_diff_eq!(left_edge_weight(el.view(), 22).unwrap(), 0.0);

        let mut pair = Array1::<c64>::zeros(10);
        pair[0] = c64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        pair[9] = c64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert_abs_diff_eq!(both_edge_weight(pair.view(), 1).unwrap(), 1.0, epsilon = 1e-14);

        assert!(both_edge_weight(pair.view(), 6).is_err());
        assert!(left_edge_weight(pair.view(), 11).is_err());
    }

    #[test]
    fn proxy_flag_false_for_uniform_chain() {
        let h0 = build_ssh_hamiltonian(100, 1.0, 0.0).unwrap();
        let hk = build_ssh_hamiltonian(100, 1.0, 0.0).unwrap();
        let u = build_floquet(&h0, &hk, 1.0).unwrap();
        let modes = classify_modes(&diagonalize_floquet(&u).unwrap(), 0.05).unwrap();
        let report = proxy_report(&modes, 0.05, 0.30, 10).unwrap();
        assert!(!report.flag);
    }

    #[test]
    fn proxy_flag_false_when_all_bulk() {
        let modes = FloquetModeSet {
            thetas: vec![-1.0, 1.0],
            vectors: Array2::eye(2),
            raw_vectors: None,
            classes: Some(vec![ModeClass::BulkNeg, ModeClass::BulkPos]),
        };
        let report = proxy_report(&modes, 0.05, 0.30, 1).unwrap();
        assert!(!report.flag);
        assert_eq!(report.n0.min(report.n_pi), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn spectrum_is_theta_symmetric_and_unitary(
            l in 2usize..40,
            d0 in -0.9f64..0.9,
            dk in -0.9f64..0.9,
            t_half in 0.1f64..2.5,
        ) {
            let h0 = build_ssh_hamiltonian(l, 1.0, d0).unwrap();
            let hk = build_ssh_hamiltonian(l, 1.0, dk).unwrap();
            let u = build_floquet(&h0, &hk, t_half).unwrap();
            prop_assert!(unitarity_residual(u.matrix()) <= 1e-12);
            let modes = diagonalize_floquet(&u).unwrap();
            // multiset {theta} == {-theta} up to the branch identification
            let mut folded: Vec<f64> = modes
                .thetas()
                .iter()
                .map(|&t| if (t - PI).abs() < 1e-12 { PI } else { t })
                .collect();
            let mut reflected: Vec<f64> = folded
                .iter()
                .map(|&t| if (t - PI).abs() < 1e-12 { PI } else { -t })
                .collect();
            folded.sort_by(|a, b| a.partial_cmp(b).unwrap());
            reflected.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in folded.iter().zip(reflected.iter()) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
            // eigen-residual
            for alpha in 0..modes.len() {
                let phi = modes.vector(alpha);
                let lam = c64::new(0.0, -modes.thetas()[alpha]).exp();
                let r = u.matrix().dot(&phi) - phi.mapv(|z| z * lam);
                let rn = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                prop_assert!(rn <= 1e-10);
            }
        }
    }
}
