//! SSH hopping matrices and the sublattice (chiral) operator.
//!
//! Sites are numbered 1..=L in the physics convention; storage is 0-based,
//! so site j lives at row/column j-1.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Real symmetric L x L nearest-neighbor hopping matrix with zero diagonal.
#[derive(Debug, Clone)]
pub struct SingleParticleHamiltonian {
    size: usize,
    matrix: Array2<f64>,
}

impl SingleParticleHamiltonian {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    /// The L-1 nearest-neighbor bond strengths, bond j coupling sites j and j+1.
    pub fn bonds(&self) -> Vec<f64> {
        (0..self.size - 1).map(|i| self.matrix[(i, i + 1)]).collect()
    }

    /// Escape hatch for tests that need to corrupt the structure.
    #[doc(hidden)]
    pub fn from_matrix_unchecked(matrix: Array2<f64>) -> Self {
        let size = matrix.nrows();
        Self { size, matrix }
    }
}

/// Diagonal operator with +1 on odd sites and -1 on even sites (1-based).
#[derive(Debug, Clone)]
pub struct ChiralOperator {
    signs: Vec<f64>,
}

impl ChiralOperator {
    pub fn size(&self) -> usize {
        self.signs.len()
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }
}

/// Build the SSH hopping matrix: bond (j, j+1) carries t(1+delta) for odd j
/// and t(1-delta) for even j, in 1-based site numbering.
pub fn build_ssh_hamiltonian(l: usize, t: f64, delta: f64) -> Result<SingleParticleHamiltonian> {
    if l < 2 {
        return Err(Error::InvalidParameter {
            field: "L",
            reason: format!("need at least 2 sites, got {l}"),
        });
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter {
            field: "t",
            reason: format!("hopping scale must be positive, got {t}"),
        });
    }
    if !(delta.abs() < 1.0) {
        return Err(Error::InvalidParameter {
            field: "delta",
            reason: format!("dimerization must lie in (-1, 1), got {delta}"),
        });
    }

    let mut matrix = Array2::<f64>::zeros((l, l));
    for bond in 1..l {
        // bond index in 1-based convention; couples sites bond and bond+1
        let amp = if bond % 2 == 1 { t * (1.0 + delta) } else { t * (1.0 - delta) };
        matrix[(bond - 1, bond)] = amp;
        matrix[(bond, bond - 1)] = amp;
    }
    Ok(SingleParticleHamiltonian { size: l, matrix })
}

/// Alternating-sign sublattice operator, +1 at site 1.
pub fn chiral_operator(l: usize) -> Result<ChiralOperator> {
    if l < 1 {
        return Err(Error::InvalidParameter {
            field: "L",
            reason: "need at least one site".into(),
        });
    }
    let signs = (0..l).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    Ok(ChiralOperator { signs })
}

/// Max-abs entry of Gamma h + h Gamma. Vanishes for pure nearest-neighbor
/// hopping with zero diagonal.
pub fn chiral_anticommutator_norm(h: &SingleParticleHamiltonian) -> f64 {
    let gamma = chiral_operator(h.size()).expect("size >= 2");
    let s = gamma.signs();
    let m = h.matrix();
    let mut max = 0.0f64;
    for i in 0..h.size() {
        for j in 0..h.size() {
            // (Gamma h + h Gamma)_{ij} = (s_i + s_j) h_{ij}
            let v = ((s[i] + s[j]) * m[(i, j)]).abs();
            if v > max {
                max = v;
            }
        }
    }
    max
}
