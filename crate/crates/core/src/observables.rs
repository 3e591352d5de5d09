//! Edge-window probes of the correlation matrix and the chiral selection
//! rule for diagonal observables.

use ndarray::prelude::*;
use ndarray_linalg::c64;

use crate::error::{Error, Result};
use crate::evolve::CorrelationMatrix;

fn check_window(w: usize, limit: usize, min: usize) -> Result<()> {
    if w < min || w > limit {
        return Err(Error::WindowOutOfRange { w, limit });
    }
    Ok(())
}

/// Mean occupancy over the first w sites: (1/w) sum_i C_ii.
///
/// The diagonal of a symmetrized correlation matrix must be real; any
/// imaginary residue above 1e-12 signals upstream corruption.
pub fn edge_density(c: &CorrelationMatrix, w: usize) -> Result<f64> {
    check_window(w, c.size(), 1)?;
    let mut acc = 0.0;
    for i in 0..w {
        let z = c.matrix()[(i, i)];
        if z.im.abs() > 1e-12 {
            return Err(Error::SizeMismatch(format!(
                "imaginary diagonal residue {:.3e} at site {i}",
                z.im
            )));
        }
        acc += z.re;
    }
    Ok(acc / w as f64)
}

/// Mean bond coherence over the first window: (2/(w-1)) sum_i Re C_{i+1,i}.
pub fn edge_bond(c: &CorrelationMatrix, w: usize) -> Result<f64> {
    check_window(w, c.size(), 2)?;
    let mut acc = 0.0;
    for i in 0..w - 1 {
        acc += c.matrix()[(i + 1, i)].re;
    }
    Ok(2.0 * acc / (w - 1) as f64)
}

/// Matrix element of a diagonal observable between the zero and pi modes:
/// sum_j f_j Phi_0(j)* Phi_pi(j). Vanishes for chiral-partner edge modes.
pub fn zero_pi_interference(
    weights: ArrayView1<'_, f64>,
    phi0: ArrayView1<'_, c64>,
    phi_pi: ArrayView1<'_, c64>,
) -> Result<c64> {
    if weights.len() != phi0.len() || phi0.len() != phi_pi.len() {
        return Err(Error::SizeMismatch(format!(
            "weights/modes length mismatch: {} / {} / {}",
            weights.len(),
            phi0.len(),
            phi_pi.len()
        )));
    }
    Ok(weights
        .iter()
        .zip(phi0.iter().zip(phi_pi.iter()))
        .map(|(&f, (a, b))| a.conj() * b * f)
        .sum())
}
