//! Stroboscopic simulation of a two-step driven SSH free-fermion chain with
//! entanglement-spectrum subharmonic diagnostics.
//!
//! The pipeline: build the two step Hamiltonians ([`lattice`]), form and
//! diagonalize the one-period Floquet operator ([`floquet`]), prepare a
//! half-filled Slater determinant ([`state`]), evolve it stroboscopically with
//! per-period QR stabilization ([`evolve`]), reduce to the subsystem
//! entanglement spectrum ([`entanglement`]), probe edge observables
//! ([`observables`]), and quantify the period-2T response ([`spectral`]).
//! Parameter scans and phase diagrams live in [`scan`]; file emission and the
//! run configuration in [`config`], [`output`], and [`driver`].

extern crate blas_src;

pub mod config;
pub mod driver;
pub mod entanglement;
pub mod error;
pub mod evolve;
pub mod floquet;
pub mod lattice;
pub mod observables;
pub mod output;
pub mod scan;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
