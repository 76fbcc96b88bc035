//! Two uniformly accelerated two-level detectors coupled to the Minkowski
//! vacuum of a massless scalar field.
//!
//! The crate assembles the Markovian generator of the pair from the vacuum
//! correlation functions along their worldlines, integrates it, extracts
//! steady states and spectra, and analyzes the exchange symmetry that
//! protects the singlet at low acceleration.
//!
//! Module map:
//! - [`algebra`]: two-qubit operators, density matrices, observables, entanglement.
//! - [`correlations`]: Wightman function, response function, cooperativity `f(α)`.
//! - [`lindblad`]: Kossakowski matrix, Liouvillian, Bloch system, solvers.
//! - [`symmetry`]: exchange symmetry, conserved quantity, dark states, phases.
//! - [`sweep`]: acceleration sweeps, derivative scans and table output.

pub mod algebra;
pub mod correlations;
pub mod error;
pub mod lindblad;
pub mod sweep;
pub mod symmetry;

pub use algebra::{BlochState, DensityMatrix, Observables};
pub use correlations::{DissipationCoefficients, PhysicalParams};
pub use error::{Error, Result};
pub use lindblad::{KossakowskiMatrix, Liouvillian, Phase};

/// `ε_ijk` for indices in `0..3`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}
