//! Markovian generator of the detector pair and its solvers.

mod bloch;
mod calibration;
mod evolve;
mod kossakowski;
mod liouvillian;
mod spectrum;
mod steady;

pub use bloch::BlochSystem;
pub use calibration::{consistency_residual, project_consistency, project_consistency_with, CalibrationReport};
pub use evolve::{evolve_bloch, evolve_density, max_stable_step, EvolveOptions, Trajectory, TRAJECTORY_TOL};
pub use kossakowski::{KossakowskiMatrix, CALIBRATED_DRIVE_SIGN};
pub use liouvillian::{kron4, unvectorize, vectorize, Liouvillian, SuperOp, Vec16, RATE_SCALE};
pub use spectrum::{spectrum, Spectrum, ZERO_EIGENVALUE_TOL};
pub use steady::{
    steady_closed_form, steady_states, steady_states_with_threshold, Phase, SteadyStates,
    DEFAULT_NULL_THRESHOLD,
};
