//! Fits the superoperator normalization against the reduced Bloch system.
//!
//! The generator built directly from the Kossakowski coefficients and the
//! three-observable system agree only up to a global rate factor and the
//! sign of the antisymmetric `B` term. Both are fitted here from the
//! projected time derivatives of random symmetric-sector states; the fitted
//! values are the [`RATE_SCALE`](super::RATE_SCALE) and
//! [`CALIBRATED_DRIVE_SIGN`](super::CALIBRATED_DRIVE_SIGN) constants.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::bloch::BlochSystem;
use super::kossakowski::KossakowskiMatrix;
use super::liouvillian::Liouvillian;
use crate::algebra::{BlochState, Observables};
use crate::correlations::DissipationCoefficients;
use crate::error::{Error, Result};

pub const CALIBRATION_SAMPLES: usize = 50;
pub const CALIBRATION_TOL: f64 = 1e-8;
const CALIBRATION_SEED: u64 = 0x5eed_cafe;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub kappa_cal: f64,
    pub drive_sign: f64,
    /// Max-abs mismatch of the fitted derivatives over all sampled states.
    pub residual: f64,
    pub samples: usize,
}

/// Calibrates against the coefficients recorded in `l`.
pub fn project_consistency(l: &Liouvillian) -> Result<CalibrationReport> {
    if l.has_hamiltonian() {
        return Err(Error::InvalidParams(
            "calibration requires a purely dissipative generator".into(),
        ));
    }
    let coeffs = l.coefficients().ok_or_else(|| {
        Error::InvalidParams("calibration needs a generator built from coefficients".into())
    })?;
    project_consistency_with(coeffs, CALIBRATION_SAMPLES, CALIBRATION_SEED)
}

pub fn project_consistency_with(
    coeffs: &DissipationCoefficients,
    samples: usize,
    seed: u64,
) -> Result<CalibrationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<BlochState> = (0..samples).map(|_| BlochState::sample_physical(&mut rng)).collect();
    let bloch = BlochSystem::from_coefficients(coeffs);
    let targets: Vec<[f64; 3]> = states.iter().map(|b| bloch.rhs(b).as_array()).collect();

    let mut best: Option<CalibrationReport> = None;
    for sign in [1.0, -1.0] {
        let k = KossakowskiMatrix::with_drive_sign(*coeffs, sign)?;
        let raw = Liouvillian::with_rate_scale(&k, 1.0, None)?;
        let derivs: Vec<[f64; 3]> = states.iter().map(|b| projected_derivative(&raw, b)).collect();

        let (mut num, mut den) = (0.0, 0.0);
        for (d, t) in derivs.iter().zip(&targets) {
            for i in 0..3 {
                num += d[i] * t[i];
                den += d[i] * d[i];
            }
        }
        if den == 0.0 {
            return Err(Error::InvalidParams(
                "zero generator: calibration is undetermined".into(),
            ));
        }
        let kappa = num / den;
        let residual = derivs
            .iter()
            .zip(&targets)
            .flat_map(|(d, t)| (0..3).map(move |i| (kappa * d[i] - t[i]).abs()))
            .fold(0.0, f64::max);
        let report = CalibrationReport {
            kappa_cal: kappa,
            drive_sign: sign,
            residual,
            samples,
        };
        if best.is_none_or(|b| residual < b.residual) {
            best = Some(report);
        }
    }
    let best = best.expect("two candidate signs");
    if best.residual > CALIBRATION_TOL {
        return Err(Error::ModelInconsistency {
            residual: best.residual,
        });
    }
    Ok(best)
}

/// Max-abs mismatch between the projected derivatives of `l` and the Bloch
/// system of its own coefficients, over the given states. No fitting.
pub fn consistency_residual(l: &Liouvillian, states: &[BlochState]) -> Result<f64> {
    let coeffs = l
        .coefficients()
        .ok_or_else(|| Error::InvalidParams("generator has no coefficient metadata".into()))?;
    let bloch = BlochSystem::from_coefficients(coeffs);
    Ok(states
        .iter()
        .map(|b| {
            let d = projected_derivative(l, b);
            let t = bloch.rhs(b).as_array();
            (0..3).map(|i| (d[i] - t[i]).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max))
}

fn projected_derivative(l: &Liouvillian, b: &BlochState) -> [f64; 3] {
    let drho = l.apply(&b.symmetric_matrix());
    Observables::of_matrix(&drho).bloch().as_array()
}
