use nalgebra::{Matrix3, SMatrix, SymmetricEigen};

use crate::algebra::{Atom, Axis, C64};
use crate::correlations::DissipationCoefficients;
use crate::error::{Error, Result};

pub type Mat6 = SMatrix<C64, 6, 6>;

/// Sign of the antisymmetric `B` term for which the superoperator projects
/// onto the reduced three-observable dynamics with a positive `B¹¹` drive.
/// Fixed by [`super::project_consistency`].
pub const CALIBRATED_DRIVE_SIGN: f64 = -1.0;

const PSD_TOL: f64 = 1e-12;

/// `γ^{ab}_{jk} = A^{ab}δ_jk − i·s·B^{ab}ε_{jk3} − A^{ab}δ_{j3}δ_{k3}`, rows
/// and columns indexed by `3·atom + axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct KossakowskiMatrix {
    gamma: Mat6,
    coeffs: DissipationCoefficients,
    drive_sign: f64,
}

impl KossakowskiMatrix {
    pub fn build(coeffs: DissipationCoefficients) -> Result<Self> {
        Self::with_drive_sign(coeffs, CALIBRATED_DRIVE_SIGN)
    }

    pub fn with_drive_sign(coeffs: DissipationCoefficients, drive_sign: f64) -> Result<Self> {
        if coeffs.a11 < coeffs.b11.abs() {
            return Err(Error::InvalidParams(format!(
                "need A11 >= |B11|, got A11 = {}, B11 = {}",
                coeffs.a11, coeffs.b11
            )));
        }
        let gamma = Mat6::from_fn(|r, c| {
            let (a, j) = (r / 3, r % 3);
            let (b, k) = (c / 3, c % 3);
            let (big_a, big_b) = if a == b {
                (coeffs.a11, coeffs.b11)
            } else {
                (coeffs.a12, coeffs.b12)
            };
            let mut g = C64::new(if j == k { big_a } else { 0.0 }, 0.0);
            g -= C64::new(0.0, drive_sign * big_b * crate::levi_civita(j, k, 2));
            if j == 2 && k == 2 {
                g -= big_a;
            }
            g
        });
        let k = Self {
            gamma,
            coeffs,
            drive_sign,
        };
        let min = k.min_eigenvalue();
        let scale = coeffs.a11.abs().max(1.0);
        if min < -PSD_TOL * scale {
            return Err(Error::CompletePositivity { min_eigenvalue: min });
        }
        Ok(k)
    }

    pub fn gamma(&self) -> &Mat6 {
        &self.gamma
    }

    pub fn coefficients(&self) -> &DissipationCoefficients {
        &self.coeffs
    }

    pub fn drive_sign(&self) -> f64 {
        self.drive_sign
    }

    pub fn entry(&self, a: Atom, j: Axis, b: Atom, k: Axis) -> C64 {
        self.gamma[(3 * a.index() + j.index(), 3 * b.index() + k.index())]
    }

    pub fn block(&self, a: Atom, b: Atom) -> Matrix3<C64> {
        self.gamma
            .fixed_view::<3, 3>(3 * a.index(), 3 * b.index())
            .into_owned()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (self.gamma + self.gamma.adjoint()).scale(0.5);
        SymmetricEigen::new(h).eigenvalues.min()
    }

    pub fn hermitian_defect(&self) -> f64 {
        (self.gamma - self.gamma.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}
