use nalgebra::{SMatrix, SVector};

use super::kossakowski::KossakowskiMatrix;
use crate::algebra::{hermitian_defect, sigma, Atom, Axis, DensityMatrix, Op4, C64};
use crate::correlations::DissipationCoefficients;
use crate::error::{Error, Result};

pub type SuperOp = SMatrix<C64, 16, 16>;
pub type Vec16 = SVector<C64, 16>;

/// Global factor mapping the superoperator built from the Kossakowski
/// coefficients onto the rate normalization of the reduced Bloch system.
/// Fixed by [`super::project_consistency`].
pub const RATE_SCALE: f64 = 0.25;

/// Column-stacking: entry `(r, c)` goes to index `4c + r`.
pub fn vectorize(m: &Op4) -> Vec16 {
    Vec16::from_fn(|i, _| m[(i % 4, i / 4)])
}

pub fn unvectorize(v: &Vec16) -> Op4 {
    Op4::from_fn(|r, c| v[4 * c + r])
}

pub fn kron4(a: &Op4, b: &Op4) -> SuperOp {
    SuperOp::from_fn(|r, c| a[(r / 4, c / 4)] * b[(r % 4, c % 4)])
}

/// Matrix of the master-equation generator on column-stacked density
/// matrices, so that `vec(AXB) = (Bᵀ⊗A)·vec(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    matrix: SuperOp,
    coeffs: Option<DissipationCoefficients>,
    drive_sign: f64,
    rate_scale: f64,
    has_hamiltonian: bool,
}

impl Liouvillian {
    /// Calibrated generator: dissipator scaled by [`RATE_SCALE`], plus
    /// `−i[H, ρ]` when a Hamiltonian is given (in the same rate units).
    pub fn build(k: &KossakowskiMatrix, hamiltonian: Option<&Op4>) -> Result<Self> {
        Self::with_rate_scale(k, RATE_SCALE, hamiltonian)
    }

    pub fn from_coefficients(coeffs: DissipationCoefficients) -> Result<Self> {
        Self::build(&KossakowskiMatrix::build(coeffs)?, None)
    }

    pub fn with_rate_scale(k: &KossakowskiMatrix, rate_scale: f64, hamiltonian: Option<&Op4>) -> Result<Self> {
        let id = Op4::identity();
        let mut matrix = SuperOp::zeros();
        for a in Atom::BOTH {
            for j in Axis::ALL {
                let sa = sigma(a, j);
                for b in Atom::BOTH {
                    for kk in Axis::ALL {
                        let g = k.entry(a, j, b, kk);
                        if g == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let sb = sigma(b, kk);
                        let prod = sa * sb;
                        let term = kron4(&sa.transpose(), &sb)
                            - (kron4(&id, &prod) + kron4(&prod.transpose(), &id)).scale(0.5);
                        matrix += term * g;
                    }
                }
            }
        }
        matrix *= C64::from(rate_scale);

        if let Some(h) = hamiltonian {
            let defect = hermitian_defect(h);
            if defect > 1e-12 {
                return Err(Error::InvalidParams(format!(
                    "Hamiltonian is not Hermitian (defect {defect:.3e})"
                )));
            }
            matrix += (kron4(&id, h) - kron4(&h.transpose(), &id)) * C64::new(0.0, -1.0);
        }

        Ok(Self {
            matrix,
            coeffs: Some(*k.coefficients()),
            drive_sign: k.drive_sign(),
            rate_scale,
            has_hamiltonian: hamiltonian.is_some(),
        })
    }

    /// Wraps an arbitrary superoperator (no coefficient metadata).
    pub fn from_matrix(matrix: SuperOp) -> Self {
        Self {
            matrix,
            coeffs: None,
            drive_sign: 0.0,
            rate_scale: 1.0,
            has_hamiltonian: false,
        }
    }

    pub fn zero() -> Self {
        Self {
            matrix: SuperOp::zeros(),
            coeffs: Some(DissipationCoefficients::new(0.0, 0.0, 0.0, 0.0)),
            drive_sign: super::CALIBRATED_DRIVE_SIGN,
            rate_scale: RATE_SCALE,
            has_hamiltonian: false,
        }
    }

    pub fn matrix(&self) -> &SuperOp {
        &self.matrix
    }

    pub fn coefficients(&self) -> Option<&DissipationCoefficients> {
        self.coeffs.as_ref()
    }

    pub fn drive_sign(&self) -> f64 {
        self.drive_sign
    }

    pub fn rate_scale(&self) -> f64 {
        self.rate_scale
    }

    pub fn has_hamiltonian(&self) -> bool {
        self.has_hamiltonian
    }

    /// Vectorization convention tag.
    pub fn convention(&self) -> &'static str {
        "column-stacking"
    }

    /// `dρ/dτ` for an arbitrary operator.
    pub fn apply(&self, rho: &Op4) -> Op4 {
        unvectorize(&(self.matrix * vectorize(rho)))
    }

    /// `‖L̂·vec(ρ)‖₂`.
    pub fn residual(&self, rho: &DensityMatrix) -> f64 {
        (self.matrix * vectorize(rho.matrix())).norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|Tr(L̂ X)|` over matrix units `X`: zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        (0..16)
            .map(|col| (0..4).map(|r| self.matrix[(5 * r, col)]).sum::<C64>().norm())
            .fold(0.0, f64::max)
    }
}
