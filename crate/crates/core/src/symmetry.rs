//! Exchange symmetry of the generator and its consequences.
//!
//! `D = σx⊗σx + σy⊗σy + σz⊗σz` separates the singlet (eigenvalue −3) from
//! the triplet (+1). The superoperator `D̂ = D⊗I − I⊗Dᵀ` generates the
//! unitary family `Û(κ) = exp(−iκD̂)`; at full cooperativity
//! `Û(κ)L̂Û†(κ) = L̂` for every real κ. Because `D` is real symmetric, `D̂`
//! is minus the column-stacked commutator `[D, ·]`, so the invariance is
//! the same statement in either vectorization.

use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::algebra::{DensityMatrix, Op4, TwoSpinOperator, C64};
use crate::correlations::{critical_acceleration, PhysicalParams};
use crate::error::{Error, Result};
use crate::lindblad::{kron4, steady_states, Liouvillian, Phase, SuperOp, Trajectory};

/// Default residual for accepting a pure state as dark.
pub const DARK_STATE_TOL: f64 = 1e-10;

/// Conjugation angles used when none are given.
pub const DEFAULT_KAPPAS: [f64; 4] = [0.1, 1.0, std::f64::consts::PI, 10.0];

#[derive(Debug, Clone)]
pub struct SymmetryOperator {
    pub d: Op4,
    pub d_hat: SuperOp,
    eigen: SymmetricEigen<C64, nalgebra::Const<16>>,
}

impl Default for SymmetryOperator {
    fn default() -> Self {
        Self::new()
    }
}

impl SymmetryOperator {
    pub fn new() -> Self {
        let d = TwoSpinOperator::exchange().matrix;
        let id = Op4::identity();
        let d_hat = kron4(&d, &id) - kron4(&id, &d.transpose());
        let eigen = SymmetricEigen::new(d_hat);
        Self { d, d_hat, eigen }
    }

    /// `exp(−iκD̂)` from the eigendecomposition of the Hermitian `D̂`.
    pub fn unitary(&self, kappa: f64) -> SuperOp {
        let v = &self.eigen.eigenvectors;
        let phases = self
            .eigen
            .eigenvalues
            .map(|lambda| C64::from_polar(1.0, -lambda * kappa));
        v * SuperOp::from_diagonal(&phases) * v.adjoint()
    }
}

fn super_max_abs(m: &SuperOp) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryResidual {
    /// `max_κ ‖Û(κ)L̂Û†(κ) − L̂‖_max`.
    pub conjugation: f64,
    /// `‖D̂L̂ − L̂D̂‖_max`.
    pub commutator: f64,
    /// `‖L̂‖_max`, for relative comparisons.
    pub generator_scale: f64,
}

impl SymmetryResidual {
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.commutator <= tol
    }
}

pub fn symmetry_residual(l: &Liouvillian, kappas: &[f64]) -> SymmetryResidual {
    let op = SymmetryOperator::new();
    let m = l.matrix();
    let conjugation = kappas
        .iter()
        .map(|&k| {
            let u = op.unitary(k);
            super_max_abs(&(u * m * u.adjoint() - m))
        })
        .fold(0.0, f64::max);
    let commutator = super_max_abs(&(op.d_hat * m - m * op.d_hat));
    SymmetryResidual {
        conjugation,
        commutator,
        generator_scale: l.max_abs(),
    }
}

/// Drift of `Q = M_xx + M_yy + M_zz` along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservedDrift {
    pub initial: f64,
    pub max_drift: f64,
}

pub fn conserved_quantity(traj: &Trajectory<DensityMatrix>) -> ConservedDrift {
    let q: Vec<f64> = traj
        .states
        .iter()
        .map(|rho| rho.observables().exchange_correlation())
        .collect();
    let initial = q.first().copied().unwrap_or(0.0);
    let max_drift = q.iter().map(|v| (v - initial).abs()).fold(0.0, f64::max);
    ConservedDrift { initial, max_drift }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DarkState {
    pub rho: DensityMatrix,
    pub purity: f64,
    /// `‖L̂·vec(ρ)‖₂`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DarkStateSearch {
    pub states: Vec<DarkState>,
    pub kernel_dimension: usize,
    /// Every state is stationary (zero generator); `states` is then only a
    /// spanning sample.
    pub degenerate_kernel: bool,
}

/// Pure states inside the numerically computed kernel.
///
/// Candidates are the eigenvectors of each kernel basis element and of one
/// generic combination of them; a candidate projector is kept when the
/// generator annihilates it to within `tol`.
pub fn dark_states(l: &Liouvillian, tol: f64) -> Result<DarkStateSearch> {
    let kernel = steady_states(l)?;
    let mut mats = kernel.basis.clone();
    let generic = kernel
        .basis
        .iter()
        .enumerate()
        .fold(Op4::zeros(), |acc, (i, b)| acc + b.scale(1.0 + 0.618_034 * i as f64));
    mats.push(generic);

    let mut found: Vec<(nalgebra::Vector4<C64>, DarkState)> = Vec::new();
    for m in mats {
        let h = (m + m.adjoint()).scale(0.5);
        let eig = SymmetricEigen::new(h);
        for k in 0..4 {
            let v = eig.eigenvectors.column(k).into_owned();
            if found.iter().any(|(w, _)| w.dotc(&v).norm_sqr() > 1.0 - 1e-8) {
                continue;
            }
            let rho = DensityMatrix::pure(&v)?;
            let residual = l.residual(&rho);
            if residual < tol {
                let purity = rho.purity();
                found.push((v, DarkState { rho, purity, residual }));
            }
        }
    }
    Ok(DarkStateSearch {
        states: found.into_iter().map(|(_, s)| s).collect(),
        kernel_dimension: kernel.degeneracy,
        degenerate_kernel: kernel.degeneracy == 16,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseClassification {
    pub phase: Phase,
    pub f: f64,
    /// `None` when no localized window exists for this separation.
    pub alpha_c: Option<f64>,
    pub epsilon_loc: f64,
    /// `ε_loc − (1 − f)`: positive inside the localized phase.
    #[serde(skip)]
    pub distance_to_threshold: f64,
}

/// Localized iff `1 − f(α) < ε_loc`; the boundary itself is thermal.
pub fn classify_phase(p: &PhysicalParams, epsilon_loc: f64) -> Result<PhaseClassification> {
    if !(epsilon_loc > 0.0 && epsilon_loc < 1.0) {
        return Err(Error::InvalidParams(format!(
            "epsilon_loc must lie in (0, 1), got {epsilon_loc}"
        )));
    }
    let f = p.dimensionless().f();
    let deficit = 1.0 - f;
    let phase = if deficit < epsilon_loc {
        Phase::Localized
    } else {
        Phase::Thermal
    };
    let alpha_c = match critical_acceleration(p, epsilon_loc) {
        Ok(a) => Some(a),
        Err(Error::NoLocalizedPhase { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(PhaseClassification {
        phase,
        f,
        alpha_c,
        epsilon_loc,
        distance_to_threshold: epsilon_loc - deficit,
    })
}
