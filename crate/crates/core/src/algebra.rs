//! Operator algebra on the two-qubit Hilbert space.
//!
//! Basis order is `|00⟩, |01⟩, |10⟩, |11⟩` everywhere in the crate, with
//! qubit 1 the left tensor factor. `σ_z|0⟩ = +|0⟩`.

use std::fmt;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;
/// A 4×4 complex operator on the two-spin space.
pub type Op4 = Matrix4<C64>;

/// Max-abs distance from the conjugate transpose accepted for a density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Accepted deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalue floor for positivity.
pub const POSITIVITY_TOL: f64 = -1e-10;

/// Eigenvalues of `ρ` below this are treated as exact zeros when forming `√ρ`.
const SQRT_FLOOR: f64 = 1e-14;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// Atom index (1 or 2), i.e. which tensor factor a single-spin operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    First,
    Second,
}

impl Atom {
    pub const BOTH: [Atom; 2] = [Atom::First, Atom::Second];

    pub fn index(self) -> usize {
        match self {
            Atom::First => 0,
            Atom::Second => 1,
        }
    }
}

pub fn pauli(axis: Axis) -> Matrix2<C64> {
    match axis {
        Axis::X => Matrix2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => Matrix2::new(ZERO, -I, I, ZERO),
        Axis::Z => Matrix2::new(ONE, ZERO, ZERO, -ONE),
    }
}

pub fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Op4 {
    Op4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// `σ_a^j`: a Pauli matrix embedded on one atom.
pub fn sigma(atom: Atom, axis: Axis) -> Op4 {
    let id = Matrix2::identity();
    match atom {
        Atom::First => kron2(&pauli(axis), &id),
        Atom::Second => kron2(&id, &pauli(axis)),
    }
}

/// A labelled operator on the two-spin space.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSpinOperator {
    pub matrix: Op4,
    pub label: String,
}

impl TwoSpinOperator {
    pub fn single(atom: Atom, axis: Axis) -> Self {
        Self {
            matrix: sigma(atom, axis),
            label: format!("sigma_{}^{}", atom.index() + 1, axis.symbol()),
        }
    }

    /// `σ_i ⊗ σ_j`.
    pub fn product(left: Axis, right: Axis) -> Self {
        Self {
            matrix: kron2(&pauli(left), &pauli(right)),
            label: format!("sigma_{}(x)sigma_{}", left.symbol(), right.symbol()),
        }
    }

    /// `D = σx⊗σx + σy⊗σy + σz⊗σz`.
    pub fn exchange() -> Self {
        let matrix = Axis::ALL
            .iter()
            .map(|&a| kron2(&pauli(a), &pauli(a)))
            .fold(Op4::zeros(), |acc, m| acc + m);
        Self {
            matrix,
            label: "D".to_string(),
        }
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> C64 {
        (self.matrix * rho.0).trace()
    }
}

pub fn dagger(m: &Op4) -> Op4 {
    m.adjoint()
}

pub fn max_abs(m: &Op4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_defect(m: &Op4) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn hermitian_eigenvalues(m: &Op4) -> Vector4<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    SymmetricEigen::new(h).eigenvalues
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Op4);

impl DensityMatrix {
    pub fn new(m: Op4) -> Result<Self> {
        Self::with_tolerances(m, HERMITIAN_TOL, TRACE_TOL)
    }

    /// Validation with explicit Hermiticity and trace tolerances; the
    /// positivity floor is always [`POSITIVITY_TOL`].
    pub fn with_tolerances(m: Op4, hermitian_tol: f64, trace_tol: f64) -> Result<Self> {
        let herm = hermitian_defect(&m);
        if herm > hermitian_tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > trace_tol {
            return Err(Error::InvalidState(format!(
                "trace {:.15} + {:.3e}i differs from 1",
                tr.re, tr.im
            )));
        }
        let min = hermitian_eigenvalues(&m).min();
        if min < POSITIVITY_TOL {
            return Err(Error::UnphysicalState { min_eigenvalue: min });
        }
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &Vector4<C64>) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = psi.unscale(n);
        Self::new(v * v.adjoint())
    }

    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure(&Vector4::new(ZERO, C64::from(s), C64::from(-s), ZERO)).unwrap()
    }

    pub fn triplet0() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure(&Vector4::new(ZERO, C64::from(s), C64::from(s), ZERO)).unwrap()
    }

    /// Computational basis state `|b1 b2⟩`.
    pub fn product(first_excited: bool, second_excited: bool) -> Self {
        let idx = 2 * usize::from(first_excited) + usize::from(second_excited);
        let mut psi = Vector4::zeros();
        psi[idx] = ONE;
        Self::pure(&psi).unwrap()
    }

    pub fn maximally_mixed() -> Self {
        Self(Op4::identity().scale(0.25))
    }

    /// Random state `GG†/Tr(GG†)` with `G` entries uniform on the unit square.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let g = Op4::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let m = g * g.adjoint();
        let m = m.unscale(m.trace().re);
        // exact Hermitian part; the product above is Hermitian only to round-off
        Self((m + m.adjoint()).scale(0.5))
    }

    pub fn matrix(&self) -> &Op4 {
        &self.0
    }

    pub fn into_matrix(self) -> Op4 {
        self.0
    }

    pub fn eigenvalues(&self) -> Vector4<f64> {
        hermitian_eigenvalues(&self.0)
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Op4) -> Result<Self> {
        Self::new(u * self.0 * u.adjoint())
    }

    pub fn observables(&self) -> Observables {
        Observables::of(self)
    }

    pub fn bloch(&self) -> BlochState {
        self.observables().bloch()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `−Tr ρ ln ρ`, natural log, `0 ln 0 = 0`.
    pub fn von_neumann_entropy(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.ln())
            .sum()
    }

    /// Wootters concurrence.
    ///
    /// The decreasing λ_k are the singular values of `√ρ · √ρ̃` with
    /// `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`, which equal the square roots of the
    /// eigenvalues of `ρ ρ̃` but are computed to absolute precision.
    pub fn concurrence(&self) -> f64 {
        let sqrt_rho = psd_sqrt(&self.0);
        let yy = kron2(&pauli(Axis::Y), &pauli(Axis::Y));
        let sqrt_tilde = yy * sqrt_rho.map(|z| z.conj()) * yy;
        let mut lambdas: Vec<f64> = (sqrt_rho * sqrt_tilde)
            .singular_values()
            .iter()
            .copied()
            .collect();
        lambdas.sort_by(|a, b| b.total_cmp(a));
        (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0)
    }
}

fn psd_sqrt(m: &Op4) -> Op4 {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(h);
    let roots = eig
        .eigenvalues
        .map(|p| if p > SQRT_FLOOR { p.sqrt() } else { 0.0 });
    let v = eig.eigenvectors;
    v * Op4::from_diagonal(&roots.map(C64::from)) * v.adjoint()
}

impl fmt::Display for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..4 {
            for c in 0..4 {
                let z = self.0[(r, c)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..4)
            .map(|r| (0..4).map(|c| [self.0[(r, c)].re, self.0[(r, c)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(D::Error::custom("density matrix must be 4 rows of 4 [re, im] pairs"));
        }
        let m = Op4::from_fn(|r, c| C64::new(rows[r][c][0], rows[r][c][1]));
        DensityMatrix::new(m).map_err(D::Error::custom)
    }
}

/// The nine symmetric observables plus `M_c = M_xx + M_yy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub mx: f64,
    pub my: f64,
    pub mz: f64,
    pub mxx: f64,
    pub myy: f64,
    pub mzz: f64,
    pub mxy: f64,
    pub myz: f64,
    pub mzx: f64,
    pub mc: f64,
}

impl Observables {
    pub fn of(rho: &DensityMatrix) -> Self {
        Self::of_matrix(rho.matrix())
    }

    /// Validates `m` as a density matrix first.
    pub fn from_matrix(m: &Op4) -> Result<Self> {
        DensityMatrix::new(*m).map(|rho| Self::of(&rho))
    }

    /// Evaluates the trace formulas on an arbitrary operator (linear in `m`).
    pub(crate) fn of_matrix(m: &Op4) -> Self {
        let tr = |op: Op4| (op * m).trace().re;
        let local = |a: Axis| 0.5 * tr(sigma(Atom::First, a) + sigma(Atom::Second, a));
        let pp = |a: Axis, b: Axis| kron2(&pauli(a), &pauli(b));
        let corr = |a: Axis| 0.25 * tr(pp(a, a));
        let cross = |a: Axis, b: Axis| 0.25 * tr(pp(a, b) + pp(b, a));
        let mxx = corr(Axis::X);
        let myy = corr(Axis::Y);
        Self {
            mx: local(Axis::X),
            my: local(Axis::Y),
            mz: local(Axis::Z),
            mxx,
            myy,
            mzz: corr(Axis::Z),
            mxy: cross(Axis::X, Axis::Y),
            myz: cross(Axis::Y, Axis::Z),
            mzx: cross(Axis::Z, Axis::X),
            mc: mxx + myy,
        }
    }

    pub fn bloch(&self) -> BlochState {
        BlochState::new(self.mz, self.mzz, self.mc)
    }

    /// `M_xx + M_yy + M_zz`.
    pub fn exchange_correlation(&self) -> f64 {
        self.mxx + self.myy + self.mzz
    }
}

/// The reduced observable triple `(M_z, M_zz, M_c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    #[serde(rename = "Mz")]
    pub mz: f64,
    #[serde(rename = "Mzz")]
    pub mzz: f64,
    #[serde(rename = "Mc")]
    pub mc: f64,
}

impl BlochState {
    pub const fn new(mz: f64, mzz: f64, mc: f64) -> Self {
        Self { mz, mzz, mc }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.mz, self.mzz, self.mc]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    /// Conserved under the symmetric dynamics: `M_c + M_zz`.
    pub fn exchange_correlation(&self) -> f64 {
        self.mc + self.mzz
    }

    pub fn max_abs_diff(&self, other: &BlochState) -> f64 {
        (self.mz - other.mz)
            .abs()
            .max((self.mzz - other.mzz).abs())
            .max((self.mc - other.mc).abs())
    }

    /// The eigenvalues of the reconstructed symmetric-sector matrix:
    /// `¼(1+4M_zz) ± ½M_z` on `|00⟩,|11⟩` and `¼(1−4M_zz) ± M_c` on the
    /// `|01⟩,|10⟩` block.
    pub fn sector_eigenvalues(&self) -> [f64; 4] {
        let p = 0.25 * (1.0 + 4.0 * self.mzz);
        let q = 0.25 * (1.0 - 4.0 * self.mzz);
        [
            p + 0.5 * self.mz,
            p - 0.5 * self.mz,
            q + self.mc,
            q - self.mc,
        ]
    }

    pub fn is_physical(&self) -> bool {
        self.sector_eigenvalues()
            .iter()
            .all(|&e| e >= POSITIVITY_TOL)
    }

    /// Uniform sample from the physical region of the symmetric sector.
    pub fn sample_physical<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let b = Self::new(
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-0.25..=0.25),
                rng.gen_range(-0.5..=0.5),
            );
            if b.sector_eigenvalues().iter().all(|&e| e >= 0.0) {
                return b;
            }
        }
    }

    /// Inverse of [`Observables::bloch`] on the symmetric sector, assuming
    /// `M_xx = M_yy` and every other observable zero.
    pub fn reconstruct_symmetric(&self) -> Result<DensityMatrix> {
        let min = self
            .sector_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min < POSITIVITY_TOL {
            return Err(Error::UnphysicalState { min_eigenvalue: min });
        }
        DensityMatrix::new(self.symmetric_matrix())
    }

    pub(crate) fn symmetric_matrix(&self) -> Op4 {
        let z1 = sigma(Atom::First, Axis::Z) + sigma(Atom::Second, Axis::Z);
        let zz = kron2(&pauli(Axis::Z), &pauli(Axis::Z));
        let flip = kron2(&pauli(Axis::X), &pauli(Axis::X)) + kron2(&pauli(Axis::Y), &pauli(Axis::Y));
        (Op4::identity()
            + z1.scale(self.mz)
            + zz.scale(4.0 * self.mzz)
            + flip.scale(2.0 * self.mc))
        .scale(0.25)
    }

    /// `max{0, 4|M_c| − √((1+4M_zz)² − 4M_z²)}`, evaluated as printed.
    ///
    /// Not clamped to `[0, 1]`; on the singlet this gives 2 where the
    /// Wootters value is 1.
    pub fn concurrence_closed_form(&self) -> Result<f64> {
        let radicand = (1.0 + 4.0 * self.mzz).powi(2) - 4.0 * self.mz * self.mz;
        if radicand < 0.0 {
            return Err(Error::Domain(format!(
                "negative radicand {radicand:.3e} in closed-form concurrence"
            )));
        }
        Ok((4.0 * self.mc.abs() - radicand.sqrt()).max(0.0))
    }
}
