use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::liouvillian::{unvectorize, Liouvillian};
use crate::algebra::{BlochState, DensityMatrix, Op4, C64};
use crate::error::{Error, Result};

/// Relative singular-value threshold for the kernel of the generator.
pub const DEFAULT_NULL_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Localized,
    Thermal,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Localized => "localized",
            Phase::Thermal => "thermal",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "localized" => Ok(Phase::Localized),
            "thermal" => Ok(Phase::Thermal),
            other => Err(Error::Config(format!("unknown phase '{other}'"))),
        }
    }
}

/// Kernel of the generator as a Hermitian basis.
#[derive(Debug, Clone)]
pub struct SteadyStates {
    /// The first element has unit trace; any others are traceless and
    /// Frobenius-normalized.
    pub basis: Vec<Op4>,
    pub degeneracy: usize,
    /// All singular values of the generator, descending.
    pub singular_values: Vec<f64>,
}

impl SteadyStates {
    /// The steady state, when it is unique and physical.
    pub fn unique(&self) -> Option<DensityMatrix> {
        if self.degeneracy != 1 {
            return None;
        }
        DensityMatrix::new(self.basis[0]).ok()
    }
}

pub fn steady_states(l: &Liouvillian) -> Result<SteadyStates> {
    steady_states_with_threshold(l, DEFAULT_NULL_THRESHOLD)
}

/// Null space by singular-value thresholding: `σ ≤ threshold·σ_max`.
pub fn steady_states_with_threshold(l: &Liouvillian, threshold: f64) -> Result<SteadyStates> {
    let svd = l.matrix().svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Numerical("SVD did not return right singular vectors".into()))?;
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let cut = threshold * sigma_max;

    let mut kernel: Vec<Op4> = Vec::new();
    for (i, &s) in sigma.iter().enumerate() {
        if s <= cut {
            let v = v_t.row(i).adjoint();
            kernel.push(unvectorize(&v));
        }
    }
    let mut singular_values = sigma;
    singular_values.sort_by(|a, b| b.total_cmp(a));
    if kernel.is_empty() {
        return Err(Error::NoSteadyState {
            smallest: *singular_values.last().unwrap_or(&0.0),
        });
    }
    let degeneracy = kernel.len();

    // the kernel is closed under †, so it has a Hermitian basis of the same size
    let half = C64::new(0.5, 0.0);
    let candidates = kernel.iter().flat_map(|x| {
        let xd = x.adjoint();
        [(x + xd) * half, (x - xd) * C64::new(0.0, -0.5)]
    });
    let mut herm: Vec<Op4> = Vec::with_capacity(degeneracy);
    for mut c in candidates {
        for b in &herm {
            let overlap = inner(b, &c);
            c -= b.scale(overlap);
        }
        let n = inner(&c, &c).sqrt();
        if n > 1e-8 {
            herm.push(c.unscale(n));
        }
        if herm.len() == degeneracy {
            break;
        }
    }
    if herm.len() != degeneracy {
        return Err(Error::Numerical(format!(
            "kernel of dimension {degeneracy} yielded only {} Hermitian directions",
            herm.len()
        )));
    }

    Ok(SteadyStates {
        basis: trace_adapted(herm),
        degeneracy,
        singular_values,
    })
}

/// Real Frobenius inner product.
fn inner(a: &Op4, b: &Op4) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// Rotates an orthonormal Hermitian basis so only the first element carries
/// trace, then scales that element to unit trace.
fn trace_adapted(basis: Vec<Op4>) -> Vec<Op4> {
    let traces: Vec<f64> = basis.iter().map(|b| b.trace().re).collect();
    let norm = traces.iter().map(|t| t * t).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return basis;
    }
    let d = basis.len();
    // orthonormal frame of R^d whose first vector is along the traces
    let mut frame: Vec<Vec<f64>> = vec![traces.iter().map(|t| t / norm).collect()];
    for e in 0..d {
        let mut v: Vec<f64> = (0..d).map(|i| if i == e { 1.0 } else { 0.0 }).collect();
        for u in &frame {
            let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= dot * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-8 && frame.len() < d {
            frame.push(v.iter().map(|x| x / n).collect());
        }
    }
    frame
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let m = basis
                .iter()
                .zip(w)
                .fold(Op4::zeros(), |acc, (b, &c)| acc + b.scale(c));
            if k == 0 {
                m.unscale(m.trace().re)
            } else {
                m
            }
        })
        .collect()
}

/// Closed-form steady observables.
///
/// Localized phase (full cooperativity): the exchange correlation
/// `Q = M_c(0) + M_zz(0)` is conserved and
/// `M_z = M₀(3+4Q)/(3+M₀²)`, `M_c = −(M₀²−4Q)/(2(3+M₀²))`, `M_zz = Q − M_c`.
/// Thermal phase: `(M₀, M₀²/4, 0)`; the initial data is ignored.
pub fn steady_closed_form(phase: Phase, m0: f64, mc0: f64, mzz0: f64) -> BlochState {
    match phase {
        Phase::Localized => {
            let q = mc0 + mzz0;
            let denom = 3.0 + m0 * m0;
            let mz = m0 * (3.0 + 4.0 * q) / denom;
            let mc = -(m0 * m0 - 4.0 * q) / (2.0 * denom);
            BlochState::new(mz, q - mc, mc)
        }
        Phase::Thermal => BlochState::new(m0, m0 * m0 / 4.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::max_abs;
    use crate::correlations::DissipationCoefficients;
    use approx::assert_abs_diff_eq;

    fn generator(f: f64) -> Liouvillian {
        Liouvillian::from_coefficients(DissipationCoefficients::with_cooperativity(4.0, 1.0, f)).unwrap()
    }

    #[test]
    fn degeneracy_by_cooperativity() {
        assert_eq!(steady_states(&generator(1.0)).unwrap().degeneracy, 2);
        for f in [0.999, 0.99, 0.9, 0.8, 0.5, 0.1, 0.0] {
            assert_eq!(steady_states(&generator(f)).unwrap().degeneracy, 1, "f = {f}");
        }
        assert_eq!(steady_states(&Liouvillian::zero()).unwrap().degeneracy, 16);
    }

    #[test]
    fn unique_state_is_thermal() {
        let s = steady_states(&generator(0.8)).unwrap();
        let rho = s.unique().unwrap();
        let want = steady_closed_form(Phase::Thermal, 0.25, 0.0, 0.0);
        assert!(rho.bloch().max_abs_diff(&want) < 1e-12);
        let expected = want.reconstruct_symmetric().unwrap();
        assert!(max_abs(&(rho.matrix() - expected.matrix())) < 1e-12);
    }

    #[test]
    fn degenerate_basis_is_hermitian_and_annihilated() {
        let l = generator(1.0);
        let s = steady_states(&l).unwrap();
        assert_abs_diff_eq!(s.basis[0].trace().re, 1.0, epsilon = 1e-12);
        assert!(s.basis[1].trace().norm() < 1e-12);
        for b in &s.basis {
            assert!(max_abs(&(b - b.adjoint())) < 1e-12);
            assert!(max_abs(&l.apply(b)) < 1e-12);
        }
        assert!(s.unique().is_none());
    }

    #[test]
    fn closed_form_values() {
        let singlet = steady_closed_form(Phase::Localized, 0.9, -0.5, -0.25);
        assert_abs_diff_eq!(singlet.mz, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(singlet.mzz, -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(singlet.mc, -0.5, epsilon = 1e-15);

        let m0 = std::f64::consts::PI.tanh();
        let t = steady_closed_form(Phase::Thermal, m0, 0.3, 0.1);
        assert_abs_diff_eq!(t.mz, 0.99627, epsilon = 5e-6);
        assert_abs_diff_eq!(t.mzz, 0.24814, epsilon = 5e-6);
        assert_eq!(t.mc, 0.0);

        let zero_q = steady_closed_form(Phase::Localized, 1.0, 0.1, -0.1);
        assert_abs_diff_eq!(zero_q.mz, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(zero_q.mc, -0.125, epsilon = 1e-15);
    }

    #[test]
    fn phase_names() {
        assert_eq!("thermal".parse::<Phase>().unwrap(), Phase::Thermal);
        assert_eq!(Phase::Localized.to_string(), "localized");
        assert!("frozen".parse::<Phase>().is_err());
    }
}
