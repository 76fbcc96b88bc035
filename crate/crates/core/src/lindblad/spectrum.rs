use num_complex::Complex64;

use super::liouvillian::Liouvillian;
use crate::error::{Error, Result};

/// Eigenvalues with modulus below this count as zero modes.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending by real part (ties by imaginary part), so zero modes come last.
    pub eigenvalues: Vec<Complex64>,
    /// `−max{Re λ : |λ| > ZERO_EIGENVALUE_TOL}`; `None` when every eigenvalue is zero.
    pub gap: Option<f64>,
}

impl Spectrum {
    pub fn zero_modes(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|z| z.norm() < ZERO_EIGENVALUE_TOL)
            .count()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_real(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Full eigenvalue set of the 16×16 generator.
pub fn spectrum(l: &Liouvillian) -> Result<Spectrum> {
    let m = l.matrix();
    let dense = faer::Mat::<Complex64>::from_fn(16, 16, |i, j| m[(i, j)]);
    let mut eigenvalues = dense.eigenvalues().map_err(|e| {
        Error::Numerical(format!(
            "eigensolver did not converge ({e:?}) for the Liouvillian:\n{m}"
        ))
    })?;
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let gap = eigenvalues
        .iter()
        .filter(|z| z.norm() > ZERO_EIGENVALUE_TOL)
        .map(|z| z.re)
        .fold(None, |acc: Option<f64>, re| Some(acc.map_or(re, |m| m.max(re))))
        .map(|re| -re);
    Ok(Spectrum { eigenvalues, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::DissipationCoefficients;

    fn spec(f: f64) -> Spectrum {
        let l = Liouvillian::from_coefficients(DissipationCoefficients::with_cooperativity(4.0, 1.0, f)).unwrap();
        spectrum(&l).unwrap()
    }

    #[test]
    fn degenerate_zero_modes_at_full_cooperativity() {
        let s = spec(1.0);
        assert_eq!(s.zero_modes(), 2);
        assert!(s.eigenvalues[14].norm() < 1e-10 && s.eigenvalues[15].norm() < 1e-10);
        assert!(s.max_real() <= 1e-10);
        assert!(s.max_imag_abs() <= 1e-10);
    }

    #[test]
    fn single_zero_mode_below_full_cooperativity() {
        let s = spec(0.8);
        assert_eq!(s.zero_modes(), 1);
        assert!(s.eigenvalues[..15].iter().all(|z| z.re < -1e-3));
        assert!(s.max_imag_abs() <= 1e-10);
    }

    #[test]
    fn bloch_rates_embed() {
        let s = spec(1.0);
        for want in [-8.0 + 15f64.sqrt(), -8.0 - 15f64.sqrt()] {
            assert!(s.eigenvalues.iter().any(|z| (z.re - want).abs() < 1e-9));
        }
    }

    #[test]
    fn gap_closes_with_cooperativity() {
        let gaps: Vec<f64> = [0.9, 0.99, 0.999].iter().map(|&f| spec(f).gap.unwrap()).collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
        assert!(gaps[2] > 0.0);
    }

    #[test]
    fn zero_generator_has_no_gap() {
        let s = spectrum(&Liouvillian::zero()).unwrap();
        assert_eq!(s.zero_modes(), 16);
        assert_eq!(s.gap, None);
    }
}
