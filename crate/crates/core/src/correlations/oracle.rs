//! Brute-force Fourier transform of the regulated Wightman function.
//!
//! Used only to validate [`super::response_closed_form`]. Works in units
//! with `ω₀ = c = 1`: the integrand is `e^{is}·G(s − iε)` over proper time
//! `s`, integrated piecewise with tanh-sinh quadrature and extrapolated to
//! `ε → 0` from three regulator values.

use num_complex::Complex64;
use serde::Serialize;

use super::{response_closed_form, wightman_dimensionless, PhysicalParams};
use crate::error::{Error, Result};

/// Regulators `ε·ω₀` used for the extrapolation.
pub const REGULATORS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

const PANEL_WIDTH: f64 = 0.5;
const PANEL_TOL: f64 = 1e-13;
const TAIL_TOL: f64 = 1e-11;
/// `e^{−ã·S}` at the truncation point.
const TAIL_DECAY: f64 = 36.0;

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub a_tilde: f64,
    pub ell: f64,
    pub same_atom: bool,
    /// Regulated transforms at each of [`REGULATORS`].
    pub regulated: [f64; 3],
    /// Richardson extrapolation to `ε = 0`.
    pub value: f64,
    pub closed_form: f64,
    pub relative_error: f64,
    /// Largest imaginary part seen (should vanish).
    pub max_imaginary: f64,
    pub evaluations: u64,
}

/// Numerically transforms the Wightman function at `+ω₀` and compares it
/// with the closed form. Values are in units of `ω₀`.
pub fn fourier_transform_oracle(p: &PhysicalParams, same_atom: bool) -> Result<OracleReport> {
    let d = p.dimensionless();
    if !(d.a_tilde > 0.0) {
        return Err(Error::OracleFailure(
            "the oracle needs alpha > 0 for an exponentially decaying integrand".into(),
        ));
    }
    transform_dimensionless(d.a_tilde, d.ell, same_atom)
}

pub(crate) fn transform_dimensionless(a_tilde: f64, ell: f64, same_atom: bool) -> Result<OracleReport> {
    let mut regulated = [0.0; 3];
    let mut max_imaginary: f64 = 0.0;
    let mut evaluations = 0;
    for (slot, &eps) in regulated.iter_mut().zip(REGULATORS.iter()) {
        let (value, evals) = regulated_transform(a_tilde, ell, same_atom, eps)?;
        *slot = value.re;
        max_imaginary = max_imaginary.max(value.im.abs());
        evaluations += evals;
    }
    // v(ε) = v₀ + c₁ε + c₂ε² with ε halving each step
    let value = (8.0 * regulated[2] - 6.0 * regulated[1] + regulated[0]) / 3.0;
    let closed_form = response_closed_form(a_tilde, ell, same_atom, 1.0);
    Ok(OracleReport {
        a_tilde,
        ell,
        same_atom,
        regulated,
        value,
        closed_form,
        relative_error: ((value - closed_form) / closed_form).abs(),
        max_imaginary,
        evaluations,
    })
}

fn regulated_transform(a_tilde: f64, ell: f64, same_atom: bool, eps: f64) -> Result<(Complex64, u64)> {
    let half_width = TAIL_DECAY / a_tilde;
    let tail = wightman_dimensionless(half_width, a_tilde, ell, same_atom, eps).norm() * 2.0 / a_tilde;
    if tail > TAIL_TOL || half_width > 1e5 {
        return Err(Error::OracleFailure(format!(
            "truncation at |s| = {half_width:.3e} leaves tail ~{tail:.3e} (a_tilde = {a_tilde})"
        )));
    }

    // light-cone points where the unregulated integrand is singular
    let mut breaks = vec![-half_width, 0.0, half_width];
    if !same_atom {
        let s_lc = 2.0 * (0.5 * a_tilde * ell).asinh() / a_tilde;
        breaks.extend([-s_lc, s_lc]);
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let integrand = |s: f64| Complex64::new(0.0, s).exp() * wightman_dimensionless(s, a_tilde, ell, same_atom, eps);

    let mut total = Complex64::new(0.0, 0.0);
    let mut evaluations = 0u64;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let panels = ((hi - lo) / PANEL_WIDTH).ceil().max(1.0) as usize;
        let h = (hi - lo) / panels as f64;
        for k in 0..panels {
            let a = lo + k as f64 * h;
            let b = if k + 1 == panels { hi } else { a + h };
            let re = quadrature::double_exponential::integrate(|s| integrand(s).re, a, b, PANEL_TOL);
            let im = quadrature::double_exponential::integrate(|s| integrand(s).im, a, b, PANEL_TOL);
            let err = re.error_estimate.max(im.error_estimate);
            if !(err <= 1e3 * PANEL_TOL) || !re.integral.is_finite() || !im.integral.is_finite() {
                return Err(Error::OracleFailure(format!(
                    "panel [{a:.6}, {b:.6}] did not converge: error estimate {err:.3e} (eps = {eps})"
                )));
            }
            total += Complex64::new(re.integral, im.integral);
            evaluations += u64::from(re.num_function_evaluations + im.num_function_evaluations);
        }
    }
    Ok((total, evaluations))
}
