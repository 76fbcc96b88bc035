//! Vacuum correlations along two uniformly accelerated worldlines.
//!
//! All core math is dimensionless: accelerations in units of `c·ω₀`,
//! separations in units of `c/ω₀`, rates in units of `Γ₀ = λ²ω₀/8π` and
//! proper time in units of `1/Γ₀`. SI quantities only appear at the edges
//! ([`PhysicalParams`] and [`critical_acceleration`]).

mod oracle;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use oracle::{fourier_transform_oracle, OracleReport, REGULATORS};

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Default operational threshold on `1 − f` for the localized phase.
pub const DEFAULT_EPSILON_LOC: f64 = 0.01;

/// SI description of the detector pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Proper acceleration (m/s²).
    pub alpha: f64,
    /// Proper separation `L` (m).
    pub separation: f64,
    /// Zeeman angular frequency `ω₀` (rad/s).
    pub omega0: f64,
    /// Dimensionless coupling constant `λ`.
    pub coupling: f64,
}

impl PhysicalParams {
    pub fn new(alpha: f64, separation: f64, omega0: f64, coupling: f64) -> Result<Self> {
        let p = Self {
            alpha,
            separation,
            omega0,
            coupling,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParams(format!("alpha must be >= 0, got {}", self.alpha)));
        }
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return Err(Error::InvalidParams(format!("L must be > 0, got {}", self.separation)));
        }
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(Error::InvalidParams(format!("omega0 must be > 0, got {}", self.omega0)));
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return Err(Error::InvalidParams(format!("coupling must be > 0, got {}", self.coupling)));
        }
        Ok(())
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }

    pub fn dimensionless(&self) -> DimensionlessParams {
        DimensionlessParams::new(
            self.alpha / (SPEED_OF_LIGHT * self.omega0),
            self.omega0 * self.separation / SPEED_OF_LIGHT,
        )
    }

    /// `Γ₀ = λ²ω₀/8π` in s⁻¹.
    pub fn gamma0(&self) -> f64 {
        self.coupling * self.coupling * self.omega0 / (8.0 * PI)
    }

    /// Acceleration (m/s²) corresponding to a dimensionless `ã`.
    pub fn alpha_from_tilde(&self, a_tilde: f64) -> f64 {
        a_tilde * SPEED_OF_LIGHT * self.omega0
    }
}

/// `ã = α/(cω₀)`, `ℓ = ω₀L/c`, `M₀ = tanh(π/ã)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub a_tilde: f64,
    pub ell: f64,
    pub m0: f64,
}

impl DimensionlessParams {
    pub fn new(a_tilde: f64, ell: f64) -> Self {
        Self {
            a_tilde,
            ell,
            m0: thermal_magnetization(a_tilde),
        }
    }

    pub fn f(&self) -> f64 {
        f_factor(self.a_tilde, self.ell)
    }
}

/// `tanh(π/ã)`, with the limits 1 at `ã = 0` and 0 at `ã = ∞`.
pub fn thermal_magnetization(a_tilde: f64) -> f64 {
    if a_tilde <= 0.0 {
        1.0
    } else {
        (PI / a_tilde).tanh()
    }
}

/// Cooperativity factor for distinct atoms,
/// `sin((2/ã)·asinh(ãℓ/2)) / (ℓ·√(1 + ã²ℓ²/4))`.
///
/// Continuous at `ã = 0` (gives `sin ℓ / ℓ`) and at `ℓ = 0` (gives 1).
pub fn f_factor(a_tilde: f64, ell: f64) -> f64 {
    if ell == 0.0 {
        return 1.0;
    }
    let x = 0.5 * a_tilde * ell;
    let phase = if a_tilde < 1e-8 {
        // (2/ã)·asinh(ãℓ/2) = ℓ(1 − x²/6 + …)
        ell * (1.0 - x * x / 6.0)
    } else {
        2.0 * x.asinh() / a_tilde
    };
    phase.sin() / (ell * (1.0 + x * x).sqrt())
}

/// Which system of units the rates in [`DissipationCoefficients`] are in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateUnits {
    /// Multiples of `Γ₀`.
    Gamma0,
    /// s⁻¹.
    PerSecond,
}

/// `A^{ab}`, `B^{ab}` for the two-atom dissipator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipationCoefficients {
    pub a11: f64,
    pub b11: f64,
    pub a12: f64,
    pub b12: f64,
    /// Set when evaluated at `α = 0`, where `coth(πω₀/α)` is replaced by its limit 1.
    #[serde(default)]
    pub zero_temperature: bool,
}

impl DissipationCoefficients {
    pub fn new(a11: f64, b11: f64, a12: f64, b12: f64) -> Self {
        Self {
            a11,
            b11,
            a12,
            b12,
            zero_temperature: false,
        }
    }

    /// Cross-atom coefficients `A¹² = f·A¹¹`, `B¹² = f·B¹¹`.
    pub fn with_cooperativity(a11: f64, b11: f64, f: f64) -> Self {
        Self::new(a11, b11, f * a11, f * b11)
    }

    pub fn from_params(p: &PhysicalParams, units: RateUnits) -> Self {
        let d = p.dimensionless();
        let base = match units {
            RateUnits::Gamma0 => 1.0,
            RateUnits::PerSecond => p.gamma0(),
        };
        Self::from_dimensionless(&d, base)
    }

    pub fn from_dimensionless(d: &DimensionlessParams, base: f64) -> Self {
        let f = d.f();
        let (coth, zero_temperature) = if d.a_tilde <= 0.0 {
            (1.0, true)
        } else {
            (1.0 / (PI / d.a_tilde).tanh(), false)
        };
        Self {
            a11: base * coth,
            b11: base,
            a12: base * f * coth,
            b12: base * f,
            zero_temperature,
        }
    }

    /// `B¹²/B¹¹` (the cooperativity factor these coefficients encode).
    pub fn cooperativity(&self) -> f64 {
        if self.b11 != 0.0 {
            self.b12 / self.b11
        } else if self.a11 != 0.0 {
            self.a12 / self.a11
        } else {
            0.0
        }
    }

    /// `B¹¹/A¹¹`, equal to `tanh(π/ã)` for vacuum-derived coefficients.
    pub fn m0(&self) -> f64 {
        if self.a11 == 0.0 {
            0.0
        } else {
            self.b11 / self.a11
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            a11: k * self.a11,
            b11: k * self.b11,
            a12: k * self.a12,
            b12: k * self.b12,
            zero_temperature: self.zero_temperature,
        }
    }

    /// Same diagonal coefficients with the cross terms replaced by cooperativity `f`.
    pub fn with_f(&self, f: f64) -> Self {
        Self {
            a12: f * self.a11,
            b12: f * self.b11,
            ..*self
        }
    }
}

/// Positive-frequency Wightman function in SI form (m⁻²),
/// `−1/(4π²[(4c⁴/α²)sinh²(α(Δτ−iε)/2c) − L²])`; the `L²` term is dropped for
/// the same atom. `α = 0` uses the inertial limit `c²(Δτ−iε)²`.
pub fn wightman(
    dtau: f64,
    p: &PhysicalParams,
    same_atom: bool,
    epsilon: f64,
) -> Result<Complex64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParams(format!("regulator must be > 0, got {epsilon}")));
    }
    let c = SPEED_OF_LIGHT;
    let z = Complex64::new(dtau, -epsilon);
    let temporal = if p.alpha == 0.0 {
        z * z * (c * c)
    } else {
        let s = (z * (p.alpha / (2.0 * c))).sinh();
        s * s * (4.0 * c.powi(4) / (p.alpha * p.alpha))
    };
    let spatial = if same_atom { 0.0 } else { p.separation * p.separation };
    Ok(-1.0 / ((temporal - spatial) * (4.0 * PI * PI)))
}

/// The Wightman function with time in units of `1/ω₀` and lengths in units
/// of `c/ω₀`.
pub fn wightman_dimensionless(
    s: f64,
    a_tilde: f64,
    ell: f64,
    same_atom: bool,
    epsilon: f64,
) -> Complex64 {
    let z = Complex64::new(s, -epsilon);
    let temporal = if a_tilde == 0.0 {
        z * z
    } else {
        let sh = (z * (0.5 * a_tilde)).sinh();
        sh * sh * (4.0 / (a_tilde * a_tilde))
    };
    let spatial = if same_atom { 0.0 } else { ell * ell };
    -1.0 / ((temporal - spatial) * (4.0 * PI * PI))
}

/// Closed-form response `𝒢(ω) = (1/2π)·ω/(1 − e^{−2πω/α})·f` in units of `ω₀`,
/// evaluated at `ω = frequency_sign·ω₀`.
pub fn response_closed_form(a_tilde: f64, ell: f64, same_atom: bool, frequency_sign: f64) -> f64 {
    let w = frequency_sign;
    let f = if same_atom { 1.0 } else { f_factor(a_tilde, ell) };
    let bose = if a_tilde <= 0.0 {
        if w > 0.0 {
            w
        } else {
            0.0
        }
    } else {
        // ω/(1 − e^{−2πω/ã}) written to stay accurate for either sign
        let x = 2.0 * PI * w / a_tilde;
        -w / (-x).exp_m1()
    };
    bose * f / (2.0 * PI)
}

/// Smallest acceleration (m/s²) with `1 − f(α) = ε_loc`.
pub fn critical_acceleration(p: &PhysicalParams, epsilon_loc: f64) -> Result<f64> {
    let d = p.dimensionless();
    let a_tilde = critical_a_tilde(d.ell, epsilon_loc)?;
    Ok(p.alpha_from_tilde(a_tilde))
}

/// [`critical_acceleration`] in units of `cω₀`.
pub fn critical_a_tilde(ell: f64, epsilon_loc: f64) -> Result<f64> {
    let deficit = |a: f64| 1.0 - f_factor(a, ell);
    let min_gap = deficit(0.0);
    if !(min_gap < epsilon_loc) {
        return Err(Error::NoLocalizedPhase {
            min_gap,
            epsilon_loc,
        });
    }
    let mut lo = 0.0;
    let mut hi = 1e-3;
    while deficit(hi) < epsilon_loc {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Numerical(format!(
                "no crossing of 1 - f = {epsilon_loc} below a_tilde = 1e12"
            )));
        }
    }
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if deficit(mid) < epsilon_loc {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
