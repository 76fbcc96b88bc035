use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::algebra::BlochState;
use crate::correlations::DissipationCoefficients;

/// Closed linear system for `(M_z, M_zz, M_c)`:
///
/// ```text
/// d/dτ [M_z ]   [ −A¹¹     0     2B¹² ] [M_z ]   [B¹¹]
///      [M_zz] = [ B¹¹/2  −2A¹¹   A¹²  ] [M_zz] + [ 0 ]
///      [M_c ]   [−B¹²/2   2A¹²  −A¹¹  ] [M_c ]   [ 0 ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSystem {
    pub matrix: Matrix3<f64>,
    pub drive: Vector3<f64>,
}

impl BlochSystem {
    pub fn from_coefficients(c: &DissipationCoefficients) -> Self {
        #[rustfmt::skip]
        let matrix = Matrix3::new(
            -c.a11,        0.0,            2.0 * c.b12,
            0.5 * c.b11,   -2.0 * c.a11,   c.a12,
            -0.5 * c.b12,  2.0 * c.a12,    -c.a11,
        );
        Self {
            matrix,
            drive: Vector3::new(c.b11, 0.0, 0.0),
        }
    }

    pub fn rhs(&self, b: &BlochState) -> BlochState {
        let v = self.matrix * Vector3::from(b.as_array()) + self.drive;
        BlochState::new(v[0], v[1], v[2])
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Eigenvalues of the homogeneous part, sorted by decreasing real part.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut ev: Vec<Complex64> = self.matrix.complex_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        ev
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Fixed point `M x = −b`, when the homogeneous part is invertible.
    pub fn steady_state(&self) -> Option<BlochState> {
        let x = self.matrix.lu().solve(&(-self.drive))?;
        if x.iter().all(|v| v.is_finite()) {
            Some(BlochState::new(x[0], x[1], x[2]))
        } else {
            None
        }
    }
}
