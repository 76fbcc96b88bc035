use nalgebra::{ComplexField, Matrix4, SMatrix, Vector4};

use super::bloch::BlochSystem;
use super::liouvillian::{unvectorize, vectorize, Liouvillian};
use super::spectrum::spectrum;
use crate::algebra::{BlochState, DensityMatrix};
use crate::error::{Error, Result};

/// Step bound relative to the fastest rate of the generator.
pub const STABILITY_FACTOR: f64 = 0.01;

/// Hermiticity and trace tolerance for integrated states.
pub const TRAJECTORY_TOL: f64 = 1e-10;

pub fn max_stable_step(spectral_radius: f64) -> f64 {
    if spectral_radius > 0.0 {
        STABILITY_FACTOR / spectral_radius
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Final proper time in units of `1/Γ₀`.
    pub tau_max: f64,
    /// Step size; defaults to [`max_stable_step`] of the generator.
    pub dt: Option<f64>,
    /// Number of sampling intervals; `samples + 1` states are recorded.
    pub samples: usize,
}

impl EvolveOptions {
    pub fn new(tau_max: f64, samples: usize) -> Self {
        Self {
            tau_max,
            dt: None,
            samples,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = Some(dt);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    /// Step actually used (divides the sampling interval exactly).
    pub dt: f64,
    pub steps: usize,
}

impl<S> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<&S> {
        self.states.last()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }
}

impl Trajectory<DensityMatrix> {
    pub fn bloch(&self) -> Trajectory<BlochState> {
        Trajectory {
            times: self.times.clone(),
            states: self.states.iter().map(DensityMatrix::bloch).collect(),
            dt: self.dt,
            steps: self.steps,
        }
    }
}

struct Schedule {
    dt: f64,
    per_sample: usize,
}

fn schedule(opts: &EvolveOptions, spectral_radius: f64) -> Result<Schedule> {
    if !(opts.tau_max >= 0.0 && opts.tau_max.is_finite()) {
        return Err(Error::InvalidParams(format!("tau_max must be finite and >= 0, got {}", opts.tau_max)));
    }
    if opts.samples == 0 {
        return Err(Error::InvalidParams("need at least one sampling interval".into()));
    }
    let bound = max_stable_step(spectral_radius);
    let dt = match opts.dt {
        Some(dt) if !(dt > 0.0) => {
            return Err(Error::InvalidParams(format!("dt must be > 0, got {dt}")));
        }
        Some(dt) if dt > bound * (1.0 + 1e-12) => {
            return Err(Error::InvalidParams(format!(
                "dt = {dt:.3e} exceeds the stability bound {bound:.3e} ({STABILITY_FACTOR}/spectral radius)"
            )));
        }
        Some(dt) => dt,
        None => bound,
    };
    let interval = opts.tau_max / opts.samples as f64;
    if interval == 0.0 {
        return Ok(Schedule { dt: 0.0, per_sample: 0 });
    }
    let per_sample = if dt.is_finite() {
        (interval / dt).ceil().max(1.0) as usize
    } else {
        1
    };
    Ok(Schedule {
        dt: interval / per_sample as f64,
        per_sample,
    })
}

/// One classical RK4 step of `x' = Mx` as a matrix: `Σ_{k≤4} (hM)^k/k!`.
fn rk4_propagator<T, const N: usize>(m: &SMatrix<T, N, N>, h: f64) -> SMatrix<T, N, N>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let id = SMatrix::<T, N, N>::identity();
    let a = m * T::from_real(h);
    let mut p = id + a * T::from_real(0.25);
    p = id + a * p * T::from_real(1.0 / 3.0);
    p = id + a * p * T::from_real(0.5);
    id + a * p
}

/// `m^n` by repeated squaring.
fn matrix_power<T, const N: usize>(m: &SMatrix<T, N, N>, mut n: usize) -> SMatrix<T, N, N>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let mut result = SMatrix::<T, N, N>::identity();
    let mut base = *m;
    while n > 0 {
        if n & 1 == 1 {
            result *= base;
        }
        base = base * base;
        n >>= 1;
    }
    result
}

/// Integrates `dρ/dτ = L̂ρ` with fixed-step RK4.
///
/// The RK4 step of a linear system is a fixed matrix, so the steps between
/// two samples are applied as one precomputed power of it.
///
/// Every recorded state is revalidated as a density matrix; a failure
/// aborts with [`Error::IntegrationDiverged`].
pub fn evolve_density(
    l: &Liouvillian,
    rho0: &DensityMatrix,
    opts: &EvolveOptions,
) -> Result<Trajectory<DensityMatrix>> {
    let radius = spectrum(l)?.spectral_radius();
    let sched = schedule(opts, radius)?;
    let prop = matrix_power(&rk4_propagator(l.matrix(), sched.dt), sched.per_sample);

    let mut times = Vec::with_capacity(opts.samples + 1);
    let mut states = Vec::with_capacity(opts.samples + 1);
    times.push(0.0);
    states.push(rho0.clone());
    let mut v = vectorize(rho0.matrix());
    let mut step = 0;
    for s in 1..=opts.samples {
        v = prop * v;
        step += sched.per_sample;
        let tau = (s * sched.per_sample) as f64 * sched.dt;
        let rho = DensityMatrix::with_tolerances(unvectorize(&v), TRAJECTORY_TOL, TRAJECTORY_TOL).map_err(|e| Error::IntegrationDiverged {
            step,
            tau,
            reason: format!("{e} (dt = {:.3e})", sched.dt),
        })?;
        times.push(tau);
        states.push(rho);
    }
    Ok(Trajectory {
        times,
        states,
        dt: sched.dt,
        steps: step,
    })
}

/// Integrates the affine Bloch system with the same RK4 scheme, written as
/// a linear system on `(M_z, M_zz, M_c, 1)`.
pub fn evolve_bloch(
    sys: &BlochSystem,
    b0: &BlochState,
    opts: &EvolveOptions,
) -> Result<Trajectory<BlochState>> {
    let sched = schedule(opts, sys.spectral_radius())?;
    let mut aug = Matrix4::<f64>::zeros();
    aug.fixed_view_mut::<3, 3>(0, 0).copy_from(&sys.matrix);
    aug.fixed_view_mut::<3, 1>(0, 3).copy_from(&sys.drive);
    let prop = matrix_power(&rk4_propagator(&aug, sched.dt), sched.per_sample);

    let mut times = vec![0.0];
    let mut states = vec![*b0];
    let mut v = Vector4::new(b0.mz, b0.mzz, b0.mc, 1.0);
    let mut step = 0;
    for s in 1..=opts.samples {
        v = prop * v;
        step += sched.per_sample;
        let tau = (s * sched.per_sample) as f64 * sched.dt;
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::IntegrationDiverged {
                step,
                tau,
                reason: "non-finite Bloch state".into(),
            });
        }
        times.push(tau);
        states.push(BlochState::new(v[0], v[1], v[2]));
    }
    Ok(Trajectory {
        times,
        states,
        dt: sched.dt,
        steps: step,
    })
}
