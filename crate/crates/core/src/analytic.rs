//! Closed-form eigenmodes, phases and energies of static and moving wells.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::{extended_theta, TauMap};
use crate::grid::SpatialGrid;
use crate::quad::composite_adaptive_simpson;
use crate::trajectory::{WallState, WallTrajectory};
use crate::units::PhysicalParams;

/// Positive mode number n >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex(u32);

impl ModeIndex {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("mode index must be >= 1".into()));
        }
        Ok(Self(n))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

fn linear_params(traj: &WallTrajectory) -> Result<(f64, f64, f64)> {
    match traj {
        WallTrajectory::Linear { w0, v1, v2 } => Ok((*w0, *v1, *v2)),
        _ => Err(Error::Unsupported("closed form requires a linear trajectory")),
    }
}

fn check_inside(s: &WallState, x: f64) -> Result<()> {
    // allow a few ulps of slack so that wall positions computed by the caller count as inside
    let slack = 4.0 * f64::EPSILON * (s.w1.abs() + s.w2.abs());
    if x < s.w1 - slack || x > s.w2 + slack {
        return Err(Error::OutOfDomain {
            what: "x",
            value: x,
            domain: format!("[{:e}, {:e}]", s.w1, s.w2),
        });
    }
    Ok(())
}

/// Standing wave sqrt(2/w) sin(n pi u / w) without domain checks.
#[inline]
fn sine_profile(n: ModeIndex, w: f64, u: f64) -> f64 {
    (2.0 / w).sqrt() * (n.as_f64() * PI * u / w).sin()
}

/// Eigenmode of the static well [0, w].
pub fn static_eigenmode(n: ModeIndex, w: f64, x: f64) -> Result<Complex64> {
    if w.is_nan() || w <= 0.0 {
        return Err(Error::InvalidParameter(format!("width must be positive, got {w}")));
    }
    if !(0.0..=w).contains(&x) {
        return Err(Error::OutOfDomain {
            what: "x",
            value: x,
            domain: format!("[0, {w:e}]"),
        });
    }
    Ok(Complex64::new(sine_profile(n, w, x), 0.0))
}

/// Energy (hbar n pi)^2 / (2 m w^2) of mode n in a well of width w.
pub fn static_energy(n: ModeIndex, w: f64, params: &PhysicalParams) -> f64 {
    let k = params.hbar() * n.as_f64() * PI / w;
    k * k / (2.0 * params.mass())
}

/// Gauge phase for constant-velocity walls,
/// m (dv x^2 + 2 v1 w0 x - v1^2 w0 t) / (2 hbar w(t)).
pub fn theta_linear(traj: &WallTrajectory, x: f64, t: f64, params: &PhysicalParams) -> Result<f64> {
    let (w0, v1, v2) = linear_params(traj)?;
    let w = traj.width(t)?;
    let dv = v2 - v1;
    Ok(params.mass() * (dv * x * x + 2.0 * v1 * w0 * x - v1 * v1 * w0 * t) / (2.0 * params.hbar() * w))
}

/// Phase for parallel walls moving at velocity v, (m v x - m v^2 t / 2) / hbar.
pub fn theta_parallel(v: f64, x: f64, t: f64, params: &PhysicalParams) -> f64 {
    params.mass() * (v * x - 0.5 * v * v * t) / params.hbar()
}

/// Completed-square phase m dv (x - b)^2 / (2 hbar w(t)).
pub fn theta_completed_square(traj: &WallTrajectory, x: f64, t: f64, params: &PhysicalParams) -> Result<f64> {
    let (_, v1, v2) = linear_params(traj)?;
    let b = intersection_point(traj)?;
    let w = traj.width(t)?;
    let d = x - b;
    Ok(params.mass() * (v2 - v1) * d * d / (2.0 * params.hbar() * w))
}

/// Point b = -v1 w0 / dv where the two walls (extended) intersect.
pub fn intersection_point(traj: &WallTrajectory) -> Result<f64> {
    let (w0, v1, v2) = linear_params(traj)?;
    let dv = v2 - v1;
    if dv == 0.0 {
        return Err(Error::ParallelWalls);
    }
    Ok(-v1 * w0 / dv)
}

/// Available closed forms of the gauge phase theta(x, t).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseForm {
    /// General constant-velocity form.
    LinearGeneral,
    /// Parallel walls; requires v1 = v2.
    Parallel,
    /// Square completed about the wall intersection point.
    CompletedSquare,
    /// Accelerating walls, expressed in the lab coordinate.
    Extended,
    /// Accelerating walls with the square completed about the instantaneous intersection.
    ExtendedCompletedSquare,
    /// Accelerating walls at an instant of stationary width.
    FixedWidth,
}

/// A phase form bound to a trajectory plus an additive constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpec {
    pub form: PhaseForm,
    pub traj: WallTrajectory,
    pub constant: f64,
}

impl PhaseSpec {
    pub fn new(form: PhaseForm, traj: WallTrajectory) -> Self {
        Self {
            form,
            traj,
            constant: 0.0,
        }
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant = c;
        self
    }

    pub fn eval(&self, x: f64, t: f64, params: &PhysicalParams) -> Result<f64> {
        let base = match self.form {
            PhaseForm::LinearGeneral => theta_linear(&self.traj, x, t, params)?,
            PhaseForm::Parallel => {
                let (_, v1, v2) = linear_params(&self.traj)?;
                if v1 != v2 {
                    return Err(Error::InvalidParameter("parallel phase needs v1 = v2".into()));
                }
                theta_parallel(v1, x, t, params)
            }
            PhaseForm::CompletedSquare => theta_completed_square(&self.traj, x, t, params)?,
            PhaseForm::Extended => extended_theta(&self.traj, x, t, params)?,
            PhaseForm::ExtendedCompletedSquare => {
                crate::frames::extended_theta_completed_square(&self.traj, x, t, params)?
            }
            PhaseForm::FixedWidth => crate::frames::extended_theta_fixed_width(&self.traj, x, t, params)?,
        };
        Ok(base + self.constant)
    }
}

fn moving_wall_mode_raw(
    n: ModeIndex,
    traj: &WallTrajectory,
    x: f64,
    t: f64,
    params: &PhysicalParams,
) -> Result<Complex64> {
    let (w0, _, _) = linear_params(traj)?;
    let s = traj.wall_state(t)?;
    let theta = theta_linear(traj, x, t, params)?;
    let e0 = static_energy(n, w0, params);
    let dynamic = e0 * w0 * t / (params.hbar() * s.w);
    Ok(Complex64::from_polar(sine_profile(n, s.w, x - s.w1), theta - dynamic))
}

/// Exact mode of a well whose walls move with constant velocities.
pub fn moving_wall_mode(
    n: ModeIndex,
    traj: &WallTrajectory,
    x: f64,
    t: f64,
    params: &PhysicalParams,
) -> Result<Complex64> {
    linear_params(traj)?;
    check_inside(&traj.wall_state(t)?, x)?;
    moving_wall_mode_raw(n, traj, x, t, params)
}

/// Mode of the well [0, w0 + dv t] with fixed lower wall, written out directly.
pub fn doescher_rice_mode(
    n: ModeIndex,
    w0: f64,
    dv: f64,
    x: f64,
    t: f64,
    params: &PhysicalParams,
) -> Result<Complex64> {
    let traj = WallTrajectory::linear(w0, 0.0, dv)?;
    let s = traj.wall_state(t)?;
    check_inside(&s, x)?;
    Ok(doescher_rice_raw(n, w0, dv, s.w, x, t, params))
}

fn doescher_rice_raw(n: ModeIndex, w0: f64, dv: f64, w: f64, x: f64, t: f64, params: &PhysicalParams) -> Complex64 {
    let e0 = static_energy(n, w0, params);
    let phase = (params.mass() * dv * x * x - 2.0 * e0 * w0 * t) / (2.0 * params.hbar() * w);
    Complex64::from_polar(sine_profile(n, w, x), phase)
}

/// Dynamic phase E_n^0 w0 t / (hbar w(t)) of a constant-velocity well.
pub fn dynamic_phase(n: ModeIndex, traj: &WallTrajectory, t: f64, params: &PhysicalParams) -> Result<f64> {
    let (w0, _, _) = linear_params(traj)?;
    let w = traj.width(t)?;
    Ok(static_energy(n, w0, params) * w0 * t / (params.hbar() * w))
}

/// Integral of E_n(t')/hbar from 0 to t for any trajectory.
///
/// Since E_n / hbar = n^2 pi (hbar pi / 2m) / w^2, this is n^2 pi tau'(t).
pub fn dynamic_phase_integral(n: ModeIndex, traj: &WallTrajectory, t: f64, params: &PhysicalParams) -> Result<f64> {
    let map = TauMap::new(traj.clone(), *params);
    let nn = n.as_f64();
    Ok(nn * nn * PI * map.tau_prime_of_t(t)?)
}

/// Approximate mode of a slowly accelerating well.
pub fn slow_accel_mode(
    n: ModeIndex,
    traj: &WallTrajectory,
    x: f64,
    t: f64,
    params: &PhysicalParams,
) -> Result<Complex64> {
    let s = traj.wall_state(t)?;
    check_inside(&s, x)?;
    let theta = extended_theta(traj, x, t, params)?;
    let dynamic = dynamic_phase_integral(n, traj, t, params)?;
    Ok(Complex64::from_polar(sine_profile(n, s.w, x - s.w1), theta - dynamic))
}

/// Instantaneous real eigenmode of the well [w1, w2], zero outside.
fn connection(n: ModeIndex, w1: f64, w2: f64, lower: bool) -> Result<f64> {
    if w1.is_nan() || w2.is_nan() || w2 <= w1 {
        return Err(Error::WallCollision {
            t: f64::NAN,
            width: w2 - w1,
        });
    }
    let w = w2 - w1;
    let k = n.as_f64() * PI;
    let norm = (2.0 / w).sqrt();
    // d/dw_j of sqrt(2/w) sin(k (x - w1) / w), j = 1 or 2
    let integrand = |x: f64| {
        let y = (x - w1) / w;
        let (s, c) = (k * y).sin_cos();
        let u = norm * s;
        let du = if lower {
            u / (2.0 * w) + norm * c * k * (y - 1.0) / w
        } else {
            -u / (2.0 * w) - norm * c * k * y / w
        };
        u * du
    };
    Ok(composite_adaptive_simpson(
        integrand,
        w1,
        w2,
        2 * n.get() as usize,
        1e-13 / w,
    ))
}

/// Berry connection <n| d/dw1 |n> of the instantaneous eigenmode, by quadrature.
pub fn berry_connection(n: ModeIndex, w1: f64, w2: f64) -> Result<f64> {
    connection(n, w1, w2, true)
}

/// Same as [`berry_connection`] but for the upper wall coordinate.
pub fn berry_connection_upper(n: ModeIndex, w1: f64, w2: f64) -> Result<f64> {
    connection(n, w1, w2, false)
}

/// A wavefunction that can be evaluated anywhere in the (x, t) plane.
///
/// Values need not vanish outside the well: closed-form solutions are
/// analytic continuations that satisfy the free equation everywhere.
pub trait WaveEvaluator {
    fn value(&self, x: f64, t: f64) -> Complex64;
    /// Energy used to normalize residuals.
    fn energy_scale(&self, t: f64) -> f64;
}

/// Closed-form families usable with [`schrodinger_residual`].
#[derive(Debug, Clone, PartialEq)]
pub enum ModeFamily {
    Static { n: ModeIndex, w: f64 },
    MovingWall { n: ModeIndex, traj: WallTrajectory },
    DoescherRice { n: ModeIndex, w0: f64, dv: f64 },
}

/// A [`ModeFamily`] member bound to physical parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeEvaluator {
    pub family: ModeFamily,
    pub params: PhysicalParams,
}

impl WaveEvaluator for ModeEvaluator {
    fn value(&self, x: f64, t: f64) -> Complex64 {
        let p = &self.params;
        match &self.family {
            ModeFamily::Static { n, w } => {
                let phase = -static_energy(*n, *w, p) * t / p.hbar();
                Complex64::from_polar(sine_profile(*n, *w, x), phase)
            }
            ModeFamily::MovingWall { n, traj } => {
                moving_wall_mode_raw(*n, traj, x, t, p).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            }
            ModeFamily::DoescherRice { n, w0, dv } => {
                let w = w0 + dv * t;
                doescher_rice_raw(*n, *w0, *dv, w, x, t, p)
            }
        }
    }

    fn energy_scale(&self, t: f64) -> f64 {
        let p = &self.params;
        match &self.family {
            ModeFamily::Static { n, w } => static_energy(*n, *w, p),
            ModeFamily::MovingWall { n, traj } => static_energy(*n, traj.width(t).unwrap_or(f64::NAN), p),
            ModeFamily::DoescherRice { n, w0, dv } => static_energy(*n, w0 + dv * t, p),
        }
    }
}

/// Wraps a closure as a [`WaveEvaluator`].
pub struct FnEvaluator<F> {
    pub f: F,
    pub energy: f64,
}

impl<F: Fn(f64, f64) -> Complex64> WaveEvaluator for FnEvaluator<F> {
    fn value(&self, x: f64, t: f64) -> Complex64 {
        (self.f)(x, t)
    }

    fn energy_scale(&self, _t: f64) -> f64 {
        self.energy
    }
}

/// Relative residual of the free Schrodinger equation, by central differences.
///
/// Returns max over interior nodes of |i hbar psi_t + (hbar^2/2m) psi_xx|
/// divided by max |E psi| on the grid at time `t`.
pub fn schrodinger_residual<E: WaveEvaluator + ?Sized>(
    eval: &E,
    grid: &SpatialGrid,
    t: f64,
    dt: f64,
    params: &PhysicalParams,
) -> f64 {
    let h = grid.spacing();
    let n = grid.n_points();
    let (hbar, m) = (params.hbar(), params.mass());
    let now: Vec<Complex64> = grid.points().map(|x| eval.value(x, t)).collect();
    let e = eval.energy_scale(t);
    let scale = now.iter().fold(0.0_f64, |acc, v| acc.max((e * v).norm()));
    let mut worst = 0.0_f64;
    for i in 1..n - 1 {
        let x = grid.point(i);
        let dpsi_dt = (eval.value(x, t + dt) - eval.value(x, t - dt)) / (2.0 * dt);
        let lap = (now[i + 1] - 2.0 * now[i] + now[i - 1]) / (h * h);
        let r = Complex64::new(0.0, hbar) * dpsi_dt + lap * (hbar * hbar / (2.0 * m));
        worst = worst.max(r.norm());
    }
    worst / scale
}
