//! Gauge phases of the extended comoving transform, induced fictitious
//! potentials and the slow-acceleration margin.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::integrate_relative;
use crate::trajectory::{WallState, WallTrajectory};
use crate::units::PhysicalParams;

/// Integral of dw1/dt squared from 0 to t.
pub fn lower_wall_kinetic_integral(traj: &WallTrajectory, t: f64) -> Result<f64> {
    traj.wall_state(t)?;
    Ok(match traj {
        WallTrajectory::Linear { v1, .. } => v1 * v1 * t,
        WallTrajectory::Monomial { w0, t_scale, n } => {
            if *n == 0.0 {
                return Ok(0.0);
            }
            let c = n * w0 / (2.0 * t_scale);
            let s = 1.0 + t / t_scale;
            let e = 2.0 * n - 1.0;
            if e == 0.0 {
                c * c * t_scale * s.ln()
            } else {
                c * c * t_scale * (s.powf(e) - 1.0) / e
            }
        }
        WallTrajectory::Sinusoidal { .. } => 0.0,
        WallTrajectory::Tabulated(_) => {
            let f = |s: f64| traj.wall_state(s).map(|st| st.dw1 * st.dw1).unwrap_or(f64::NAN);
            let v = integrate_relative(f, 0.0, t, traj.quad_panels(0.0, t), 1e-13);
            if !v.is_finite() {
                return Err(Error::Numerical("wall velocity integral failed".into()));
            }
            v
        }
    })
}

/// The extended gauge phase frozen at one instant, cheap to evaluate at many x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedPhase {
    pub state: WallState,
    /// m / (2 hbar)
    pub prefactor: f64,
    /// integral of dw1^2 from 0 to t
    pub kinetic: f64,
}

impl ExtendedPhase {
    pub fn at(traj: &WallTrajectory, t: f64, params: &PhysicalParams) -> Result<Self> {
        Ok(Self {
            state: traj.wall_state(t)?,
            prefactor: params.mass() / (2.0 * params.hbar()),
            kinetic: lower_wall_kinetic_integral(traj, t)?,
        })
    }

    /// theta(x) = (m/2hbar) [ (w'/w)(x - w1)^2 + 2 w1' (x - w1) + int w1'^2 ].
    #[inline]
    pub fn at_x(&self, x: f64) -> f64 {
        let s = &self.state;
        let u = x - s.w1;
        self.prefactor * (s.dw / s.w * u * u + 2.0 * s.dw1 * u + self.kinetic)
    }

    /// Same phase in the comoving coordinate y.
    #[inline]
    pub fn at_y(&self, y: f64) -> f64 {
        let s = &self.state;
        self.prefactor * (s.w * s.dw * y * y + 2.0 * s.dw1 * s.w * y + self.kinetic)
    }
}

/// Gauge phase of the extended comoving transform in lab coordinates.
pub fn extended_theta(traj: &WallTrajectory, x: f64, t: f64, params: &PhysicalParams) -> Result<f64> {
    Ok(ExtendedPhase::at(traj, t, params)?.at_x(x))
}

/// Instantaneous intersection point b(t) = w1 - w w1' / w' of the tangent wall lines.
pub fn instantaneous_intersection(traj: &WallTrajectory, t: f64) -> Result<f64> {
    let s = traj.wall_state(t)?;
    if s.dw == 0.0 {
        return Err(Error::ParallelWalls);
    }
    Ok(s.w1 - s.w * s.dw1 / s.dw)
}

/// Extended phase with the square completed about b(t); equal to
/// [`extended_theta`] wherever the width is changing.
pub fn extended_theta_completed_square(traj: &WallTrajectory, x: f64, t: f64, params: &PhysicalParams) -> Result<f64> {
    let p = ExtendedPhase::at(traj, t, params)?;
    let s = &p.state;
    let b = instantaneous_intersection(traj, t)?;
    let d = x - b;
    Ok(p.prefactor * (s.dw / s.w * d * d - s.w * s.dw1 * s.dw1 / s.dw + p.kinetic))
}

/// Fixed-width form (m/hbar)(w1' x - (1/2) int w1'^2), meaningful where w' = 0.
pub fn extended_theta_fixed_width(traj: &WallTrajectory, x: f64, t: f64, params: &PhysicalParams) -> Result<f64> {
    let s = traj.wall_state(t)?;
    let kinetic = lower_wall_kinetic_integral(traj, t)?;
    Ok(params.mass() / params.hbar() * (s.dw1 * x - 0.5 * kinetic))
}

/// Fictitious potential f y + k y^2 / 2 seen in the comoving frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedPotential {
    pub t: f64,
    /// m w^3 w1''
    pub f: f64,
    /// m w^3 w''
    pub k: f64,
}

impl InducedPotential {
    #[inline]
    pub fn at_y(&self, y: f64) -> f64 {
        self.f * y + 0.5 * self.k * y * y
    }

    pub fn is_zero(&self) -> bool {
        self.f == 0.0 && self.k == 0.0
    }
}

pub fn induced_potential(traj: &WallTrajectory, t: f64, params: &PhysicalParams) -> Result<InducedPotential> {
    let s = traj.wall_state(t)?;
    let mw3 = params.mass() * s.w * s.w * s.w;
    Ok(InducedPotential {
        t,
        f: mw3 * s.ddw1,
        k: mw3 * s.ddw,
    })
}

/// Outcome of the slow-acceleration test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlowAccelVerdict {
    Pass,
    Warn,
}

/// Threshold on the margin below which walls count as slowly accelerating.
pub const SLOW_ACCEL_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlowAccelReport {
    /// Largest margin found on the interval.
    pub max_margin: f64,
    /// Time at which it occurs.
    pub at_time: f64,
    /// Wall (1 = lower, 2 = upper) responsible.
    pub wall: u8,
    pub verdict: SlowAccelVerdict,
}

/// Margins r_i = |w_i''| 2 w^3 (m / pi hbar)^2 of both walls at time t.
pub fn slow_accel_margin(traj: &WallTrajectory, t: f64, params: &PhysicalParams) -> Result<(f64, f64)> {
    let s = traj.wall_state(t)?;
    let scale = 2.0 * s.w * s.w * s.w * (params.mass() / (PI * params.hbar())).powi(2);
    Ok((s.ddw1.abs() * scale, s.ddw2.abs() * scale))
}

/// Maximum slow-acceleration margin over `[t0, t1]`.
///
/// The interval is scanned on a dense grid (finer for oscillating walls) and
/// the best sample refined by golden-section search.
pub fn slow_accel_check(traj: &WallTrajectory, t0: f64, t1: f64, params: &PhysicalParams) -> Result<SlowAccelReport> {
    let (a, b) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    let worst = |t: f64| -> Result<(f64, u8)> {
        let (r1, r2) = slow_accel_margin(traj, t, params)?;
        Ok(if r2 > r1 { (r2, 2) } else { (r1, 1) })
    };
    let n = (traj.quad_panels(a, b) * 16).max(2000);
    let mut best = (f64::NEG_INFINITY, 1u8, a);
    let mut best_i = 0;
    for i in 0..=n {
        let t = if i == n { b } else { a + (b - a) * i as f64 / n as f64 };
        let (r, wall) = worst(t)?;
        if r > best.0 {
            best = (r, wall, t);
            best_i = i;
        }
    }
    if b > a {
        let h = (b - a) / n as f64;
        let mut lo = (a + h * best_i.saturating_sub(1) as f64).max(a);
        let mut hi = (a + h * (best_i + 1) as f64).min(b);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let c = hi - g * (hi - lo);
            let d = lo + g * (hi - lo);
            if worst(c)?.0 >= worst(d)?.0 {
                hi = d;
            } else {
                lo = c;
            }
        }
        let tm = 0.5 * (lo + hi);
        let (r, wall) = worst(tm)?;
        if r > best.0 {
            best = (r, wall, tm);
        }
    }
    Ok(SlowAccelReport {
        max_margin: best.0,
        at_time: best.2,
        wall: best.1,
        verdict: if best.0 < SLOW_ACCEL_THRESHOLD {
            SlowAccelVerdict::Pass
        } else {
            SlowAccelVerdict::Warn
        },
    })
}
