//! Galilean boosts and extended (time-dependent) Galilean translations.

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{ComplexField, Frame};
use crate::quad::integrate_relative;
use crate::trajectory::Path;
use crate::units::PhysicalParams;

const REL_TOL: f64 = 1e-13;

fn path_integral<F: Fn(f64) -> f64>(path_scale: f64, t: f64, f: F) -> f64 {
    let panels = if path_scale.is_finite() && path_scale > 0.0 {
        ((t.abs() / path_scale).ceil() as usize).clamp(1, 1 << 20)
    } else {
        1
    };
    integrate_relative(f, 0.0, t, panels, REL_TOL)
}

/// Boost to a frame moving with velocity v.
///
/// Returns psi(x' + v t) exp((i/hbar)(-m v x' - m v^2 t / 2)) on the grid shifted by -v t.
pub fn galilean_boost(psi: &ComplexField, v: f64, t: f64, params: &PhysicalParams) -> Result<ComplexField> {
    psi.require_frame(Frame::LabX)?;
    let shift = v * t;
    let grid = psi.grid().mapped(-shift, 1.0)?;
    let (m, hbar) = (params.mass(), params.hbar());
    let values = psi
        .values()
        .iter()
        .zip(grid.points())
        .map(|(val, xp)| val * Complex64::from_polar(1.0, (-m * v * xp - 0.5 * m * v * v * t) / hbar))
        .collect();
    ComplexField::new(grid, values, Frame::LabX)
}

/// Phase (m/hbar)(d' x' + (1/2) int_0^t d'^2) of the translation x' = x - d(t).
pub fn extended_galilean_theta(d: &Path, t: f64, x_prime: f64, params: &PhysicalParams) -> f64 {
    let (_, dd, _) = d.eval(t);
    let kinetic = path_integral(d.time_scale(), t, |s| d.eval(s).1.powi(2));
    params.mass() / params.hbar() * (dd * x_prime + 0.5 * kinetic)
}

/// Total phase theta_1(x_1) + theta_2(x_2) of translating by d1 and then by d2,
/// with x_1 = x_2 + d2(t) and the non-inertial correction in theta_2.
pub fn galilean_compose_theta(d1: &Path, d2: &Path, t: f64, x2: f64, params: &PhysicalParams) -> f64 {
    let (d2t, _, _) = d2.eval(t);
    let theta1 = extended_galilean_theta(d1, t, x2 + d2t, params);
    let scale = d1.time_scale().min(d2.time_scale());
    let correction = path_integral(scale, t, |s| {
        let (_, _, acc1) = d1.eval(s);
        let (disp2, vel2, _) = d2.eval(s);
        0.5 * vel2 * vel2 - acc1 * disp2
    });
    let theta2 = params.mass() / params.hbar() * (d2.eval(t).1 * x2 + correction);
    theta1 + theta2
}

/// Translation phase expressed in the original coordinate x,
/// (m/hbar)(d' x - int_0^t (d'^2/2 + d d'') dt').
pub fn galilean_invert_theta(d: &Path, t: f64, x: f64, params: &PhysicalParams) -> f64 {
    let (_, dd, _) = d.eval(t);
    let integral = path_integral(d.time_scale(), t, |s| {
        let (disp, vel, acc) = d.eval(s);
        0.5 * vel * vel + disp * acc
    });
    params.mass() / params.hbar() * (dd * x - integral)
}

/// Translates a lab field into the frame x' = x - d(t):
/// phi(x') = psi(x' + d) exp(-i theta(x')), on the grid shifted by -d(t).
pub fn extended_galilean_forward(
    psi: &ComplexField,
    d: &Path,
    t: f64,
    params: &PhysicalParams,
) -> Result<ComplexField> {
    psi.require_frame(Frame::LabX)?;
    let (disp, vel, _) = d.eval(t);
    let kinetic = path_integral(d.time_scale(), t, |s| d.eval(s).1.powi(2));
    let c = params.mass() / params.hbar();
    let grid = psi.grid().mapped(-disp, 1.0)?;
    let values = psi
        .values()
        .iter()
        .zip(grid.points())
        .map(|(v, xp)| v * Complex64::from_polar(1.0, -c * (vel * xp + 0.5 * kinetic)))
        .collect();
    ComplexField::new(grid, values, Frame::LabX)
}

/// Inverse of [`extended_galilean_forward`].
pub fn extended_galilean_inverse(
    phi: &ComplexField,
    d: &Path,
    t: f64,
    params: &PhysicalParams,
) -> Result<ComplexField> {
    phi.require_frame(Frame::LabX)?;
    let (disp, vel, _) = d.eval(t);
    let kinetic = path_integral(d.time_scale(), t, |s| d.eval(s).1.powi(2));
    let c = params.mass() / params.hbar();
    let grid = phi.grid().mapped(disp, 1.0)?;
    let values = phi
        .values()
        .iter()
        .zip(phi.grid().points())
        .map(|(v, xp)| v * Complex64::from_polar(1.0, c * (vel * xp + 0.5 * kinetic)))
        .collect();
    ComplexField::new(grid, values, Frame::LabX)
}
