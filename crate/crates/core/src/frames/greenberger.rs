//! Maps between the lab field psi(x, t) and the comoving field phi(y, tau).
//!
//! phi(y) = sqrt(w) psi(w1 + w y) exp(-i theta), with theta the extended gauge
//! phase. For constant-velocity walls theta reduces exactly to the linear-wall
//! phase, so the same code serves both the plain and the extended transform.

use num_complex::Complex64;

use super::induced::ExtendedPhase;
use crate::error::{Error, Result};
use crate::grid::{resample, ComplexField, Frame, SpatialGrid};
use crate::trajectory::WallTrajectory;
use crate::units::PhysicalParams;

/// Lab grid spanning the well at time `t` with `n_points` nodes.
pub fn well_grid(traj: &WallTrajectory, t: f64, n_points: usize) -> Result<SpatialGrid> {
    let s = traj.wall_state(t)?;
    SpatialGrid::new(s.w1, s.w2, n_points)
}

fn forward_with(psi: &ComplexField, phase: &ExtendedPhase) -> Result<ComplexField> {
    psi.require_frame(Frame::LabX)?;
    let s = &phase.state;
    let n = psi.grid().n_points();
    let lab = SpatialGrid::new(s.w1, s.w2, n)?;
    let on_well = resample(psi, &lab);
    let unit = SpatialGrid::unit(n)?;
    let root_w = s.w.sqrt();
    let values = on_well
        .values()
        .iter()
        .zip(unit.points())
        .map(|(v, y)| v * Complex64::from_polar(root_w, -phase.at_y(y)))
        .collect();
    ComplexField::new(unit, values, Frame::ComovingY)
}

fn inverse_with(phi: &ComplexField, phase: &ExtendedPhase) -> Result<ComplexField> {
    phi.require_frame(Frame::ComovingY)?;
    let s = &phase.state;
    let n = phi.grid().n_points();
    let unit = SpatialGrid::unit(n)?;
    let on_unit = resample(phi, &unit);
    let lab = SpatialGrid::new(s.w1, s.w2, n)?;
    let inv_root_w = 1.0 / s.w.sqrt();
    let values = on_unit
        .values()
        .iter()
        .zip(unit.points())
        .map(|(v, y)| v * Complex64::from_polar(inv_root_w, phase.at_y(y)))
        .collect();
    ComplexField::new(lab, values, Frame::LabX)
}

fn require_linear(traj: &WallTrajectory) -> Result<()> {
    match traj {
        WallTrajectory::Linear { .. } => Ok(()),
        _ => Err(Error::Unsupported(
            "Greenberger transform needs constant-velocity walls",
        )),
    }
}

/// Lab field at time `t` to comoving field at tau(t), for constant-velocity walls.
///
/// The lab field is resampled onto the well's own grid (same node count) unless
/// it already lives there.
pub fn greenberger_forward(
    psi: &ComplexField,
    traj: &WallTrajectory,
    t: f64,
    params: &PhysicalParams,
) -> Result<ComplexField> {
    require_linear(traj)?;
    forward_with(psi, &ExtendedPhase::at(traj, t, params)?)
}

/// Comoving field to lab field at time `t`, for constant-velocity walls.
pub fn greenberger_inverse(
    phi: &ComplexField,
    traj: &WallTrajectory,
    t: f64,
    params: &PhysicalParams,
) -> Result<ComplexField> {
    require_linear(traj)?;
    inverse_with(phi, &ExtendedPhase::at(traj, t, params)?)
}

/// Extended transform for arbitrary (C^2) wall motion.
pub fn comoving_forward(
    psi: &ComplexField,
    traj: &WallTrajectory,
    t: f64,
    params: &PhysicalParams,
) -> Result<ComplexField> {
    forward_with(psi, &ExtendedPhase::at(traj, t, params)?)
}

/// Inverse of [`comoving_forward`].
pub fn comoving_inverse(
    phi: &ComplexField,
    traj: &WallTrajectory,
    t: f64,
    params: &PhysicalParams,
) -> Result<ComplexField> {
    inverse_with(phi, &ExtendedPhase::at(traj, t, params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{moving_wall_mode, ModeIndex};
    use crate::grid::{l2_norm, local_momentum};
    use std::f64::consts::{PI, SQRT_2};

    fn nat() -> PhysicalParams {
        PhysicalParams::natural()
    }

    #[test]
    fn modes_map_to_box_modes() {
        let tr = WallTrajectory::linear(1.0, -0.2, 0.5).unwrap();
        let t = 0.8;
        let n = ModeIndex::new(3).unwrap();
        let grid = well_grid(&tr, t, 513).unwrap();
        let psi = ComplexField::from_fn(grid, Frame::LabX, |x| {
            moving_wall_mode(n, &tr, x.clamp(grid.lo(), grid.hi()), t, &nat()).unwrap()
        });
        let phi = greenberger_forward(&psi, &tr, t, &nat()).unwrap();
        let tau = super::super::TauMap::new(tr.clone(), nat()).tau_of_t(t).unwrap();
        let expect = ComplexField::from_fn(*phi.grid(), Frame::ComovingY, |y| {
            Complex64::from_polar(SQRT_2 * (3.0 * PI * y).sin(), -9.0 * PI * PI * tau / 2.0)
        });
        assert!(phi.max_abs_diff(&expect).unwrap() < 1e-9);
    }

    #[test]
    fn norm_and_round_trip() {
        let tr = WallTrajectory::linear(1.0, 0.4, 1.1).unwrap();
        let t = 0.6;
        let grid = well_grid(&tr, t, 4096).unwrap();
        let s = tr.wall_state(t).unwrap();
        let psi = ComplexField::from_fn(grid, Frame::LabX, |x| {
            let y = s.to_y(x);
            Complex64::new((PI * y).sin() * (1.0 + y), (2.0 * PI * y).sin() * 0.3)
        });
        let phi = greenberger_forward(&psi, &tr, t, &nat()).unwrap();
        assert!((l2_norm(&phi) - l2_norm(&psi)).abs() < 1e-8);
        let back = greenberger_inverse(&phi, &tr, t, &nat()).unwrap();
        assert!(back.max_abs_diff(&psi).unwrap() < 1e-12);
    }

    #[test]
    fn hubble_momentum() {
        let (w0, dv) = (1.0, 1.0);
        let tr = WallTrajectory::linear(w0, 0.0, dv).unwrap();
        let t = 1.0;
        let phi = ComplexField::from_fn(SpatialGrid::unit(1001).unwrap(), Frame::ComovingY, |_| {
            Complex64::new(1.0, 0.0)
        });
        let psi = greenberger_inverse(&phi, &tr, t, &nat()).unwrap();
        let w = tr.width(t).unwrap();
        for i in 1..1000 {
            let x = psi.grid().point(i);
            let expect = Complex64::from_polar(1.0 / w.sqrt(), dv * x * x / (2.0 * w));
            assert!((psi.values()[i] - expect).norm() < 1e-12);
            let p = local_momentum(&psi, i, 1.0).unwrap();
            assert!((p - dv * x / w).abs() <= 1e-6 * (dv * x / w).abs());
        }
    }

    #[test]
    fn static_well_is_rescaling() {
        let tr = WallTrajectory::fixed(2.0).unwrap();
        let grid = well_grid(&tr, 0.0, 101).unwrap();
        let psi = ComplexField::from_fn(grid, Frame::LabX, |x| Complex64::new((PI * x / 2.0).sin(), 0.0));
        let phi = greenberger_forward(&psi, &tr, 5.0, &nat()).unwrap();
        for (i, v) in phi.values().iter().enumerate() {
            assert!((v - psi.values()[i] * 2f64.sqrt()).norm() < 1e-14);
        }
    }

    #[test]
    fn frame_checks() {
        let tr = WallTrajectory::fixed(1.0).unwrap();
        let f = ComplexField::zeros(SpatialGrid::unit(10).unwrap(), Frame::ComovingY);
        assert!(matches!(
            greenberger_forward(&f, &tr, 0.0, &nat()),
            Err(Error::FrameMismatch { .. })
        ));
        let g = f.with_frame(Frame::LabX);
        assert!(matches!(
            greenberger_inverse(&g, &tr, 0.0, &nat()),
            Err(Error::FrameMismatch { .. })
        ));
        let sin = WallTrajectory::sinusoidal(1.0, 0.1, 1.0).unwrap();
        assert!(matches!(
            greenberger_forward(&g, &sin, 0.0, &nat()),
            Err(Error::Unsupported(_))
        ));
        assert!(comoving_forward(&g, &sin, 0.0, &nat()).is_ok());
    }
}
