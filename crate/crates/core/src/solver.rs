//! Crank–Nicolson evolution in the comoving frame, lab-frame wrappers and
//! density carpets.
//!
//! The comoving equation is written in tau' = (hbar pi / 2m) tau,
//!
//!   i dphi/dtau' = -(1/pi) phi_yy + (2m / (pi hbar^2)) (f y + k y^2 / 2) phi,
//!
//! on y in [0, 1] with Dirichlet walls. Space uses the compact fourth-order
//! stencil M^{-1} delta^2 / h^2 with M = tridiag(1, 10, 1) / 12.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::frames::{comoving_forward, comoving_inverse, induced_potential, InducedPotential, TauMap};
use crate::grid::{l2_norm, resample, ComplexField, Frame, SpatialGrid};
use crate::trajectory::WallTrajectory;
use crate::tridiag::Tridiagonal;
use crate::units::PhysicalParams;

/// Largest tolerated probability fraction clipped away by the walls.
const MAX_CLIPPED: f64 = 0.01;
/// Allowed deviation of a carpet slice's total probability from the initial one.
const CARPET_NORM_TOL: f64 = 1e-3;

/// Discretization of the comoving solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Grid nodes on [0, 1], walls included.
    pub n_points: usize,
    /// Time steps per unit of tau'.
    pub steps_per_unit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n_points: 1024,
            steps_per_unit: 4096,
        }
    }
}

impl SolverConfig {
    pub fn new(n_points: usize, steps_per_unit: usize) -> Result<Self> {
        let c = Self {
            n_points,
            steps_per_unit,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 64 {
            return Err(Error::InvalidParameter(format!(
                "n_points = {} must be >= 64",
                self.n_points
            )));
        }
        if self.steps_per_unit == 0 {
            return Err(Error::InvalidParameter("steps_per_unit must be >= 1".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> SpatialGrid {
        SpatialGrid::unit(self.n_points).expect("n_points validated")
    }
}

/// Gaussian packet with density standard deviation `width` and mean momentum
/// `momentum`, zeroed at the grid ends and renormalized.
pub fn gaussian_packet(
    center: f64,
    width: f64,
    momentum: f64,
    grid: &SpatialGrid,
    frame: Frame,
    params: &PhysicalParams,
) -> Result<ComplexField> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "packet width {width:e} must be positive"
        )));
    }
    if !grid.contains(center) {
        return Err(Error::OutOfDomain {
            what: "packet center",
            value: center,
            domain: format!("[{:e}, {:e}]", grid.lo(), grid.hi()),
        });
    }
    let amp = (2.0 * PI * width * width).powf(-0.25);
    let k = momentum / params.hbar();
    let mut f = ComplexField::from_fn(*grid, frame, |x| {
        Complex64::from_polar(amp * (-(x - center).powi(2) / (4.0 * width * width)).exp(), k * x)
    });
    let n = grid.n_points();
    f.values_mut()[0] = Complex64::new(0.0, 0.0);
    f.values_mut()[n - 1] = Complex64::new(0.0, 0.0);
    let kept = l2_norm(&f).powi(2);
    if kept < 1.0 - MAX_CLIPPED {
        return Err(Error::DegeneratePacket { kept });
    }
    f.normalized()
}

/// Spectral mean momentum hbar * sum k |psi_k|^2 / sum |psi_k|^2.
///
/// The field is treated as periodic over its grid, which is exact for fields
/// that vanish at both ends.
pub fn mean_momentum(f: &ComplexField, hbar: f64) -> f64 {
    let n = f.grid().n_points() - 1;
    let mut buf = f.values()[..n].to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let dk = 2.0 * PI / (n as f64 * f.grid().spacing());
    let (mut num, mut den) = (0.0, 0.0);
    for (m, c) in buf.iter().enumerate() {
        let k = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 } * dk;
        num += k * c.norm_sqr();
        den += c.norm_sqr();
    }
    hbar * num / den
}

/// One Crank–Nicolson step operator on the interior unknowns.
struct Stepper {
    interior: usize,
    inv_h2: f64,
    /// 2m / (pi hbar^2)
    pot_scale: f64,
    ys: Vec<f64>,
    lhs: Tridiagonal<Complex64>,
    rhs: Vec<Complex64>,
    pot: Vec<f64>,
}

impl Stepper {
    fn new(n_points: usize, params: &PhysicalParams) -> Self {
        let grid = SpatialGrid::unit(n_points).expect("validated size");
        let interior = n_points - 2;
        let h = grid.spacing();
        let zero = Complex64::new(0.0, 0.0);
        Self {
            interior,
            inv_h2: 1.0 / (h * h),
            pot_scale: 2.0 * params.mass() / (PI * params.hbar() * params.hbar()),
            ys: grid.points().collect(),
            lhs: Tridiagonal {
                lower: vec![zero; interior - 1],
                diag: vec![zero; interior],
                upper: vec![zero; interior - 1],
            },
            rhs: vec![zero; interior],
            pot: vec![0.0; n_points],
        }
    }

    /// Advances the full field (walls included) by `dt` in tau'.
    fn step(&mut self, phi: &mut [Complex64], dt: f64, potential: Option<&InducedPotential>) -> Result<()> {
        match potential {
            Some(p) => {
                for (v, &y) in self.pot.iter_mut().zip(&self.ys) {
                    *v = self.pot_scale * p.at_y(y);
                }
            }
            None => self.pot.iter_mut().for_each(|v| *v = 0.0),
        }
        let a = 0.5 * dt;
        let kin_d = 2.0 * self.inv_h2 / PI;
        let kin_o = -self.inv_h2 / PI;
        let m_d = 10.0 / 12.0;
        let m_o = 1.0 / 12.0;
        let v = &self.pot;
        let n = self.interior;
        for i in 0..n {
            let j = i + 1;
            // A = -(1/pi) delta^2/h^2 + M diag(V); rows of A and M
            let a_d = kin_d + m_d * v[j];
            let a_l = kin_o + m_o * v[j - 1];
            let a_u = kin_o + m_o * v[j + 1];
            self.lhs.diag[i] = Complex64::new(m_d, a * a_d);
            if i > 0 {
                self.lhs.lower[i - 1] = Complex64::new(m_o, a * a_l);
            }
            if i + 1 < n {
                self.lhs.upper[i] = Complex64::new(m_o, a * a_u);
            }
            let r_d = Complex64::new(m_d, -a * a_d);
            let r_l = Complex64::new(m_o, -a * a_l);
            let r_u = Complex64::new(m_o, -a * a_u);
            self.rhs[i] = r_l * phi[j - 1] + r_d * phi[j] + r_u * phi[j + 1];
        }
        self.lhs.solve_in_place(&mut self.rhs)?;
        phi[1..=n].copy_from_slice(&self.rhs);
        phi[0] = Complex64::new(0.0, 0.0);
        phi[n + 1] = Complex64::new(0.0, 0.0);
        Ok(())
    }
}

fn check_samples(samples: &[f64], what: &str) -> Result<()> {
    let mut prev = 0.0;
    for &s in samples {
        if s.is_nan() || s < prev {
            return Err(Error::InvalidParameter(format!(
                "{what} samples must be finite, non-negative and non-decreasing (got {s:e} after {prev:e})"
            )));
        }
        prev = s;
    }
    Ok(())
}

/// Evolves the comoving field from tau' = 0 and returns it at each requested tau'.
///
/// Steps are uniform in tau' between consecutive samples. The induced
/// potential is evaluated at the midpoint of every step.
pub fn evolve_comoving(
    phi0: &ComplexField,
    traj: &WallTrajectory,
    tau_primes: &[f64],
    config: &SolverConfig,
    params: &PhysicalParams,
) -> Result<Vec<ComplexField>> {
    config.validate()?;
    phi0.require_frame(Frame::ComovingY)?;
    check_samples(tau_primes, "tau'")?;
    let grid = config.grid();
    if phi0.grid().lo() != 0.0 || phi0.grid().hi() != 1.0 {
        return Err(Error::OutOfDomain {
            what: "comoving field extent",
            value: phi0.grid().hi() - phi0.grid().lo(),
            domain: "[0, 1]".into(),
        });
    }
    let map = TauMap::new(traj.clone(), *params);
    if let Some(&last) = tau_primes.last() {
        let limits = map.tau_prime_limit()?;
        if !limits.reachable(last) {
            return Err(Error::OutOfRange {
                tau: last,
                bound: limits.supremum(),
            });
        }
        // surfaces collisions and domain errors before any work is done
        traj.wall_state(map.t_of_tau_prime(last)?)?;
    }
    let dt_nominal = 1.0 / config.steps_per_unit as f64;
    if dt_nominal > grid.spacing() {
        log::warn!(
            "time step {dt_nominal:.3e} exceeds grid spacing {:.3e}; high modes will be poorly resolved",
            grid.spacing()
        );
    }
    let needs_potential = !traj.is_linear();
    let factor = map.factor();
    let mut cursor = map.cursor();
    let mut stepper = Stepper::new(config.n_points, params);
    let mut phi = resample(phi0, &grid).into_values();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(tau_primes.len());
    for &target in tau_primes {
        let span = target - now;
        let steps = (span * config.steps_per_unit as f64).ceil() as usize;
        if steps > 0 {
            let dt = span / steps as f64;
            for s in 0..steps {
                let mid = now + (s as f64 + 0.5) * dt;
                let pot = if needs_potential {
                    let t = cursor.t_at(mid / factor)?;
                    Some(induced_potential(traj, t, params)?)
                } else {
                    None
                };
                stepper.step(&mut phi, dt, pot.as_ref())?;
            }
            if phi.iter().any(|v| !v.is_finite()) {
                return Err(Error::Numerical(format!("non-finite field at tau' = {target:e}")));
            }
        }
        now = target;
        out.push(ComplexField::new(grid, phi.clone(), Frame::ComovingY)?);
    }
    Ok(out)
}

/// Evolves a lab field from t = 0 and returns it at each requested time.
///
/// The field is mapped to the comoving frame, evolved there and mapped back
/// onto the well's grid at every sample.
pub fn evolve_lab(
    psi0: &ComplexField,
    traj: &WallTrajectory,
    times: &[f64],
    config: &SolverConfig,
    params: &PhysicalParams,
) -> Result<Vec<ComplexField>> {
    config.validate()?;
    psi0.require_frame(Frame::LabX)?;
    check_samples(times, "time")?;
    let map = TauMap::new(traj.clone(), *params);
    let tau_primes = times
        .iter()
        .map(|&t| map.tau_prime_of_t(t))
        .collect::<Result<Vec<_>>>()?;
    let phi0 = comoving_forward(psi0, traj, 0.0, params)?;
    let states = evolve_comoving(&phi0, traj, &tau_primes, config, params)?;
    states
        .iter()
        .zip(times)
        .map(|(phi, &t)| comoving_inverse(phi, traj, t, params))
        .collect()
}

/// Density carpet: a sequence of lab-frame slices, each on its own well grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CarpetRecord {
    pub frame: Frame,
    pub times: Vec<f64>,
    pub slices: Vec<ComplexField>,
    /// Free-form provenance (trajectory, units, resolution, packet).
    pub metadata: BTreeMap<String, String>,
}

impl CarpetRecord {
    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    pub fn n_points(&self) -> usize {
        self.slices.first().map_or(0, |s| s.grid().n_points())
    }

    /// |psi|^2 per slice, time-major.
    pub fn densities(&self) -> Vec<Vec<f64>> {
        self.slices.iter().map(|s| s.density()).collect()
    }

    /// Densities in the normalized coordinate y, w |psi(w1 + w y)|^2.
    pub fn comoving_densities(&self) -> Vec<Vec<f64>> {
        self.slices
            .iter()
            .map(|s| {
                let w = s.grid().hi() - s.grid().lo();
                s.density().into_iter().map(|d| d * w).collect()
            })
            .collect()
    }

    /// Total probability of each slice.
    pub fn slice_norms(&self) -> Vec<f64> {
        self.slices.iter().map(|s| l2_norm(s).powi(2)).collect()
    }
}

/// Evolves `psi0` and samples the lab density at `n_t` uniform times in [0, t_max].
pub fn carpet(
    psi0: &ComplexField,
    traj: &WallTrajectory,
    t_max: f64,
    n_t: usize,
    config: &SolverConfig,
    params: &PhysicalParams,
) -> Result<CarpetRecord> {
    if n_t < 2 {
        return Err(Error::InvalidParameter(format!(
            "carpet needs at least 2 time samples, got {n_t}"
        )));
    }
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t_max = {t_max:e} must be finite and non-negative"
        )));
    }
    let times: Vec<f64> = (0..n_t).map(|i| t_max * i as f64 / (n_t - 1) as f64).collect();
    let slices = evolve_lab(psi0, traj, &times, config, params)?;
    let reference = l2_norm(psi0).powi(2);
    for (t, s) in times.iter().zip(&slices) {
        let norm = l2_norm(s).powi(2);
        if (norm - reference).abs() > CARPET_NORM_TOL * reference {
            return Err(Error::Numerical(format!(
                "slice at t = {t:e} holds probability {norm:.6}, initial {reference:.6}"
            )));
        }
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("trajectory".into(), format!("{traj:?}"));
    metadata.insert("units".into(), params.unit_system().name().into());
    metadata.insert("hbar".into(), format!("{:e}", params.hbar()));
    metadata.insert("mass".into(), format!("{:e}", params.mass()));
    metadata.insert("n_points".into(), config.n_points.to_string());
    metadata.insert("steps_per_unit".into(), config.steps_per_unit.to_string());
    Ok(CarpetRecord {
        frame: Frame::LabX,
        times,
        slices,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{slow_accel_mode, ModeIndex};
    use crate::grid::fidelity;
    use crate::revival::{propagator_oracle, revive_phi, RevivalSpec};

    fn nat() -> PhysicalParams {
        PhysicalParams::natural()
    }

    fn mode(n: u32, grid: SpatialGrid) -> ComplexField {
        ComplexField::from_fn(grid, Frame::ComovingY, |y| {
            Complex64::new(2f64.sqrt() * (n as f64 * PI * y).sin(), 0.0)
        })
    }

    #[test]
    fn packet_examples() {
        let g = SpatialGrid::unit(1001).unwrap();
        let p = gaussian_packet(0.5, 0.05, 0.0, &g, Frame::ComovingY, &nat()).unwrap();
        assert!((l2_norm(&p) - 1.0).abs() < 1e-10);
        assert!(matches!(
            gaussian_packet(0.02, 0.05, 0.0, &g, Frame::ComovingY, &nat()),
            Err(Error::DegeneratePacket { .. })
        ));
        assert!(gaussian_packet(1.5, 0.05, 0.0, &g, Frame::ComovingY, &nat()).is_err());
        assert!(gaussian_packet(0.5, 0.0, 0.0, &g, Frame::ComovingY, &nat()).is_err());
    }

    #[test]
    fn packet_momentum() {
        let g = SpatialGrid::unit(2049).unwrap();
        let p0 = 40.0;
        let f = gaussian_packet(0.5, 0.05, p0, &g, Frame::ComovingY, &nat()).unwrap();
        assert!((mean_momentum(&f, 1.0) - p0).abs() < 1e-6);
        // finite-difference gradient expectation as an independent estimate
        let v = f.values();
        let h = g.spacing();
        let fd: f64 = (1..v.len() - 1)
            .map(|i| (v[i].conj() * (v[i + 1] - v[i - 1]) / (2.0 * h)).im)
            .sum::<f64>()
            * h;
        assert!((fd - p0).abs() < 1e-2 * p0);
    }

    #[test]
    fn stationary_mode() {
        let cfg = SolverConfig::default();
        let phi0 = mode(1, cfg.grid());
        let tr = WallTrajectory::fixed(1.0).unwrap();
        let out = evolve_comoving(&phi0, &tr, &[0.1], &cfg, &nat()).unwrap();
        let expect = phi0.clone().scaled(Complex64::from_polar(1.0, -PI * 0.1));
        let ip = crate::grid::inner_product(&expect, &out[0]).unwrap();
        assert!(ip.norm() >= 1.0 - 1e-6);
        assert!((ip.arg()).abs() < 1e-6);
    }

    #[test]
    fn matches_revival_for_linear_walls() {
        // CN phase error at tau' = 1 needs more than the default step density
        let cfg = SolverConfig::new(1024, 8192).unwrap();
        let g = cfg.grid();
        let phi0 = gaussian_packet(0.3, 0.04, 0.0, &g, Frame::ComovingY, &nat()).unwrap();
        let tr = WallTrajectory::linear(1.0, 0.2, 0.9).unwrap();
        let out = evolve_comoving(&phi0, &tr, &[0.5, 1.0], &cfg, &nat()).unwrap();
        let half = revive_phi(&phi0, RevivalSpec::new(1, 2).unwrap()).unwrap();
        assert!(fidelity(&half, &out[0]).unwrap() >= 0.999);
        let one = propagator_oracle(&phi0, 1.0, 512).unwrap();
        assert!(fidelity(&one, &out[1]).unwrap() >= 0.999);
    }

    #[test]
    fn unitary_steps_and_dirichlet_walls() {
        let cfg = SolverConfig::new(256, 1024).unwrap();
        let g = cfg.grid();
        let phi0 = gaussian_packet(0.4, 0.05, 20.0, &g, Frame::ComovingY, &nat()).unwrap();
        let tr = WallTrajectory::sinusoidal(1.0, 0.1, 3.0).unwrap();
        let samples: Vec<f64> = (1..=20).map(|i| i as f64 / 1024.0).collect();
        let out = evolve_comoving(&phi0, &tr, &samples, &cfg, &nat()).unwrap();
        let mut prev = l2_norm(&phi0);
        for s in &out {
            let n = l2_norm(s);
            assert!((n - prev).abs() <= 1e-10);
            prev = n;
            assert_eq!(s.values()[0], Complex64::new(0.0, 0.0));
            assert_eq!(*s.values().last().unwrap(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn second_order_in_time() {
        let tr = WallTrajectory::sinusoidal(1.0, 0.2, 4.0).unwrap();
        let g = SpatialGrid::unit(128).unwrap();
        let phi0 = gaussian_packet(0.5, 0.08, 0.0, &g, Frame::ComovingY, &nat()).unwrap();
        let run = |steps| {
            let cfg = SolverConfig::new(128, steps).unwrap();
            evolve_comoving(&phi0, &tr, &[0.25], &cfg, &nat()).unwrap().remove(0)
        };
        let reference = run(4 * 1024);
        let e1 = run(256).l2_distance(&reference).unwrap();
        let e2 = run(512).l2_distance(&reference).unwrap();
        let ratio = e1 / e2;
        assert!((3.0..=5.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn lab_evolution_of_static_well() {
        let cfg = SolverConfig::new(256, 2048).unwrap();
        let w = 2.0;
        let tr = WallTrajectory::fixed(w).unwrap();
        let lab = SpatialGrid::new(0.0, w, 256).unwrap();
        let psi0 = gaussian_packet(0.8, 0.1, 1.0, &lab, Frame::LabX, &nat()).unwrap();
        let t = 0.3;
        let psi = evolve_lab(&psi0, &tr, &[t], &cfg, &nat()).unwrap().remove(0);
        let phi0 = comoving_forward(&psi0, &tr, 0.0, &nat()).unwrap();
        let tau_p = TauMap::new(tr.clone(), nat()).tau_prime_of_t(t).unwrap();
        let phi = evolve_comoving(&phi0, &tr, &[tau_p], &cfg, &nat()).unwrap().remove(0);
        for (a, b) in psi.values().iter().zip(phi.values()) {
            assert!((a - b / w.sqrt()).norm() < 1e-12);
        }
    }

    #[test]
    fn accelerating_box_reproduces_free_motion() {
        // rigid box whose walls accelerate uniformly; a packet far from the walls
        // must evolve as a free Gaussian in the lab
        let (w0, acc) = (12.0, 3.0);
        let knots: Vec<(f64, f64, f64)> = (-100..=300)
            .map(|i| {
                let t = i as f64 * 0.005;
                let d = 0.5 * acc * t * t;
                (t, d, w0 + d)
            })
            .collect();
        let tr = WallTrajectory::tabulated(&knots).unwrap();
        let lab = SpatialGrid::new(0.0, w0, 1024).unwrap();
        let (x0, sigma, p0) = (5.0, 0.5, 1.0);
        let psi0 = gaussian_packet(x0, sigma, p0, &lab, Frame::LabX, &nat()).unwrap();
        let t = 0.6;
        let cfg = SolverConfig::new(1024, 65536).unwrap();
        let psi = evolve_lab(&psi0, &tr, &[t], &cfg, &nat()).unwrap().remove(0);
        let free = |x: f64| {
            let s = Complex64::new(1.0, t / (2.0 * sigma * sigma));
            let amp = (2.0 * PI * sigma * sigma).powf(-0.25) / s.sqrt();
            let arg = -(x - x0 - p0 * t).powi(2) / (4.0 * sigma * sigma) / s;
            amp * (arg + Complex64::new(0.0, p0 * (x - x0) + p0 * x0 - 0.5 * p0 * p0 * t)).exp()
        };
        let exact = ComplexField::from_fn(*psi.grid(), Frame::LabX, free);
        assert!(fidelity(&exact, &psi).unwrap() >= 0.999);
    }

    #[test]
    fn slow_sinusoid_follows_adiabatic_mode() {
        let tr = WallTrajectory::sinusoidal(1.0, 0.05, 0.1).unwrap();
        let p = nat();
        let period = 2.0 * PI / 0.1;
        let lab = SpatialGrid::new(0.0, 1.0, 512).unwrap();
        let n1 = ModeIndex::new(1).unwrap();
        let psi0 = ComplexField::from_fn(lab, Frame::LabX, |x| slow_accel_mode(n1, &tr, x, 0.0, &p).unwrap());
        let cfg = SolverConfig::new(512, 256).unwrap();
        let psi = evolve_lab(&psi0, &tr, &[period], &cfg, &p).unwrap().remove(0);
        let expect = ComplexField::from_fn(*psi.grid(), Frame::LabX, |x| {
            slow_accel_mode(n1, &tr, x, period, &p).unwrap()
        });
        assert!(fidelity(&expect, &psi).unwrap() >= 0.98);
    }

    #[test]
    fn carpet_rows() {
        let tr = WallTrajectory::linear(1.0, 0.0, 0.5).unwrap();
        let g = SpatialGrid::unit(128).unwrap();
        let psi0 = gaussian_packet(0.4, 0.06, 0.0, &g, Frame::LabX, &nat()).unwrap();
        let cfg = SolverConfig::new(128, 512).unwrap();
        let c = carpet(&psi0, &tr, 0.5, 6, &cfg, &nat()).unwrap();
        assert_eq!(c.n_times(), 6);
        assert_eq!(c.n_points(), 128);
        let d = c.densities();
        for (a, b) in d[0].iter().zip(psi0.density()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(d.iter().flatten().all(|&v| v >= 0.0));
        assert!(c.slice_norms().iter().all(|n| (n - 1.0).abs() < 1e-3));
        assert!((c.slices[5].grid().hi() - 1.25).abs() < 1e-12);
        assert!(carpet(&psi0, &tr, 0.5, 1, &cfg, &nat()).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = SolverConfig::default();
        let tr = WallTrajectory::linear(1.0, 0.0, 1.0).unwrap();
        let phi0 = mode(1, cfg.grid());
        assert!(matches!(
            evolve_comoving(&phi0, &tr, &[2.0], &cfg, &nat()),
            Err(Error::OutOfRange { .. })
        ));
        assert!(evolve_comoving(&phi0, &tr, &[0.2, 0.1], &cfg, &nat()).is_err());
        assert!(evolve_comoving(&phi0.clone().with_frame(Frame::LabX), &tr, &[0.1], &cfg, &nat()).is_err());
        assert!(SolverConfig::new(32, 10).is_err());
        let closing = WallTrajectory::linear(1.0, 0.0, -1.0).unwrap();
        let lab = SpatialGrid::new(0.0, 1.0, 128).unwrap();
        let psi0 = gaussian_packet(0.5, 0.1, 0.0, &lab, Frame::LabX, &nat()).unwrap();
        let cfg = SolverConfig::new(128, 64).unwrap();
        assert!(matches!(
            evolve_lab(&psi0, &tr.clone(), &[0.1], &cfg, &nat()).map(|_| ()),
            Ok(())
        ));
        assert!(matches!(
            evolve_lab(&psi0, &closing, &[1.5], &cfg, &nat()),
            Err(Error::WallCollision { .. }) | Err(Error::OutOfDomain { .. })
        ));
    }
}
