//! Fractional revivals: quadratic Gauss sums, the box propagator at rational
//! rescaled times and the superposition-of-translates operator.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::frames::{comoving_forward, comoving_inverse, slow_accel_check, SlowAccelVerdict, TauMap};
use crate::grid::{ComplexField, Frame, SpatialGrid};
use crate::interp::CubicSpline;
use crate::trajectory::WallTrajectory;
use crate::units::PhysicalParams;

/// Coefficients below this modulus are treated as exact zeros.
const ZERO_COEFF: f64 = 1e-12;

/// Rational rescaled time tau' = p / q, stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RevivalSpec {
    p: u64,
    q: u64,
}

impl RevivalSpec {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("revival denominator q must be >= 1".into()));
        }
        let g = p.gcd(&q);
        Ok(Self { p: p / g, q: q / g })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn tau_prime(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// Nonzero Gauss coefficients c_s(p, 2q), one per translate s/q.
    pub fn coefficients(&self) -> Vec<GaussCoefficient> {
        (0..2 * self.q)
            .map(|s| GaussCoefficient {
                s,
                value: gauss_sum(self.p, self.q, s),
            })
            .filter(|c| c.value.norm() > ZERO_COEFF)
            .collect()
    }

    /// Shifts s/q of the kept translates, reduced to [0, 2).
    pub fn translates(&self) -> Vec<f64> {
        self.coefficients().iter().map(|c| c.s as f64 / self.q as f64).collect()
    }
}

impl fmt::Display for RevivalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for RevivalSpec {
    type Err = Error;

    /// Accepts "p/q" or a bare integer "p".
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse revival time {s:?}; expected p/q"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            ),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        RevivalSpec::new(p, q)
    }
}

/// One term c_s(p, 2q) of the theta function at a rational time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussCoefficient {
    pub s: u64,
    pub value: Complex64,
}

/// theta(x, p/q) as a comb of deltas at s/2q (in units of the period-2 variable).
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaAtRational {
    pub locations: Vec<f64>,
    pub coefficients: Vec<Complex64>,
}

/// Kahan-compensated complex accumulator.
#[derive(Default)]
struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    fn add(&mut self, v: Complex64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// (1/2q) sum_{r=0}^{2q-1} exp(2 pi i (p r^2 + s r) / 2q).
///
/// The exponent is reduced modulo 2q in integer arithmetic before taking the
/// exponential, so the phases are exact up to one rounding each.
pub fn gauss_sum(p: u64, q: u64, s: u64) -> Complex64 {
    assert!(q >= 1, "q must be positive");
    let m = 2 * q as u128;
    let (p, s) = (p as u128 % m, s as u128 % m);
    let mut acc = KahanSum::default();
    for r in 0..m {
        let k = (p * (r * r % m) + s * r) % m;
        acc.add(Complex64::from_polar(1.0, PI * k as f64 / q as f64));
    }
    acc.sum / m as f64
}

/// Closed form of c_s(1, 2q): exp(i pi (1 - s^2/q) / 4) / sqrt(q) when s and q
/// have the same parity, zero otherwise.
pub fn gauss_sum_closed(q: u64, s: u64) -> Complex64 {
    assert!(q >= 1, "q must be positive");
    if !(s + q).is_multiple_of(2) {
        return Complex64::new(0.0, 0.0);
    }
    // s^2/q reduced mod 8 keeps the angle small for large s
    let num = (s as u128 * s as u128) % (8 * q as u128);
    let angle = PI * (1.0 - num as f64 / q as f64) / 4.0;
    Complex64::from_polar(1.0 / (q as f64).sqrt(), angle)
}

/// Nonzero terms of theta at tau' = p/q.
pub fn theta_rational(spec: RevivalSpec) -> ThetaAtRational {
    let coeffs = spec.coefficients();
    ThetaAtRational {
        locations: coeffs.iter().map(|c| c.s as f64 / (2 * spec.q) as f64).collect(),
        coefficients: coeffs.iter().map(|c| c.value).collect(),
    }
}

fn require_unit_interval(phi: &ComplexField) -> Result<()> {
    let g = phi.grid();
    if g.lo() != 0.0 || g.hi() != 1.0 {
        return Err(Error::OutOfDomain {
            what: "field domain",
            value: g.hi() - g.lo(),
            domain: "[0, 1]".into(),
        });
    }
    Ok(())
}

/// Odd, period-2 continuation of a field given on [0, 1].
///
/// Lookups that land on grid nodes read the stored value directly; other
/// points use cubic-spline interpolation.
struct OddExtension<'a> {
    field: &'a ComplexField,
    splines: Option<(CubicSpline, CubicSpline)>,
}

impl<'a> OddExtension<'a> {
    fn new(field: &'a ComplexField) -> Self {
        Self { field, splines: None }
    }

    fn on_unit(&mut self, u: f64) -> Complex64 {
        let g = self.field.grid();
        let pos = u / g.spacing();
        let idx = pos.round();
        if (pos - idx).abs() < 1e-9 {
            return self.field.values()[(idx as usize).min(g.n_points() - 1)];
        }
        let (re, im) = self.splines.get_or_insert_with(|| {
            let xs: Vec<f64> = g.points().collect();
            let vals = self.field.values();
            (
                CubicSpline::new(xs.clone(), vals.iter().map(|v| v.re).collect()).expect("grid is increasing"),
                CubicSpline::new(xs, vals.iter().map(|v| v.im).collect()).expect("grid is increasing"),
            )
        });
        Complex64::new(re.eval(u), im.eval(u))
    }

    fn eval(&mut self, y: f64) -> Complex64 {
        let u = y - 2.0 * ((y + 1.0) / 2.0).floor();
        if u >= 0.0 {
            self.on_unit(u.min(1.0))
        } else {
            -self.on_unit((-u).min(1.0))
        }
    }
}

/// Value at `y` of the odd, period-2 extension of `phi` (given on [0, 1]).
pub fn extend_odd_periodic(phi: &ComplexField, y: f64) -> Result<Complex64> {
    require_unit_interval(phi)?;
    Ok(OddExtension::new(phi).eval(y))
}

/// Comoving field at tau' = p/q from the field at tau' = 0:
/// phi(y) = sum_s conj(c_s) phi0_ext(y - s/q).
pub fn revive_phi(phi0: &ComplexField, spec: RevivalSpec) -> Result<ComplexField> {
    require_unit_interval(phi0)?;
    let grid = *phi0.grid();
    let coeffs = spec.coefficients();
    let mut ext = OddExtension::new(phi0);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n_points()];
    for c in &coeffs {
        let shift = c.s as f64 / spec.q as f64;
        let w = c.value.conj();
        for (o, y) in out.iter_mut().zip(grid.points()) {
            *o += w * ext.eval(y - shift);
        }
    }
    // Dirichlet walls are exact zeros of every translate
    let n = out.len();
    out[0] = Complex64::new(0.0, 0.0);
    out[n - 1] = Complex64::new(0.0, 0.0);
    ComplexField::new(grid, out, phi0.frame())
}

/// Lab-frame revival: maps psi0 to the comoving frame, applies [`revive_phi`]
/// and maps back at the revival time. Returns the field and t_rev.
pub fn revive_psi(
    psi0: &ComplexField,
    traj: &WallTrajectory,
    spec: RevivalSpec,
    params: &PhysicalParams,
) -> Result<(ComplexField, f64)> {
    psi0.require_frame(Frame::LabX)?;
    let map = TauMap::new(traj.clone(), *params);
    let limits = map.tau_prime_limit()?;
    let tau_prime = spec.tau_prime();
    if !limits.reachable(tau_prime) {
        return Err(Error::UnreachableTau {
            requested: spec.to_string(),
            supremum: limits.supremum(),
        });
    }
    let t_rev = map.t_of_tau_prime(tau_prime)?;
    traj.wall_state(t_rev)?;
    if !traj.is_linear() && t_rev > 0.0 {
        let report = slow_accel_check(traj, 0.0, t_rev, params)?;
        if report.verdict == SlowAccelVerdict::Warn {
            log::warn!(
                "walls are not slowly accelerating (margin {:.3e} at t = {:.3e}); revival is approximate",
                report.max_margin,
                report.at_time
            );
        }
    }
    let phi0 = comoving_forward(psi0, traj, 0.0, params)?;
    let phi = revive_phi(&phi0, spec)?;
    Ok((comoving_inverse(&phi, traj, t_rev, params)?, t_rev))
}

/// All reduced p/q (p >= 1, q <= q_max) whose revival time is at most t_max,
/// sorted by time. Unreachable fractions are omitted.
pub fn revival_schedule(
    traj: &WallTrajectory,
    q_max: u64,
    t_max: f64,
    params: &PhysicalParams,
) -> Result<Vec<(RevivalSpec, f64)>> {
    if q_max == 0 {
        return Err(Error::InvalidParameter("q_max must be >= 1".into()));
    }
    let map = TauMap::new(traj.clone(), *params);
    let limits = map.tau_prime_limit()?;
    let horizon = match map.tau_prime_of_t(t_max) {
        Ok(tp) => tp,
        Err(_) => limits.supremum(),
    };
    let count = horizon * (q_max * q_max) as f64;
    if count.is_nan() || count > 1e7 {
        return Err(Error::InvalidParameter(format!(
            "schedule up to tau' = {horizon:e} with q_max = {q_max} is too large"
        )));
    }
    let slack = 1e-12 * t_max.abs();
    let mut out = Vec::new();
    for q in 1..=q_max {
        let p_max = (horizon * q as f64 + 1e-9).floor() as u64;
        for p in (1..=p_max).filter(|p| p.gcd(&q) == 1) {
            let spec = RevivalSpec { p, q };
            if !limits.reachable(spec.tau_prime()) {
                continue;
            }
            match map.t_of_tau_prime(spec.tau_prime()) {
                Ok(t) if t <= t_max + slack && traj.wall_state(t).is_ok() => out.push((spec, t)),
                _ => {}
            }
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.tau_prime().total_cmp(&b.0.tau_prime())));
    Ok(out)
}

/// Truncated eigenmode propagator on [0, 1]: expands phi0 in sqrt(2) sin(n pi y),
/// advances each coefficient by exp(-i pi n^2 tau'), and resums.
///
/// Coefficients come from the trapezoid rule on the field's grid, which is the
/// discrete sine transform and exact for band-limited fields.
pub fn propagator_oracle(phi0: &ComplexField, tau_prime: f64, n_modes: usize) -> Result<ComplexField> {
    require_unit_interval(phi0)?;
    if n_modes == 0 {
        return Err(Error::InvalidParameter("n_modes must be >= 1".into()));
    }
    let grid: SpatialGrid = *phi0.grid();
    let m = grid.n_points() - 1;
    // sin(pi k / m) for k in [0, 2m) covers sin(n pi y_j) via (n j) mod 2m
    let table: Vec<f64> = (0..2 * m).map(|k| (PI * k as f64 / m as f64).sin()).collect();
    let sine = |n: usize, j: usize| table[(n * j) % (2 * m)];
    let h = grid.spacing();
    let vals = phi0.values();
    let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
    for n in 1..=n_modes {
        let c: Complex64 = (1..m).map(|j| vals[j] * sine(n, j)).sum::<Complex64>() * (2f64.sqrt() * h);
        // n^2 tau' reduced mod 2 keeps the phase accurate for large n
        let turns = ((n * n) as f64 * tau_prime).rem_euclid(2.0);
        let c = c * Complex64::from_polar(2f64.sqrt(), -PI * turns);
        for (j, o) in out.iter_mut().enumerate().take(m).skip(1) {
            *o += c * sine(n, j);
        }
    }
    ComplexField::new(grid, out, phi0.frame())
}
