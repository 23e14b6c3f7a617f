//! Rescaled time tau(t) = integral of dt / w(t)^2 and its inverse.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::integrate_relative;
use crate::trajectory::WallTrajectory;
use crate::units::PhysicalParams;

const REL_TOL: f64 = 1e-13;

/// Which evaluation strategy a [`TauMap`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TauForm {
    Linear,
    Monomial,
    MonomialHalf,
    Numeric,
}

/// Limit approached by tau' at one end of the time domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauLimit {
    Finite(f64),
    PosInfinite,
    NegInfinite,
}

impl TauLimit {
    pub fn value(self) -> f64 {
        match self {
            TauLimit::Finite(v) => v,
            TauLimit::PosInfinite => f64::INFINITY,
            TauLimit::NegInfinite => f64::NEG_INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, TauLimit::Finite(_))
    }
}

/// Limit of tau' together with the time at which it is approached
/// (infinite, a collision, or the edge of the trajectory's domain).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionalLimit {
    pub limit: TauLimit,
    pub edge_time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauPrimeLimits {
    /// As t increases from 0.
    pub forward: DirectionalLimit,
    /// As t decreases from 0.
    pub backward: DirectionalLimit,
}

impl TauPrimeLimits {
    pub fn supremum(&self) -> f64 {
        self.forward.limit.value()
    }

    pub fn infimum(&self) -> f64 {
        self.backward.limit.value()
    }

    /// True when tau' is attained at some valid time.
    pub fn reachable(&self, tau_prime: f64) -> bool {
        tau_prime > self.infimum() && tau_prime < self.supremum()
    }
}

/// Map between lab time t and rescaled time tau for one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct TauMap {
    traj: WallTrajectory,
    params: PhysicalParams,
    form: TauForm,
}

impl TauMap {
    pub fn new(traj: WallTrajectory, params: PhysicalParams) -> Self {
        let form = match &traj {
            WallTrajectory::Linear { .. } => TauForm::Linear,
            WallTrajectory::Monomial { n, .. } if *n == 0.5 => TauForm::MonomialHalf,
            WallTrajectory::Monomial { .. } => TauForm::Monomial,
            _ => TauForm::Numeric,
        };
        Self { traj, params, form }
    }

    pub fn form(&self) -> TauForm {
        self.form
    }

    pub fn trajectory(&self) -> &WallTrajectory {
        &self.traj
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    /// tau' = factor * tau.
    pub fn factor(&self) -> f64 {
        self.params.tau_prime_factor()
    }

    fn inv_w2(&self, t: f64) -> f64 {
        match self.traj.wall_state(t) {
            Ok(s) => 1.0 / (s.w * s.w),
            Err(_) => f64::NAN,
        }
    }

    fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        self.traj.wall_state(a)?;
        self.traj.wall_state(b)?;
        if let Some(tc) = self.traj.collision_time(a, b) {
            let width = self.traj.wall_state(tc).map(|s| s.w).unwrap_or(0.0);
            return Err(Error::WallCollision { t: tc, width });
        }
        let v = integrate_relative(|t| self.inv_w2(t), a, b, self.traj.quad_panels(a, b), REL_TOL);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical(format!("tau quadrature failed on [{a:e}, {b:e}]")))
        }
    }

    /// Rescaled time tau(t), with tau(0) = 0.
    pub fn tau_of_t(&self, t: f64) -> Result<f64> {
        let s = self.traj.wall_state(t)?;
        match (self.form, &self.traj) {
            (TauForm::Linear, WallTrajectory::Linear { w0, .. }) => {
                if let Some(tc) = self.traj.collision_time(0.0, t) {
                    return Err(Error::WallCollision { t: tc, width: 0.0 });
                }
                Ok(t / (w0 * s.w))
            }
            (TauForm::Monomial, WallTrajectory::Monomial { w0, t_scale, n }) => {
                let e = 1.0 - 2.0 * n;
                let u = 1.0 + t / t_scale;
                Ok(t_scale / (w0 * w0 * e) * (u.powf(e) - 1.0))
            }
            (TauForm::MonomialHalf, WallTrajectory::Monomial { w0, t_scale, .. }) => {
                Ok(t_scale / (w0 * w0) * (t / t_scale).ln_1p())
            }
            _ => self.integral(0.0, t),
        }
    }

    /// Inverse of [`TauMap::tau_of_t`].
    pub fn t_of_tau(&self, tau: f64) -> Result<f64> {
        if !tau.is_finite() {
            return Err(Error::OutOfRange { tau, bound: tau });
        }
        match (self.form, &self.traj) {
            (TauForm::Linear, WallTrajectory::Linear { w0, v1, v2 }) => {
                let dv = v2 - v1;
                let den = 1.0 - w0 * dv * tau;
                if den <= 0.0 {
                    return Err(Error::OutOfRange {
                        tau,
                        bound: 1.0 / (w0 * dv),
                    });
                }
                Ok(w0 * w0 * tau / den)
            }
            (TauForm::Monomial, WallTrajectory::Monomial { w0, t_scale, n }) => {
                let e = 1.0 - 2.0 * n;
                let u = 1.0 + tau * e * w0 * w0 / t_scale;
                if u <= 0.0 {
                    return Err(Error::OutOfRange {
                        tau,
                        bound: -t_scale / (e * w0 * w0),
                    });
                }
                Ok(t_scale * (u.powf(1.0 / e) - 1.0))
            }
            (TauForm::MonomialHalf, WallTrajectory::Monomial { w0, t_scale, .. }) => {
                Ok(t_scale * (tau * w0 * w0 / t_scale).exp_m1())
            }
            _ => self.numeric_inverse(tau),
        }
    }

    pub fn tau_prime_of_t(&self, t: f64) -> Result<f64> {
        Ok(self.factor() * self.tau_of_t(t)?)
    }

    pub fn t_of_tau_prime(&self, tau_prime: f64) -> Result<f64> {
        self.t_of_tau(tau_prime / self.factor()).map_err(|e| match e {
            Error::OutOfRange { bound, .. } => Error::OutOfRange {
                tau: tau_prime,
                bound: bound * self.factor(),
            },
            other => other,
        })
    }

    /// Finds the valid-time edge between `good` (valid) and `bad` (invalid).
    fn domain_edge(&self, mut good: f64, mut bad: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (good + bad);
            if mid == good || mid == bad {
                break;
            }
            if self.traj.wall_state(mid).is_ok() {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    }

    fn numeric_inverse(&self, tau: f64) -> Result<f64> {
        if tau == 0.0 {
            return Ok(0.0);
        }
        let dir = tau.signum();
        let w0 = self.traj.wall_state(0.0)?.w;
        // bracket [lo, hi] in the direction of tau with tau(lo) short of the target
        let mut lo = 0.0;
        let mut tau_lo = 0.0;
        let mut step = tau.abs() * w0 * w0;
        let hi;
        let mut guard = 0;
        loop {
            guard += 1;
            let cand = lo + dir * step;
            let collision = self.traj.collision_time(lo, cand);
            let valid = self.traj.wall_state(cand).is_ok() && collision.is_none();
            if valid {
                let v = tau_lo + self.integral(lo, cand)?;
                if (v - tau) * dir >= 0.0 {
                    hi = cand;
                    break;
                }
                lo = cand;
                tau_lo = v;
                step *= 2.0;
            } else {
                let edge = match collision {
                    Some(tc) => self.domain_edge(lo, tc),
                    None => self.domain_edge(lo, cand),
                };
                let v = tau_lo + self.integral(lo, edge)?;
                if (v - tau) * dir >= 0.0 {
                    hi = edge;
                    break;
                }
                return Err(Error::OutOfRange { tau, bound: v });
            }
            if guard > 2000 {
                return Err(Error::OutOfRange { tau, bound: tau_lo });
            }
        }
        // bisection safeguarded Newton; tau is increasing in t
        let (mut a, mut b, mut fa) = (lo, hi, tau_lo - tau);
        let guess = a + (tau - tau_lo) * w0 * w0;
        let mut t = if (guess - a) * (guess - b) < 0.0 {
            guess
        } else {
            0.5 * (a + b)
        };
        for _ in 0..200 {
            let ft = tau_lo + self.integral(lo, t)? - tau;
            if ft == 0.0 {
                return Ok(t);
            }
            if (ft < 0.0) == (fa < 0.0) {
                a = t;
                fa = ft;
            } else {
                b = t;
            }
            let w = self.traj.wall_state(t)?.w;
            let newton = t - ft * w * w;
            let inside = (newton - a) * (newton - b) < 0.0;
            let next = if inside { newton } else { 0.5 * (a + b) };
            if (next - t).abs() <= 1e-13 * t.abs().max(w0 * w0 * f64::EPSILON) {
                return Ok(next);
            }
            t = next;
        }
        Err(Error::Numerical(format!(
            "t_of_tau failed to converge for tau = {tau:e}"
        )))
    }

    /// Limits of tau' as t runs forward to the end of its domain and backward to the start.
    pub fn tau_prime_limit(&self) -> Result<TauPrimeLimits> {
        let f = self.factor();
        let inf = f64::INFINITY;
        let lim = |limit, edge_time| DirectionalLimit { limit, edge_time };
        Ok(match &self.traj {
            WallTrajectory::Linear { w0, v1, v2 } => {
                let dv = v2 - v1;
                if dv > 0.0 {
                    TauPrimeLimits {
                        forward: lim(TauLimit::Finite(f / (w0 * dv)), inf),
                        backward: lim(TauLimit::NegInfinite, -w0 / dv),
                    }
                } else if dv < 0.0 {
                    TauPrimeLimits {
                        forward: lim(TauLimit::PosInfinite, -w0 / dv),
                        backward: lim(TauLimit::Finite(f / (w0 * dv)), -inf),
                    }
                } else {
                    TauPrimeLimits {
                        forward: lim(TauLimit::PosInfinite, inf),
                        backward: lim(TauLimit::NegInfinite, -inf),
                    }
                }
            }
            WallTrajectory::Monomial { w0, t_scale, n } => {
                let edge = -t_scale;
                if *n == 0.5 {
                    TauPrimeLimits {
                        forward: lim(TauLimit::PosInfinite, inf),
                        backward: lim(TauLimit::NegInfinite, edge),
                    }
                } else {
                    let sigma =
                        PI * self.params.hbar() * t_scale / (2.0 * self.params.mass() * w0 * w0 * (1.0 - 2.0 * n));
                    if *n < 0.5 {
                        TauPrimeLimits {
                            forward: lim(TauLimit::PosInfinite, inf),
                            backward: lim(TauLimit::Finite(-sigma), edge),
                        }
                    } else {
                        TauPrimeLimits {
                            forward: lim(TauLimit::Finite(-sigma), inf),
                            backward: lim(TauLimit::NegInfinite, edge),
                        }
                    }
                }
            }
            WallTrajectory::Sinusoidal { .. } => {
                // width is bounded above, so tau grows at least linearly until any collision,
                // and diverges at a collision
                let fwd = self.traj.collision_time(0.0, 1e6 * self.period_hint()).unwrap_or(inf);
                let bwd = self.traj.collision_time(0.0, -1e6 * self.period_hint()).unwrap_or(-inf);
                TauPrimeLimits {
                    forward: lim(TauLimit::PosInfinite, fwd),
                    backward: lim(TauLimit::NegInfinite, bwd),
                }
            }
            WallTrajectory::Tabulated(tab) => {
                let (lo, hi) = tab.time_range();
                if !(lo <= 0.0 && 0.0 <= hi) {
                    return Err(Error::Unsupported("tabulated trajectory must contain t = 0"));
                }
                TauPrimeLimits {
                    forward: lim(TauLimit::Finite(self.tau_prime_of_t(hi)?), hi),
                    backward: lim(TauLimit::Finite(self.tau_prime_of_t(lo)?), lo),
                }
            }
        })
    }

    fn period_hint(&self) -> f64 {
        match &self.traj {
            WallTrajectory::Sinusoidal { omega, .. } if *omega != 0.0 => 2.0 * PI / omega.abs(),
            _ => 1.0,
        }
    }

    /// Incremental evaluator of t(tau) for monotone sweeps.
    pub fn cursor(&self) -> TauCursor<'_> {
        TauCursor {
            map: self,
            t: 0.0,
            tau: 0.0,
        }
    }
}

/// Tracks a known point (t, tau) so that nearby inversions only integrate short intervals.
#[derive(Debug, Clone)]
pub struct TauCursor<'a> {
    map: &'a TauMap,
    t: f64,
    tau: f64,
}

impl TauCursor<'_> {
    pub fn position(&self) -> (f64, f64) {
        (self.t, self.tau)
    }

    /// Lab time at rescaled time `tau`, moving the cursor there.
    pub fn t_at(&mut self, tau: f64) -> Result<f64> {
        if self.map.form != TauForm::Numeric {
            let t = self.map.t_of_tau(tau)?;
            self.t = t;
            self.tau = tau;
            return Ok(t);
        }
        if tau == self.tau {
            return Ok(self.t);
        }
        let (t0, tau0) = (self.t, self.tau);
        let mut t = t0;
        for _ in 0..30 {
            let w = self.map.traj.wall_state(t)?.w;
            let ft = tau0 + self.map.integral(t0, t)? - tau;
            let next = t - ft * w * w;
            let done = (next - t).abs() <= 1e-14 * next.abs().max((next - t0).abs()).max(f64::MIN_POSITIVE);
            t = next;
            if done {
                self.t = t;
                self.tau = tau0 + self.map.integral(t0, t)?;
                return Ok(t);
            }
        }
        let t = self.map.t_of_tau(tau)?;
        self.t = t;
        self.tau = tau;
        Ok(t)
    }
}
