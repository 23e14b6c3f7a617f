//! Wall trajectories and scalar displacement paths.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::interp::CubicSpline;

/// Positions of both walls and their first two time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallState {
    pub t: f64,
    pub w1: f64,
    pub w2: f64,
    pub w: f64,
    pub dw1: f64,
    pub dw2: f64,
    pub dw: f64,
    pub ddw1: f64,
    pub ddw2: f64,
    pub ddw: f64,
}

impl WallState {
    fn from_walls(t: f64, (w1, dw1, ddw1): (f64, f64, f64), (w2, dw2, ddw2): (f64, f64, f64)) -> Self {
        Self {
            t,
            w1,
            w2,
            w: w2 - w1,
            dw1,
            dw2,
            dw: dw2 - dw1,
            ddw1,
            ddw2,
            ddw: ddw2 - ddw1,
        }
    }

    /// Comoving coordinate y of lab position x.
    #[inline]
    pub fn to_y(&self, x: f64) -> f64 {
        (x - self.w1) / self.w
    }

    /// Lab position of comoving coordinate y.
    #[inline]
    pub fn to_x(&self, y: f64) -> f64 {
        self.w1 + y * self.w
    }

    /// Midpoint of the well.
    #[inline]
    pub fn center(&self) -> f64 {
        0.5 * (self.w1 + self.w2)
    }
}

/// Time-ordered wall samples interpolated by natural cubic splines.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedWalls {
    lower: CubicSpline,
    upper: CubicSpline,
}

impl TabulatedWalls {
    /// `samples` are `(t, w1, w2)` triples with strictly increasing `t`.
    pub fn new(samples: &[(f64, f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidParameter(
                "tabulated trajectory needs at least two samples".into(),
            ));
        }
        if let Some(&(t, w1, w2)) = samples.iter().find(|s| s.2 <= s.1) {
            return Err(Error::WallCollision { t, width: w2 - w1 });
        }
        let ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let lower = CubicSpline::new(ts.clone(), samples.iter().map(|s| s.1).collect())?;
        let upper = CubicSpline::new(ts, samples.iter().map(|s| s.2).collect())?;
        Ok(Self { lower, upper })
    }

    pub fn time_range(&self) -> (f64, f64) {
        self.lower.domain()
    }

    pub fn knots(&self) -> &[f64] {
        self.lower.knots()
    }

    pub fn lower_samples(&self) -> &[f64] {
        self.lower.values()
    }

    pub fn upper_samples(&self) -> &[f64] {
        self.upper.values()
    }
}

/// Motion of the two walls bounding the well.
#[derive(Debug, Clone, PartialEq)]
pub enum WallTrajectory {
    /// w1 = v1 t, w2 = w0 + v2 t.
    Linear {
        w0: f64,
        v1: f64,
        v2: f64,
    },
    /// Width w0 (1 + t/T)^n, symmetric about x = 0.
    Monomial {
        w0: f64,
        t_scale: f64,
        n: f64,
    },
    /// Lower wall fixed at 0, upper wall at w0 + a sin(omega t).
    Sinusoidal {
        w0: f64,
        amplitude: f64,
        omega: f64,
    },
    Tabulated(TabulatedWalls),
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

impl WallTrajectory {
    pub fn linear(w0: f64, v1: f64, v2: f64) -> Result<Self> {
        positive("w0", w0)?;
        finite("v1", v1)?;
        finite("v2", v2)?;
        Ok(Self::Linear { w0, v1, v2 })
    }

    /// Static well [0, w0].
    pub fn fixed(w0: f64) -> Result<Self> {
        Self::linear(w0, 0.0, 0.0)
    }

    pub fn monomial(w0: f64, t_scale: f64, n: f64) -> Result<Self> {
        positive("w0", w0)?;
        positive("T", t_scale)?;
        finite("n", n)?;
        Ok(Self::Monomial { w0, t_scale, n })
    }

    pub fn sinusoidal(w0: f64, amplitude: f64, omega: f64) -> Result<Self> {
        positive("w0", w0)?;
        finite("amplitude", amplitude)?;
        finite("omega", omega)?;
        Ok(Self::Sinusoidal { w0, amplitude, omega })
    }

    pub fn tabulated(samples: &[(f64, f64, f64)]) -> Result<Self> {
        Ok(Self::Tabulated(TabulatedWalls::new(samples)?))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Linear { .. } => "linear",
            Self::Monomial { .. } => "monomial",
            Self::Sinusoidal { .. } => "sinusoidal",
            Self::Tabulated(_) => "tabulated",
        }
    }

    /// True when both walls move with constant velocity.
    pub fn is_linear(&self) -> bool {
        match self {
            Self::Linear { .. } => true,
            Self::Monomial { n, .. } => *n == 0.0 || *n == 1.0,
            Self::Sinusoidal { amplitude, omega, .. } => *amplitude == 0.0 || *omega == 0.0,
            Self::Tabulated(_) => false,
        }
    }

    /// Initial width w(0) (for tabulated walls, at the first sample if 0 is out of range).
    pub fn initial_width(&self) -> f64 {
        match self {
            Self::Linear { w0, .. } | Self::Monomial { w0, .. } | Self::Sinusoidal { w0, .. } => *w0,
            Self::Tabulated(tab) => {
                let (lo, hi) = tab.time_range();
                let t = 0.0_f64.clamp(lo, hi);
                tab.upper.eval(t) - tab.lower.eval(t)
            }
        }
    }

    /// Walls without the positivity check on the width.
    fn raw_state(&self, t: f64) -> Result<WallState> {
        if !t.is_finite() {
            return Err(Error::OutOfDomain {
                what: "t",
                value: t,
                domain: "finite times".into(),
            });
        }
        Ok(match self {
            Self::Linear { w0, v1, v2 } => WallState::from_walls(t, (v1 * t, *v1, 0.0), (w0 + v2 * t, *v2, 0.0)),
            Self::Monomial { w0, t_scale, n } => {
                let s = 1.0 + t / t_scale;
                if s <= 0.0 {
                    return Err(Error::OutOfDomain {
                        what: "t",
                        value: t,
                        domain: format!("t > -T = {:e}", -t_scale),
                    });
                }
                let w = if *n == 0.0 { *w0 } else { w0 * s.powf(*n) };
                let dw = if *n == 0.0 {
                    0.0
                } else if *n == 1.0 {
                    w0 / t_scale
                } else {
                    n * w0 / t_scale * s.powf(n - 1.0)
                };
                let ddw = if *n == 0.0 || *n == 1.0 {
                    0.0
                } else {
                    n * (n - 1.0) * w0 / (t_scale * t_scale) * s.powf(n - 2.0)
                };
                WallState::from_walls(t, (-0.5 * w, -0.5 * dw, -0.5 * ddw), (0.5 * w, 0.5 * dw, 0.5 * ddw))
            }
            Self::Sinusoidal { w0, amplitude, omega } => {
                let (s, c) = (omega * t).sin_cos();
                WallState::from_walls(
                    t,
                    (0.0, 0.0, 0.0),
                    (
                        w0 + amplitude * s,
                        amplitude * omega * c,
                        -amplitude * omega * omega * s,
                    ),
                )
            }
            Self::Tabulated(tab) => {
                let (lo, hi) = tab.time_range();
                if t < lo || t > hi {
                    return Err(Error::OutOfDomain {
                        what: "t",
                        value: t,
                        domain: format!("[{lo:e}, {hi:e}]"),
                    });
                }
                WallState::from_walls(t, tab.lower.eval_all(t), tab.upper.eval_all(t))
            }
        })
    }

    /// Wall positions and derivatives at time `t`.
    pub fn wall_state(&self, t: f64) -> Result<WallState> {
        let s = self.raw_state(t)?;
        if s.w.is_nan() || s.w <= 0.0 {
            return Err(Error::WallCollision { t, width: s.w });
        }
        Ok(s)
    }

    /// Width w(t) without derivative bookkeeping.
    pub fn width(&self, t: f64) -> Result<f64> {
        self.wall_state(t).map(|s| s.w)
    }

    /// Time domain on which the trajectory is defined (ignoring collisions).
    pub fn time_domain(&self) -> (f64, f64) {
        match self {
            Self::Monomial { t_scale, .. } => (-t_scale, f64::INFINITY),
            Self::Tabulated(tab) => tab.time_range(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// First time after `t0` (moving in the direction of `t1`) where the walls meet,
    /// if it lies between `t0` and `t1`.
    pub fn collision_time(&self, t0: f64, t1: f64) -> Option<f64> {
        match self {
            Self::Linear { w0, v1, v2 } => {
                let dv = v2 - v1;
                if dv == 0.0 {
                    return None;
                }
                let tc = -w0 / dv;
                let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
                (tc >= lo && tc <= hi).then_some(tc)
            }
            Self::Sinusoidal { w0, amplitude, .. } if amplitude.abs() < *w0 => None,
            _ => {
                // sample for sign changes, then bisect
                let steps = self.quad_panels(t0, t1).max(64) * 8;
                let mut prev_t = t0;
                if self.raw_state(t0).ok()?.w <= 0.0 {
                    return Some(t0);
                }
                for i in 1..=steps {
                    let t = t0 + (t1 - t0) * i as f64 / steps as f64;
                    let w = match self.raw_state(t) {
                        Ok(s) => s.w,
                        Err(_) => return None,
                    };
                    if w <= 0.0 {
                        let (mut a, mut b) = (prev_t, t);
                        for _ in 0..200 {
                            let m = 0.5 * (a + b);
                            if self.raw_state(m).map(|s| s.w > 0.0).unwrap_or(false) {
                                a = m;
                            } else {
                                b = m;
                            }
                        }
                        return Some(b);
                    }
                    prev_t = t;
                }
                None
            }
        }
    }

    /// Number of equal panels to split `[t0, t1]` into for quadrature so that each
    /// panel resolves the trajectory's own time scale.
    pub fn quad_panels(&self, t0: f64, t1: f64) -> usize {
        let span = (t1 - t0).abs();
        let scale = match self {
            Self::Sinusoidal { omega, .. } if *omega != 0.0 => PI / (4.0 * omega.abs()),
            Self::Tabulated(tab) => tab
                .knots()
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min),
            _ => f64::INFINITY,
        };
        if !scale.is_finite() || span == 0.0 {
            1
        } else {
            ((span / scale).ceil() as usize).clamp(1, 1 << 20)
        }
    }
}

/// A scalar displacement d(t) with analytic first and second derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum Path {
    /// Sum of c_k t^k.
    Polynomial(Vec<f64>),
    /// amplitude * sin(omega t + phase).
    Sine {
        amplitude: f64,
        omega: f64,
        phase: f64,
    },
    Spline(CubicSpline),
    Sum(Vec<Path>),
}

impl Path {
    pub fn constant_velocity(v: f64) -> Self {
        Path::Polynomial(vec![0.0, v])
    }

    pub fn uniform_acceleration(a: f64) -> Self {
        Path::Polynomial(vec![0.0, 0.0, 0.5 * a])
    }

    pub fn zero() -> Self {
        Path::Polynomial(Vec::new())
    }

    /// (d, d', d'') at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        match self {
            Path::Polynomial(c) => {
                let (mut d, mut d1, mut d2) = (0.0, 0.0, 0.0);
                for &ck in c.iter().rev() {
                    d2 = d2 * t + d1 * 2.0;
                    d1 = d1 * t + d;
                    d = d * t + ck;
                }
                (d, d1, d2)
            }
            Path::Sine {
                amplitude,
                omega,
                phase,
            } => {
                let (s, c) = (omega * t + phase).sin_cos();
                (amplitude * s, amplitude * omega * c, -amplitude * omega * omega * s)
            }
            Path::Spline(s) => s.eval_all(t),
            Path::Sum(parts) => parts.iter().fold((0.0, 0.0, 0.0), |acc, p| {
                let v = p.eval(t);
                (acc.0 + v.0, acc.1 + v.1, acc.2 + v.2)
            }),
        }
    }

    pub fn plus(&self, other: &Path) -> Path {
        Path::Sum(vec![self.clone(), other.clone()])
    }

    /// True when d'' vanishes identically.
    pub fn is_inertial(&self) -> bool {
        match self {
            Path::Polynomial(c) => c.iter().skip(2).all(|&v| v == 0.0),
            Path::Sine { amplitude, omega, .. } => *amplitude == 0.0 || *omega == 0.0,
            Path::Spline(_) => false,
            Path::Sum(parts) => parts.iter().all(Path::is_inertial),
        }
    }

    pub(crate) fn time_scale(&self) -> f64 {
        match self {
            Path::Sine { omega, .. } if *omega != 0.0 => PI / (4.0 * omega.abs()),
            Path::Spline(s) => s.knots().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min),
            Path::Sum(parts) => parts.iter().map(Path::time_scale).fold(f64::INFINITY, f64::min),
            _ => f64::INFINITY,
        }
    }
}
