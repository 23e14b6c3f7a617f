//! Uniform grids and sampled complex wavefunctions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interp::CubicSpline;

/// Uniform 1-D grid with `n_points` nodes from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    lo: f64,
    hi: f64,
    n_points: usize,
}

impl SpatialGrid {
    pub fn new(lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!("grid needs lo < hi, got [{lo}, {hi}]")));
        }
        if n_points < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 3 points, got {n_points}"
            )));
        }
        Ok(Self { lo, hi, n_points })
    }

    /// The unit interval [0, 1] used by comoving fields.
    pub fn unit(n_points: usize) -> Result<Self> {
        Self::new(0.0, 1.0, n_points)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n_points - 1) as f64
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Affine image of the grid, x -> offset + scale * x.
    pub fn mapped(&self, offset: f64, scale: f64) -> Result<Self> {
        Self::new(offset + scale * self.lo, offset + scale * self.hi, self.n_points)
    }
}

/// Which coordinate a field is sampled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// Laboratory coordinate x.
    LabX,
    /// Comoving coordinate y on [0, 1].
    ComovingY,
}

impl Frame {
    pub fn name(self) -> &'static str {
        match self {
            Frame::LabX => "lab_x",
            Frame::ComovingY => "comoving_y",
        }
    }
}

/// A complex wavefunction sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: SpatialGrid,
    values: Vec<Complex64>,
    frame: Frame,
}

impl ComplexField {
    pub fn new(grid: SpatialGrid, values: Vec<Complex64>, frame: Frame) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidParameter(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.n_points()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Numerical("field contains non-finite values".into()));
        }
        Ok(Self { grid, values, frame })
    }

    pub fn from_fn<F>(grid: SpatialGrid, frame: Frame, f: F) -> Self
    where
        F: Fn(f64) -> Complex64,
    {
        let values = grid.points().map(f).collect();
        Self { grid, values, frame }
    }

    pub fn zeros(grid: SpatialGrid, frame: Frame) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n_points()],
            frame,
        }
    }

    #[inline]
    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    #[inline]
    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn with_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    pub fn require_frame(&self, expected: Frame) -> Result<()> {
        if self.frame == expected {
            Ok(())
        } else {
            Err(Error::FrameMismatch {
                expected: expected.name(),
                found: self.frame.name(),
            })
        }
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.norm()))
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for v in &mut self.values {
            *v *= c;
        }
        self
    }

    /// Returns a copy scaled to unit L2 norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = l2_norm(self);
        if n.is_nan() || n <= 0.0 {
            return Err(Error::Numerical("cannot normalize a zero field".into()));
        }
        Ok(self.clone().scaled(Complex64::new(1.0 / n, 0.0)))
    }

    /// Largest pointwise |self - other| on a shared grid.
    pub fn max_abs_diff(&self, other: &ComplexField) -> Result<f64> {
        check_grids(self, other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm())))
    }

    /// Trapezoidal L2 distance ||self - other||.
    pub fn l2_distance(&self, other: &ComplexField) -> Result<f64> {
        check_grids(self, other)?;
        let diff: Vec<Complex64> = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        let d = ComplexField {
            grid: self.grid,
            values: diff,
            frame: self.frame,
        };
        Ok(l2_norm(&d))
    }
}

fn check_grids(a: &ComplexField, b: &ComplexField) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Trapezoidal approximation of the integral of conj(f) g.
pub fn inner_product(f: &ComplexField, g: &ComplexField) -> Result<Complex64> {
    check_grids(f, g)?;
    let n = f.values.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (a, b)) in f.values.iter().zip(&g.values).enumerate() {
        let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        acc += a.conj() * b * w;
    }
    Ok(acc * f.grid.spacing())
}

pub fn l2_norm(f: &ComplexField) -> f64 {
    let n = f.values.len();
    let s: f64 = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
            w * v.norm_sqr()
        })
        .sum();
    (s * f.grid.spacing()).sqrt()
}

/// Overlap modulus of the normalized fields, in [0, 1].
pub fn fidelity(a: &ComplexField, b: &ComplexField) -> Result<f64> {
    let ip = inner_product(a, b)?;
    let na = l2_norm(a);
    let nb = l2_norm(b);
    if !(na > 0.0 && nb > 0.0) {
        return Err(Error::Numerical("fidelity of a zero field".into()));
    }
    Ok(ip.norm() / (na * nb))
}

/// Cubic-spline resampling onto `grid`; points outside the source domain get 0.
pub fn resample(f: &ComplexField, grid: &SpatialGrid) -> ComplexField {
    if f.grid == *grid {
        return f.clone();
    }
    let xs: Vec<f64> = f.grid.points().collect();
    let re = CubicSpline::new(xs.clone(), f.values.iter().map(|v| v.re).collect())
        .expect("grid points are increasing and finite");
    let im =
        CubicSpline::new(xs, f.values.iter().map(|v| v.im).collect()).expect("grid points are increasing and finite");
    let (lo, hi) = (f.grid.lo(), f.grid.hi());
    ComplexField::from_fn(*grid, f.frame, |x| {
        if x < lo || x > hi {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(re.eval(x), im.eval(x))
        }
    })
}

/// Local momentum hbar * d(arg psi)/dx at interior node `i`.
///
/// The phase derivative is the central difference of the phase, taken as the
/// argument of psi_{i+1} conj(psi_{i-1}); this is exact for quadratic phases.
pub fn local_momentum(f: &ComplexField, i: usize, hbar: f64) -> Option<f64> {
    if i == 0 || i + 1 >= f.values.len() {
        return None;
    }
    let z = f.values[i + 1] * f.values[i - 1].conj();
    if z.norm() == 0.0 {
        return None;
    }
    Some(hbar * z.arg() / (2.0 * f.grid.spacing()))
}
