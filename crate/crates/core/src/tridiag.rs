//! Tridiagonal linear solves.
//!
//! The Thomas algorithm is used when every pivot is comfortably nonzero,
//! otherwise the system is re-solved with row interchanges in the style of
//! LAPACK `gtsv`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar types accepted by the tridiagonal solvers.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn modulus(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// A tridiagonal matrix stored by diagonals.
///
/// `lower[i]` is entry (i+1, i), `upper[i]` is entry (i, i+1).
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal<T> {
    pub lower: Vec<T>,
    pub diag: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Scalar> Tridiagonal<T> {
    pub fn new(lower: Vec<T>, diag: Vec<T>, upper: Vec<T>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal band lengths {}/{}/{} are inconsistent",
                lower.len(),
                n,
                upper.len()
            )));
        }
        Ok(Self { lower, diag, upper })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// y = A x.
    pub fn apply(&self, x: &[T], y: &mut [T]) {
        let n = self.len();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc = acc + self.lower[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc = acc + self.upper[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// Solves A x = rhs, overwriting `rhs` with x.
    pub fn solve_in_place(&self, rhs: &mut [T]) -> Result<()> {
        assert_eq!(rhs.len(), self.len());
        let mut scratch = vec![T::zero(); self.len()];
        if thomas(self, rhs, &mut scratch) {
            return Ok(());
        }
        // thomas leaves rhs untouched on failure
        pivoted(self, rhs)
    }

    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }
}

fn scale_of<T: Scalar>(a: &Tridiagonal<T>) -> f64 {
    a.diag
        .iter()
        .chain(a.lower.iter())
        .chain(a.upper.iter())
        .fold(0.0_f64, |m, v| m.max(v.modulus()))
}

/// Returns false (leaving `rhs` unchanged) if a pivot is too small.
fn thomas<T: Scalar>(a: &Tridiagonal<T>, rhs: &mut [T], cprime: &mut [T]) -> bool {
    let n = a.len();
    let tiny = scale_of(a) * 1e3 * f64::EPSILON;
    let mut dprime = Vec::with_capacity(n);
    let mut denom = a.diag[0];
    if denom.modulus() <= tiny {
        return false;
    }
    dprime.push(rhs[0] / denom);
    if n > 1 {
        cprime[0] = a.upper[0] / denom;
    }
    for i in 1..n {
        denom = a.diag[i] - a.lower[i - 1] * cprime[i - 1];
        if denom.modulus() <= tiny {
            return false;
        }
        if i + 1 < n {
            cprime[i] = a.upper[i] / denom;
        }
        let prev = dprime[i - 1];
        dprime.push((rhs[i] - a.lower[i - 1] * prev) / denom);
    }
    rhs[n - 1] = dprime[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = dprime[i] - cprime[i] * rhs[i + 1];
    }
    true
}

fn pivoted<T: Scalar>(a: &Tridiagonal<T>, b: &mut [T]) -> Result<()> {
    let n = a.len();
    let mut dl = a.lower.clone();
    let mut d = a.diag.clone();
    let mut du = a.upper.clone();
    let mut du2 = vec![T::zero(); n.saturating_sub(2)];
    let singular = || Error::Numerical("singular tridiagonal system".into());

    for i in 0..n.saturating_sub(1) {
        if d[i].modulus() >= dl[i].modulus() {
            if d[i].modulus() == 0.0 {
                return Err(singular());
            }
            let fact = dl[i] / d[i];
            d[i + 1] = d[i + 1] - fact * du[i];
            b[i + 1] = b[i + 1] - fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -(fact * du2[i]);
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
        dl[i] = T::zero();
    }
    if d[n - 1].modulus() == 0.0 {
        return Err(singular());
    }
    b[n - 1] = b[n - 1] / d[n - 1];
    if n > 1 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_solve(a: &Tridiagonal<Complex64>, b: &[Complex64]) -> Vec<Complex64> {
        let n = a.len();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n];
        for i in 0..n {
            m[i][i] = a.diag[i];
            if i > 0 {
                m[i][i - 1] = a.lower[i - 1];
            }
            if i + 1 < n {
                m[i][i + 1] = a.upper[i];
            }
            m[i][n] = b[i];
        }
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| m[i][c].norm().total_cmp(&m[j][c].norm()))
                .unwrap();
            m.swap(c, p);
            let (top, rest) = m.split_at_mut(c + 1);
            let pivot = &top[c];
            for row in rest.iter_mut() {
                let f = row[c] / pivot[c];
                for (dst, &src) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *dst -= f * src;
                }
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut acc = m[i][n];
            for k in i + 1..n {
                acc -= m[i][k] * x[k];
            }
            x[i] = acc / m[i][i];
        }
        x
    }

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    }

    #[test]
    fn matches_dense_elimination() {
        let mut seed = 7;
        for n in [1usize, 2, 3, 5, 17, 64] {
            let mut c = || Complex64::new(lcg(&mut seed), lcg(&mut seed));
            let lower: Vec<_> = (0..n - 1).map(|_| c()).collect();
            let upper: Vec<_> = (0..n - 1).map(|_| c()).collect();
            let diag: Vec<_> = (0..n).map(|_| c() + 3.0).collect();
            let b: Vec<_> = (0..n).map(|_| c()).collect();
            let a = Tridiagonal::new(lower, diag, upper).unwrap();
            let x = a.solve(&b).unwrap();
            let oracle = dense_solve(&a, &b);
            for (u, v) in x.iter().zip(&oracle) {
                assert!((u - v).norm() < 1e-12, "n={n}");
            }
        }
    }

    #[test]
    fn zero_leading_pivot_uses_fallback() {
        // [[0,1,0],[1,0,1],[0,1,1]] x = [1,2,3]
        let a = Tridiagonal::new(vec![1.0, 1.0], vec![0.0, 0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let b = [1.0, 2.0, 3.0];
        let x = a.solve(&b).unwrap();
        let mut y = [0.0; 3];
        a.apply(&x, &mut y);
        for (u, v) in y.iter().zip(&b) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn random_weak_diagonal_fallback_matches_dense() {
        let mut seed = 99;
        let n = 40;
        let mut c = || Complex64::new(lcg(&mut seed), lcg(&mut seed));
        let lower: Vec<_> = (0..n - 1).map(|_| c()).collect();
        let upper: Vec<_> = (0..n - 1).map(|_| c()).collect();
        let mut diag: Vec<_> = (0..n).map(|_| c() * 0.1).collect();
        diag[0] = Complex64::new(0.0, 0.0);
        let b: Vec<_> = (0..n).map(|_| c()).collect();
        let a = Tridiagonal::new(lower, diag, upper).unwrap();
        let x = a.solve(&b).unwrap();
        let oracle = dense_solve(&a, &b);
        let scale = oracle.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
        for (u, v) in x.iter().zip(&oracle) {
            assert!((u - v).norm() < 1e-9 * scale.max(1.0));
        }
    }

    #[test]
    fn singular_reported() {
        let a = Tridiagonal::new(vec![0.0], vec![0.0, 1.0], vec![0.0]).unwrap();
        assert!(matches!(a.solve(&[1.0, 1.0]), Err(Error::Numerical(_))));
    }

    #[test]
    fn bad_shapes_rejected() {
        assert!(Tridiagonal::<f64>::new(vec![1.0], vec![1.0], vec![]).is_err());
    }
}
