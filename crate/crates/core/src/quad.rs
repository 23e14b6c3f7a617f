//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 50;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// `b < a` is allowed and yields the negated integral.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol.abs().max(f64::MIN_POSITIVE), MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // always refine twice: coarse and refined estimates can agree by accident
    // on periodic integrands whose samples all hit zeros
    let exhausted = depth == 0 || (b - a).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs());
    // below this the difference is rounding noise and refinement cannot help
    let noise = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if exhausted || (delta.abs() <= (15.0 * tol).max(noise) && depth < MAX_DEPTH - 2) {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson over `[a, b]` split into `panels` equal sub-intervals.
///
/// Useful for long oscillatory integrands where the first coarse estimate
/// of a single adaptive call could be misleading.
pub fn composite_adaptive_simpson<F>(f: F, a: f64, b: f64, panels: usize, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let ptol = tol / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == panels { b } else { a + (i + 1) as f64 * h };
            adaptive_simpson(&f, lo, hi, ptol)
        })
        .sum()
}

/// Composite adaptive Simpson with a tolerance relative to the integral of |f|.
///
/// The magnitude scale comes from a fixed composite Simpson pass, so the
/// result is accurate in any unit system without hand-tuned absolute tolerances.
pub fn integrate_relative<F>(f: F, a: f64, b: f64, panels: usize, rel_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    let n = 16 * panels.max(1);
    let h = (b - a) / n as f64;
    let mut scale = f(a).abs() + f(b).abs();
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        scale += w * f(a + i as f64 * h).abs();
    }
    scale *= h.abs() / 3.0;
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    composite_adaptive_simpson(&f, a, b, panels, rel_tol * scale)
}

/// Composite trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let inner: f64 = values[1..n - 1].iter().sum();
            h * (inner + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1] (Golub–Welsch).
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let mut jacobi = nalgebra::DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = nalgebra::SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Nodes and weights of `panels` equal Gauss–Legendre panels of `order` points on [a, b].
pub fn composite_gauss_legendre(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * h * xi);
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}
