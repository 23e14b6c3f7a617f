//! Coordinate maps of the free-particle symmetry group: expansions, the
//! Appell map, time translations and the general five-parameter element.
//!
//! All maps take and return `(x, t)` pairs.

use crate::error::{Error, Result};

/// An expansion with rate alpha (units 1/time).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionElement {
    pub alpha: f64,
}

impl ExpansionElement {
    pub fn new(alpha: f64) -> Self {
        Self { alpha }
    }

    pub fn apply(&self, x: f64, t: f64) -> Result<(f64, f64)> {
        expansion_apply(self.alpha, x, t)
    }

    pub fn compose(&self, other: &ExpansionElement) -> ExpansionElement {
        ExpansionElement::new(expansion_compose(self.alpha, other.alpha))
    }

    pub fn inverse(&self) -> ExpansionElement {
        ExpansionElement::new(-self.alpha)
    }
}

/// (x, t) -> (x / (1 + alpha t), t / (1 + alpha t)).
pub fn expansion_apply(alpha: f64, x: f64, t: f64) -> Result<(f64, f64)> {
    let den = 1.0 + alpha * t;
    if den == 0.0 {
        return Err(Error::Singularity { t });
    }
    Ok((x / den, t / den))
}

/// Expansions add under composition.
pub fn expansion_compose(alpha1: f64, alpha2: f64) -> f64 {
    alpha1 + alpha2
}

/// (x, t) -> (x / t, -1 / t).
pub fn appell_apply(x: f64, t: f64) -> Result<(f64, f64)> {
    if t == 0.0 {
        return Err(Error::Singularity { t });
    }
    Ok((x / t, -1.0 / t))
}

/// Inverse Appell map (X, T) -> (-X / T, -1 / T).
pub fn appell_inverse(x: f64, t: f64) -> Result<(f64, f64)> {
    if t == 0.0 {
        return Err(Error::Singularity { t });
    }
    Ok((-x / t, -1.0 / t))
}

/// (x, t) -> (x, t + b).
pub fn time_translate(b: f64, x: f64, t: f64) -> (f64, f64) {
    (x, t + b)
}

/// General element with dilation d, expansion alpha, time shift b, space shift a and boost v:
/// (x, t) -> (d (x + v t + a) / (1 + alpha (t + b)), d^2 (t + b) / (1 + alpha (t + b))).
pub fn niederer_apply(d: f64, alpha: f64, b: f64, a: f64, v: f64, x: f64, t: f64) -> Result<(f64, f64)> {
    let den = 1.0 + alpha * (t + b);
    if den == 0.0 {
        return Err(Error::Singularity { t });
    }
    Ok((d * (x + v * t + a) / den, d * d * (t + b) / den))
}
