//! First-order WKB eigenmodes of the comoving Hamiltonian
//! -(hbar^2/2m) d^2/dy^2 + f y + k y^2 / 2 on [0, 1], and a sine-basis
//! diagonalization used as the reference.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::analytic::ModeIndex;
use crate::error::{Error, Result};
use crate::frames::InducedPotential;
use crate::quad::composite_gauss_legendre;
use crate::units::PhysicalParams;

/// Perturbation f y + k y^2 / 2 at a fixed rescaled time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerturbingPotential {
    pub f: f64,
    pub k: f64,
}

impl PerturbingPotential {
    pub fn new(f: f64, k: f64) -> Self {
        Self { f, k }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scaled(&self, eps: f64) -> Self {
        Self::new(eps * self.f, eps * self.k)
    }

    #[inline]
    pub fn at(&self, y: f64) -> f64 {
        self.f * y + 0.5 * self.k * y * y
    }
}

impl From<InducedPotential> for PerturbingPotential {
    fn from(p: InducedPotential) -> Self {
        Self::new(p.f, p.k)
    }
}

/// Integral of the perturbation over [0, 1], f/2 + k/6.
pub fn integral_delta_v(pot: &PerturbingPotential) -> f64 {
    pot.f / 2.0 + pot.k / 6.0
}

fn unperturbed_energy(n: f64, params: &PhysicalParams) -> f64 {
    let hbar = params.hbar();
    hbar * hbar * n * n * PI * PI / (2.0 * params.mass())
}

/// E_n = hbar^2 n^2 pi^2 / 2m + integral of the perturbation.
pub fn wkb_energy(n: ModeIndex, pot: &PerturbingPotential, params: &PhysicalParams) -> f64 {
    unperturbed_energy(n.as_f64(), params) + integral_delta_v(pot)
}

/// sqrt(2) sin(n pi y + (m / (hbar^2 n pi)) [f y (1 - y) / 2 + k y (1 - y^2) / 6]).
pub fn wkb_mode(n: ModeIndex, pot: &PerturbingPotential, y: f64, params: &PhysicalParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::OutOfDomain {
            what: "y",
            value: y,
            domain: "[0, 1]".into(),
        });
    }
    let nf = n.as_f64();
    let pre = params.mass() / (params.hbar() * params.hbar() * nf * PI);
    let bracket = pot.f * y * (1.0 - y) / 2.0 + pot.k * y * (1.0 - y * y) / 6.0;
    Ok(2f64.sqrt() * (nf * PI * y + pre * bracket).sin())
}

/// Eigenpairs of the Hamiltonian in the basis sqrt(2) sin(n pi y), n = 1..=n_basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpectrum {
    /// Ascending eigenvalues.
    pub energies: Vec<f64>,
    /// `vectors[i][n-1]` is the coefficient of basis function n in eigenvector i,
    /// signed so that the component along basis function i+1 is non-negative.
    pub vectors: Vec<Vec<f64>>,
}

impl OracleSpectrum {
    /// Value of eigenfunction `i` (0-based) at y.
    pub fn mode_value(&self, i: usize, y: f64) -> f64 {
        self.vectors[i]
            .iter()
            .enumerate()
            .map(|(m, c)| c * 2f64.sqrt() * ((m + 1) as f64 * PI * y).sin())
            .sum()
    }
}

/// Diagonalizes the perturbed Hamiltonian in a truncated sine basis.
///
/// Potential matrix elements use composite Gauss–Legendre quadrature with
/// panels short enough to resolve the highest basis product.
pub fn sine_basis_oracle(pot: &PerturbingPotential, n_basis: usize, params: &PhysicalParams) -> Result<OracleSpectrum> {
    if n_basis < 8 {
        return Err(Error::InvalidParameter(format!("n_basis = {n_basis} must be >= 8")));
    }
    let (nodes, weights) = composite_gauss_legendre(0.0, 1.0, n_basis, 16);
    // B[q, a] = sqrt(2) sin((a + 1) pi y_q) * sqrt(w_q)
    let basis = DMatrix::from_fn(nodes.len(), n_basis, |q, a| {
        2f64.sqrt() * ((a + 1) as f64 * PI * nodes[q]).sin() * weights[q].sqrt()
    });
    let weighted = DMatrix::from_fn(nodes.len(), n_basis, |q, a| basis[(q, a)] * pot.at(nodes[q]));
    let mut h = basis.transpose() * weighted;
    for a in 0..n_basis {
        h[(a, a)] += unperturbed_energy((a + 1) as f64, params);
    }
    let h = (&h + h.transpose()) * 0.5;
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n_basis).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .enumerate()
        .map(|(rank, &i)| {
            let col: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            let sign = if col[rank] < 0.0 { -1.0 } else { 1.0 };
            col.into_iter().map(|c| sign * c).collect()
        })
        .collect();
    Ok(OracleSpectrum { energies, vectors })
}
