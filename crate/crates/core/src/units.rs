//! Physical constants and unit presets.
//!
//! Kernels are unit-agnostic: every formula takes `hbar` and `mass` from a
//! [`PhysicalParams`]. The natural preset sets both to one, the SI preset
//! uses CODATA values with the electron mass as default particle.

use crate::error::{Error, Result};

/// Reduced Planck constant in J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Electron rest mass in kg.
pub const ELECTRON_MASS_SI: f64 = 9.109_383_701_5e-31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitSystem {
    Natural,
    Si,
}

impl UnitSystem {
    pub fn name(self) -> &'static str {
        match self {
            UnitSystem::Natural => "natural",
            UnitSystem::Si => "si",
        }
    }
}

impl std::str::FromStr for UnitSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "natural" => Ok(UnitSystem::Natural),
            "si" => Ok(UnitSystem::Si),
            other => Err(Error::InvalidParameter(format!(
                "unknown unit system `{other}` (expected natural or si)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    hbar: f64,
    mass: f64,
    unit_system: UnitSystem,
}

impl PhysicalParams {
    /// hbar = m = 1.
    pub fn natural() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            unit_system: UnitSystem::Natural,
        }
    }

    /// SI units, electron mass.
    pub fn si_electron() -> Self {
        Self {
            hbar: HBAR_SI,
            mass: ELECTRON_MASS_SI,
            unit_system: UnitSystem::Si,
        }
    }

    pub fn new(unit_system: UnitSystem, hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        Ok(Self {
            hbar,
            mass,
            unit_system,
        })
    }

    /// Preset for `unit_system` with a custom particle mass.
    pub fn with_mass(unit_system: UnitSystem, mass: f64) -> Result<Self> {
        let hbar = match unit_system {
            UnitSystem::Natural => 1.0,
            UnitSystem::Si => HBAR_SI,
        };
        Self::new(unit_system, hbar, mass)
    }

    pub fn preset(unit_system: UnitSystem) -> Self {
        match unit_system {
            UnitSystem::Natural => Self::natural(),
            UnitSystem::Si => Self::si_electron(),
        }
    }

    #[inline]
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        self.mass
    }

    #[inline]
    pub fn unit_system(&self) -> UnitSystem {
        self.unit_system
    }

    /// Conversion factor tau' = factor * tau, i.e. hbar pi / 2m.
    #[inline]
    pub fn tau_prime_factor(&self) -> f64 {
        self.hbar * std::f64::consts::PI / (2.0 * self.mass)
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self::natural()
    }
}
