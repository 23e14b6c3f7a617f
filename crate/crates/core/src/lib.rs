//! Quantum particle in a box with moving walls: exact solutions, frame
//! transformations, fractional revivals, a comoving-frame TDSE solver and
//! WKB perturbation tools.

pub mod analytic;
pub mod error;
pub mod frames;
pub mod grid;
pub mod interp;
pub mod quad;
pub mod revival;
pub mod solver;
pub mod trajectory;
pub mod tridiag;
pub mod units;
pub mod wkb;

pub use analytic::ModeIndex;
pub use error::{Error, Result};
pub use frames::TauMap;
pub use grid::{ComplexField, Frame, SpatialGrid};
pub use revival::RevivalSpec;
pub use solver::{CarpetRecord, SolverConfig};
pub use trajectory::{Path, TabulatedWalls, WallState, WallTrajectory};
pub use units::{PhysicalParams, UnitSystem};
