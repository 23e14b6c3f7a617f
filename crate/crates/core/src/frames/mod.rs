//! Coordinate and gauge transformations between lab and comoving frames.

mod galilean;
mod greenberger;
mod induced;
mod niederer;
mod tau;

pub use galilean::{
    extended_galilean_forward, extended_galilean_inverse, extended_galilean_theta, galilean_boost,
    galilean_compose_theta, galilean_invert_theta,
};
pub use greenberger::{comoving_forward, comoving_inverse, greenberger_forward, greenberger_inverse, well_grid};
pub use induced::{
    extended_theta, extended_theta_completed_square, extended_theta_fixed_width, induced_potential,
    instantaneous_intersection, lower_wall_kinetic_integral, slow_accel_check, slow_accel_margin, ExtendedPhase,
    InducedPotential, SlowAccelReport, SlowAccelVerdict, SLOW_ACCEL_THRESHOLD,
};
pub use niederer::{
    appell_apply, appell_inverse, expansion_apply, expansion_compose, niederer_apply, time_translate, ExpansionElement,
};
pub use tau::{DirectionalLimit, TauCursor, TauForm, TauLimit, TauMap, TauPrimeLimits};
