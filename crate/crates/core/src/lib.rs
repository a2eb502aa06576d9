//! Design and verification toolkit for electromagnetically actuated
//! diaphragm micropumps.
//!
//! The actuator under study is a planar spiral microcoil on a substrate,
//! driving a thin permanent magnet mounted on an edge-clamped elastic
//! diaphragm. The crate models:
//!
//! * the coil's magnetic field, axial gradient, and resistance
//!   ([`magnetics`]),
//! * the force on the magnet, both at a point and volume-averaged over the
//!   magnet cylinder ([`magnetics`]),
//! * clamped thin-plate deflection and plastic limit loads, analytically and
//!   with independent finite-difference solvers ([`plate`]),
//! * the inverse design problem: target deflection -> required force ->
//!   optimal magnet standoff -> required current -> safety margin
//!   ([`design`]),
//! * JSON configuration and CSV/JSON result serialization ([`config`],
//!   [`io`]).
//!
//! Internally everything is strict SI; micrometer/micronewton conveniences
//! exist only at the config/report boundary.

pub mod banded;
pub mod config;
pub mod design;
pub mod elliptic;
pub mod error;
pub mod io;
pub mod magnetics;
pub mod model;
pub mod plate;
pub mod quadrature;

pub use error::{Error, Result};

/// Vacuum permeability, T·m/A.
pub const MU_0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Copper resistivity at 20 C, Ohm·m.
pub const COPPER_RESISTIVITY: f64 = 1.68e-8;

/// Meters per micrometer. Boundary conversions only.
pub const UM: f64 = 1e-6;

/// Convert meters to micrometers (report boundary).
pub fn m_to_um(m: f64) -> f64 {
    m / UM
}

/// Convert micrometers to meters (config boundary).
pub fn um_to_m(um: f64) -> f64 {
    um * UM
}
