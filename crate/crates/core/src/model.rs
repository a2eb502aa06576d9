//! Canonical domain types and derived quantities.
//!
//! All values are stored in strict SI. Types are immutable after
//! validation; every derived quantity is a pure function of its spec.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::MU_0;

/// Geometry and winding of the planar spiral coil.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoilSpec {
    /// Number of turns (>= 1).
    pub turns: u32,
    /// Inner radius of the innermost turn, m.
    pub inner_radius: f64,
    /// Conductor trace width, m.
    pub conductor_width: f64,
    /// Gap between adjacent turns, m.
    pub turn_spacing: f64,
    /// Electroplated conductor thickness, m.
    pub conductor_thickness: f64,
}

impl CoilSpec {
    pub fn new(
        turns: u32,
        inner_radius: f64,
        conductor_width: f64,
        turn_spacing: f64,
        conductor_thickness: f64,
    ) -> Result<Self> {
        if turns < 1 {
            return Err(Error::InvalidSpec {
                field: "coil.turns",
                reason: "must be >= 1".into(),
            });
        }
        for (field, v) in [
            ("coil.inner_radius", inner_radius),
            ("coil.conductor_width", conductor_width),
            ("coil.conductor_thickness", conductor_thickness),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidSpec {
                    field,
                    reason: format!("must be > 0, got {v}"),
                });
            }
        }
        if !(turn_spacing >= 0.0) || !turn_spacing.is_finite() {
            return Err(Error::InvalidSpec {
                field: "coil.turn_spacing",
                reason: format!("must be >= 0, got {turn_spacing}"),
            });
        }
        Ok(Self {
            turns,
            inner_radius,
            conductor_width,
            turn_spacing,
            conductor_thickness,
        })
    }

    /// Radial pitch of the winding. Derived as width + spacing; the
    /// datasheet's separately printed pitch value is geometrically
    /// inconsistent with its own width and spacing and is ignored.
    pub fn pitch(&self) -> f64 {
        self.conductor_width + self.turn_spacing
    }

    /// Outer radius of the winding envelope: the radius at which a further
    /// turn would start (inner_radius + turns * pitch).
    pub fn outer_radius(&self) -> f64 {
        self.inner_radius + self.turns as f64 * self.pitch()
    }

    /// Centerline radius of turn `n` (0-based).
    pub fn centerline_radius(&self, n: u32) -> f64 {
        self.inner_radius + self.conductor_width / 2.0 + n as f64 * self.pitch()
    }
}

/// Permanent magnet geometry and magnetization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MagnetSpec {
    /// Magnet (loaded-area) radius, m.
    pub radius: f64,
    /// Magnet thickness, m.
    pub thickness: f64,
    /// Remanent flux density B_r, T.
    pub remanence: f64,
    /// Coercivity, A/m. Informational only; not used by the force model.
    pub coercivity: Option<f64>,
}

impl MagnetSpec {
    pub fn new(radius: f64, thickness: f64, remanence: f64, coercivity: Option<f64>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidSpec {
                field: "magnet.radius",
                reason: format!("must be > 0, got {radius}"),
            });
        }
        if !(thickness > 0.0) {
            return Err(Error::InvalidSpec {
                field: "magnet.thickness",
                reason: format!("must be > 0, got {thickness}"),
            });
        }
        if !(remanence > 0.0 && remanence <= 1.5) {
            return Err(Error::InvalidSpec {
                field: "magnet.remanence",
                reason: format!("must be in (0, 1.5] T, got {remanence}"),
            });
        }
        Ok(Self {
            radius,
            thickness,
            remanence,
            coercivity,
        })
    }

    /// Magnet volume V_m = pi r^2 t, m^3.
    pub fn volume(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius * self.thickness
    }

    /// Rigid-magnet magnetization M_z = B_r / mu_0, A/m.
    pub fn magnetization(&self) -> f64 {
        self.remanence / MU_0
    }
}

/// Edge-clamped circular diaphragm geometry and material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiaphragmSpec {
    /// Plate radius a, m.
    pub radius: f64,
    /// Plate thickness h, m.
    pub thickness: f64,
    /// Elastic modulus E, Pa.
    pub youngs_modulus: f64,
    /// Poisson's ratio (0, 0.5]; exactly 0.5 is legal.
    pub poisson_ratio: f64,
    /// Yield strength, Pa.
    pub yield_strength: f64,
}

impl DiaphragmSpec {
    pub fn new(
        radius: f64,
        thickness: f64,
        youngs_modulus: f64,
        poisson_ratio: f64,
        yield_strength: f64,
    ) -> Result<Self> {
        for (field, v) in [
            ("diaphragm.radius", radius),
            ("diaphragm.thickness", thickness),
            ("diaphragm.youngs_modulus", youngs_modulus),
            ("diaphragm.yield_strength", yield_strength),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidSpec {
                    field,
                    reason: format!("must be > 0, got {v}"),
                });
            }
        }
        if !(poisson_ratio > 0.0 && poisson_ratio < 0.5 + 1e-9) {
            return Err(Error::InvalidSpec {
                field: "diaphragm.poisson_ratio",
                reason: format!("must be in (0, 0.5], got {poisson_ratio}"),
            });
        }
        Ok(Self {
            radius,
            thickness,
            youngs_modulus,
            poisson_ratio,
            yield_strength,
        })
    }

    /// Kirchhoff flexural rigidity D = E h^3 / (12 (1 - nu^2)), N·m.
    pub fn flexural_rigidity(&self) -> f64 {
        flexural_rigidity(self.youngs_modulus, self.thickness, self.poisson_ratio)
            .expect("validated spec")
    }

    /// Radius ratio kappa = a / c for a paired magnet.
    pub fn kappa(&self, magnet: &MagnetSpec) -> f64 {
        self.radius / magnet.radius
    }
}

/// D = E h^3 / (12 (1 - nu^2)). Errors on nu >= 1 where D loses meaning.
pub fn flexural_rigidity(youngs_modulus: f64, thickness: f64, poisson_ratio: f64) -> Result<f64> {
    if poisson_ratio >= 1.0 || poisson_ratio < 0.0 {
        return Err(Error::InvalidSpec {
            field: "diaphragm.poisson_ratio",
            reason: format!("invalid material: nu must be in [0, 1), got {poisson_ratio}"),
        });
    }
    Ok(youngs_modulus * thickness.powi(3) / (12.0 * (1.0 - poisson_ratio * poisson_ratio)))
}

/// One field sample (position, B_z, dB_z/dz) along or off the coil axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    /// Radial offset from the axis, m.
    pub r: f64,
    /// Height above the coil plane, m.
    pub z: f64,
    /// Axial flux density, T.
    pub bz: f64,
    /// Axial flux-density gradient, T/m.
    pub dbz_dz: f64,
}

/// Full inverse-design result. SI units; the report boundary converts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport {
    /// Target center deflection, m.
    pub target_deflection: f64,
    /// Force required to reach the target deflection, N (magnitude).
    pub required_force: f64,
    /// Coil current producing that force at the optimal gap, A.
    pub required_current: f64,
    /// Optimal coil-plane-to-magnet-mid-plane gap, m.
    pub optimal_gap: f64,
    /// Plastic limiting force of the diaphragm, N.
    pub limiting_force: f64,
    /// limiting_force / required_force.
    pub safety_factor_achieved: f64,
    /// True iff required_force * safety_factor <= limiting_force and
    /// required_current <= the configured ceiling.
    pub feasible: bool,
    /// Whether the force at the design point pulls the magnet toward the coil.
    pub attractive: bool,
    /// First pipeline stage whose feasibility check failed, if any.
    pub infeasible_stage: Option<&'static str>,
}
