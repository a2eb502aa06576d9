//! Serialization: CSV table emitters and the design-report document in
//! JSON and text form. Boundary units are micrometers, amperes,
//! micronewtons, and tesla.

use crate::config::DesignConfig;
use crate::error::{Error, Result};
use crate::model::{DesignReport, FieldSample};
use crate::plate::{GridProfile, LimitBranch, RadialProfile, ShapeComparison};
use serde::Serialize;
use std::io::Write;

const M_TO_UM: f64 = 1e6;
const N_TO_UN: f64 = 1e6;

fn require_rows(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::Geometry(format!("refusing to emit an empty {what}")))
    } else {
        Ok(())
    }
}

/// `z_um,bz_T,dbz_dz_T_per_m`, rows in input order.
pub fn write_field_csv(samples: &[FieldSample], out: &mut dyn Write) -> Result<()> {
    require_rows(samples.len(), "field profile")?;
    writeln!(out, "z_um,bz_T,dbz_dz_T_per_m")?;
    for s in samples {
        writeln!(out, "{:e},{:e},{:e}", s.z * M_TO_UM, s.bz, s.dbz_dz)?;
    }
    Ok(())
}

/// `r_um,w_um`, rows in input order.
pub fn write_radial_csv(profile: &RadialProfile, out: &mut dyn Write) -> Result<()> {
    require_rows(profile.r.len(), "radial profile")?;
    writeln!(out, "r_um,w_um")?;
    for (r, w) in profile.r.iter().zip(&profile.w) {
        writeln!(out, "{:e},{:e}", r * M_TO_UM, w * M_TO_UM)?;
    }
    Ok(())
}

/// `x_um,y_um,w_um`, row-major over the grid.
pub fn write_grid_csv(profile: &GridProfile, out: &mut dyn Write) -> Result<()> {
    require_rows(profile.x.len() * profile.y.len(), "grid profile")?;
    writeln!(out, "x_um,y_um,w_um")?;
    for (ix, x) in profile.x.iter().enumerate() {
        for (iy, y) in profile.y.iter().enumerate() {
            writeln!(
                out,
                "{:e},{:e},{:e}",
                x * M_TO_UM,
                y * M_TO_UM,
                profile.w[ix][iy] * M_TO_UM
            )?;
        }
    }
    Ok(())
}

/// `current_a,force_uN`, rows in input order.
pub fn write_force_curve_csv(rows: &[(f64, f64)], out: &mut dyn Write) -> Result<()> {
    require_rows(rows.len(), "force curve")?;
    writeln!(out, "current_a,force_uN")?;
    for (current, force) in rows {
        writeln!(out, "{:e},{:e}", current, force * N_TO_UN)?;
    }
    Ok(())
}

/// `force_uN,w_eq2_um,w_fd_um`: analytic vs finite-difference deflection.
pub fn write_deflection_compare_csv(
    rows: &[(f64, f64, f64)],
    out: &mut dyn Write,
) -> Result<()> {
    require_rows(rows.len(), "deflection comparison")?;
    writeln!(out, "force_uN,w_eq2_um,w_fd_um")?;
    for (f, w_eq2, w_fd) in rows {
        writeln!(
            out,
            "{:e},{:e},{:e}",
            f * N_TO_UN,
            w_eq2 * M_TO_UM,
            w_fd * M_TO_UM
        )?;
    }
    Ok(())
}

/// `force_uN,w_circle_um,w_square_um,w_rect_um,ordered`.
pub fn write_shapes_csv(rows: &[ShapeComparison], out: &mut dyn Write) -> Result<()> {
    require_rows(rows.len(), "shape comparison")?;
    writeln!(out, "force_uN,w_circle_um,w_square_um,w_rect_um,ordered")?;
    for r in rows {
        writeln!(
            out,
            "{:e},{:e},{:e},{:e},{}",
            r.force * N_TO_UN,
            r.w_circle * M_TO_UM,
            r.w_square * M_TO_UM,
            r.w_rectangle * M_TO_UM,
            r.strictly_ordered
        )?;
    }
    Ok(())
}

/// `<parameter>,force_uN` with the parameter value in boundary units.
pub fn write_sweep_csv(
    parameter: &str,
    rows: &[(f64, f64)],
    out: &mut dyn Write,
) -> Result<()> {
    require_rows(rows.len(), "sweep table")?;
    writeln!(out, "{parameter},force_uN")?;
    for (value, force) in rows {
        writeln!(out, "{:e},{:e}", value, force * N_TO_UN)?;
    }
    Ok(())
}

/// Published datasheet limiting force for the reference 80 um PDMS
/// diaphragm, used only for the conflict notice below.
const DATASHEET_LIMIT_N: f64 = 377e-6;

/// Provenance notes attached to a report.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportProvenance {
    /// Config keys filled from schema defaults.
    pub defaults_applied: Vec<String>,
    /// Branch of the limiting-force formula that applied.
    pub limiting_force_branch: String,
    /// Force model used for the magnetic stages.
    pub force_model: String,
    /// Coil discretization fidelity (filament subdivisions per conductor).
    pub fidelity: u32,
    /// Present when the computed limit disagrees with the published
    /// datasheet value for the reference diaphragm.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limiting_force_notice: Option<String>,
}

/// The machine-diffable design report: everything in boundary units, plus
/// the config hash for traceability.
#[allow(non_snake_case)] // uN suffixes are part of the JSON schema
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub config_sha256: String,
    pub target_deflection_um: f64,
    pub required_force_uN: f64,
    pub required_current_a: f64,
    pub optimal_gap_um: f64,
    pub limiting_force_uN: f64,
    pub safety_factor_achieved: f64,
    pub feasible: bool,
    pub attractive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub infeasible_stage: Option<String>,
    pub provenance: ReportProvenance,
}

impl ReportDocument {
    pub fn new(
        report: &DesignReport,
        config: &DesignConfig,
        branch: LimitBranch,
        force_model: &str,
    ) -> Self {
        let d = &config.diaphragm;
        let notice = if (d.thickness - 80e-6).abs() < 0.5e-6
            && (d.yield_strength - 130e3).abs() < 1e3
        {
            Some(format!(
                "computed limiting force {:.1} uN exceeds the published datasheet \
                 value {:.0} uN for this diaphragm; the safety predicate holds \
                 under both values",
                report.limiting_force * N_TO_UN,
                DATASHEET_LIMIT_N * N_TO_UN
            ))
        } else {
            None
        };
        ReportDocument {
            schema_version: crate::config::SCHEMA_VERSION,
            config_sha256: config.sha256.clone(),
            target_deflection_um: report.target_deflection * M_TO_UM,
            required_force_uN: report.required_force * N_TO_UN,
            required_current_a: report.required_current,
            optimal_gap_um: report.optimal_gap * M_TO_UM,
            limiting_force_uN: report.limiting_force * N_TO_UN,
            safety_factor_achieved: report.safety_factor_achieved,
            feasible: report.feasible,
            attractive: report.attractive,
            infeasible_stage: report.infeasible_stage.map(str::to_string),
            provenance: ReportProvenance {
                defaults_applied: config
                    .defaults_applied
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                limiting_force_branch: branch.to_string(),
                force_model: force_model.to_string(),
                fidelity: config.fidelity,
                limiting_force_notice: notice,
            },
        }
    }

    pub fn write_json(&self, out: &mut dyn Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write_text(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(out, "design report (config sha256 {})", self.config_sha256)?;
        writeln!(out, "  target deflection   : {:.4} um", self.target_deflection_um)?;
        writeln!(out, "  required force      : {:.4} uN", self.required_force_uN)?;
        writeln!(out, "  required current    : {:.4} A", self.required_current_a)?;
        writeln!(out, "  optimal gap         : {:.2} um", self.optimal_gap_um)?;
        writeln!(out, "  limiting force      : {:.2} uN", self.limiting_force_uN)?;
        writeln!(out, "  safety margin       : {:.2}", self.safety_factor_achieved)?;
        writeln!(
            out,
            "  feasible            : {}{}",
            self.feasible,
            match &self.infeasible_stage {
                Some(stage) => format!(" (failed at stage `{stage}`)"),
                None => String::new(),
            }
        )?;
        writeln!(out, "  attractive          : {}", self.attractive)?;
        writeln!(out, "provenance:")?;
        writeln!(
            out,
            "  limiting-force branch: {}",
            self.provenance.limiting_force_branch
        )?;
        writeln!(out, "  force model          : {}", self.provenance.force_model)?;
        writeln!(out, "  coil fidelity        : {}", self.provenance.fidelity)?;
        if self.provenance.defaults_applied.is_empty() {
            writeln!(out, "  defaults applied     : none")?;
        } else {
            writeln!(
                out,
                "  defaults applied     : {}",
                self.provenance.defaults_applied.join(", ")
            )?;
        }
        if let Some(notice) = &self.provenance.limiting_force_notice {
            writeln!(out, "  notice               : {notice}")?;
        }
        Ok(())
    }
}
