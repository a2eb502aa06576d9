//! External JSON configuration: schema, defaults, validation, and the
//! config hash embedded in reports for traceability.
//!
//! Boundary units are micrometers / amperes / tesla / pascals; `resolve`
//! converts to SI.

use crate::error::{Error, Result};
use crate::model::{CoilSpec, DiaphragmSpec, MagnetSpec};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_COIL_THICKNESS_UM: f64 = 20.0;
pub const DEFAULT_SAFETY_FACTOR: f64 = 2.0;
pub const DEFAULT_CURRENT_CEILING_A: f64 = 1.0;
pub const DEFAULT_QUADRATURE_ORDER: u32 = 16;
pub const DEFAULT_FD_NODES: u32 = 512;
pub const DEFAULT_FIDELITY: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: u32,
    coil: RawCoil,
    magnet: RawMagnet,
    diaphragm: RawDiaphragm,
    target: RawTarget,
    #[serde(default)]
    numerics: RawNumerics,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoil {
    inner_radius_um: f64,
    turns: u32,
    width_um: f64,
    spacing_um: f64,
    thickness_um: Option<f64>,
    current_a: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMagnet {
    radius_um: f64,
    thickness_um: f64,
    remanence_t: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiaphragm {
    radius_um: f64,
    thickness_um: f64,
    youngs_modulus_pa: f64,
    poisson_ratio: f64,
    yield_strength_pa: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    deflection_um: f64,
    safety_factor: Option<f64>,
    current_ceiling_a: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNumerics {
    quadrature_order: Option<u32>,
    fd_nodes: Option<u32>,
    fidelity: Option<u32>,
}

/// Fully validated configuration in SI units, with a record of which
/// defaults were filled in.
#[derive(Debug, Clone)]
pub struct DesignConfig {
    pub coil: CoilSpec,
    /// Operating coil current, A.
    pub current: f64,
    pub magnet: MagnetSpec,
    pub diaphragm: DiaphragmSpec,
    /// Target center deflection, m.
    pub target_deflection: f64,
    pub safety_factor: f64,
    pub current_ceiling: f64,
    pub quadrature_order: u32,
    pub fd_nodes: u32,
    pub fidelity: u32,
    /// Keys whose values came from schema defaults, for the provenance block.
    pub defaults_applied: Vec<&'static str>,
    /// SHA-256 of the raw config bytes, hex.
    pub sha256: String,
}

fn positive(key: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config {
            key: key.into(),
            reason: format!("must be a positive finite number, got {v}"),
        })
    }
}

fn non_negative(key: &'static str, v: f64) -> Result<f64> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config {
            key: key.into(),
            reason: format!("must be >= 0 and finite, got {v}"),
        })
    }
}

const UM: f64 = 1e-6;

/// Parse and validate a config file; every failure names the offending key.
pub fn parse_config(path: &Path) -> Result<DesignConfig> {
    let bytes = std::fs::read(path)?;
    parse_config_bytes(&bytes)
}

pub fn parse_config_bytes(bytes: &[u8]) -> Result<DesignConfig> {
    let raw: RawConfig = serde_json::from_slice(bytes)?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(Error::Config {
            key: "schema_version".into(),
            reason: format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                raw.schema_version
            ),
        });
    }
    let mut defaults_applied = Vec::new();

    if raw.coil.turns == 0 {
        return Err(Error::Config {
            key: "coil.turns".into(),
            reason: "must be >= 1".into(),
        });
    }
    let coil_thickness = match raw.coil.thickness_um {
        Some(t) => positive("coil.thickness_um", t)?,
        None => {
            defaults_applied.push("coil.thickness_um");
            DEFAULT_COIL_THICKNESS_UM
        }
    };
    let coil = CoilSpec::new(
        raw.coil.turns,
        positive("coil.inner_radius_um", raw.coil.inner_radius_um)? * UM,
        positive("coil.width_um", raw.coil.width_um)? * UM,
        non_negative("coil.spacing_um", raw.coil.spacing_um)? * UM,
        coil_thickness * UM,
    )?;
    let current = positive("coil.current_a", raw.coil.current_a)?;

    let magnet = MagnetSpec::new(
        positive("magnet.radius_um", raw.magnet.radius_um)? * UM,
        positive("magnet.thickness_um", raw.magnet.thickness_um)? * UM,
        positive("magnet.remanence_t", raw.magnet.remanence_t)?,
        None,
    )?;

    let nu = raw.diaphragm.poisson_ratio;
    if !(nu > 0.0 && nu <= 0.5 + 1e-9) {
        return Err(Error::Config {
            key: "diaphragm.poisson_ratio".into(),
            reason: format!("must lie in (0, 0.5], got {nu}"),
        });
    }
    let diaphragm = DiaphragmSpec::new(
        positive("diaphragm.radius_um", raw.diaphragm.radius_um)? * UM,
        positive("diaphragm.thickness_um", raw.diaphragm.thickness_um)? * UM,
        positive("diaphragm.youngs_modulus_pa", raw.diaphragm.youngs_modulus_pa)?,
        nu,
        positive("diaphragm.yield_strength_pa", raw.diaphragm.yield_strength_pa)?,
    )?;
    if magnet.radius >= diaphragm.radius {
        return Err(Error::Config {
            key: "magnet.radius_um".into(),
            reason: format!(
                "magnet radius ({}) must be smaller than diaphragm radius ({})",
                raw.magnet.radius_um, raw.diaphragm.radius_um
            ),
        });
    }

    let target_deflection = non_negative("target.deflection_um", raw.target.deflection_um)? * UM;
    let safety_factor = match raw.target.safety_factor {
        Some(s) => positive("target.safety_factor", s)?,
        None => {
            defaults_applied.push("target.safety_factor");
            DEFAULT_SAFETY_FACTOR
        }
    };
    let current_ceiling = match raw.target.current_ceiling_a {
        Some(c) => positive("target.current_ceiling_a", c)?,
        None => {
            defaults_applied.push("target.current_ceiling_a");
            DEFAULT_CURRENT_CEILING_A
        }
    };

    let quadrature_order = match raw.numerics.quadrature_order {
        Some(q) if (2..=64).contains(&q) => q,
        Some(q) => {
            return Err(Error::Config {
                key: "numerics.quadrature_order".into(),
                reason: format!("must lie in [2, 64], got {q}"),
            })
        }
        None => {
            defaults_applied.push("numerics.quadrature_order");
            DEFAULT_QUADRATURE_ORDER
        }
    };
    let fd_nodes = match raw.numerics.fd_nodes {
        Some(n) if n >= 64 => n,
        Some(n) => {
            return Err(Error::Config {
                key: "numerics.fd_nodes".into(),
                reason: format!("must be >= 64, got {n}"),
            })
        }
        None => {
            defaults_applied.push("numerics.fd_nodes");
            DEFAULT_FD_NODES
        }
    };
    let fidelity = match raw.numerics.fidelity {
        Some(f) if (1..=8).contains(&f) => f,
        Some(f) => {
            return Err(Error::Config {
                key: "numerics.fidelity".into(),
                reason: format!("must lie in [1, 8], got {f}"),
            })
        }
        None => {
            defaults_applied.push("numerics.fidelity");
            DEFAULT_FIDELITY
        }
    };

    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let sha256 = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();

    Ok(DesignConfig {
        coil,
        current,
        magnet,
        diaphragm,
        target_deflection,
        safety_factor,
        current_ceiling,
        quadrature_order,
        fd_nodes,
        fidelity,
        defaults_applied,
        sha256,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_json() -> String {
        r#"{
          "schema_version": 1,
          "coil": {"inner_radius_um": 1250, "turns": 10, "width_um": 25,
                   "spacing_um": 20, "current_a": 1.0},
          "magnet": {"radius_um": 1222, "thickness_um": 20, "remanence_t": 0.3},
          "diaphragm": {"radius_um": 1955, "thickness_um": 80,
                        "youngs_modulus_pa": 750000, "poisson_ratio": 0.5,
                        "yield_strength_pa": 130000},
          "target": {"deflection_um": 15}
        }"#
        .to_string()
    }

    #[test]
    fn reference_fixture_parses_with_defaults() {
        let cfg = parse_config_bytes(reference_json().as_bytes()).unwrap();
        assert_relative_eq!(cfg.diaphragm.kappa(&cfg.magnet), 1.5998, max_relative = 1e-4);
        assert_relative_eq!(cfg.coil.conductor_thickness, 20e-6, max_relative = 1e-12);
        assert!(cfg.defaults_applied.contains(&"coil.thickness_um"));
        assert!(cfg.defaults_applied.contains(&"target.safety_factor"));
        assert_eq!(cfg.quadrature_order, 16);
        assert_eq!(cfg.fd_nodes, 512);
        assert_eq!(cfg.fidelity, 1);
        assert_eq!(cfg.sha256.len(), 64);
    }

    #[test]
    fn shipped_fixture_parses() {
        let path = std::path::Path::new(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/fixtures/paper_tables.json"
        ));
        let cfg = parse_config(path).unwrap();
        assert_relative_eq!(cfg.diaphragm.kappa(&cfg.magnet), 1.5998, max_relative = 1e-4);
        assert!(cfg.defaults_applied.contains(&"coil.thickness_um"));
    }

    #[test]
    fn bad_poisson_ratio_names_the_key() {
        let bad = reference_json().replace("\"poisson_ratio\": 0.5", "\"poisson_ratio\": 1.2");
        let err = parse_config_bytes(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("diaphragm.poisson_ratio"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = reference_json().replace("\"deflection_um\": 15", "\"deflection_um\": 15, \"typo\": 1");
        assert!(parse_config_bytes(bad.as_bytes()).is_err());
    }

    #[test]
    fn missing_schema_version_rejected() {
        let bad = reference_json().replace("\"schema_version\": 1,", "");
        assert!(parse_config_bytes(bad.as_bytes()).is_err());
    }

    #[test]
    fn wrong_schema_version_rejected() {
        let bad = reference_json().replace("\"schema_version\": 1", "\"schema_version\": 2");
        let err = parse_config_bytes(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("schema_version"), "{err}");
    }

    #[test]
    fn non_positive_values_named() {
        let bad = reference_json().replace("\"remanence_t\": 0.3", "\"remanence_t\": -0.3");
        let err = parse_config_bytes(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("magnet.remanence_t"), "{err}");
    }

    #[test]
    fn oversized_magnet_rejected() {
        let bad = reference_json().replace("\"radius_um\": 1222", "\"radius_um\": 2000");
        let err = parse_config_bytes(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("magnet.radius_um"), "{err}");
    }

    #[test]
    fn hash_tracks_bytes() {
        let a = parse_config_bytes(reference_json().as_bytes()).unwrap();
        let b = parse_config_bytes(reference_json().as_bytes()).unwrap();
        assert_eq!(a.sha256, b.sha256);
        let changed = reference_json().replace("\"deflection_um\": 15", "\"deflection_um\": 16");
        let c = parse_config_bytes(changed.as_bytes()).unwrap();
        assert_ne!(a.sha256, c.sha256);
    }
}
