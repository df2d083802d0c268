//! Run configuration: a JSON file declaring units, geometry, material,
//! winding, and optionally a measured inductance matrix.
//!
//! Geometry keys follow the dimension symbols used throughout the crate
//! (h_ws, w_ws, r_si, r_so, g, w_ts, h_ys and rotor counterparts). Lengths
//! are interpreted in the declared unit (`mm` or `m`); inductances and
//! resistances are always SI (H, Ω). Unknown keys are rejected.

use crate::circuits::CouplingParams;
use crate::geometry::{MaterialSpec, TransformerGeometry, WindingSpec};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Mm,
    M,
}

impl Units {
    /// Multiplier taking declared lengths to meters.
    pub fn to_meters(self) -> f64 {
        match self {
            Units::Mm => 1e-3,
            Units::M => 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub units: Units,
    #[serde(default)]
    pub geometry: Option<GeometryConfig>,
    #[serde(default)]
    pub material: Option<MaterialConfig>,
    #[serde(default)]
    pub winding: Option<WindingConfig>,
    #[serde(default)]
    pub circuit: Option<CircuitConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub h_ws: f64,
    pub h_wr: f64,
    pub w_ws: f64,
    pub w_wr: f64,
    pub r_si: f64,
    pub r_ri: f64,
    pub r_so: f64,
    pub r_ro: f64,
    pub g: f64,
    pub w_ts: f64,
    pub w_tr: f64,
    pub h_ys: f64,
    pub h_yr: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub mu_r: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindingConfig {
    #[serde(rename = "N_s")]
    pub n_s: u32,
    #[serde(rename = "N_r")]
    pub n_r: u32,
    #[serde(default)]
    pub r_s: f64,
    #[serde(default)]
    pub r_r: f64,
}

/// Measured or externally computed inductance matrix (H). When present,
/// Bode studies run from these instead of the reluctance network.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    pub l_ss: f64,
    pub l_sr: f64,
    pub l_rr: f64,
}

/// A parsed configuration together with the content hash of the file it
/// came from (used in output provenance lines).
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub hash: String,
}

impl LoadedConfig {
    pub fn from_path(path: &Path) -> Result<Self, String> {
        let bytes = std::fs::read(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let config: RunConfig = serde_json::from_slice(&bytes)
            .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        let digest = hasher.finalize();
        let hash: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
        Ok(Self { config, hash })
    }

    /// Geometry in meters, validated.
    pub fn geometry(&self) -> Result<TransformerGeometry, String> {
        let gc = self.config.geometry.ok_or("config has no geometry section")?;
        let k = self.config.units.to_meters();
        let geom = TransformerGeometry {
            h_ws: k * gc.h_ws,
            h_wr: k * gc.h_wr,
            w_ws: k * gc.w_ws,
            w_wr: k * gc.w_wr,
            r_si: k * gc.r_si,
            r_ri: k * gc.r_ri,
            r_so: k * gc.r_so,
            r_ro: k * gc.r_ro,
            g: k * gc.g,
            w_ts: k * gc.w_ts,
            w_tr: k * gc.w_tr,
            h_ys: k * gc.h_ys,
            h_yr: k * gc.h_yr,
        };
        geom.validate().map_err(|report| report.to_string())?;
        Ok(geom)
    }

    /// Core material; defaults to μ_r = 2000 when the section is absent.
    pub fn material(&self) -> Result<MaterialSpec, String> {
        match self.config.material {
            None => Ok(MaterialSpec::default()),
            Some(mc) => MaterialSpec::new(mc.mu_r).map_err(|e| e.to_string()),
        }
    }

    pub fn winding(&self) -> Result<WindingSpec, String> {
        let wc = self.config.winding.ok_or("config has no winding section")?;
        WindingSpec::new(wc.n_s, wc.n_r, wc.r_s, wc.r_r).map_err(|e| e.to_string())
    }

    /// Coupled-inductor parameters from the circuit section, with winding
    /// resistances applied when a winding section exists.
    pub fn circuit(&self) -> Result<Option<CouplingParams>, String> {
        let Some(cc) = self.config.circuit else { return Ok(None) };
        let (r_s, r_r) = match self.config.winding {
            Some(w) => (w.r_s, w.r_r),
            None => (0.0, 0.0),
        };
        CouplingParams::new(cc.l_ss, cc.l_rr, cc.l_sr, r_s, r_r)
            .map(Some)
            .map_err(|e| e.to_string())
    }
}
