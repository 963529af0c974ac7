//! Run configuration. One TOML document; every length is in μm, frequencies
//! as named in the key, and conversion to SI happens only in the
//! `to_*` accessors.
//!
//! ```toml
//! [geometry]            # μm except eps_r
//! S = 15.0
//! W = 10.0
//! w = 7.5
//! h = 500.0
//! eps_r = 11.5
//!
//! [mode]
//! frequency_ghz = 6.8354
//! Q = 1.72e6
//! n = 1
//!
//! [condensate]
//! N0 = 2e4
//! a = 5.0               # μm, optional if trap_frequency_hz is set
//! trap_frequency_hz = 84.0
//! b_offset_mt = 0.1
//!
//! [sensing]             # μm
//! d = 5.0
//! center_depth = 65.0
//! height = 60.0
//! # lateral_radius = 15.0   (default 3a)
//! # b_x_nt = 2.56           (default: single-photon |B_max|)
//! strict_distance = false
//!
//! [quadrature]
//! rel_tol = 1e-6
//! abs_tol = 1e-14
//! max_subdivisions = 200
//!
//! [output]
//! format = "csv"
//! # dir = "out"
//! ```

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

use mwsense::condensate::CondensateParams;
use mwsense::cpw::CpwGeometry;
use mwsense::quadrature::QuadratureSpec;
use mwsense::sensing::DetectionVolume;

/// Lengths are converted by division so that e.g. 15 μm maps to exactly 1.5e-5 m.
const UM_PER_M: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// Dotted path of the offending key, when known.
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.key {
            Some(k) => write!(f, "config key `{k}`: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn bad(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: Some(key.to_string()),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    #[serde(rename = "S")]
    pub strip_width: f64,
    #[serde(rename = "W")]
    pub gap: f64,
    #[serde(rename = "w")]
    pub ground_width: f64,
    #[serde(rename = "h")]
    pub substrate_thickness: f64,
    pub eps_r: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            strip_width: 15.0,
            gap: 10.0,
            ground_width: 7.5,
            substrate_thickness: 500.0,
            eps_r: 11.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModeConfig {
    pub frequency_ghz: f64,
    #[serde(rename = "Q")]
    pub quality_q: f64,
    #[serde(rename = "n")]
    pub n_transverse: u32,
}

impl Default for ModeConfig {
    fn default() -> Self {
        ModeConfig {
            frequency_ghz: 6.8354,
            quality_q: 1.72e6,
            n_transverse: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CondensateConfig {
    #[serde(rename = "N0")]
    pub atom_number: f64,
    #[serde(rename = "a", skip_serializing_if = "Option::is_none")]
    pub tf_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trap_frequency_hz: Option<f64>,
    pub b_offset_mt: f64,
}

impl Default for CondensateConfig {
    fn default() -> Self {
        CondensateConfig {
            atom_number: 2e4,
            tf_radius: Some(5.0),
            trap_frequency_hz: Some(84.0),
            b_offset_mt: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensingConfig {
    #[serde(rename = "d")]
    pub distance: f64,
    pub center_depth: f64,
    pub height: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lateral_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_x_nt: Option<f64>,
    /// Refuse cloud-surface distances below d₀ + a instead of warning.
    pub strict_distance: bool,
}

impl Default for SensingConfig {
    fn default() -> Self {
        SensingConfig {
            distance: 5.0,
            center_depth: 65.0,
            height: 60.0,
            lateral_radius: None,
            b_x_nt: None,
            strict_distance: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let s = QuadratureSpec::default();
        QuadratureConfig {
            rel_tol: s.rel_tol,
            abs_tol: s.abs_tol,
            max_subdivisions: s.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub mode: ModeConfig,
    pub condensate: CondensateConfig,
    pub sensing: SensingConfig,
    pub quadrature: QuadratureConfig,
    pub output: OutputConfig,
}

/// Parses and validates a configuration document. Missing keys take the
/// default (reference setup) values.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError {
        key: None,
        message: e.to_string().trim_end().to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serialises")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |key: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(bad(key, format!("must be positive and finite, got {v}")))
            }
        };
        let g = &self.geometry;
        positive("geometry.S", g.strip_width)?;
        positive("geometry.W", g.gap)?;
        positive("geometry.w", g.ground_width)?;
        positive("geometry.h", g.substrate_thickness)?;
        if !(g.eps_r >= 1.0) {
            return Err(bad("geometry.eps_r", format!("must be at least 1, got {}", g.eps_r)));
        }
        positive("mode.frequency_ghz", self.mode.frequency_ghz)?;
        positive("mode.Q", self.mode.quality_q)?;
        if self.mode.n_transverse == 0 {
            return Err(bad("mode.n", "transverse mode index starts at 1"));
        }
        let c = &self.condensate;
        if !(c.atom_number >= 1.0) || !c.atom_number.is_finite() {
            return Err(bad("condensate.N0", format!("need at least one atom, got {}", c.atom_number)));
        }
        if let Some(a) = c.tf_radius {
            positive("condensate.a", a)?;
        }
        if let Some(f) = c.trap_frequency_hz {
            positive("condensate.trap_frequency_hz", f)?;
        }
        if c.tf_radius.is_none() && c.trap_frequency_hz.is_none() {
            return Err(bad("condensate.a", "either a or trap_frequency_hz must be given"));
        }
        if !(c.b_offset_mt >= 0.0) || !c.b_offset_mt.is_finite() {
            return Err(bad("condensate.b_offset_mt", format!("must be non-negative, got {}", c.b_offset_mt)));
        }
        let s = &self.sensing;
        if !(s.distance >= 0.0) || !s.distance.is_finite() {
            return Err(bad("sensing.d", format!("must be non-negative, got {}", s.distance)));
        }
        positive("sensing.center_depth", s.center_depth)?;
        positive("sensing.height", s.height)?;
        if let Some(r) = s.lateral_radius {
            positive("sensing.lateral_radius", r)?;
        }
        if let Some(b) = s.b_x_nt {
            if !(b >= 0.0) || !b.is_finite() {
                return Err(bad("sensing.b_x_nt", format!("must be non-negative, got {b}")));
            }
        }
        let q = &self.quadrature;
        positive("quadrature.rel_tol", q.rel_tol)?;
        positive("quadrature.abs_tol", q.abs_tol)?;
        if q.max_subdivisions == 0 {
            return Err(bad("quadrature.max_subdivisions", "must be at least 1"));
        }
        Ok(())
    }

    /// Applies `KEY=VAL` for a quadrature key (`rel_tol`, `abs_tol`,
    /// `max_subdivisions`, optionally prefixed with `quadrature.`).
    pub fn apply_tol_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, val) = assignment
            .split_once('=')
            .ok_or_else(|| bad(assignment, "expected KEY=VAL"))?;
        let key = key.trim();
        let short = key.strip_prefix("quadrature.").unwrap_or(key);
        let full = format!("quadrature.{short}");
        let val = val.trim();
        match short {
            "rel_tol" => self.quadrature.rel_tol = parse_num(&full, val)?,
            "abs_tol" => self.quadrature.abs_tol = parse_num(&full, val)?,
            "max_subdivisions" => {
                self.quadrature.max_subdivisions =
                    val.parse().map_err(|_| bad(&full, format!("not a non-negative integer: {val}")))?
            }
            _ => return Err(bad(key, "unknown tolerance key")),
        }
        self.validate()
    }

    pub fn geometry(&self) -> CpwGeometry {
        let g = &self.geometry;
        CpwGeometry {
            strip_width: g.strip_width / UM_PER_M,
            gap: g.gap / UM_PER_M,
            ground_width: g.ground_width / UM_PER_M,
            substrate_thickness: g.substrate_thickness / UM_PER_M,
            eps_r: g.eps_r,
        }
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI * self.mode.frequency_ghz * 1e9
    }

    pub fn condensate(&self) -> CondensateParams {
        let c = &self.condensate;
        CondensateParams {
            atom_number: c.atom_number,
            tf_radius: c.tf_radius.map(|a| a / UM_PER_M),
            trap_freqs: c.trap_frequency_hz.map(|f| [2.0 * PI * f; 3]),
            b_offset: c.b_offset_mt * 1e-3,
        }
    }

    /// Detection volume; the lateral radius defaults to three cloud radii.
    pub fn detection_volume(&self, tf_radius: f64) -> DetectionVolume {
        let s = &self.sensing;
        DetectionVolume {
            center_depth: s.center_depth / UM_PER_M,
            height: s.height / UM_PER_M,
            lateral_radius: s.lateral_radius.map_or(3.0 * tf_radius, |r| r / UM_PER_M),
        }
    }

    pub fn distance(&self) -> f64 {
        self.sensing.distance / UM_PER_M
    }

    pub fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.quadrature.rel_tol,
            abs_tol: self.quadrature.abs_tol,
            max_subdivisions: self.quadrature.max_subdivisions,
            ..QuadratureSpec::default()
        }
    }
}

fn parse_num(key: &str, val: &str) -> Result<f64, ConfigError> {
    val.parse().map_err(|_| bad(key, format!("not a number: {val}")))
}
