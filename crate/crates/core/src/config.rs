//! JSON run configuration.
//!
//! ```json
//! {
//!   "scheme": "tmyag-isg",
//!   "drive": 30,
//!   "optical_depth": 2.0,
//!   "regime": "small-angle",
//!   "grid": { "n_phi": 256, "n_z": 400 },
//!   "sweep": { "over": "optical-depth", "step": 0.05, "max": 3.0 }
//! }
//! ```
//!
//! `scheme` is a preset name or an object with a `kind` and its rates. Rates
//! are numbers in s⁻¹ or strings such as `"1/800us"`; splittings are in Hz.
//! Exactly one of `regime` and `geometry` must be present.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffraction::optical_depth_grid;
use crate::engraving::{
    max_phase_matched_order, AngleRegime, EngravingRegime, IdealKind, MediumSpec, PhaseMatching,
};
use crate::engraving::{MIN_DEPTH_STEPS, TM_YAG_LENGTH, TM_YAG_WAVELENGTH};
use crate::excitation::PhaseGrid;
use crate::kinetics::{presets, LevelScheme};

/// Problems with a configuration file or its values.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn field_error(field: &str, reason: impl std::fmt::Display) -> ConfigError {
    ConfigError::Field {
        field: field.to_string(),
        reason: reason.to_string(),
    }
}

/// A rate in s⁻¹, written as a number or as a lifetime string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rate {
    PerSecond(f64),
    Text(String),
}

impl Rate {
    pub fn value(&self) -> Result<f64, String> {
        match self {
            Self::PerSecond(v) => Ok(*v),
            Self::Text(s) => parse_rate(s),
        }
    }
}

/// Parses `"1250"`, `"1250/s"` or `"1/800us"` (units `s`, `ms`, `us`, `µs`,
/// `ns`) into s⁻¹.
pub fn parse_rate(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot read `{text}` as a rate (try \"1/800us\" or 1250)");
    if let Some(lifetime) = s.strip_prefix("1/") {
        let split = lifetime
            .find(|c: char| c.is_alphabetic() || c == 'µ')
            .unwrap_or(lifetime.len());
        let (num, unit) = lifetime.split_at(split);
        let value: f64 = num.parse().map_err(|_| bad())?;
        let scale = match unit {
            "" | "s" => 1.0,
            "ms" => 1e-3,
            "us" | "µs" => 1e-6,
            "ns" => 1e-9,
            _ => return Err(bad()),
        };
        let rate = 1.0 / (value * scale);
        return if rate.is_finite() && rate > 0.0 {
            Ok(rate)
        } else {
            Err(bad())
        };
    }
    let num = s.strip_suffix("/s").unwrap_or(&s);
    num.parse().map_err(|_| bad())
}

/// Explicit level-scheme parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SchemeSpec {
    Standard3 {
        gamma_a: Rate,
        gamma_b: Rate,
        gamma_m: Rate,
    },
    Lambda3 {
        gamma_e: Rate,
        gamma_z: Rate,
        delta_g: f64,
    },
    Tm5 {
        gamma_a: Rate,
        gamma_b: Rate,
        #[serde(default = "zero_rate")]
        gamma_c: Rate,
        gamma_m: Rate,
        gamma_z: Rate,
        delta_g: f64,
        delta_e: f64,
    },
}

fn zero_rate() -> Rate {
    Rate::PerSecond(0.0)
}

/// `"tmyag-isg"` or an explicit [`SchemeSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SchemeConfig {
    Preset(String),
    Explicit(SchemeSpec),
}

impl SchemeConfig {
    pub fn build(&self) -> Result<LevelScheme, ConfigError> {
        let rate = |name: &str, r: &Rate| {
            r.value()
                .map_err(|e| field_error(&format!("scheme.{name}"), e))
        };
        let scheme = match self {
            Self::Preset(name) => {
                return LevelScheme::preset(name).ok_or_else(|| {
                    field_error(
                        "scheme",
                        format!(
                            "unknown preset `{name}` (one of {})",
                            presets::NAMES.join(", ")
                        ),
                    )
                })
            }
            Self::Explicit(SchemeSpec::Standard3 {
                gamma_a,
                gamma_b,
                gamma_m,
            }) => LevelScheme::standard3(
                rate("gamma_a", gamma_a)?,
                rate("gamma_b", gamma_b)?,
                rate("gamma_m", gamma_m)?,
            ),
            Self::Explicit(SchemeSpec::Lambda3 {
                gamma_e,
                gamma_z,
                delta_g,
            }) => LevelScheme::lambda3(
                rate("gamma_e", gamma_e)?,
                rate("gamma_z", gamma_z)?,
                *delta_g,
            ),
            Self::Explicit(SchemeSpec::Tm5 {
                gamma_a,
                gamma_b,
                gamma_c,
                gamma_m,
                gamma_z,
                delta_g,
                delta_e,
            }) => LevelScheme::tm5(
                rate("gamma_a", gamma_a)?,
                rate("gamma_b", gamma_b)?,
                rate("gamma_c", gamma_c)?,
                rate("gamma_m", gamma_m)?,
                rate("gamma_z", gamma_z)?,
                *delta_g,
                *delta_e,
            ),
        };
        scheme.map_err(|e| field_error("scheme", e))
    }
}

/// Beam angle (rad), wavelength (m) and thickness (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub angle: f64,
    pub wavelength: f64,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_phi: Option<usize>,
    pub n_z: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    OpticalDepth,
    Drive,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub over: Option<SweepAxis>,
    /// Explicit sample points; overrides `step` and `max`.
    pub values: Option<Vec<f64>>,
    pub step: Option<f64>,
    pub max: Option<f64>,
}

/// Everything a run can be configured with. Every field is optional so that
/// command-line flags can fill or override them.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub scheme: Option<SchemeConfig>,
    /// `zeta <r>` (standard) or `xi <r>` (sublevel schemes).
    pub drive: Option<f64>,
    /// Reduced rate `<r>` itself.
    pub r_avg: Option<f64>,
    pub optical_depth: Option<f64>,
    /// m⁻¹
    pub alpha0: Option<f64>,
    /// m
    pub length: Option<f64>,
    pub regime: Option<EngravingRegime>,
    pub geometry: Option<Geometry>,
    pub ideal: Option<IdealKind>,
    #[serde(default)]
    pub grid: GridConfig,
    pub sweep: Option<SweepConfig>,
    pub output: Option<PathBuf>,
}

/// Sample points of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub scheme: LevelScheme,
    /// `zeta <r>` or `xi <r>`.
    pub drive: f64,
    pub medium: MediumSpec,
    pub regime: EngravingRegime,
    pub phase_matching: Option<PhaseMatching>,
    pub ideal: Option<IdealKind>,
    pub grid: PhaseGrid,
    pub n_z: usize,
    pub sweep: Sweep,
    pub output: Option<PathBuf>,
}

impl Simulation {
    /// Reduced rate `<r>`.
    pub fn r_avg(&self) -> f64 {
        self.drive / self.scheme.drive_scale()
    }
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(field_error(field, format!("must be > 0, got {v}")))
    }
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| {
            let (line, column) = (e.line(), e.column());
            let full = e.to_string();
            let suffix = format!(" at line {line} column {column}");
            ConfigError::Syntax {
                line,
                column,
                message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
            }
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Checks the invariants and fills in defaults: the `tmyag-isg` preset,
    /// the scheme's operating-point drive, `alpha0 L = 2` over 2.5 mm,
    /// `n_phi = 256` and `n_z = 400`.
    pub fn resolve(&self) -> Result<Simulation, ConfigError> {
        let scheme = match &self.scheme {
            Some(s) => s.build()?,
            None => LevelScheme::tm_yag_isg(),
        };
        let scale = scheme.drive_scale();
        let drive = match (self.drive, self.r_avg) {
            (Some(_), Some(_)) => {
                return Err(field_error(
                    "drive",
                    "give either `drive` or `r_avg`, not both",
                ))
            }
            (Some(d), None) => d,
            (None, Some(r)) => r * scale,
            (None, None) if scheme.kind().is_sublevel() => 30.0,
            (None, None) => 0.9,
        };
        if !(drive.is_finite() && drive >= 0.0) {
            return Err(field_error("drive", format!("must be >= 0, got {drive}")));
        }

        let length = match (self.length, self.geometry) {
            (Some(a), Some(g)) if a != g.length => {
                return Err(field_error("geometry.length", "disagrees with `length`"))
            }
            (Some(l), _) => positive("length", l)?,
            (None, Some(g)) => positive("geometry.length", g.length)?,
            (None, None) => TM_YAG_LENGTH,
        };
        let alpha0 = match (self.optical_depth, self.alpha0) {
            (Some(od), Some(a)) if (od - a * length).abs() > 1e-9 * od.abs().max(1.0) => {
                return Err(field_error(
                    "optical_depth",
                    "disagrees with `alpha0 * length`; give two of the three",
                ))
            }
            (Some(od), _) => positive("optical_depth", od)? / length,
            (None, Some(a)) => positive("alpha0", a)?,
            (None, None) => 2.0 / length,
        };
        let mut medium = MediumSpec::new(alpha0, length).map_err(|e| field_error("alpha0", e))?;
        medium.wavelength = Some(TM_YAG_WAVELENGTH);

        let (regime, phase_matching) = match (self.regime, self.geometry) {
            (Some(_), Some(_)) => {
                return Err(field_error(
                    "regime",
                    "give either `regime` or `geometry`, not both",
                ))
            }
            (None, None) => {
                return Err(field_error(
                    "regime",
                    "one of `regime` or `geometry` is required",
                ))
            }
            (Some(r), None) => (r, None),
            (None, Some(g)) => {
                medium = medium
                    .with_geometry(g.wavelength, g.angle)
                    .map_err(|e| field_error("geometry", e))?;
                let pm =
                    max_phase_matched_order(&medium).map_err(|e| field_error("geometry", e))?;
                let regime = match pm.regime {
                    AngleRegime::SmallAngle => EngravingRegime::SmallAngle,
                    AngleRegime::LargeAngle => EngravingRegime::LargeAngle,
                    AngleRegime::Ambiguous => {
                        return Err(field_error(
                            "geometry.angle",
                            format!(
                                "{} rad is between the small- and large-angle regimes \
                                 (critical angle {:.4} rad)",
                                g.angle, pm.critical_angle
                            ),
                        ))
                    }
                };
                (regime, Some(pm))
            }
        };

        let grid = PhaseGrid::new(self.grid.n_phi.unwrap_or(PhaseGrid::DEFAULT_POINTS))
            .map_err(|e| field_error("grid.n_phi", e))?;
        let n_z = self.grid.n_z.unwrap_or(400);
        if n_z < MIN_DEPTH_STEPS {
            return Err(field_error(
                "grid.n_z",
                format!("must be >= {MIN_DEPTH_STEPS}, got {n_z}"),
            ));
        }

        let sweep = self.sweep.clone().unwrap_or_default();
        let axis = sweep.over.unwrap_or(SweepAxis::OpticalDepth);
        let values = match (&sweep.values, axis) {
            (Some(v), _) => {
                if v.is_empty() || v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                    return Err(field_error("sweep.values", "need positive, finite values"));
                }
                v.clone()
            }
            (None, SweepAxis::OpticalDepth) => {
                optical_depth_grid(sweep.step.unwrap_or(0.05), sweep.max.unwrap_or(3.0))
                    .map_err(|e| field_error("sweep.step", e))?
            }
            (None, SweepAxis::Drive) => {
                optical_depth_grid(sweep.step.unwrap_or(1.0), sweep.max.unwrap_or(30.0))
                    .map_err(|e| field_error("sweep.step", e))?
            }
        };

        Ok(Simulation {
            scheme,
            drive,
            medium,
            regime,
            phase_matching,
            ideal: self.ideal,
            grid,
            n_z,
            sweep: Sweep { axis, values },
            output: self.output.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates() {
        assert!((parse_rate("1/800us").unwrap() - 1250.0).abs() < 1e-9);
        assert!((parse_rate("1/10 ms").unwrap() - 100.0).abs() < 1e-9);
        assert!((parse_rate("1/5s").unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(parse_rate("1250").unwrap(), 1250.0);
        assert_eq!(parse_rate("1250/s").unwrap(), 1250.0);
        assert!(parse_rate("1/800 fortnights").is_err());
        assert!(parse_rate("fast").is_err());
    }

    #[test]
    fn minimal_config_uses_defaults() {
        let c = SimConfig::from_json(r#"{"regime": "small-angle"}"#).unwrap();
        let s = c.resolve().unwrap();
        assert_eq!(s.scheme, LevelScheme::tm_yag_isg());
        assert_eq!(s.drive, 30.0);
        assert!((s.medium.optical_depth() - 2.0).abs() < 1e-12);
        assert_eq!(s.sweep.values.len(), 60);
    }

    #[test]
    fn regime_and_geometry_are_exclusive() {
        let both = r#"{"regime": "large-angle",
            "geometry": {"angle": 0.0175, "wavelength": 7.93e-7, "length": 2.5e-3}}"#;
        let err = SimConfig::from_json(both).unwrap().resolve().unwrap_err();
        assert!(err.to_string().contains("regime"));
        assert!(SimConfig::default().resolve().is_err());
    }

    #[test]
    fn geometry_selects_regime() {
        let c = r#"{"geometry": {"angle": 0.0175, "wavelength": 7.93e-7, "length": 2.5e-3}}"#;
        let s = SimConfig::from_json(c).unwrap().resolve().unwrap();
        assert_eq!(s.regime, EngravingRegime::LargeAngle);
        let c = r#"{"geometry": {"angle": 0.0075, "wavelength": 7.93e-7, "length": 2.5e-3}}"#;
        assert!(SimConfig::from_json(c).unwrap().resolve().is_err());
    }

    #[test]
    fn explicit_scheme_with_lifetimes() {
        let c = r#"{
            "scheme": {"kind": "standard3", "gamma_a": "1/3200us",
                       "gamma_b": "1/1066.6666666666667us", "gamma_m": "1/10ms"},
            "drive": 0.9, "regime": "small-angle"
        }"#;
        let s = SimConfig::from_json(c).unwrap().resolve().unwrap();
        assert!((s.scheme.zeta().unwrap() - 0.91).abs() < 1e-9);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = SimConfig::from_json("{\n  \"drive\": ,\n}").unwrap_err();
        match err {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = SimConfig::from_json(r#"{"drvie": 3}"#).unwrap_err();
        assert!(err.to_string().contains("drvie"));
    }

    #[test]
    fn unknown_preset() {
        let c = r#"{"scheme": "ruby", "regime": "small-angle"}"#;
        let err = SimConfig::from_json(c).unwrap().resolve().unwrap_err();
        assert!(err.to_string().contains("tmyag-isg"));
    }
}
