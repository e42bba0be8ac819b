use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Named Tm:YAG parameter values.
pub mod presets {
    /// Total decay rate of the optical excited state, `1 / 800 us`.
    pub const TM_YAG_GAMMA_E: f64 = 1.0 / 800e-6;
    /// Metastable decay rate, `1 / 10 ms`.
    pub const TM_YAG_GAMMA_M: f64 = 1.0 / 10e-3;
    /// Ground sublevel relaxation rate, `1 / 5 s`.
    pub const TM_YAG_GAMMA_Z: f64 = 1.0 / 5.0;
    /// Ground-state Zeeman splitting in Hz.
    pub const TM_YAG_DELTA_G: f64 = 600e3;
    /// Offset between the two optical transitions in Hz.
    pub const TM_YAG_DELTA_GE: f64 = 500e3;

    /// Names accepted by [`LevelScheme::preset`](super::LevelScheme::preset).
    pub const NAMES: [&str; 3] = ["tmyag-standard", "tmyag-isg", "tmyag-lambda"];
}

/// Which topology a [`LevelScheme`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Standard3,
    Lambda3,
    Tm5,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Standard3 => "standard3",
            Self::Lambda3 => "lambda3",
            Self::Tm5 => "tm5",
        }
    }

    /// True for the two schemes that store atoms in a ground sublevel.
    pub fn is_sublevel(self) -> bool {
        !matches!(self, Self::Standard3)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Decay rates (s⁻¹) and splittings (Hz) of one optical-pumping topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelScheme {
    /// `|2> -> |1>` at `gamma_a`, `|2> -> |m>` at `gamma_b`, `|m> -> |1>` at
    /// `gamma_m`.
    Standard3 {
        gamma_a: f64,
        gamma_b: f64,
        gamma_m: f64,
    },
    /// Excited level decaying equally to both ground sublevels at total rate
    /// `gamma_e`; the ground population difference relaxes at `gamma_z`.
    Lambda3 {
        gamma_e: f64,
        gamma_z: f64,
        delta_g: f64,
    },
    /// Spin-preserving decay `gamma_a`, decay to `|m>` `gamma_b`,
    /// spin-flipping decay `gamma_c`; `|m>` empties equally into both ground
    /// sublevels at `gamma_m`.
    Tm5 {
        gamma_a: f64,
        gamma_b: f64,
        gamma_c: f64,
        gamma_m: f64,
        gamma_z: f64,
        delta_g: f64,
        delta_e: f64,
    },
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

impl LevelScheme {
    pub fn standard3(gamma_a: f64, gamma_b: f64, gamma_m: f64) -> Result<Self> {
        let s = Self::Standard3 {
            gamma_a,
            gamma_b,
            gamma_m,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn lambda3(gamma_e: f64, gamma_z: f64, delta_g: f64) -> Result<Self> {
        let s = Self::Lambda3 {
            gamma_e,
            gamma_z,
            delta_g,
        };
        s.validate()?;
        Ok(s)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn tm5(
        gamma_a: f64,
        gamma_b: f64,
        gamma_c: f64,
        gamma_m: f64,
        gamma_z: f64,
        delta_g: f64,
        delta_e: f64,
    ) -> Result<Self> {
        let s = Self::Tm5 {
            gamma_a,
            gamma_b,
            gamma_c,
            gamma_m,
            gamma_z,
            delta_g,
            delta_e,
        };
        s.validate()?;
        Ok(s)
    }

    /// Tm:YAG in the standard scheme: `gamma_a = gamma_e/4`,
    /// `gamma_b = 3 gamma_e/4`, `gamma_m = 1/10 ms`.
    pub fn tm_yag_standard() -> Self {
        use presets::*;
        Self::Standard3 {
            gamma_a: TM_YAG_GAMMA_E / 4.0,
            gamma_b: 3.0 * TM_YAG_GAMMA_E / 4.0,
            gamma_m: TM_YAG_GAMMA_M,
        }
    }

    /// Tm:YAG five-level scheme with `gamma_c = 0`, `gamma_z = 1/5 s`,
    /// `delta_g = 600 kHz` and `delta_g - delta_e = 500 kHz`.
    pub fn tm_yag_isg() -> Self {
        use presets::*;
        Self::Tm5 {
            gamma_a: TM_YAG_GAMMA_E / 4.0,
            gamma_b: 3.0 * TM_YAG_GAMMA_E / 4.0,
            gamma_c: 0.0,
            gamma_m: TM_YAG_GAMMA_M,
            gamma_z: TM_YAG_GAMMA_Z,
            delta_g: TM_YAG_DELTA_G,
            delta_e: TM_YAG_DELTA_G - TM_YAG_DELTA_GE,
        }
    }

    /// An idealised Lambda system with the Tm:YAG optical and spin lifetimes.
    pub fn tm_yag_lambda() -> Self {
        use presets::*;
        Self::Lambda3 {
            gamma_e: TM_YAG_GAMMA_E,
            gamma_z: TM_YAG_GAMMA_Z,
            delta_g: TM_YAG_DELTA_G,
        }
    }

    /// Look up a named preset (see [`presets::NAMES`]).
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "tmyag-standard" => Some(Self::tm_yag_standard()),
            "tmyag-isg" => Some(Self::tm_yag_isg()),
            "tmyag-lambda" => Some(Self::tm_yag_lambda()),
            _ => None,
        }
    }

    pub fn kind(&self) -> SchemeKind {
        match self {
            Self::Standard3 { .. } => SchemeKind::Standard3,
            Self::Lambda3 { .. } => SchemeKind::Lambda3,
            Self::Tm5 { .. } => SchemeKind::Tm5,
        }
    }

    /// Checks the hard invariants: positive rates (`gamma_c` may be zero) and
    /// `gamma_z < gamma_e` for the sublevel schemes.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Standard3 {
                gamma_a,
                gamma_b,
                gamma_m,
            } => {
                positive("gamma_a", gamma_a)?;
                positive("gamma_b", gamma_b)?;
                positive("gamma_m", gamma_m)?;
            }
            Self::Lambda3 {
                gamma_e,
                gamma_z,
                delta_g,
            } => {
                positive("gamma_e", gamma_e)?;
                positive("gamma_z", gamma_z)?;
                positive("delta_g", delta_g)?;
            }
            Self::Tm5 {
                gamma_a,
                gamma_b,
                gamma_c,
                gamma_m,
                gamma_z,
                delta_g,
                delta_e,
            } => {
                positive("gamma_a", gamma_a)?;
                positive("gamma_b", gamma_b)?;
                positive("gamma_m", gamma_m)?;
                positive("gamma_z", gamma_z)?;
                if !(gamma_c.is_finite() && gamma_c >= 0.0) {
                    return Err(Error::invalid("gamma_c", "must be finite and >= 0"));
                }
                if !(delta_g.is_finite() && delta_e.is_finite()) {
                    return Err(Error::invalid("delta_g", "splittings must be finite"));
                }
            }
        }
        if let Some(gz) = self.gamma_z() {
            if gz >= self.gamma_e() {
                return Err(Error::invalid(
                    "gamma_z",
                    format!("must be smaller than gamma_e = {}", self.gamma_e()),
                ));
            }
        }
        Ok(())
    }

    /// Soft-invariant violations worth reporting but not rejecting.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(gm) = self.gamma_m() {
            let ratio = gm / self.gamma_e();
            if ratio >= 0.1 {
                out.push(format!(
                    "gamma_m / gamma_e = {ratio:.3} is not small: the metastable level is not \
                     much longer lived than the optical excited state"
                ));
            }
        }
        out
    }

    /// Total decay rate of the optical excited state.
    pub fn gamma_e(&self) -> f64 {
        match *self {
            Self::Standard3 {
                gamma_a, gamma_b, ..
            } => gamma_a + gamma_b,
            Self::Lambda3 { gamma_e, .. } => gamma_e,
            Self::Tm5 {
                gamma_a,
                gamma_b,
                gamma_c,
                ..
            } => gamma_a + gamma_b + gamma_c,
        }
    }

    pub fn gamma_m(&self) -> Option<f64> {
        match *self {
            Self::Standard3 { gamma_m, .. } | Self::Tm5 { gamma_m, .. } => Some(gamma_m),
            Self::Lambda3 { .. } => None,
        }
    }

    pub fn gamma_z(&self) -> Option<f64> {
        match *self {
            Self::Lambda3 { gamma_z, .. } | Self::Tm5 { gamma_z, .. } => Some(gamma_z),
            Self::Standard3 { .. } => None,
        }
    }

    /// Frequency offset of the second optical transition: `delta_g` for the
    /// Lambda scheme, `delta_g - delta_e` for Tm.
    pub fn replica_splitting(&self) -> Option<f64> {
        match *self {
            Self::Standard3 { .. } => None,
            Self::Lambda3 { delta_g, .. } => Some(delta_g),
            Self::Tm5 {
                delta_g, delta_e, ..
            } => Some(delta_g - delta_e),
        }
    }

    /// `zeta = (gamma_b + 2 gamma_m) / gamma_e`, standard scheme only.
    pub fn zeta(&self) -> Result<f64> {
        match *self {
            Self::Standard3 {
                gamma_b, gamma_m, ..
            } => Ok((gamma_b + 2.0 * gamma_m) / self.gamma_e()),
            _ => Err(Error::SchemeMismatch {
                expected: "standard3",
                found: self.kind(),
            }),
        }
    }

    /// `xi = gamma_e / (2 gamma_z)` (Lambda) or
    /// `xi = (gamma_b / 2 + gamma_c) / (2 gamma_z)` (Tm).
    pub fn xi(&self) -> Result<f64> {
        match *self {
            Self::Lambda3 {
                gamma_e, gamma_z, ..
            } => Ok(gamma_e / (2.0 * gamma_z)),
            Self::Tm5 {
                gamma_b,
                gamma_c,
                gamma_z,
                ..
            } => Ok((gamma_b / 2.0 + gamma_c) / (2.0 * gamma_z)),
            Self::Standard3 { .. } => Err(Error::SchemeMismatch {
                expected: "lambda3 or tm5",
                found: self.kind(),
            }),
        }
    }

    /// `zeta` or `xi`, whichever converts `<r>` into the drive strength.
    pub fn drive_scale(&self) -> f64 {
        match self {
            Self::Standard3 { .. } => self.zeta(),
            _ => self.xi(),
        }
        .expect("every scheme has a drive scale")
    }

    /// Rate (s⁻¹) that divides a pumping rate `R` into the reduced rate `r`.
    pub fn rate_unit(&self) -> f64 {
        match *self {
            Self::Standard3 { gamma_m, .. } => gamma_m,
            _ => self.gamma_e(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_tm_yag() {
        let z = LevelScheme::tm_yag_standard().zeta().unwrap();
        // (0.75 + 2 * 0.08) = 0.91
        assert!((z - 0.91).abs() < 1e-12, "{z}");
    }

    #[test]
    fn zeta_without_shelving_channel() {
        let s = LevelScheme::Standard3 {
            gamma_a: 1.0,
            gamma_b: 0.0,
            gamma_m: 0.0,
        };
        assert_eq!(s.zeta().unwrap(), 0.0);
        assert!(s.validate().is_err());
    }

    #[test]
    fn zeta_equal_rates() {
        let z = LevelScheme::standard3(2.0, 2.0, 2.0)
            .unwrap()
            .zeta()
            .unwrap();
        assert!((z - 1.5).abs() < 1e-15);
    }

    #[test]
    fn xi_lambda_unit() {
        let s = LevelScheme::lambda3(2.0, 1.0, 1e6).unwrap();
        assert_eq!(s.xi().unwrap(), 1.0);
    }

    #[test]
    fn xi_tm5_substitution() {
        let ge = 1000.0;
        let gz = 3.0;
        let s = LevelScheme::tm5(ge / 4.0, 0.75 * ge, 0.0, 10.0, gz, 1.0, 0.5).unwrap();
        let expected = 3.0 * ge / (16.0 * gz);
        assert!((s.xi().unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn xi_tm_yag_preset() {
        let xi = LevelScheme::tm_yag_isg().xi().unwrap();
        assert!((xi - 1171.875).abs() < 1e-9, "{xi}");
    }

    #[test]
    fn wrong_variant_errors() {
        assert!(matches!(
            LevelScheme::tm_yag_isg().zeta(),
            Err(Error::SchemeMismatch { .. })
        ));
        assert!(matches!(
            LevelScheme::tm_yag_standard().xi(),
            Err(Error::SchemeMismatch { .. })
        ));
    }

    #[test]
    fn validation() {
        assert!(LevelScheme::standard3(1.0, -1.0, 1.0).is_err());
        assert!(LevelScheme::lambda3(1.0, 2.0, 1.0).is_err());
        assert!(LevelScheme::tm5(1.0, 1.0, -0.1, 1.0, 0.1, 1.0, 0.0).is_err());
        assert!(LevelScheme::tm5(1.0, 1.0, 0.0, 0.01, 0.1, 1.0, 0.0).is_ok());
        assert!(LevelScheme::tm_yag_standard().warnings().is_empty());
        let slow = LevelScheme::standard3(1.0, 1.0, 0.5).unwrap();
        assert_eq!(slow.warnings().len(), 1);
    }

    #[test]
    fn presets_by_name() {
        for name in presets::NAMES {
            assert!(LevelScheme::preset(name).is_some(), "{name}");
        }
        let tm = LevelScheme::preset("tmyag-isg").unwrap();
        assert!((tm.replica_splitting().unwrap() - 500e3).abs() < 1e-6);
        assert!(LevelScheme::preset("nope").is_none());
    }
}
