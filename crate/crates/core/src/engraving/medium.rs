use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Thickness 2.5 mm of the reference Tm:YAG crystal.
pub const TM_YAG_LENGTH: f64 = 2.5e-3;
/// Wavelength of the Tm:YAG 3H6 - 3H4 line, 793 nm.
pub const TM_YAG_WAVELENGTH: f64 = 793e-9;

/// Absorbing slab and (optionally) the beam geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumSpec {
    /// Unpumped absorption coefficient, m⁻¹.
    pub alpha0: f64,
    /// Thickness, m.
    pub length: f64,
    /// Vacuum wavelength, m.
    pub wavelength: Option<f64>,
    /// Full angle between the engraving beams, rad.
    pub angle: Option<f64>,
}

impl MediumSpec {
    pub fn new(alpha0: f64, length: f64) -> Result<Self> {
        if !(alpha0.is_finite() && alpha0 > 0.0) {
            return Err(Error::invalid(
                "alpha0",
                format!("must be > 0, got {alpha0}"),
            ));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid(
                "length",
                format!("must be > 0, got {length}"),
            ));
        }
        Ok(Self {
            alpha0,
            length,
            wavelength: None,
            angle: None,
        })
    }

    pub fn from_optical_depth(optical_depth: f64, length: f64) -> Result<Self> {
        if !(optical_depth.is_finite() && optical_depth > 0.0) {
            return Err(Error::invalid(
                "optical_depth",
                format!("must be > 0, got {optical_depth}"),
            ));
        }
        Self::new(optical_depth / length, length)
    }

    /// Tm:YAG slab (2.5 mm, 793 nm) with the given `alpha0 L`.
    pub fn tm_yag(optical_depth: f64) -> Result<Self> {
        let mut m = Self::from_optical_depth(optical_depth, TM_YAG_LENGTH)?;
        m.wavelength = Some(TM_YAG_WAVELENGTH);
        Ok(m)
    }

    pub fn with_geometry(mut self, wavelength: f64, angle: f64) -> Result<Self> {
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::invalid("wavelength", "must be > 0"));
        }
        if !(angle.is_finite() && angle >= 0.0) {
            return Err(Error::invalid("angle", "must be >= 0"));
        }
        self.wavelength = Some(wavelength);
        self.angle = Some(angle);
        Ok(self)
    }

    pub fn optical_depth(&self) -> f64 {
        self.alpha0 * self.length
    }

    /// `n_z + 1` equally spaced depths, the last one exactly `length`.
    pub fn depths(&self, n_z: usize) -> Vec<f64> {
        (0..=n_z)
            .map(|i| {
                if i == n_z {
                    self.length
                } else {
                    self.length * i as f64 / n_z as f64
                }
            })
            .collect()
    }
}

/// `sqrt(lambda / 2L)`, the angle separating the two propagation regimes.
pub fn critical_angle(wavelength: f64, length: f64) -> f64 {
    (wavelength / (2.0 * length)).sqrt()
}

/// Classification of the beam angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleRegime {
    SmallAngle,
    LargeAngle,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatching {
    pub critical_angle: f64,
    /// Grating wavenumber `K = 2k sin(theta / 2)`, m⁻¹.
    pub grating_wavenumber: f64,
    /// Highest order `n` with `n (n - 1) K^2 L / k < pi`; `None` when every
    /// order is matched (`K = 0`).
    pub max_order: Option<u64>,
    pub regime: AngleRegime,
}

/// Phase-matching analysis of the beam geometry.
///
/// The medium is large-angle when order 2 is already mismatched, small-angle
/// when `theta < theta_c / 3` and ambiguous in between.
pub fn max_phase_matched_order(medium: &MediumSpec) -> Result<PhaseMatching> {
    let (Some(wavelength), Some(angle)) = (medium.wavelength, medium.angle) else {
        return Err(Error::invalid(
            "angle",
            "phase matching needs both a wavelength and a beam angle",
        ));
    };
    let theta_c = critical_angle(wavelength, medium.length);
    let k = 2.0 * PI / wavelength;
    let big_k = 2.0 * k * (angle / 2.0).sin();
    let max_order = if big_k == 0.0 {
        None
    } else {
        let bound = PI * k / (big_k * big_k * medium.length);
        // largest n with n (n - 1) < bound
        let mut n = ((1.0 + (1.0 + 4.0 * bound).sqrt()) / 2.0).floor().max(1.0) as u64;
        while n > 1 && (n * (n - 1)) as f64 >= bound {
            n -= 1;
        }
        while (((n + 1) * n) as f64) < bound {
            n += 1;
        }
        Some(n)
    };
    let regime = if max_order == Some(1) {
        AngleRegime::LargeAngle
    } else if angle < theta_c / 3.0 {
        AngleRegime::SmallAngle
    } else {
        AngleRegime::Ambiguous
    };
    Ok(PhaseMatching {
        critical_angle: theta_c,
        grating_wavenumber: big_k,
        max_order,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slab(angle: f64) -> MediumSpec {
        MediumSpec::tm_yag(2.0)
            .unwrap()
            .with_geometry(TM_YAG_WAVELENGTH, angle)
            .unwrap()
    }

    #[test]
    fn critical_angle_of_reference_crystal() {
        let pm = max_phase_matched_order(&slab(0.0)).unwrap();
        assert!((pm.critical_angle - 12.59e-3).abs() < 0.01e-3);
        assert_eq!(pm.max_order, None);
        assert_eq!(pm.regime, AngleRegime::SmallAngle);
    }

    #[test]
    fn experimental_angles() {
        let large = max_phase_matched_order(&slab(17.5e-3)).unwrap();
        assert_eq!(large.max_order, Some(1));
        assert_eq!(large.regime, AngleRegime::LargeAngle);
        let mid = max_phase_matched_order(&slab(7.5e-3)).unwrap();
        assert_eq!(mid.max_order, Some(2));
        assert_eq!(mid.regime, AngleRegime::Ambiguous);
        let small = max_phase_matched_order(&slab(1e-3)).unwrap();
        assert!(small.max_order.unwrap() > 10);
        assert_eq!(small.regime, AngleRegime::SmallAngle);
    }

    #[test]
    fn order_bound_is_tight() {
        let m = slab(2e-3);
        let pm = max_phase_matched_order(&m).unwrap();
        let n = pm.max_order.unwrap() as f64;
        let k = 2.0 * PI / TM_YAG_WAVELENGTH;
        let phase = |n: f64| n * (n - 1.0) * pm.grating_wavenumber.powi(2) * m.length / k;
        assert!(phase(n) < PI);
        assert!(phase(n + 1.0) >= PI);
    }

    #[test]
    fn geometry_required() {
        assert!(max_phase_matched_order(&MediumSpec::new(1.0, 1.0).unwrap()).is_err());
        assert!(MediumSpec::new(0.0, 1.0).is_err());
        assert!(MediumSpec::from_optical_depth(-1.0, 1.0).is_err());
    }

    #[test]
    fn depths_end_exactly() {
        let m = MediumSpec::tm_yag(1.8).unwrap();
        let z = m.depths(7);
        assert_eq!(z.len(), 8);
        assert_eq!(z[0], 0.0);
        assert_eq!(z[7], m.length);
    }
}
