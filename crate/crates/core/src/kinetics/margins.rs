use super::LevelScheme;

/// Largest drive strengths used for the Tm:YAG operating points: `zeta <r>`
/// for the standard scheme and `xi <r>` for the five-level scheme.
pub const STANDARD_OPERATING_LIMIT: f64 = 0.9;
pub const TM5_OPERATING_LIMIT: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginStatus {
    Pass,
    Warn,
}

/// How close a pumping rate is to the weak-field limits.
///
/// Ratios are "fraction of the limit": values at or below one pass. Nothing
/// here is a hard failure; saturated regimes can still be simulated.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginReport {
    /// `R_peak / (gamma_e / 2)`: optical saturation.
    pub saturation_ratio: f64,
    /// Same with the phase-averaged rate `<R> = R_peak / 2`.
    pub mean_saturation_ratio: f64,
    /// `R_peak / (gamma_m gamma_e / gamma_b)`: metastable accumulation (Tm only).
    pub metastable_ratio: Option<f64>,
    /// Drive strength `zeta <r>` or `xi <r>` implied by `<R>`.
    pub drive: f64,
    /// Operating-point ceiling on the drive, when the scheme has one.
    pub operating_limit: Option<f64>,
    /// Drive sits at the operating-point ceiling (within 1e-6 relative).
    pub at_operating_limit: bool,
    pub status: MarginStatus,
    pub warnings: Vec<String>,
}

impl MarginReport {
    /// Factor by which `<R>` could grow before reaching `gamma_e / 2`.
    pub fn saturation_headroom(&self) -> f64 {
        1.0 / self.mean_saturation_ratio
    }
}

/// Weak-field margins for a peak pumping rate `r_peak` in s⁻¹ (for a
/// sinusoidal grating, `2 <R>`).
pub fn weak_field_margins(scheme: &LevelScheme, r_peak: f64) -> MarginReport {
    let r_peak = r_peak.max(0.0);
    let gamma_e = scheme.gamma_e();
    let saturation_ratio = r_peak / (gamma_e / 2.0);
    let mean_rate = r_peak / 2.0;
    let metastable_ratio = match *scheme {
        LevelScheme::Tm5 {
            gamma_b, gamma_m, ..
        } => Some(r_peak / (gamma_m * gamma_e / gamma_b)),
        _ => None,
    };
    let drive = scheme.drive_scale() * mean_rate / scheme.rate_unit();
    let operating_limit = match scheme {
        LevelScheme::Standard3 { .. } => Some(STANDARD_OPERATING_LIMIT),
        LevelScheme::Tm5 { .. } => Some(TM5_OPERATING_LIMIT),
        LevelScheme::Lambda3 { .. } => None,
    };

    let mut warnings = Vec::new();
    if saturation_ratio > 1.0 {
        warnings.push(format!(
            "peak pumping rate is {saturation_ratio:.3}x gamma_e/2: optical transition saturates"
        ));
    }
    if let Some(m) = metastable_ratio.filter(|&m| m > 1.0) {
        warnings.push(format!(
            "peak pumping rate is {m:.3}x gamma_m gamma_e / gamma_b: atoms accumulate in |m>"
        ));
    }
    let mut at_operating_limit = false;
    if let Some(limit) = operating_limit {
        let rel = drive / limit - 1.0;
        at_operating_limit = rel.abs() <= 1e-6;
        if rel > 1e-6 {
            warnings.push(format!(
                "drive {drive:.4} exceeds the operating point {limit} of this scheme"
            ));
        }
    }
    let status = if warnings.is_empty() {
        MarginStatus::Pass
    } else {
        MarginStatus::Warn
    };
    MarginReport {
        saturation_ratio,
        mean_saturation_ratio: mean_rate / (gamma_e / 2.0),
        metastable_ratio,
        drive,
        operating_limit,
        at_operating_limit,
        status,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn peak_rate_for_drive(scheme: &LevelScheme, drive: f64) -> f64 {
        2.0 * drive / scheme.drive_scale() * scheme.rate_unit()
    }

    #[test]
    fn zero_rate_passes() {
        for s in [LevelScheme::tm_yag_standard(), LevelScheme::tm_yag_isg()] {
            let m = weak_field_margins(&s, 0.0);
            assert_eq!(m.saturation_ratio, 0.0);
            assert_eq!(m.metastable_ratio.unwrap_or(0.0), 0.0);
            assert_eq!(m.status, MarginStatus::Pass);
        }
    }

    #[test]
    fn tm5_operating_point_is_flagged() {
        let s = LevelScheme::tm_yag_isg();
        let m = weak_field_margins(&s, peak_rate_for_drive(&s, 30.0));
        assert!(m.at_operating_limit);
        assert_eq!(m.status, MarginStatus::Pass);
        assert!((m.drive - 30.0).abs() < 1e-9);
        assert!(m.metastable_ratio.unwrap() < 1.0);

        let over = weak_field_margins(&s, peak_rate_for_drive(&s, 31.0));
        assert_eq!(over.status, MarginStatus::Warn);
    }

    #[test]
    fn standard_operating_point_has_headroom() {
        let s = LevelScheme::tm_yag_standard();
        let m = weak_field_margins(&s, peak_rate_for_drive(&s, 0.9));
        assert_eq!(m.status, MarginStatus::Pass);
        assert!(m.at_operating_limit);
        let h = m.saturation_headroom();
        assert!((6.0..7.0).contains(&h), "headroom {h}");
    }

    #[test]
    fn saturation_warns() {
        let s = LevelScheme::tm_yag_lambda();
        let m = weak_field_margins(&s, s.gamma_e());
        assert_eq!(m.status, MarginStatus::Warn);
        assert!(m.operating_limit.is_none());
    }
}
