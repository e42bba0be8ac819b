//! Absorption gratings engraved through an optically thick medium.
//!
//! A grating is stored as `alpha(z_i, phi_k)` on `n_z + 1` depths and the
//! phase grid of the excitation. Two propagation models are provided:
//!
//! * small angle, where every diffraction order is phase matched and the
//!   spectral intensity simply obeys Beer's law pointwise in `phi`;
//! * large angle, where only orders 0 and 1 propagate and the grating is
//!   described by its first two Fourier coefficients.

mod fourier;
mod march;
mod medium;

pub use fourier::{fourier_coefficients, FourierGrating};
pub use march::{
    engrave_large_angle, engrave_small_angle, trace_large_angle, trace_small_angle, LargeAngleRun,
    SmallAngleRun, MIN_DEPTH_STEPS, STEP_HALVING_TOLERANCE,
};
pub use medium::{
    critical_angle, max_phase_matched_order, AngleRegime, MediumSpec, PhaseMatching, TM_YAG_LENGTH,
    TM_YAG_WAVELENGTH,
};

use serde::{Deserialize, Serialize};

use crate::excitation::{ExcitationField, PhaseGrid};
use crate::kinetics::{absorption, steady_state, GridTopology, LevelScheme, SchemeKind};
use crate::{Error, Result};

/// How a [`GratingProfile`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngravingRegime {
    EntranceOnly,
    SmallAngle,
    LargeAngle,
    UniformIdeal,
}

impl EngravingRegime {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::EntranceOnly => "entrance-only",
            Self::SmallAngle => "small-angle",
            Self::LargeAngle => "large-angle",
            Self::UniformIdeal => "uniform-ideal",
        }
    }
}

impl std::fmt::Display for EngravingRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EngravingRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entrance-only" => Ok(Self::EntranceOnly),
            "small-angle" | "small" => Ok(Self::SmallAngle),
            "large-angle" | "large" => Ok(Self::LargeAngle),
            "uniform-ideal" => Ok(Self::UniformIdeal),
            _ => Err(Error::invalid(
                "regime",
                format!("unknown regime `{s}` (small-angle, large-angle)"),
            )),
        }
    }
}

/// Depth-uniform reference gratings of contrast 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdealKind {
    /// `alpha0 (1 + sin phi)`
    Sinusoidal,
    /// `alpha0 (1 + sign(sin phi))`
    Square,
}

impl IdealKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sinusoidal => "sinusoidal",
            Self::Square => "square",
        }
    }

    /// Magnitude of the first Fourier coefficient in units of `alpha0`.
    pub fn first_harmonic(self) -> f64 {
        match self {
            Self::Sinusoidal => 0.5,
            Self::Square => 2.0 / std::f64::consts::PI,
        }
    }
}

impl std::str::FromStr for IdealKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sinusoidal" | "sin" => Ok(Self::Sinusoidal),
            "square" => Ok(Self::Square),
            _ => Err(Error::invalid(
                "ideal",
                format!("unknown ideal grating `{s}` (sinusoidal, square)"),
            )),
        }
    }
}

/// `alpha(z, phi)` in m⁻¹ on a depth by phase grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GratingProfile {
    grid: PhaseGrid,
    z: Vec<f64>,
    alpha: Vec<f64>,
    alpha0: f64,
    length: f64,
    scheme: Option<SchemeKind>,
    regime: EngravingRegime,
}

impl GratingProfile {
    /// `alpha` is row-major, one row of `grid.len()` values per depth.
    pub fn new(
        grid: PhaseGrid,
        z: Vec<f64>,
        alpha: Vec<f64>,
        alpha0: f64,
        scheme: Option<SchemeKind>,
        regime: EngravingRegime,
    ) -> Result<Self> {
        if z.is_empty() || alpha.len() != z.len() * grid.len() {
            return Err(Error::invalid(
                "alpha",
                format!(
                    "expected {} x {} samples, got {}",
                    z.len(),
                    grid.len(),
                    alpha.len()
                ),
            ));
        }
        if alpha
            .iter()
            .any(|a| !(a.is_finite() && *a >= -1e-12 * alpha0))
        {
            return Err(Error::invalid(
                "alpha",
                "absorption must be finite and >= 0",
            ));
        }
        let length = *z.last().unwrap_or(&0.0);
        Ok(Self {
            grid,
            z,
            alpha,
            alpha0,
            length,
            scheme,
            regime,
        })
    }

    pub fn grid(&self) -> PhaseGrid {
        self.grid
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// Number of depth steps (`rows() - 1`).
    pub fn n_z(&self) -> usize {
        self.z.len() - 1
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn optical_depth(&self) -> f64 {
        self.alpha0 * self.length
    }

    pub fn scheme(&self) -> Option<SchemeKind> {
        self.scheme
    }

    pub fn regime(&self) -> EngravingRegime {
        self.regime
    }

    pub fn values(&self) -> &[f64] {
        &self.alpha
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.grid.len();
        &self.alpha[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.alpha.chunks_exact(self.grid.len())
    }

    pub fn entrance(&self) -> &[f64] {
        self.row(0)
    }

    pub fn output(&self) -> &[f64] {
        self.row(self.n_z())
    }

    /// Contrast of the row at depth index `i`.
    pub fn contrast_at(&self, i: usize) -> f64 {
        contrast(self.row(i), self.alpha0)
    }

    /// Index of the depth sample closest to `z`.
    pub fn nearest_depth(&self, z: f64) -> usize {
        let mut best = 0;
        for (i, zi) in self.z.iter().enumerate() {
            if (zi - z).abs() < (self.z[best] - z).abs() {
                best = i;
            }
        }
        best
    }
}

/// `(max - min) / alpha0` of one phase row.
pub fn contrast(row: &[f64], alpha0: f64) -> f64 {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = row.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min) / alpha0
}

/// Refuses sublevel excitations whose replica is not half a period away,
/// unless the field opted in.
pub(crate) fn check_alignment(scheme: &LevelScheme, field: &ExcitationField) -> Result<()> {
    let n = field.grid().len();
    if scheme.kind().is_sublevel()
        && field.replica_shift_bins() != n / 2
        && !field.misaligned_allowed()
    {
        return Err(Error::MisalignedReplica {
            bins: field.replica_shift_bins(),
            n_phi: n,
        });
    }
    Ok(())
}

/// Steady-state absorption for a row of reduced rates `r`, whose replica is
/// shifted by `shift` bins.
pub(crate) fn alpha_row(
    scheme: &LevelScheme,
    alpha0: f64,
    rates: &[f64],
    shift: usize,
) -> Result<Vec<f64>> {
    let n = rates.len();
    let diffs = (0..n)
        .map(|k| steady_state(scheme, rates[k], rates[(k + n - shift) % n]))
        .collect::<Result<Vec<_>>>()?;
    Ok(absorption(scheme, alpha0, &diffs, shift as f64, GridTopology::Periodic)?.alpha)
}

/// `alpha(phi)` at `z = 0`: steady state of the local rates, then the
/// absorption of both transitions.
pub fn entrance_profile(
    scheme: &LevelScheme,
    field: &ExcitationField,
    alpha0: f64,
) -> Result<Vec<f64>> {
    check_alignment(scheme, field)?;
    alpha_row(scheme, alpha0, field.rates(), field.replica_shift_bins())
}

/// Depth-uniform sinusoidal or square grating.
pub fn ideal_grating(
    kind: IdealKind,
    medium: &MediumSpec,
    grid: &PhaseGrid,
    n_z: usize,
) -> Result<GratingProfile> {
    if n_z == 0 {
        return Err(Error::invalid("n_z", "must be >= 1"));
    }
    let n = grid.len();
    let a0 = medium.alpha0;
    let row: Vec<f64> = (0..n)
        .map(|k| match kind {
            IdealKind::Sinusoidal => a0 * (1.0 + grid.phi(k).sin()),
            IdealKind::Square => {
                // sin(phi) is exactly zero at k = 0 and k = n/2
                let sign = if k == 0 || k == n / 2 {
                    0.0
                } else if k < n / 2 {
                    1.0
                } else {
                    -1.0
                };
                a0 * (1.0 + sign)
            }
        })
        .collect();
    let z = medium.depths(n_z);
    let alpha = row.iter().copied().cycle().take(n * (n_z + 1)).collect();
    GratingProfile::new(*grid, z, alpha, a0, None, EngravingRegime::UniformIdeal)
}
