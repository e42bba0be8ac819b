//! Pumping-rate profiles.
//!
//! Two domains are used. The phase domain samples one period of the
//! spectro-spatial phase `phi = 2 pi nu tau + K.x` and assumes an infinitely
//! broad excitation; every propagation and efficiency result lives there. The
//! frequency domain samples a finite window of optical detuning and is used
//! for pulse-pair spectra with a real envelope.

use std::f64::consts::{LN_2, PI};

use crate::kinetics::{absorption, steady_state, GridTopology, LevelScheme};
use crate::{Error, Result};

/// Uniform samples `phi_k = 2 pi k / n` of one period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseGrid {
    n_phi: usize,
}

impl PhaseGrid {
    pub const MIN_POINTS: usize = 16;
    pub const DEFAULT_POINTS: usize = 256;

    /// `n_phi` must be even (so that a half-period shift is exact) and at
    /// least [`Self::MIN_POINTS`].
    pub fn new(n_phi: usize) -> Result<Self> {
        if n_phi < Self::MIN_POINTS || !n_phi.is_multiple_of(2) {
            return Err(Error::invalid(
                "n_phi",
                format!("must be even and >= {}, got {n_phi}", Self::MIN_POINTS),
            ));
        }
        Ok(Self { n_phi })
    }

    pub fn len(&self) -> usize {
        self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn phi(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n_phi as f64
    }

    pub fn phases(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_phi).map(|k| self.phi(k))
    }

    /// Number of bins for a shift of `fraction` of a period, if exact.
    pub fn bins_for(&self, fraction: f64) -> Result<usize> {
        let bins = fraction * self.n_phi as f64;
        let rounded = bins.round();
        if !bins.is_finite() || (bins - rounded).abs() > 1e-9 {
            return Err(Error::GridResolution { bins });
        }
        Ok((rounded as i64).rem_euclid(self.n_phi as i64) as usize)
    }
}

impl Default for PhaseGrid {
    fn default() -> Self {
        Self {
            n_phi: Self::DEFAULT_POINTS,
        }
    }
}

/// Reduced pumping rate over the phase grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationField {
    grid: PhaseGrid,
    shape: Vec<f64>,
    rates: Vec<f64>,
    r_avg: f64,
    replica_shift_bins: usize,
    allow_misaligned: bool,
}

impl ExcitationField {
    /// Wraps an arbitrary non-negative profile. The replica shift defaults to
    /// half a period.
    pub fn from_rates(grid: PhaseGrid, rates: Vec<f64>) -> Result<Self> {
        if rates.len() != grid.len() {
            return Err(Error::invalid(
                "rates",
                format!("expected {} samples, got {}", grid.len(), rates.len()),
            ));
        }
        if rates.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::invalid(
                "rates",
                "pumping rates must be finite and >= 0",
            ));
        }
        let r_avg = rates.iter().sum::<f64>() / rates.len() as f64;
        let shape = if r_avg > 0.0 {
            rates.iter().map(|r| r / r_avg).collect()
        } else {
            vec![1.0; rates.len()]
        };
        Ok(Self {
            grid,
            shape,
            rates,
            r_avg,
            replica_shift_bins: grid.len() / 2,
            allow_misaligned: false,
        })
    }

    /// Builds `r = r_avg * shape`. The shape is rescaled to unit mean, so it
    /// survives `r_avg = 0` and can be reused at other powers.
    pub fn from_shape(grid: PhaseGrid, shape: Vec<f64>, r_avg: f64) -> Result<Self> {
        if !(r_avg.is_finite() && r_avg >= 0.0) {
            return Err(Error::invalid(
                "r_avg",
                format!("must be >= 0, got {r_avg}"),
            ));
        }
        let mut field = Self::from_rates(grid, shape)?;
        if field.r_avg == 0.0 {
            return Err(Error::invalid("shape", "shape has zero mean"));
        }
        field.rates = field.shape.iter().map(|s| r_avg * s).collect();
        field.r_avg = r_avg;
        Ok(field)
    }

    /// Same shape and replica settings at another average rate.
    pub fn with_r_avg(&self, r_avg: f64) -> Result<Self> {
        if !(r_avg.is_finite() && r_avg >= 0.0) {
            return Err(Error::invalid(
                "r_avg",
                format!("must be >= 0, got {r_avg}"),
            ));
        }
        Ok(Self {
            rates: self.shape.iter().map(|s| r_avg * s).collect(),
            r_avg,
            ..self.clone()
        })
    }

    /// Sets the second-transition offset as a fraction of the grating period
    /// (`delta_ge * tau`, modulo 1).
    pub fn with_replica_shift(mut self, fraction: f64) -> Result<Self> {
        self.replica_shift_bins = self.grid.bins_for(fraction)?;
        Ok(self)
    }

    /// Lets sublevel schemes use a replica shift other than half a period.
    pub fn allow_misaligned(mut self) -> Self {
        self.allow_misaligned = true;
        self
    }

    pub fn grid(&self) -> PhaseGrid {
        self.grid
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Rate profile divided by `<r>` (unit mean).
    pub fn shape(&self) -> &[f64] {
        &self.shape
    }

    /// Phase-averaged reduced rate `<r>`.
    pub fn r_avg(&self) -> f64 {
        self.r_avg
    }

    pub fn replica_shift_bins(&self) -> usize {
        self.replica_shift_bins
    }

    pub fn misaligned_allowed(&self) -> bool {
        self.allow_misaligned
    }
}

/// `r(phi) = <r> (1 + cos phi)`.
pub fn sinusoidal_pump(grid: &PhaseGrid, r_avg: f64) -> Result<ExcitationField> {
    if !(r_avg.is_finite() && r_avg >= 0.0) {
        return Err(Error::invalid(
            "r_avg",
            format!("must be >= 0, got {r_avg}"),
        ));
    }
    let shape = grid.phases().map(|p| 1.0 + p.cos()).collect();
    ExcitationField::from_shape(*grid, shape, r_avg)
}

/// The same profile seen by a transition offset by `shift` periods:
/// `r'(phi) = r(phi - 2 pi shift)`.
pub fn replica_field(field: &ExcitationField, shift: f64) -> Result<ExcitationField> {
    let bins = field.grid.bins_for(shift)?;
    let n = field.grid.len();
    let rotate = |v: &[f64]| (0..n).map(|k| v[(k + n - bins) % n]).collect();
    Ok(ExcitationField {
        shape: rotate(&field.shape),
        rates: rotate(&field.rates),
        ..field.clone()
    })
}

/// Temporal shape of each engraving pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Envelope {
    Rectangular,
    Gaussian,
}

/// A pair of pulses repeated every `period`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulsePairSpec {
    pub envelope: Envelope,
    /// Area of the first pulse (rad).
    pub pulse_area: f64,
    /// Area of the delayed pulse (rad).
    pub second_pulse_area: f64,
    /// Duration (rectangular) or intensity-independent amplitude FWHM
    /// (gaussian), s.
    pub duration: f64,
    /// Delay `tau` between the two pulses, s.
    pub delay: f64,
    /// Repetition period `T`, s.
    pub period: f64,
    /// Detuning of the envelope centre, Hz.
    pub center_offset: f64,
}

impl PulsePairSpec {
    pub fn rectangular(area: f64, duration: f64, delay: f64, period: f64) -> Self {
        Self {
            envelope: Envelope::Rectangular,
            pulse_area: area,
            second_pulse_area: area,
            duration,
            delay,
            period,
            center_offset: 0.0,
        }
    }

    pub fn gaussian(area: f64, fwhm: f64, delay: f64, period: f64) -> Self {
        Self {
            envelope: Envelope::Gaussian,
            ..Self::rectangular(area, fwhm, delay, period)
        }
    }

    pub fn with_second_area(mut self, area: f64) -> Self {
        self.second_pulse_area = area;
        self
    }

    pub fn with_center(mut self, offset: f64) -> Self {
        self.center_offset = offset;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delay.is_finite() && self.delay > 0.0) {
            return Err(Error::invalid("delay", "tau must be > 0"));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::invalid("duration", "must be > 0"));
        }
        if self.delay <= self.duration {
            return Err(Error::invalid(
                "delay",
                "the pulses overlap: tau must exceed the pulse duration",
            ));
        }
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::invalid("period", "must be > 0"));
        }
        if !(self.pulse_area >= 0.0 && self.second_pulse_area >= 0.0) {
            return Err(Error::invalid("pulse_area", "must be >= 0"));
        }
        Ok(())
    }

    /// Spectral period of the fringes, `1 / tau`.
    pub fn fringe_spacing(&self) -> f64 {
        1.0 / self.delay
    }

    /// Whether the atoms have time to leave the excited state between pairs
    /// (`T >= 2 / gamma_e`).
    pub fn relaxes_between_pairs(&self, scheme: &LevelScheme) -> bool {
        self.period >= 2.0 / scheme.gamma_e()
    }

    /// Fourier transform of a unit-area pulse at detuning `nu`.
    fn unit_transform(&self, nu: f64) -> f64 {
        let d = nu - self.center_offset;
        match self.envelope {
            Envelope::Rectangular => {
                let x = PI * d * self.duration;
                if x.abs() < 1e-12 {
                    1.0
                } else {
                    x.sin() / x
                }
            }
            Envelope::Gaussian => {
                let sigma = self.duration / (2.0 * (2.0 * LN_2).sqrt());
                (-2.0 * PI * PI * sigma * sigma * d * d).exp()
            }
        }
    }

    /// `|Omega~(nu)|^2` of the pulse pair.
    pub fn spectral_density(&self, nu: f64) -> f64 {
        let s = self.unit_transform(nu);
        let (a1, a2) = (self.pulse_area, self.second_pulse_area);
        s * s * (a1 * a1 + a2 * a2 + 2.0 * a1 * a2 * (2.0 * PI * nu * self.delay).cos())
    }

    /// Pumping rate `R(nu) = |Omega~(nu)|^2 / (4T)` in s⁻¹.
    pub fn rate(&self, nu: f64) -> f64 {
        self.spectral_density(nu) / (4.0 * self.period)
    }

    /// Fringe-averaged rate at the envelope centre, `(A1^2 + A2^2) / (4T)`;
    /// `A^2 / (2T)` for equal pulses.
    pub fn mean_rate_at_center(&self) -> f64 {
        let (a1, a2) = (self.pulse_area, self.second_pulse_area);
        (a1 * a1 + a2 * a2) / (4.0 * self.period)
    }
}

/// Sampled pulse-pair pumping spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpSpectrum {
    pub nu: Vec<f64>,
    /// `R(nu)` in s⁻¹.
    pub rate: Vec<f64>,
    /// Largest sampled `|Omega~(nu)|^2`.
    pub peak_spectral_density: f64,
    /// `peak_spectral_density <= 0.1`, i.e. the transition is not saturated.
    pub weak: bool,
}

/// Threshold used for the "much smaller than one" pulse-area check.
pub const WEAK_PULSE_LIMIT: f64 = 0.1;

pub fn pulse_pair_spectrum(spec: &PulsePairSpec, nu: &[f64]) -> Result<PumpSpectrum> {
    spec.validate()?;
    let rate: Vec<f64> = nu.iter().map(|&v| spec.rate(v)).collect();
    let peak = nu
        .iter()
        .map(|&v| spec.spectral_density(v))
        .fold(0.0, f64::max);
    Ok(PumpSpectrum {
        nu: nu.to_vec(),
        rate,
        peak_spectral_density: peak,
        weak: peak <= WEAK_PULSE_LIMIT,
    })
}

/// Frequency window for a replica scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanDomain {
    /// Half-width of the window in fringe periods.
    pub half_span_periods: usize,
    /// Samples per fringe period.
    pub bins_per_period: usize,
}

impl Default for ScanDomain {
    fn default() -> Self {
        Self {
            half_span_periods: 12,
            bins_per_period: 64,
        }
    }
}

/// `alpha(nu) / alpha0` for one splitting-to-period ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicaProfile {
    /// `delta_g / Delta`, with `Delta = 1 / tau`.
    pub ratio: f64,
    /// Splitting used, Hz.
    pub splitting: f64,
    pub nu: Vec<f64>,
    pub alpha: Vec<f64>,
    pub truncated: usize,
}

impl ReplicaProfile {
    /// Magnitude of the first fringe harmonic of `alpha / alpha0` over the
    /// central `periods` fringe periods.
    pub fn fringe_amplitude(&self, tau: f64, periods: usize, bins_per_period: usize) -> f64 {
        let n = self.nu.len();
        let width = periods * bins_per_period;
        let start = (n - width) / 2;
        let (mut re, mut im) = (0.0, 0.0);
        for j in start..start + width {
            let ph = 2.0 * PI * self.nu[j] * tau;
            re += self.alpha[j] * ph.cos();
            im += self.alpha[j] * ph.sin();
        }
        (re * re + im * im).sqrt() / width as f64
    }
}

/// Absorption profiles of a sublevel scheme pumped by a finite-bandwidth pulse
/// pair, for several ratios of the ground splitting to the fringe spacing.
///
/// `drive` is `xi <r>` at the envelope centre. The scheme's own splitting is
/// replaced by `ratio / tau` for each entry of `ratios`.
pub fn replica_alignment_scan(
    scheme: &LevelScheme,
    spec: &PulsePairSpec,
    drive: f64,
    ratios: &[f64],
    domain: ScanDomain,
) -> Result<Vec<ReplicaProfile>> {
    spec.validate()?;
    let xi = scheme.xi()?;
    if !(drive.is_finite() && drive >= 0.0) {
        return Err(Error::invalid("drive", "must be >= 0"));
    }
    let reference = spec.mean_rate_at_center();
    if reference <= 0.0 {
        return Err(Error::invalid("pulse_area", "pulse pair carries no energy"));
    }
    let tau = spec.delay;
    let dnu = 1.0 / (tau * domain.bins_per_period as f64);
    let half = (domain.half_span_periods * domain.bins_per_period) as i64;
    let nu: Vec<f64> = (-half..=half)
        .map(|j| spec.center_offset + j as f64 * dnu)
        .collect();
    let reduced = |v: f64| drive / xi * spec.rate(v) / reference;

    ratios
        .iter()
        .map(|&ratio| {
            let splitting = ratio / tau;
            let shift_bins = ratio * domain.bins_per_period as f64;
            let diffs = nu
                .iter()
                .map(|&v| steady_state(scheme, reduced(v), reduced(v - splitting)))
                .collect::<Result<Vec<_>>>()?;
            let abs = absorption(scheme, 1.0, &diffs, shift_bins, GridTopology::Finite)?;
            Ok(ReplicaProfile {
                ratio,
                splitting,
                nu: nu.clone(),
                alpha: abs.alpha,
                truncated: abs.truncated,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rules() {
        assert!(PhaseGrid::new(15).is_err());
        assert!(PhaseGrid::new(18).is_ok());
        assert!(PhaseGrid::new(17).is_err());
        let g = PhaseGrid::new(256).unwrap();
        assert_eq!(g.bins_for(0.5).unwrap(), 128);
        assert_eq!(g.bins_for(1.0).unwrap(), 0);
        assert!(g.bins_for(0.3).is_err());
    }

    #[test]
    fn sinusoid_extremes_and_mean() {
        let g = PhaseGrid::new(256).unwrap();
        let f = sinusoidal_pump(&g, 1.0).unwrap();
        assert!((f.rates()[0] - 2.0).abs() < 1e-14);
        assert!(f.rates()[128].abs() < 1e-15);
        let mean = f.rates().iter().sum::<f64>() / 256.0;
        assert!((mean - 1.0).abs() < 1e-10);
        assert!(sinusoidal_pump(&g, 0.0)
            .unwrap()
            .rates()
            .iter()
            .all(|&r| r == 0.0));
        assert!(sinusoidal_pump(&g, -1.0).is_err());
    }

    #[test]
    fn replica_shifts() {
        let g = PhaseGrid::new(64).unwrap();
        let f = sinusoidal_pump(&g, 0.7).unwrap();
        assert_eq!(replica_field(&f, 0.0).unwrap().rates(), f.rates());
        assert_eq!(replica_field(&f, 1.0).unwrap().rates(), f.rates());
        let anti = replica_field(&f, 0.5).unwrap();
        for (k, (a, b)) in f.rates().iter().zip(anti.rates()).enumerate() {
            assert!((a + b - 1.4).abs() < 1e-12);
            let expected = 0.7 * (1.0 - g.phi(k).cos());
            assert!((b - expected).abs() < 1e-12);
        }
        assert!(replica_field(&f, 0.01).is_err());
    }

    #[test]
    fn fringe_spacing_from_delay() {
        let p = PulsePairSpec::rectangular(0.1, 200e-9, 1e-6, 120e-6);
        assert!((p.fringe_spacing() - 1e6).abs() < 1e-6);
    }

    #[test]
    fn single_pulse_has_no_fringes() {
        let p = PulsePairSpec::gaussian(0.1, 100e-9, 1e-6, 1e-3).with_second_area(0.0);
        let nu: Vec<f64> = (0..200).map(|j| j as f64 * 5e3).collect();
        let s = pulse_pair_spectrum(&p, &nu).unwrap();
        for w in s.rate.windows(2) {
            assert!(w[1] <= w[0] + 1e-18, "envelope must fall monotonically");
        }
    }

    #[test]
    fn equal_pulses_have_unit_visibility() {
        let p = PulsePairSpec::rectangular(0.05, 200e-9, 1e-6, 120e-6);
        // maxima at integer multiples of 1/tau, zeros half-way
        assert!(p.rate(0.5e6) < 1e-20);
        let peak = p.rate(0.0);
        assert!((peak - 0.05f64.powi(2) / 120e-6).abs() / peak < 1e-12);
    }

    #[test]
    fn experimental_pulse_pair_rate() {
        let area = 0.013 * PI;
        let p = PulsePairSpec::rectangular(area, 200e-9, 1e-6, 120e-6);
        let mean = p.mean_rate_at_center();
        assert!((mean - area * area / (2.0 * 120e-6)).abs() < 1e-12);
        let nu: Vec<f64> = (-50..=50).map(|j| j as f64 * 2e4).collect();
        assert!(pulse_pair_spectrum(&p, &nu).unwrap().weak);
        assert!(!p.relaxes_between_pairs(&LevelScheme::tm_yag_isg()));
    }

    #[test]
    fn invalid_delay() {
        let p = PulsePairSpec::rectangular(0.1, 200e-9, 0.0, 1e-3);
        assert!(pulse_pair_spectrum(&p, &[0.0]).is_err());
        let p = PulsePairSpec::rectangular(0.1, 2e-6, 1e-6, 1e-3);
        assert!(p.validate().is_err());
    }
}
