//! Weak-probe diffraction on an engraved grating.
//!
//! The probe enters along the order-0 direction with unit amplitude. Orders 0
//! and 1 obey
//!
//! `dE0/dz = -alpha^(0)/2 E0`, `dE1/dz = -alpha^(0)/2 E1 - alpha^(1) E0`
//!
//! and the efficiency is `|E1(L)|^2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::engraving::{
    engrave_large_angle, engrave_small_angle, fourier_coefficients, EngravingRegime,
    FourierGrating, GratingProfile, IdealKind, MediumSpec,
};
use crate::excitation::{sinusoidal_pump, ExcitationField, PhaseGrid};
use crate::kinetics::{LevelScheme, SchemeKind};
use crate::ode::Rk4;
use crate::{Error, Result};

/// Largest change of either output amplitude tolerated when every other depth
/// sample is dropped.
pub const PROBE_TOLERANCE: f64 = 1e-6;

/// Probe amplitudes at the exit face, for a unit input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeResult {
    /// `|E1(L)|^2`
    pub eta: f64,
    pub e0_out: Complex64,
    pub e1_out: Complex64,
    /// `|E0(L)|^2`
    pub transmission: f64,
}

/// Lagrange interpolation through up to four samples around `x`.
fn interpolate<T>(z: &[f64], v: &[T], j: usize, x: f64) -> T
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let n = z.len();
    let m = n.min(4);
    let start = j.saturating_sub(1).min(n - m);
    let mut acc: Option<T> = None;
    for a in start..start + m {
        let mut w = 1.0;
        for b in start..start + m {
            if a != b {
                w *= (x - z[b]) / (z[a] - z[b]);
            }
        }
        let term = v[a] * w;
        acc = Some(match acc {
            Some(s) => s + term,
            None => term,
        });
    }
    acc.expect("at least two samples")
}

/// RK4 over the given nodes; returns the state at every node.
fn march(z: &[f64], a0: &[f64], a1: &[Complex64]) -> Vec<[Complex64; 2]> {
    let mut y = [1.0, 0.0, 0.0, 0.0];
    let mut out = Vec::with_capacity(z.len());
    out.push([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let mut rk = Rk4::new(4);
    for j in 0..z.len() - 1 {
        let h = z[j + 1] - z[j];
        let mid = 0.5 * (z[j] + z[j + 1]);
        let coeff = [
            (a0[j], a1[j]),
            (interpolate(z, a0, j, mid), interpolate(z, a1, j, mid)),
            (a0[j + 1], a1[j + 1]),
        ];
        rk.step(&mut y, h, |stage, y, dy| {
            let (g0, g1) = coeff[stage];
            let (e0, e1) = (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]));
            let d0 = -0.5 * g0 * e0;
            let d1 = -0.5 * g0 * e1 - g1 * e0;
            dy.copy_from_slice(&[d0.re, d0.im, d1.re, d1.im]);
        });
        out.push([Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])]);
    }
    out
}

/// Integrates the probe through `grating` with a step-halving check.
pub fn probe_efficiency(grating: &FourierGrating) -> Result<ProbeResult> {
    let z = grating.z();
    let a0: Vec<f64> = grating.order(0).iter().map(|c| c.re).collect();
    let a1 = grating.order(1);
    let fine = march(z, &a0, &a1);

    let nodes: Vec<usize> = (0..z.len()).step_by(2).collect();
    if nodes.len() >= 4 {
        let pick = |v: &[f64]| nodes.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let a1_coarse: Vec<Complex64> = nodes.iter().map(|&i| a1[i]).collect();
        let coarse = march(&pick(z), &pick(&a0), &a1_coarse);
        let last = *nodes.last().expect("non-empty");
        let (c, f) = (coarse[coarse.len() - 1], fine[last]);
        let change = (c[0] - f[0]).norm().max((c[1] - f[1]).norm());
        if change > PROBE_TOLERANCE {
            return Err(Error::Convergence {
                what: "probe propagation",
                change,
                tolerance: PROBE_TOLERANCE,
            });
        }
    }

    let [e0, e1] = fine[fine.len() - 1];
    Ok(ProbeResult {
        eta: e1.norm_sqr(),
        e0_out: e0,
        e1_out: e1,
        transmission: e0.norm_sqr(),
    })
}

/// `(|alpha1| L)^2 exp(-alpha0 L)`, exact for depth-independent coefficients.
pub fn eta_uniform(alpha0: f64, alpha1: f64, length: f64) -> f64 {
    (alpha1 * length).powi(2) * (-alpha0 * length).exp()
}

/// What the horizontal axis of an [`EfficiencyCurve`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    /// `alpha0 L`
    OpticalDepth,
    /// `zeta <r>` or `xi <r>`
    Drive,
}

/// Efficiency against optical depth or pumping power.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyCurve {
    pub label: String,
    pub parameter: SweepParameter,
    pub x: Vec<f64>,
    pub eta: Vec<f64>,
    pub transmission: Vec<f64>,
    pub regime: EngravingRegime,
    pub scheme: Option<SchemeKind>,
    /// Fixed drive (`zeta <r>` or `xi <r>`) for depth sweeps.
    pub drive: Option<f64>,
    /// Fixed `alpha0 L` for drive sweeps.
    pub optical_depth: Option<f64>,
}

impl EfficiencyCurve {
    /// Sample with the largest efficiency; the first one wins ties.
    pub fn argmax(&self) -> (f64, f64) {
        let mut best = 0;
        for (i, e) in self.eta.iter().enumerate() {
            if *e > self.eta[best] {
                best = i;
            }
        }
        (self.x[best], self.eta[best])
    }

    /// Efficiency at the sample closest to `x`.
    pub fn at(&self, x: f64) -> f64 {
        let mut best = 0;
        for (i, xi) in self.x.iter().enumerate() {
            if (xi - x).abs() < (self.x[best] - x).abs() {
                best = i;
            }
        }
        self.eta[best]
    }
}

/// `step, 2 step, ..., max` without accumulated rounding.
pub fn optical_depth_grid(step: f64, max: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && max >= step) {
        return Err(Error::invalid("step", "need 0 < step <= max"));
    }
    let n = (max / step + 1e-9).floor() as usize;
    // dividing by an integral 1/step keeps 0.05 grids on decimal values
    let inv = (1.0 / step).round();
    let exact = ((1.0 / step) - inv).abs() < 1e-9;
    Ok((1..=n)
        .map(|k| {
            if exact {
                k as f64 / inv
            } else {
                k as f64 * step
            }
        })
        .collect())
}

/// Engraves `field` in the given regime and probes the result.
pub fn engrave_and_probe(
    scheme: &LevelScheme,
    field: &ExcitationField,
    medium: &MediumSpec,
    regime: EngravingRegime,
    n_z: usize,
) -> Result<(GratingProfile, ProbeResult)> {
    let (profile, fourier) = match regime {
        EngravingRegime::SmallAngle => {
            let p = engrave_small_angle(scheme, field, medium, n_z)?;
            let f = fourier_coefficients(&p, 1)?;
            (p, f)
        }
        EngravingRegime::LargeAngle => engrave_large_angle(scheme, field, medium, n_z)?,
        other => {
            return Err(Error::invalid(
                "regime",
                format!("cannot engrave in the `{other}` regime"),
            ))
        }
    };
    let probe = probe_efficiency(&fourier)?;
    Ok((profile, probe))
}

fn scheme_label(scheme: &LevelScheme, regime: EngravingRegime) -> String {
    let name = if scheme.kind().is_sublevel() {
        "isg"
    } else {
        "standard"
    };
    format!("{name}-{}", regime.as_str())
}

/// Sweeps `alpha0 L` at fixed reduced rate `r_avg` (sinusoidal pumping).
pub fn efficiency_vs_depth(
    scheme: &LevelScheme,
    r_avg: f64,
    regime: EngravingRegime,
    optical_depths: &[f64],
    grid: &PhaseGrid,
    n_z: usize,
) -> Result<EfficiencyCurve> {
    let field = sinusoidal_pump(grid, r_avg)?;
    let results = optical_depths
        .par_iter()
        .map(|&od| {
            let medium = MediumSpec::tm_yag(od)?;
            Ok(engrave_and_probe(scheme, &field, &medium, regime, n_z)?.1)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EfficiencyCurve {
        label: scheme_label(scheme, regime),
        parameter: SweepParameter::OpticalDepth,
        x: optical_depths.to_vec(),
        eta: results.iter().map(|p| p.eta).collect(),
        transmission: results.iter().map(|p| p.transmission).collect(),
        regime,
        scheme: Some(scheme.kind()),
        drive: Some(r_avg * scheme.drive_scale()),
        optical_depth: None,
    })
}

/// Sweeps the drive (`zeta <r>` or `xi <r>`) at fixed `alpha0 L`.
pub fn efficiency_vs_drive(
    scheme: &LevelScheme,
    drives: &[f64],
    regime: EngravingRegime,
    optical_depth: f64,
    grid: &PhaseGrid,
    n_z: usize,
) -> Result<EfficiencyCurve> {
    let scale = scheme.drive_scale();
    let medium = MediumSpec::tm_yag(optical_depth)?;
    let results = drives
        .par_iter()
        .map(|&d| {
            let field = sinusoidal_pump(grid, d / scale)?;
            Ok(engrave_and_probe(scheme, &field, &medium, regime, n_z)?.1)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EfficiencyCurve {
        label: scheme_label(scheme, regime),
        parameter: SweepParameter::Drive,
        x: drives.to_vec(),
        eta: results.iter().map(|p| p.eta).collect(),
        transmission: results.iter().map(|p| p.transmission).collect(),
        regime,
        scheme: Some(scheme.kind()),
        drive: None,
        optical_depth: Some(optical_depth),
    })
}

/// Closed-form efficiency of a depth-uniform ideal grating.
pub fn ideal_efficiency(kind: IdealKind, optical_depths: &[f64]) -> EfficiencyCurve {
    let a1 = kind.first_harmonic();
    EfficiencyCurve {
        label: format!("ideal-{}", kind.as_str()),
        parameter: SweepParameter::OpticalDepth,
        x: optical_depths.to_vec(),
        eta: optical_depths
            .iter()
            .map(|&od| eta_uniform(1.0, a1, od))
            .collect(),
        transmission: optical_depths.iter().map(|&od| (-od).exp()).collect(),
        regime: EngravingRegime::UniformIdeal,
        scheme: None,
        drive: None,
        optical_depth: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_values() {
        assert!((eta_uniform(1.0, 0.5, 2.0) - (-2.0f64).exp()).abs() < 1e-15);
        let sq = eta_uniform(1.0, 2.0 / PI, 2.0);
        assert!((sq - 0.2194).abs() < 5e-5);
        assert_eq!(eta_uniform(1.0, 0.5, 0.0), 0.0);
    }

    #[test]
    fn uniform_probe_matches_closed_form() {
        for (a1, phase) in [(0.5, 0.0), (2.0 / PI, 1.0), (0.3, -2.5)] {
            let g =
                FourierGrating::uniform(1.0, Complex64::from_polar(a1, phase), 2.0, 400).unwrap();
            let p = probe_efficiency(&g).unwrap();
            let exact = eta_uniform(1.0, a1, 2.0);
            assert!((p.eta - exact).abs() / exact < 1e-6);
            assert!((p.transmission - (-2.0f64).exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn no_grating_no_diffraction() {
        let g = FourierGrating::uniform(1.5, Complex64::new(0.0, 0.0), 1.0, 50).unwrap();
        let p = probe_efficiency(&g).unwrap();
        assert_eq!(p.eta, 0.0);
        assert!((p.transmission - (-1.5f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn interpolation_is_exact_for_cubics() {
        let z: Vec<f64> = (0..6).map(|i| i as f64 * 0.3).collect();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let v: Vec<f64> = z.iter().map(|&x| f(x)).collect();
        for j in 0..5 {
            let x = 0.5 * (z[j] + z[j + 1]);
            assert!((interpolate(&z, &v, j, x) - f(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn depth_grid() {
        let g = optical_depth_grid(0.05, 3.0).unwrap();
        assert_eq!(g.len(), 60);
        assert_eq!(g[35], 1.8);
        assert_eq!(*g.last().unwrap(), 3.0);
    }
}
