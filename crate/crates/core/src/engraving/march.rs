//! Depth marches of the engraving fields.

use num_complex::Complex64;

use super::fourier::first_two;
use super::{
    alpha_row, check_alignment, EngravingRegime, FourierGrating, GratingProfile, MediumSpec,
};
use crate::excitation::ExcitationField;
use crate::kinetics::LevelScheme;
use crate::ode::Rk4;
use crate::{Error, Result};

/// Largest `|delta alpha| / alpha0` tolerated between `n_z` and `2 n_z`.
pub const STEP_HALVING_TOLERANCE: f64 = 1e-6;

pub const MIN_DEPTH_STEPS: usize = 50;

/// Small-angle grating together with the spectral intensity that engraved it.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallAngleRun {
    pub profile: GratingProfile,
    /// `I(z, phi)` normalised so that its phase average at `z = 0` is 1,
    /// row-major like the profile.
    pub intensity: Vec<f64>,
}

/// Large-angle grating with the two engraving amplitudes at every depth.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeAngleRun {
    pub profile: GratingProfile,
    pub fourier: FourierGrating,
    pub fields: Vec<[Complex64; 2]>,
}

fn check_steps(n_z: usize) -> Result<()> {
    if n_z < MIN_DEPTH_STEPS {
        return Err(Error::invalid(
            "n_z",
            format!("at least {MIN_DEPTH_STEPS} depth steps are required, got {n_z}"),
        ));
    }
    Ok(())
}

fn compare_halved(
    coarse: &GratingProfile,
    fine: &GratingProfile,
    what: &'static str,
) -> Result<()> {
    let mut change: f64 = 0.0;
    for i in 0..=coarse.n_z() {
        for (a, b) in coarse.row(i).iter().zip(fine.row(2 * i)) {
            change = change.max((a - b).abs() / coarse.alpha0());
        }
    }
    if change > STEP_HALVING_TOLERANCE {
        return Err(Error::Convergence {
            what,
            change,
            tolerance: STEP_HALVING_TOLERANCE,
        });
    }
    Ok(())
}

fn small_angle_pass(
    scheme: &LevelScheme,
    field: &ExcitationField,
    medium: &MediumSpec,
    n_z: usize,
) -> Result<SmallAngleRun> {
    let n = field.grid().len();
    let shift = field.replica_shift_bins();
    let r_avg = field.r_avg();
    let alpha0 = medium.alpha0;
    let h = medium.length / n_z as f64;
    let rates = |i: &[f64]| i.iter().map(|v| r_avg * v.max(0.0)).collect::<Vec<_>>();

    let mut intensity = field.shape().to_vec();
    let mut alpha = Vec::with_capacity(n * (n_z + 1));
    let mut trace = Vec::with_capacity(n * (n_z + 1));
    let mut failure = None;
    let mut rk = Rk4::new(n);
    for step in 0..=n_z {
        alpha.extend(alpha_row(scheme, alpha0, &rates(&intensity), shift)?);
        trace.extend_from_slice(&intensity);
        if step == n_z {
            break;
        }
        rk.step(&mut intensity, h, |_, y, dy| {
            match alpha_row(scheme, alpha0, &rates(y), shift) {
                Ok(a) => {
                    for k in 0..n {
                        dy[k] = -a[k] * y[k];
                    }
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    dy.fill(0.0);
                }
            }
        });
        if let Some(e) = failure.take() {
            return Err(e);
        }
    }
    let profile = GratingProfile::new(
        field.grid(),
        medium.depths(n_z),
        alpha,
        alpha0,
        Some(scheme.kind()),
        EngravingRegime::SmallAngle,
    )?;
    Ok(SmallAngleRun {
        profile,
        intensity: trace,
    })
}

/// Small-angle march with the step-halving check.
///
/// Every order is phase matched, so each phase sample obeys
/// `dI/dz = -alpha(z, phi) I` with `r(z, phi) = <r> I(z, phi)`. The replica
/// couples `phi` to `phi + pi` through the local steady state.
pub fn trace_small_angle(
    scheme: &LevelScheme,
    field: &ExcitationField,
    medium: &MediumSpec,
    n_z: usize,
) -> Result<SmallAngleRun> {
    check_steps(n_z)?;
    check_alignment(scheme, field)?;
    let run = small_angle_pass(scheme, field, medium, n_z)?;
    let fine = small_angle_pass(scheme, field, medium, 2 * n_z)?;
    compare_halved(&run.profile, &fine.profile, "small-angle engraving")?;
    Ok(run)
}

pub fn engrave_small_angle(
    scheme: &LevelScheme,
    field: &ExcitationField,
    medium: &MediumSpec,
    n_z: usize,
) -> Result<GratingProfile> {
    Ok(trace_small_angle(scheme, field, medium, n_z)?.profile)
}

struct TwoBeam<'a> {
    scheme: &'a LevelScheme,
    alpha0: f64,
    shift: usize,
    /// `<r> / (|E0(0)|^2 + |E1(0)|^2)`
    scale: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl TwoBeam<'_> {
    fn row(&self, y: &[f64]) -> Result<Vec<f64>> {
        let (e0, e1) = (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]));
        let rates: Vec<f64> = (0..self.cos.len())
            .map(|k| {
                let phase = Complex64::new(self.cos[k], -self.sin[k]);
                self.scale * (e0 + e1 * phase).norm_sqr()
            })
            .collect();
        alpha_row(self.scheme, self.alpha0, &rates, self.shift)
    }

    fn rhs(&self, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let (a0, a1) = first_two(&self.row(y)?, &self.cos, &self.sin);
        let (e0, e1) = (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]));
        let d0 = -0.5 * a0 * e0;
        let d1 = -0.5 * a0 * e1 - a1 * e0;
        dy.copy_from_slice(&[d0.re, d0.im, d1.re, d1.im]);
        Ok(())
    }
}

fn large_angle_pass(
    scheme: &LevelScheme,
    field: &ExcitationField,
    medium: &MediumSpec,
    n_z: usize,
    amplitudes: [Complex64; 2],
) -> Result<LargeAngleRun> {
    let grid = field.grid();
    let norm = amplitudes[0].norm_sqr() + amplitudes[1].norm_sqr();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::invalid(
            "amplitudes",
            "engraving beams carry no power",
        ));
    }
    let model = TwoBeam {
        scheme,
        alpha0: medium.alpha0,
        shift: field.replica_shift_bins(),
        scale: field.r_avg() / norm,
        cos: grid.phases().map(f64::cos).collect(),
        sin: grid.phases().map(f64::sin).collect(),
    };
    let h = medium.length / n_z as f64;
    let mut y = [
        amplitudes[0].re,
        amplitudes[0].im,
        amplitudes[1].re,
        amplitudes[1].im,
    ];
    let mut alpha = Vec::with_capacity(grid.len() * (n_z + 1));
    let mut coeffs = Vec::with_capacity(n_z + 1);
    let mut fields = Vec::with_capacity(n_z + 1);
    let mut failure = None;
    let mut rk = Rk4::new(4);
    for step in 0..=n_z {
        let row = model.row(&y)?;
        let (a0, a1) = first_two(&row, &model.cos, &model.sin);
        coeffs.push(vec![Complex64::new(a0, 0.0), a1]);
        alpha.extend(row);
        fields.push([Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3])]);
        if step == n_z {
            break;
        }
        rk.step(&mut y, h, |_, y, dy| {
            if let Err(e) = model.rhs(y, dy) {
                failure.get_or_insert(e);
                dy.fill(0.0);
            }
        });
        if let Some(e) = failure.take() {
            return Err(e);
        }
    }
    let z = medium.depths(n_z);
    let fourier = FourierGrating::new(z.clone(), coeffs)?;
    let profile = GratingProfile::new(
        grid,
        z,
        alpha,
        medium.alpha0,
        Some(scheme.kind()),
        EngravingRegime::LargeAngle,
    )?;
    Ok(LargeAngleRun {
        profile,
        fourier,
        fields,
    })
}

/// Large-angle march with arbitrary entrance amplitudes `[E0, E1]`.
///
/// Only orders 0 and 1 propagate:
///
/// `dE0/dz = -alpha0(z)/2 E0`, `dE1/dz = -alpha0(z)/2 E1 - alpha1(z) E0`
///
/// and the local rate is `r(z, phi) = <r> |E0 + E1 e^{-i phi}|^2 / norm`
/// with `norm` fixed at the entrance. Only `<r>`, the grid and the replica
/// shift of `field` are used; its shape is implied by the two beams.
pub fn trace_large_angle(
    scheme: &LevelScheme,
    field: &ExcitationField,
    medium: &MediumSpec,
    n_z: usize,
    amplitudes: [Complex64; 2],
) -> Result<LargeAngleRun> {
    check_steps(n_z)?;
    check_alignment(scheme, field)?;
    let run = large_angle_pass(scheme, field, medium, n_z, amplitudes)?;
    let fine = large_angle_pass(scheme, field, medium, 2 * n_z, amplitudes)?;
    compare_halved(&run.profile, &fine.profile, "large-angle engraving")?;
    Ok(run)
}

/// Large-angle march with two equal engraving beams.
pub fn engrave_large_angle(
    scheme: &LevelScheme,
    field: &ExcitationField,
    medium: &MediumSpec,
    n_z: usize,
) -> Result<(GratingProfile, FourierGrating)> {
    let one = Complex64::new(1.0, 0.0);
    let run = trace_large_angle(scheme, field, medium, n_z, [one, one])?;
    Ok((run.profile, run.fourier))
}
