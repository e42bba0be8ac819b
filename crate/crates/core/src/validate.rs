//! The invariant suite run by `isg validate` and by the acceptance tests.
//!
//! Every check returns a [`CheckOutcome`]; an error inside a check is reported
//! as a failure of that check rather than aborting the suite.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::diffraction::{efficiency_vs_depth, engrave_and_probe, eta_uniform, probe_efficiency};
use crate::engraving::{
    engrave_large_angle, fourier_coefficients, trace_large_angle, trace_small_angle,
    EngravingRegime, FourierGrating, GratingProfile, IdealKind, MediumSpec,
};
use crate::excitation::{
    replica_alignment_scan, sinusoidal_pump, PhaseGrid, PulsePairSpec, ScanDomain,
};
use crate::kinetics::{
    steady_state, transient_oracle, LevelScheme, SchemeKind, CONSERVATION_TOLERANCE,
};
use crate::Result;
use num_complex::Complex64;

/// Result of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self {
                name,
                passed,
                detail,
            },
            Err(e) => Self {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Grid sizes used by the suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteSettings {
    pub n_phi: usize,
    pub n_z: usize,
    /// Number of `(r, r')` points for the oracle comparison.
    pub oracle_points: usize,
}

impl Default for SuiteSettings {
    fn default() -> Self {
        Self {
            n_phi: 256,
            n_z: 400,
            oracle_points: 100,
        }
    }
}

/// Deterministic, well-spread points in the unit square (additive
/// recurrence on the plastic number).
pub fn quasi_random_points(n: usize) -> Vec<(f64, f64)> {
    let g = 1.324_717_957_244_746_f64;
    let (a1, a2) = (1.0 / g, 1.0 / (g * g));
    (1..=n)
        .map(|i| ((0.5 + a1 * i as f64).fract(), (0.5 + a2 * i as f64).fract()))
        .collect()
}

/// Largest reduced drive `xi r` probed by the oracle comparison.
pub const ORACLE_DRIVE_MAX: f64 = 100.0;
pub const ORACLE_TOLERANCE: f64 = 1e-6;

/// Steady state against the transient oracle at `points` points with
/// `xi r, xi r'` in `[0, 100]` (and `zeta r` in `[0, 10]`), spread over the
/// three schemes. Also checks population conservation.
pub fn oracle_equivalence(points: usize) -> CheckOutcome {
    let schemes = [
        LevelScheme::tm_yag_standard(),
        LevelScheme::tm_yag_lambda(),
        LevelScheme::tm_yag_isg(),
    ];
    let jobs: Vec<(LevelScheme, f64, f64)> = quasi_random_points(points)
        .into_iter()
        .enumerate()
        .map(|(i, (u, v))| {
            let s = schemes[i % 3];
            let (top, scale) = if s.kind().is_sublevel() {
                (ORACLE_DRIVE_MAX, s.drive_scale())
            } else {
                (10.0, s.drive_scale())
            };
            (s, u * top / scale, v * top / scale)
        })
        .collect();
    let worst = jobs
        .par_iter()
        .map(|&(s, r, rp)| {
            compare_with_oracle(&s, r, rp).map(|c| (c.max_error, c.conservation_error))
        })
        .collect::<Result<Vec<_>>>();
    CheckOutcome::from(
        "oracle equivalence",
        worst.map(|v| {
            let err = v.iter().map(|x| x.0).fold(0.0, f64::max);
            let cons = v.iter().map(|x| x.1).fold(0.0, f64::max);
            (
                err <= ORACLE_TOLERANCE && cons <= CONSERVATION_TOLERANCE,
                format!(
                    "{} points, max |closed - oracle| = {err:.2e} (tol {ORACLE_TOLERANCE:.0e}), \
                     max |sum n - 1| = {cons:.2e} (tol {CONSERVATION_TOLERANCE:.0e})",
                    v.len()
                ),
            )
        }),
    )
}

/// Closed-form steady state next to the transient oracle at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub scheme: SchemeKind,
    pub r: f64,
    pub r_prime: f64,
    /// Oracle populations by level label.
    pub populations: BTreeMap<String, f64>,
    pub closed_primary: f64,
    pub closed_replica: Option<f64>,
    /// Oracle differences, divided by the population outside `|m>` for the
    /// five-level scheme.
    pub oracle_primary: f64,
    pub oracle_replica: Option<f64>,
    pub max_error: f64,
    pub conservation_error: f64,
    pub passed: bool,
}

pub fn compare_with_oracle(scheme: &LevelScheme, r: f64, r_prime: f64) -> Result<OracleComparison> {
    let run = transient_oracle(scheme, r, r_prime, None)?;
    let closed = steady_state(scheme, r, r_prime)?;
    let got = run.state.differences();
    // the five-level closed forms describe the atoms outside |m>
    let outside = match scheme.kind() {
        SchemeKind::Tm5 => 1.0 - run.state.get("m").unwrap_or(0.0),
        _ => 1.0,
    };
    let oracle_primary = got.primary / outside;
    let oracle_replica = got.replica.map(|x| x / outside);
    let mut max_error = (oracle_primary - closed.primary).abs();
    if let (Some(a), Some(b)) = (oracle_replica, closed.replica) {
        max_error = max_error.max((a - b).abs());
    }
    let populations = run
        .state
        .labels()
        .iter()
        .zip(run.state.fractions())
        .map(|(l, v)| (l.to_string(), *v))
        .collect();
    Ok(OracleComparison {
        scheme: scheme.kind(),
        r,
        r_prime,
        populations,
        closed_primary: closed.primary,
        closed_replica: closed.replica,
        oracle_primary,
        oracle_replica,
        max_error,
        conservation_error: run.max_conservation_error,
        passed: max_error <= ORACLE_TOLERANCE
            && run.max_conservation_error <= CONSERVATION_TOLERANCE,
    })
}

fn isg_field(
    grid: &PhaseGrid,
    drive: f64,
) -> Result<(LevelScheme, crate::excitation::ExcitationField)> {
    let scheme = LevelScheme::tm_yag_isg();
    let field = sinusoidal_pump(grid, drive / scheme.xi()?)?;
    Ok((scheme, field))
}

fn symmetry_error(p: &GratingProfile) -> f64 {
    let n = p.grid().len();
    let mut worst: f64 = 0.0;
    for row in p.rows() {
        for k in 0..n / 2 {
            worst = worst.max(((row[k] + row[k + n / 2]) / p.alpha0() - 2.0).abs());
        }
    }
    worst
}

/// `alpha(z, phi) + alpha(z, phi + pi) = 2 alpha0` for both regimes.
pub fn isg_symmetry(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let grid = PhaseGrid::new(s.n_phi)?;
        let (scheme, field) = isg_field(&grid, 30.0)?;
        let medium = MediumSpec::tm_yag(2.0)?;
        let small = trace_small_angle(&scheme, &field, &medium, s.n_z)?.profile;
        let (large, _) = engrave_large_angle(&scheme, &field, &medium, s.n_z)?;
        let err = symmetry_error(&small).max(symmetry_error(&large));
        Ok((err <= 1e-9, format!("max deviation {err:.2e} (tol 1e-9)")))
    })();
    CheckOutcome::from("ISG point symmetry", r)
}

/// `eta + T0 <= 1` for engraved and ideal gratings.
pub fn passivity(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let grid = PhaseGrid::new(s.n_phi)?;
        let mut worst = f64::NEG_INFINITY;
        for scheme in [LevelScheme::tm_yag_standard(), LevelScheme::tm_yag_isg()] {
            let drive = if scheme.kind().is_sublevel() {
                30.0
            } else {
                0.9
            };
            let field = sinusoidal_pump(&grid, drive / scheme.drive_scale())?;
            for od in [0.5, 2.0, 3.0] {
                let medium = MediumSpec::tm_yag(od)?;
                for regime in [EngravingRegime::SmallAngle, EngravingRegime::LargeAngle] {
                    let (_, p) = engrave_and_probe(&scheme, &field, &medium, regime, s.n_z)?;
                    worst = worst.max(p.eta + p.transmission);
                }
            }
        }
        for kind in [IdealKind::Sinusoidal, IdealKind::Square] {
            let g = FourierGrating::uniform(
                1.0,
                Complex64::new(kind.first_harmonic(), 0.0),
                2.0,
                s.n_z,
            )?;
            let p = probe_efficiency(&g)?;
            worst = worst.max(p.eta + p.transmission);
        }
        Ok((worst <= 1.0, format!("max eta + T0 = {worst:.6}")))
    })();
    CheckOutcome::from("passivity", r)
}

/// ISG small-angle efficiency at `alpha0 L = 2` lies between the uniform
/// sinusoidal and square gratings.
pub fn sinusoid_square_ordering(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let grid = PhaseGrid::new(s.n_phi)?;
        let (scheme, field) = isg_field(&grid, 30.0)?;
        let medium = MediumSpec::tm_yag(2.0)?;
        let (_, p) =
            engrave_and_probe(&scheme, &field, &medium, EngravingRegime::SmallAngle, s.n_z)?;
        let sin = eta_uniform(1.0, 0.5, 2.0);
        let sq = eta_uniform(1.0, 2.0 / std::f64::consts::PI, 2.0);
        Ok((
            sin < p.eta && p.eta < sq,
            format!("{sin:.4} < {:.4} < {sq:.4}", p.eta),
        ))
    })();
    CheckOutcome::from("sinusoid < ISG < square", r)
}

/// First fringe harmonic for integer `delta_g tau` relative to half-integer,
/// in the linear regime.
pub fn replica_cancellation_ratio(drive: f64) -> Result<f64> {
    let scheme = LevelScheme::tm_yag_isg();
    let tau = 1e-6;
    let spec = PulsePairSpec::gaussian(0.05, 50e-9, tau, 1e-3);
    let domain = ScanDomain {
        half_span_periods: 24,
        bins_per_period: 32,
    };
    let scan = replica_alignment_scan(&scheme, &spec, drive, &[1.0, 0.5], domain)?;
    let amp = |i: usize| scan[i].fringe_amplitude(tau, 8, domain.bins_per_period);
    Ok(amp(0) / amp(1))
}

pub fn replica_cancellation() -> CheckOutcome {
    let r = replica_cancellation_ratio(0.1).map(|ratio| {
        (
            ratio < 0.05,
            format!("integer / half-integer first harmonic = {ratio:.2e} (limit 0.05)"),
        )
    });
    CheckOutcome::from("replica cancellation", r)
}

/// Two identical runs produce bit-identical gratings and efficiencies.
pub fn determinism(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let grid = PhaseGrid::new(s.n_phi)?;
        let run = || -> Result<(Vec<u64>, u64)> {
            let (scheme, field) = isg_field(&grid, 30.0)?;
            let medium = MediumSpec::tm_yag(2.0)?;
            let (p, probe) =
                engrave_and_probe(&scheme, &field, &medium, EngravingRegime::SmallAngle, s.n_z)?;
            Ok((
                p.values().iter().map(|v| v.to_bits()).collect(),
                probe.eta.to_bits(),
            ))
        };
        let (a, b) = (run()?, run()?);
        Ok((a == b, "two runs compared bit for bit".to_string()))
    })();
    CheckOutcome::from("determinism", r)
}

/// Contrasts at the entrance and exit of the four engraving cases.
pub fn contrasts(n_phi: usize, n_z: usize) -> Result<Vec<(f64, f64)>> {
    let grid = PhaseGrid::new(n_phi)?;
    let medium = MediumSpec::tm_yag(2.0)?;
    let mut out = Vec::new();
    for (scheme, drive) in [
        (LevelScheme::tm_yag_standard(), 0.9),
        (LevelScheme::tm_yag_isg(), 30.0),
    ] {
        let field = sinusoidal_pump(&grid, drive / scheme.drive_scale())?;
        for regime in [EngravingRegime::SmallAngle, EngravingRegime::LargeAngle] {
            let (p, _) = engrave_and_probe(&scheme, &field, &medium, regime, n_z)?;
            out.push((p.contrast_at(0), p.contrast_at(p.n_z())));
        }
    }
    Ok(out)
}

/// Doubling `n_phi` and `n_z` changes no contrast by more than 1e-4.
pub fn grid_doubling(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let base = contrasts(s.n_phi, s.n_z)?;
        let fine = contrasts(2 * s.n_phi, 2 * s.n_z)?;
        let worst = base
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
            .fold(0.0, f64::max);
        Ok((
            worst < 1e-4,
            format!("max contrast change {worst:.2e} (tol 1e-4)"),
        ))
    })();
    CheckOutcome::from("grid doubling", r)
}

/// Large-angle efficiency never exceeds small-angle efficiency.
pub fn regime_ordering(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let grid = PhaseGrid::new(s.n_phi)?;
        let ods = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
        let mut ok = true;
        let mut margin = f64::INFINITY;
        for (scheme, drive) in [
            (LevelScheme::tm_yag_standard(), 0.9),
            (LevelScheme::tm_yag_isg(), 30.0),
        ] {
            let r = drive / scheme.drive_scale();
            let small =
                efficiency_vs_depth(&scheme, r, EngravingRegime::SmallAngle, &ods, &grid, s.n_z)?;
            let large =
                efficiency_vs_depth(&scheme, r, EngravingRegime::LargeAngle, &ods, &grid, s.n_z)?;
            for (a, b) in small.eta.iter().zip(&large.eta) {
                ok &= b <= a;
                margin = margin.min(a - b);
            }
        }
        Ok((ok, format!("min small - large = {margin:.2e}")))
    })();
    CheckOutcome::from("large angle <= small angle", r)
}

/// Small-angle intensity falls with depth and large-angle beam power decays.
pub fn monotone_propagation(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let grid = PhaseGrid::new(s.n_phi)?;
        let (scheme, field) = isg_field(&grid, 30.0)?;
        let medium = MediumSpec::tm_yag(2.0)?;
        let run = trace_small_angle(&scheme, &field, &medium, s.n_z)?;
        let n = grid.len();
        let mut ok = true;
        for i in 0..run.profile.n_z() {
            for k in 0..n {
                let (a, b) = (run.intensity[i * n + k], run.intensity[(i + 1) * n + k]);
                if a > 0.0 {
                    ok &= b < a;
                }
            }
        }
        let one = Complex64::new(1.0, 0.0);
        let large = trace_large_angle(&scheme, &field, &medium, s.n_z, [one, one])?;
        let power: Vec<f64> = large
            .fields
            .iter()
            .map(|e| e[0].norm_sqr() + e[1].norm_sqr())
            .collect();
        ok &= power.windows(2).all(|w| w[1] < w[0]);
        Ok((
            ok,
            "I(z, phi) and |E0|^2 + |E1|^2 strictly decreasing".to_string(),
        ))
    })();
    CheckOutcome::from("monotone propagation", r)
}

/// ISG efficiency grows with the drive at `alpha0 L = 2`.
pub fn power_monotonicity(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let grid = PhaseGrid::new(s.n_phi)?;
        let scheme = LevelScheme::tm_yag_isg();
        let drives = [0.005, 0.05, 0.5, 2.0, 6.0, 11.3, 20.0, 30.0];
        let c = crate::diffraction::efficiency_vs_drive(
            &scheme,
            &drives,
            EngravingRegime::SmallAngle,
            2.0,
            &grid,
            s.n_z,
        )?;
        let ok = c.eta.windows(2).all(|w| w[1] > w[0]);
        Ok((
            ok,
            format!("eta from {:.2e} to {:.4}", c.eta[0], c.eta[c.eta.len() - 1]),
        ))
    })();
    CheckOutcome::from("efficiency grows with power", r)
}

/// The probe integrator against the closed form on uniform gratings.
pub fn uniform_probe(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let mut worst: f64 = 0.0;
        for a1 in [0.1, 0.5, 2.0 / std::f64::consts::PI] {
            for od in [0.5, 2.0, 3.0] {
                let g = FourierGrating::uniform(1.0, Complex64::from_polar(a1, 0.7), od, s.n_z)?;
                let exact = eta_uniform(1.0, a1, od);
                worst = worst.max((probe_efficiency(&g)?.eta - exact).abs() / exact);
            }
        }
        Ok((
            worst < 1e-6,
            format!("max relative error {worst:.2e} (tol 1e-6)"),
        ))
    })();
    CheckOutcome::from("probe vs closed form", r)
}

/// Fourier coefficients of an engraved grating stay below its mean.
pub fn fourier_bound(s: SuiteSettings) -> CheckOutcome {
    let r = (|| {
        let grid = PhaseGrid::new(s.n_phi)?;
        let (scheme, field) = isg_field(&grid, 30.0)?;
        let medium = MediumSpec::tm_yag(2.0)?;
        let p = trace_small_angle(&scheme, &field, &medium, s.n_z)?.profile;
        let f = fourier_coefficients(&p, 8)?;
        let mut ok = true;
        for i in 0..=p.n_z() {
            let a0 = f.coefficient(i, 0);
            ok &= a0.re > 0.0 && a0.im.abs() < 1e-12 * a0.re;
            for q in 1..=8 {
                ok &= f.coefficient(i, q).norm() <= a0.re;
            }
        }
        Ok((
            ok,
            "alpha^(0) real and positive, |alpha^(p)| <= alpha^(0)".to_string(),
        ))
    })();
    CheckOutcome::from("Fourier bounds", r)
}

/// Runs every check. Independent checks run in parallel; the output order is
/// fixed.
pub fn run_suite(s: SuiteSettings) -> Vec<CheckOutcome> {
    let checks: Vec<Box<dyn Fn() -> CheckOutcome + Sync>> = vec![
        Box::new(move || oracle_equivalence(s.oracle_points)),
        Box::new(move || isg_symmetry(s)),
        Box::new(move || passivity(s)),
        Box::new(move || sinusoid_square_ordering(s)),
        Box::new(replica_cancellation),
        Box::new(move || determinism(s)),
        Box::new(move || grid_doubling(s)),
        Box::new(move || regime_ordering(s)),
        Box::new(move || monotone_propagation(s)),
        Box::new(move || power_monotonicity(s)),
        Box::new(move || uniform_probe(s)),
        Box::new(move || fourier_bound(s)),
    ];
    checks.par_iter().map(|c| c()).collect()
}
