//! Brute-force time integration of the population rate equations.
//!
//! The equations are linear with constant coefficients, `dn/dt = A n`, so one
//! classical RK4 step is exactly `n <- P n` with
//! `P = I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24`. The propagator is built
//! once and applied repeatedly.
//!
//! Modelled levels:
//!
//! * standard: `|1>, |2>, |m>` with stimulated emission on `|1>-|2>`;
//! * Lambda: `|1>, |3>`; the excited level is adiabatically eliminated, so a
//!   pumped atom returns to either ground sublevel with probability 1/2. The
//!   two sublevels exchange population at `gamma_z / 2` each way;
//! * Tm: `|1>, |3>, |m>`; excited levels eliminated through their branching
//!   ratios, `|m>` decays equally into `|1>` and `|3>`, and the sublevels
//!   exchange at `gamma_z` each way.
//!
//! With these conventions the closed forms of [`steady_state`] are the exact
//! stationary points (for Tm, up to the `1 - n_m` factor of the metastable
//! population).
//!
//! [`steady_state`]: super::steady_state

use super::{LevelScheme, PopulationDifferences, SchemeKind};
use crate::{Error, Result};

/// Largest relative change tolerated over the last tenth of the run.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-9;
/// Largest absolute difference tolerated between runs at `h` and `h / 2`.
pub const RICHARDSON_TOLERANCE: f64 = 1e-10;
/// Bound on `|sum(n) - 1|` at every step.
pub const CONSERVATION_TOLERANCE: f64 = 1e-12;

const STANDARD_LABELS: [&str; 3] = ["1", "2", "m"];
const LAMBDA_LABELS: [&str; 2] = ["1", "3"];
const TM5_LABELS: [&str; 3] = ["1", "3", "m"];

/// Occupation fractions of the modelled levels.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationState {
    kind: SchemeKind,
    fractions: Vec<f64>,
}

impl PopulationState {
    /// All atoms in the ground state(s), split equally between sublevels.
    pub fn equilibrium(kind: SchemeKind) -> Self {
        let fractions = match kind {
            SchemeKind::Standard3 => vec![1.0, 0.0, 0.0],
            SchemeKind::Lambda3 => vec![0.5, 0.5],
            SchemeKind::Tm5 => vec![0.5, 0.5, 0.0],
        };
        Self { kind, fractions }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn labels(&self) -> &'static [&'static str] {
        match self.kind {
            SchemeKind::Standard3 => &STANDARD_LABELS,
            SchemeKind::Lambda3 => &LAMBDA_LABELS,
            SchemeKind::Tm5 => &TM5_LABELS,
        }
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    /// Occupation of the level called `label` (`"1"`, `"2"`, `"3"`, `"m"`).
    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels()
            .iter()
            .position(|&l| l == label)
            .map(|i| self.fractions[i])
    }

    pub fn total(&self) -> f64 {
        self.fractions.iter().sum()
    }

    /// Population differences along the pumped transitions. Eliminated excited
    /// levels count as empty.
    pub fn differences(&self) -> PopulationDifferences {
        let n = &self.fractions;
        match self.kind {
            SchemeKind::Standard3 => PopulationDifferences {
                primary: n[0] - n[1],
                replica: None,
            },
            SchemeKind::Lambda3 | SchemeKind::Tm5 => PopulationDifferences {
                primary: n[0],
                replica: Some(n[1]),
            },
        }
    }
}

/// Dense generator `A` of `dn/dt = A n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateGenerator {
    dim: usize,
    /// Row-major `dim x dim`.
    entries: Vec<f64>,
}

impl RateGenerator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    /// Column sums; all zero for a population-conserving generator.
    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|c| (0..self.dim).map(|r| self.get(r, c)).sum())
            .collect()
    }

    fn fastest_rate(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.get(i, i).abs())
            .fold(0.0, f64::max)
    }

    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..self.dim).map(|c| self.get(r, c) * x[c]).sum();
        }
    }

    /// Classical RK4 one-step propagator for step `h`.
    /// `P - I`, where `P` is one RK4 step of size `h` for `dn/dt = A n`.
    /// Working with the increment keeps the rounding error proportional to
    /// the (small) change per step.
    fn rk4_increment(&self, h: f64) -> Vec<f64> {
        let d = self.dim;
        let mut q = vec![0.0; d * d];
        let mut term = vec![0.0; d];
        for c in 0..d {
            let mut acc = vec![0.0; d];
            let mut current = vec![0.0; d];
            current[c] = 1.0;
            for k in 1..=4 {
                self.apply(&current, &mut term);
                for (cur, t) in current.iter_mut().zip(&term) {
                    *cur = t * h / k as f64;
                }
                for (a, cur) in acc.iter_mut().zip(&current) {
                    *a += cur;
                }
            }
            // the exact column sum is 0; the diagonal absorbs the rounding
            acc[c] = -(0..d).filter(|&r| r != c).map(|r| acc[r]).sum::<f64>();
            for r in 0..d {
                q[r * d + c] = acc[r];
            }
        }
        q
    }
}

/// Builds the rate-equation generator for reduced rates `r`, `r_prime`.
pub fn rate_generator(scheme: &LevelScheme, r: f64, r_prime: f64) -> Result<RateGenerator> {
    scheme.validate()?;
    for (name, v) in [("r", r), ("r_prime", r_prime)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::invalid(name, format!("must be >= 0, got {v}")));
        }
    }
    #[rustfmt::skip]
    let entries = match *scheme {
        LevelScheme::Standard3 {
            gamma_a,
            gamma_b,
            gamma_m,
        } => {
            let pump = r * gamma_m;
            let gamma_e = gamma_a + gamma_b;
            vec![
                -pump, pump + gamma_a, gamma_m,
                pump, -pump - gamma_e, 0.0,
                0.0, gamma_b, -gamma_m,
            ]
        }
        LevelScheme::Lambda3 {
            gamma_e, gamma_z, ..
        } => {
            let out1 = 0.5 * (r * gamma_e + gamma_z);
            let out3 = 0.5 * (r_prime * gamma_e + gamma_z);
            vec![-out1, out3, out1, -out3]
        }
        LevelScheme::Tm5 {
            gamma_a,
            gamma_b,
            gamma_c,
            gamma_m,
            gamma_z,
            ..
        } => {
            let gamma_e = gamma_a + gamma_b + gamma_c;
            let pump = r * gamma_e;
            let pump_p = r_prime * gamma_e;
            let leave1 = pump * (gamma_b + gamma_c) / gamma_e + gamma_z;
            let leave3 = pump_p * (gamma_b + gamma_c) / gamma_e + gamma_z;
            let cross1 = pump_p * gamma_c / gamma_e + gamma_z; // 3 -> 1
            let cross3 = pump * gamma_c / gamma_e + gamma_z; // 1 -> 3
            vec![
                -leave1, cross1, gamma_m / 2.0,
                cross3, -leave3, gamma_m / 2.0,
                pump * gamma_b / gamma_e, pump_p * gamma_b / gamma_e, -gamma_m,
            ]
        }
    };
    let dim = (entries.len() as f64).sqrt() as usize;
    Ok(RateGenerator { dim, entries })
}

/// Raw integration result.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub state: PopulationState,
    /// State after 90% of the steps.
    pub checkpoint: PopulationState,
    pub steps: usize,
    pub step: f64,
    /// Largest `|sum(n) - 1|` seen at any step.
    pub max_conservation_error: f64,
}

/// Integrates from the unpumped equilibrium up to `t_end` with a fixed step
/// no larger than `max_step` (and no larger than `0.01` over the fastest rate
/// of the generator).
pub fn integrate_populations(
    scheme: &LevelScheme,
    r: f64,
    r_prime: f64,
    t_end: f64,
    max_step: Option<f64>,
) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::invalid("t_end", "must be finite and > 0"));
    }
    let gen = rate_generator(scheme, r, r_prime)?;
    let mut h = 0.01 / gen.fastest_rate();
    if let Some(m) = max_step {
        h = h.min(m);
    }
    let steps = (t_end / h).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;
    let q = gen.rk4_increment(h);
    let d = gen.dim();

    let mut state = PopulationState::equilibrium(scheme.kind());
    let mut next = vec![0.0; d];
    let mut checkpoint = state.clone();
    let checkpoint_at = steps * 9 / 10;
    let mut max_err: f64 = 0.0;
    for step in 0..steps {
        if step == checkpoint_at {
            checkpoint = state.clone();
        }
        let n = &state.fractions;
        for (row, out) in next.iter_mut().enumerate() {
            *out = n[row] + (0..d).map(|c| q[row * d + c] * n[c]).sum::<f64>();
        }
        state.fractions.copy_from_slice(&next);
        max_err = max_err.max((state.total() - 1.0).abs());
    }
    Ok(Trajectory {
        state,
        checkpoint,
        steps,
        step: h,
        max_conservation_error: max_err,
    })
}

/// Steady-state oracle run with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleRun {
    pub state: PopulationState,
    pub steps: usize,
    pub step: f64,
    pub max_conservation_error: f64,
    /// Relative change over the last tenth of the integration.
    pub last_decade_change: f64,
    /// Largest difference to a run at half the step.
    pub richardson_change: f64,
}

impl OracleRun {
    /// A duration long enough for every mode to settle below 1e-12.
    pub fn settling_time(scheme: &LevelScheme) -> f64 {
        let slow = [scheme.gamma_z(), scheme.gamma_m()]
            .into_iter()
            .flatten()
            .fold(f64::INFINITY, f64::min);
        30.0 / slow
    }
}

/// Integrates the rate equations long enough to reach steady state and checks
/// that it did.
///
/// `t_end` must be at least `10 / min(gamma_z, gamma_m)`; `None` uses
/// [`OracleRun::settling_time`].
pub fn transient_oracle(
    scheme: &LevelScheme,
    r: f64,
    r_prime: f64,
    t_end: Option<f64>,
) -> Result<OracleRun> {
    let minimum = OracleRun::settling_time(scheme) / 3.0;
    let t_end = t_end.unwrap_or(3.0 * minimum);
    if t_end < minimum * (1.0 - 1e-12) {
        return Err(Error::invalid(
            "t_end",
            format!("{t_end} s is shorter than 10 slowest relaxation times ({minimum} s)"),
        ));
    }
    let coarse = integrate_populations(scheme, r, r_prime, t_end, None)?;
    let fine = integrate_populations(scheme, r, r_prime, t_end, Some(coarse.step / 2.0))?;

    let scale = coarse
        .state
        .fractions
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let last_decade_change = max_abs_diff(&coarse.state.fractions, &coarse.checkpoint.fractions)
        / scale.max(f64::MIN_POSITIVE);
    let richardson_change = max_abs_diff(&coarse.state.fractions, &fine.state.fractions);

    if last_decade_change > CONVERGENCE_TOLERANCE {
        return Err(Error::Convergence {
            what: "rate-equation oracle (steady state)",
            change: last_decade_change,
            tolerance: CONVERGENCE_TOLERANCE,
        });
    }
    if richardson_change > RICHARDSON_TOLERANCE {
        return Err(Error::Convergence {
            what: "rate-equation oracle (step halving)",
            change: richardson_change,
            tolerance: RICHARDSON_TOLERANCE,
        });
    }
    Ok(OracleRun {
        state: fine.state,
        steps: fine.steps,
        step: fine.step,
        max_conservation_error: coarse
            .max_conservation_error
            .max(fine.max_conservation_error),
        last_decade_change,
        richardson_change,
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
