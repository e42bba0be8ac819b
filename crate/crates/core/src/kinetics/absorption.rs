use super::{LevelScheme, PopulationDifferences};
use crate::{Error, Result};

/// How a sample grid behaves under a frequency shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridTopology {
    /// Samples cover exactly one period; shifts wrap around.
    Periodic,
    /// Samples cover a finite window; values shifted in from outside are taken
    /// as unpumped (`1/2`) and counted as truncated.
    Finite,
}

/// Absorption spectrum produced by [`absorption`].
#[derive(Debug, Clone, PartialEq)]
pub struct Absorption {
    /// `alpha` in the units of `alpha0`.
    pub alpha: Vec<f64>,
    /// Number of samples whose replica contribution fell outside a finite grid.
    pub truncated: usize,
}

/// Combines population differences into an absorption spectrum.
///
/// For the standard scheme `alpha = alpha0 * dn12`. For the sublevel schemes
/// the second transition of the atoms resonant at `nu + shift` also absorbs
/// at `nu`:
///
/// `alpha(nu) = alpha0 * [dn12(nu) + dn_replica(nu + shift)]`
///
/// `shift_bins` is the splitting expressed in grid bins and must be an
/// integer.
pub fn absorption(
    scheme: &LevelScheme,
    alpha0: f64,
    diffs: &[PopulationDifferences],
    shift_bins: f64,
    topology: GridTopology,
) -> Result<Absorption> {
    if !(alpha0.is_finite() && alpha0 >= 0.0) {
        return Err(Error::invalid("alpha0", "must be finite and >= 0"));
    }
    if !scheme.kind().is_sublevel() {
        return Ok(Absorption {
            alpha: diffs.iter().map(|d| alpha0 * d.primary).collect(),
            truncated: 0,
        });
    }
    let rounded = shift_bins.round();
    if !shift_bins.is_finite() || (shift_bins - rounded).abs() > 1e-9 {
        return Err(Error::GridResolution { bins: shift_bins });
    }
    let shift = rounded as i64;
    let n = diffs.len() as i64;
    let mut truncated = 0;
    let replica = |d: &PopulationDifferences| {
        d.replica
            .expect("sublevel schemes always produce a replica difference")
    };
    let alpha = (0..n)
        .map(|i| {
            let j = i + shift;
            let second = match topology {
                GridTopology::Periodic => replica(&diffs[j.rem_euclid(n) as usize]),
                GridTopology::Finite if (0..n).contains(&j) => replica(&diffs[j as usize]),
                GridTopology::Finite => {
                    truncated += 1;
                    0.5
                }
            };
            alpha0 * (diffs[i as usize].primary + second)
        })
        .collect();
    Ok(Absorption { alpha, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::steady_state;

    #[test]
    fn equilibrium_is_flat() {
        let s = LevelScheme::tm_yag_isg();
        let d = vec![steady_state(&s, 0.0, 0.0).unwrap(); 32];
        let a = absorption(&s, 3.0, &d, 16.0, GridTopology::Periodic).unwrap();
        assert!(a.alpha.iter().all(|&x| (x - 3.0).abs() < 1e-15));
    }

    #[test]
    fn fractional_shift_rejected() {
        let s = LevelScheme::tm_yag_isg();
        let d = vec![steady_state(&s, 0.0, 0.0).unwrap(); 32];
        assert!(matches!(
            absorption(&s, 1.0, &d, 2.5, GridTopology::Periodic),
            Err(Error::GridResolution { .. })
        ));
    }

    #[test]
    fn finite_grid_flags_truncation() {
        let s = LevelScheme::tm_yag_lambda();
        let d = vec![steady_state(&s, 1e-3, 0.0).unwrap(); 10];
        let a = absorption(&s, 1.0, &d, 3.0, GridTopology::Finite).unwrap();
        assert_eq!(a.truncated, 3);
        let a = absorption(&s, 1.0, &d, -2.0, GridTopology::Finite).unwrap();
        assert_eq!(a.truncated, 2);
    }

    #[test]
    fn standard_ignores_shift() {
        let s = LevelScheme::tm_yag_standard();
        let d = vec![steady_state(&s, 1.0, 0.0).unwrap(); 4];
        let a = absorption(&s, 2.0, &d, 0.3, GridTopology::Periodic).unwrap();
        assert!((a.alpha[0] - 2.0 / 1.91).abs() < 1e-12);
    }
}
