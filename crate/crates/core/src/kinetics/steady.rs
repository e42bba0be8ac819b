use super::LevelScheme;
use crate::{Error, Result};

/// Steady-state population differences along the pumped transitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationDifferences {
    /// `n1 - n2` on the first transition.
    pub primary: f64,
    /// `n3 - n2` (Lambda) or `n3 - n4` (Tm) on the second transition; `None`
    /// for the standard scheme.
    pub replica: Option<f64>,
}

/// Closed-form steady state of the rate equations.
///
/// `r` drives the first transition and `r_prime` the second (ignored by the
/// standard scheme). Both are reduced rates, see the [module docs](super).
///
/// * standard: `dn12 = 1 / (1 + zeta r)`
/// * Lambda / Tm: `dn12 = (1/2 + xi r') / (1 + xi (r + r'))` and
///   `dn_replica = (1/2 + xi r) / (1 + xi (r + r'))`
pub fn steady_state(scheme: &LevelScheme, r: f64, r_prime: f64) -> Result<PopulationDifferences> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid(
            "r",
            format!("pumping rate must be >= 0, got {r}"),
        ));
    }
    if !(r_prime >= 0.0 && r_prime.is_finite()) {
        return Err(Error::invalid(
            "r_prime",
            format!("pumping rate must be >= 0, got {r_prime}"),
        ));
    }
    Ok(match scheme {
        LevelScheme::Standard3 { .. } => PopulationDifferences {
            primary: 1.0 / (1.0 + scheme.zeta()? * r),
            replica: None,
        },
        _ => {
            let xi = scheme.xi()?;
            let (first, second) = sublevel_pair(xi * r, xi * r_prime);
            PopulationDifferences {
                primary: first,
                replica: Some(second),
            }
        }
    })
}

/// Sublevel-scheme differences in terms of the drives `x = xi r`, `y = xi r'`.
#[inline]
pub(crate) fn sublevel_pair(x: f64, y: f64) -> (f64, f64) {
    let denom = 1.0 + x + y;
    ((0.5 + y) / denom, (0.5 + x) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unpumped_equilibrium() {
        let d = steady_state(&LevelScheme::tm_yag_isg(), 0.0, 0.0).unwrap();
        assert_eq!(d.primary, 0.5);
        assert_eq!(d.replica, Some(0.5));
        let d = steady_state(&LevelScheme::tm_yag_standard(), 0.0, 3.0).unwrap();
        assert_eq!(d.primary, 1.0);
        assert_eq!(d.replica, None);
    }

    #[test]
    fn standard_at_zeta_r_point_nine() {
        let s = LevelScheme::tm_yag_standard();
        let r = 0.9 / s.zeta().unwrap();
        let d = steady_state(&s, r, 0.0).unwrap();
        assert!((d.primary - 1.0 / 1.9).abs() < 1e-14);
    }

    #[test]
    fn lambda_xi_r_ten() {
        let s = LevelScheme::tm_yag_lambda();
        let xi = s.xi().unwrap();
        let d = steady_state(&s, 10.0 / xi, 0.0).unwrap();
        assert!((d.primary - 0.5 / 11.0).abs() < 1e-14);
        assert!((d.replica.unwrap() - 10.5 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn negative_rates_rejected() {
        let s = LevelScheme::tm_yag_isg();
        assert!(steady_state(&s, -1.0, 0.0).is_err());
        assert!(steady_state(&s, 0.0, -1e-9).is_err());
        assert!(steady_state(&s, f64::NAN, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn sum_rule(x in 0.0..1e4f64, y in 0.0..1e4f64) {
            let s = LevelScheme::tm_yag_isg();
            let xi = s.xi().unwrap();
            let d = steady_state(&s, x / xi, y / xi).unwrap();
            let sum = d.primary + d.replica.unwrap();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(d.primary > 0.0 && d.primary < 1.0);
            prop_assert!(d.replica.unwrap() > 0.0 && d.replica.unwrap() < 1.0);
        }

        #[test]
        fn standard_monotone_and_bounded(r in 0.0..1e3f64, dr in 1e-6..1.0f64) {
            let s = LevelScheme::tm_yag_standard();
            let a = steady_state(&s, r, 0.0).unwrap().primary;
            let b = steady_state(&s, r + dr, 0.0).unwrap().primary;
            prop_assert!(b < a);
            prop_assert!(a > 0.0 && a <= 1.0);
        }

        #[test]
        fn lambda_monotone(r in 0.0..0.1f64, rp in 0.0..0.1f64, dr in 1e-6..1e-2f64) {
            let s = LevelScheme::tm_yag_lambda();
            let base = steady_state(&s, r, rp).unwrap().primary;
            prop_assert!(steady_state(&s, r + dr, rp).unwrap().primary < base);
            prop_assert!(steady_state(&s, r, rp + dr).unwrap().primary > base);
        }
    }
}
