use num_complex::Complex64;

use super::GratingProfile;
use crate::{Error, Result};

/// Complex Fourier coefficients `alpha^(p)(z)`, `p = 0..=p_max`, in m⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierGrating {
    z: Vec<f64>,
    p_max: usize,
    coeffs: Vec<Complex64>,
}

impl FourierGrating {
    /// `coeffs[i]` lists orders `0..=p_max` at depth `z[i]`.
    pub fn new(z: Vec<f64>, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        if z.len() < 2 || coeffs.len() != z.len() {
            return Err(Error::invalid(
                "z",
                "need at least two depths and one coefficient set per depth",
            ));
        }
        let width = coeffs[0].len();
        if width < 2 || coeffs.iter().any(|c| c.len() != width) {
            return Err(Error::invalid(
                "coeffs",
                "orders 0 and 1 are required at every depth",
            ));
        }
        if z.windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::invalid("z", "depths must increase"));
        }
        Ok(Self {
            z,
            p_max: width - 1,
            coeffs: coeffs.into_iter().flatten().collect(),
        })
    }

    /// Depth-independent orders 0 and 1 on `n_z + 1` equally spaced depths.
    pub fn uniform(alpha_0: f64, alpha_1: Complex64, length: f64, n_z: usize) -> Result<Self> {
        if n_z == 0 || !(length.is_finite() && length > 0.0) {
            return Err(Error::invalid("length", "need length > 0 and n_z >= 1"));
        }
        let z = (0..=n_z).map(|i| length * i as f64 / n_z as f64).collect();
        Self::new(
            z,
            vec![vec![Complex64::new(alpha_0, 0.0), alpha_1]; n_z + 1],
        )
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn length(&self) -> f64 {
        self.z[self.z.len() - 1] - self.z[0]
    }

    pub fn coefficient(&self, i: usize, p: usize) -> Complex64 {
        self.coeffs[i * (self.p_max + 1) + p]
    }

    /// `alpha^(p)` at every depth.
    pub fn order(&self, p: usize) -> Vec<Complex64> {
        (0..self.z.len()).map(|i| self.coefficient(i, p)).collect()
    }
}

/// `alpha^(p)(z) = mean over phi of alpha(z, phi) e^{i p phi}`.
pub fn fourier_coefficients(profile: &GratingProfile, p_max: usize) -> Result<FourierGrating> {
    let grid = profile.grid();
    let n = grid.len();
    if p_max >= n / 2 {
        return Err(Error::Aliasing { p_max, n_phi: n });
    }
    let p_max = p_max.max(1);
    let twiddle: Vec<Vec<Complex64>> = (0..=p_max)
        .map(|p| {
            (0..n)
                .map(|k| Complex64::from_polar(1.0, ((p * k) % n) as f64 * grid.phi(1)))
                .collect()
        })
        .collect();
    let coeffs = profile
        .rows()
        .map(|row| {
            twiddle
                .iter()
                .map(|w| row.iter().zip(w).map(|(a, e)| e * a).sum::<Complex64>() / n as f64)
                .collect()
        })
        .collect();
    FourierGrating::new(profile.z().to_vec(), coeffs)
}

/// Orders 0 and 1 of a single row, used inside the large-angle march.
pub(crate) fn first_two(row: &[f64], cos: &[f64], sin: &[f64]) -> (f64, Complex64) {
    let n = row.len() as f64;
    let mut a0 = 0.0;
    let (mut re, mut im) = (0.0, 0.0);
    for k in 0..row.len() {
        a0 += row[k];
        re += row[k] * cos[k];
        im += row[k] * sin[k];
    }
    (a0 / n, Complex64::new(re / n, im / n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engraving::{ideal_grating, IdealKind, MediumSpec};
    use crate::excitation::PhaseGrid;
    use std::f64::consts::PI;

    #[test]
    fn ideal_harmonics() {
        let grid = PhaseGrid::new(256).unwrap();
        let medium = MediumSpec::new(3.0, 1.0).unwrap();
        let sin = ideal_grating(IdealKind::Sinusoidal, &medium, &grid, 2).unwrap();
        let f = fourier_coefficients(&sin, 3).unwrap();
        assert!((f.coefficient(0, 0).re - 3.0).abs() < 1e-12);
        assert!((f.coefficient(1, 1) - Complex64::new(0.0, 1.5)).norm() < 1e-12);
        assert!(f.coefficient(2, 2).norm() < 1e-12);

        // on a discrete grid the square wave's first harmonic carries the
        // aliased odd harmonics; it tends to 2/pi as the grid is refined
        let sq = ideal_grating(IdealKind::Square, &medium, &grid, 2).unwrap();
        let f = fourier_coefficients(&sq, 1).unwrap();
        let a1 = f.coefficient(0, 1).norm() / 3.0;
        assert!((a1 - 2.0 / PI).abs() < 1e-4, "{a1}");
    }

    #[test]
    fn flat_profile_has_no_harmonics() {
        let grid = PhaseGrid::new(32).unwrap();
        let p = GratingProfile::new(
            grid,
            vec![0.0, 1.0],
            vec![5.0; 64],
            5.0,
            None,
            super::super::EngravingRegime::UniformIdeal,
        )
        .unwrap();
        let f = fourier_coefficients(&p, 15).unwrap();
        for p in 1..=15 {
            assert!(f.coefficient(1, p).norm() < 1e-13);
        }
        assert!(matches!(
            fourier_coefficients(&p, 16),
            Err(Error::Aliasing {
                p_max: 16,
                n_phi: 32
            })
        ));
    }
}
