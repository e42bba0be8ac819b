use std::f64::consts::PI;

use isg::engraving::trace_small_angle;
use isg::excitation::{pulse_pair_spectrum, PulsePairSpec};
use isg::prelude::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn isg_scheme() -> LevelScheme {
    LevelScheme::tm_yag_isg()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn isg_entrance_is_point_symmetric(
        rates in prop::collection::vec(0.0..0.05f64, 32),
        alpha0 in 0.1..10.0f64,
    ) {
        let grid = PhaseGrid::new(32).unwrap();
        let field = ExcitationField::from_rates(grid, rates).unwrap();
        let row = entrance_profile(&isg_scheme(), &field, alpha0).unwrap();
        for k in 0..16 {
            prop_assert!(((row[k] + row[k + 16]) / alpha0 - 2.0).abs() < 1e-9);
        }
        let mean = row.iter().sum::<f64>() / 32.0;
        prop_assert!((mean - alpha0).abs() < 1e-9 * alpha0);
    }

    #[test]
    fn standard_absorption_is_bounded(drive in 0.0..20.0f64, extra in 0.01..5.0f64) {
        let s = LevelScheme::tm_yag_standard();
        let grid = PhaseGrid::new(64).unwrap();
        let zeta = s.zeta().unwrap();
        let weak = entrance_profile(&s, &sinusoidal_pump(&grid, drive / zeta).unwrap(), 1.0).unwrap();
        let strong = entrance_profile(&s, &sinusoidal_pump(&grid, (drive + extra) / zeta).unwrap(), 1.0).unwrap();
        prop_assert!(weak.iter().all(|&a| a > 0.0 && a <= 1.0));
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        prop_assert!(mean(&strong) < mean(&weak));
    }

    #[test]
    fn replica_is_in_antiphase(r_avg in 0.0..100.0f64) {
        let grid = PhaseGrid::new(128).unwrap();
        let f = sinusoidal_pump(&grid, r_avg).unwrap();
        let g = replica_field(&f, 0.5).unwrap();
        for (a, b) in f.rates().iter().zip(g.rates()) {
            prop_assert!((a + b - 2.0 * r_avg).abs() <= 1e-12 * r_avg.max(1.0));
        }
    }

    #[test]
    fn efficiency_ignores_the_phase_of_the_grating(
        a1 in 0.0..1.0f64,
        phase in -PI..PI,
        od in 0.1..4.0f64,
    ) {
        let rotated = FourierGrating::uniform(1.0, Complex64::from_polar(a1, phase), od, 200).unwrap();
        let real = FourierGrating::uniform(1.0, Complex64::new(a1, 0.0), od, 200).unwrap();
        let (x, y) = (probe_efficiency(&rotated).unwrap(), probe_efficiency(&real).unwrap());
        prop_assert!((x.eta - y.eta).abs() <= 1e-12);
        prop_assert!(x.eta + x.transmission <= 1.0);
        let exact = eta_uniform(1.0, a1, od);
        prop_assert!((x.eta - exact).abs() <= 1e-6 * exact.max(1e-300));
    }

    #[test]
    fn fourier_coefficients_of_a_shifted_cosine(
        depth in 0.0..1.0f64,
        shift in -PI..PI,
    ) {
        let grid = PhaseGrid::new(64).unwrap();
        let row: Vec<f64> = grid.phases().map(|p| 2.0 * (1.0 + depth * (p + shift).cos())).collect();
        let alpha: Vec<f64> = row.iter().chain(&row).copied().collect();
        let p = GratingProfile::new(grid, vec![0.0, 1.0], alpha, 2.0, None, EngravingRegime::UniformIdeal).unwrap();
        let f = fourier_coefficients(&p, 3).unwrap();
        prop_assert!((f.coefficient(0, 0).re - 2.0).abs() < 1e-12);
        prop_assert!((f.coefficient(0, 1) - Complex64::from_polar(depth, -shift)).norm() < 1e-12);
        prop_assert!(f.coefficient(1, 2).norm() < 1e-12);
    }

    #[test]
    fn pulse_pair_spectrum_is_non_negative(
        area in 0.0..0.5f64,
        second in 0.0..0.5f64,
        width in 10e-9..400e-9f64,
        gaussian in any::<bool>(),
    ) {
        let base = if gaussian {
            PulsePairSpec::gaussian(area, width, 1e-6, 1e-3)
        } else {
            PulsePairSpec::rectangular(area, width, 1e-6, 1e-3)
        };
        let spec = base.with_second_area(second);
        let nu: Vec<f64> = (-400..=400).map(|j| j as f64 * 25e3).collect();
        let s = pulse_pair_spectrum(&spec, &nu).unwrap();
        prop_assert!(s.rate.iter().all(|&r| r >= 0.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn small_angle_intensity_decreases(drive in 0.0..40.0f64, od in 0.2..3.0f64) {
        let s = isg_scheme();
        let grid = PhaseGrid::new(32).unwrap();
        let field = sinusoidal_pump(&grid, drive / s.xi().unwrap()).unwrap();
        let medium = MediumSpec::tm_yag(od).unwrap();
        let run = trace_small_angle(&s, &field, &medium, 60).unwrap();
        for i in 0..60 {
            for k in 0..32 {
                let (a, b) = (run.intensity[i * 32 + k], run.intensity[(i + 1) * 32 + k]);
                prop_assert!(a <= 0.0 || b < a);
            }
        }
        for row in run.profile.rows() {
            for k in 0..16 {
                prop_assert!(((row[k] + row[k + 16]) / medium.alpha0 - 2.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn fringe_visibility_of_equal_pulses_is_one() {
    let spec = PulsePairSpec::gaussian(0.1, 50e-9, 1e-6, 1e-3);
    // maxima at integer multiples of 1/tau, zeros at half-integers
    for j in 0..5 {
        let max = spec.rate(j as f64 * 1e6);
        let min = spec.rate((j as f64 + 0.5) * 1e6);
        assert!(min.abs() <= 1e-12 * max);
    }
}
