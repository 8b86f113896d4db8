//! Spectral-oracle checks of the analytic conductance ingredients.

use finqsim_core::conductance::{resonance_terms, ChannelDotSystem, SelfEnergyTable};
use finqsim_core::oracle::*;
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Dot amplitudes G·v_i of the scattering state from each channel, computed
/// by inverting the complex 2×2 dot block directly. Only channels flagged in
/// `imaginary` get their −iΓ part; |V_i|² is Γ_i/π (density absorbed).
fn complex_amplitudes(sys: &ChannelDotSystem, imaginary: [bool; 3]) -> [Vector2<Complex64>; 3] {
    let sigma = |ch: usize, i: usize| {
        let g = if imaginary[ch] { sys.gamma[ch] } else { 0.0 };
        Complex64::new(sys.s.get(i, i), -g)
    };
    let (s1, s3, s5) = (sigma(0, 1), sigma(1, 3), sigma(2, 5));
    let m = Matrix2::new(c(sys.e_kf - sys.e_sl) - s1 - s3, -s3, -s3, c(sys.e_kf - sys.e_sr) - s5 - s3);
    let g = m.try_inverse().unwrap();
    let v = sys.gamma.map(|x| (x / PI).sqrt());
    [
        g * Vector2::new(c(v[0]), c(0.0)),
        g * Vector2::new(c(v[1]), c(v[1])),
        g * Vector2::new(c(0.0), c(v[2])),
    ]
}

fn system(e_sl: f64, e_sr: f64, s: [f64; 3], gamma: [f64; 3]) -> ChannelDotSystem {
    let mut sys = ChannelDotSystem::symmetric(0.0, e_sl, e_sr, 1.0);
    sys.s = SelfEnergyTable::fermi_consistent(s[0], s[1], s[2]);
    sys.gamma = gamma;
    sys.energy_scale = 1.0;
    sys
}

#[test]
fn completeness_holds_at_every_size() {
    for nk in [10, 50, 100] {
        let h = DiscretizedHamiltonian::from_broadenings(1.0, nk, -0.2, 0.3, [0.1, 0.2, 0.15]);
        assert!(completeness_check(&diagonalize(&h).unwrap()) <= 1e-10);
    }
}

#[test]
fn mirror_symmetric_dots_give_equal_outer_amplitudes() {
    let h = DiscretizedHamiltonian::from_broadenings(1.0, 60, 0.1, 0.1, [0.2, 0.1, 0.2]);
    let report = coefficient_check(&h, 0.3).unwrap();
    let get = |n: &str| report.comparisons.iter().find(|c| c.name == n).unwrap().relative_error;
    assert!((get("abs_x1_sq") - get("abs_y3_sq")).abs() < 1e-8);
    let sys = h.channel_dot_system(0.05);
    let (outer, _) = analytic_amplitudes(&sys);
    assert!((outer[0] - outer[1]).abs() < 1e-14 * outer[0]);
}

#[test]
fn coefficients_converge_first_order() {
    let errors: Vec<CoefficientReport> = [100, 200]
        .iter()
        .map(|&nk| {
            let h = DiscretizedHamiltonian::from_broadenings(1.0, nk, -0.25, 0.25, [0.2, 0.2, 0.2]);
            coefficient_check(&h, 0.35).unwrap()
        })
        .collect();
    for (a, b) in errors[0].comparisons.iter().zip(&errors[1].comparisons) {
        let ratio = a.relative_error / b.relative_error;
        assert!((1.7..2.3).contains(&ratio), "{}: {ratio}", a.name);
    }
    assert!(errors[1].max_error() < 0.1);
}

#[test]
fn level_width_is_twice_the_half_width() {
    let h = DiscretizedHamiltonian::from_broadenings(1.0, 400, 0.0, 0.0, [0.05, 0.0, 0.0]);
    let fwhm = level_width(&h).unwrap();
    let v = h.v[0];
    let expected = 2.0 * PI * v * v * h.rho();
    assert!((fwhm / expected - 1.0).abs() < 0.1, "{fwhm} vs {expected}");
}

#[test]
fn middle_amplitudes_match_complex_green_function() {
    // Only channel 3 coupled: x2 follows the right dot's detuning.
    for (el, er, s3) in [(0.1, -0.2, 0.03), (-0.3, 0.05, -0.02), (0.2, 0.21, 0.0)] {
        let sys = system(el, er, [0.0, s3, 0.0], [0.0, 0.07, 0.0]);
        let [_, a3, _] = complex_amplitudes(&sys, [false, true, false]);
        let (_, mid) = analytic_amplitudes(&sys);
        assert!((a3[0].norm_sqr() - mid[0]).abs() < 1e-10 * mid[0]);
        assert!((a3[1].norm_sqr() - mid[1]).abs() < 1e-10 * mid[1]);
        assert!(((a3[0] * a3[1].conj()).re - mid[2]).abs() < 1e-10 * mid[0].max(mid[1]));
        let e = resonance_terms(&sys).e;
        // The reading with the two detunings exchanged fails unless they coincide.
        let swapped = sys.gamma[1] / PI * (e[1] + s3).powi(2)
            / ((e[1] * e[4] - s3 * s3).powi(2) + sys.gamma[1].powi(2) * (e[1] + e[4] + 2.0 * s3).powi(2));
        assert!((swapped - mid[0]).abs() > 1e-3 * mid[0]);
    }
}

#[test]
fn outer_norm_combinations_match_complex_green_function() {
    let sys = system(0.12, -0.07, [0.02, -0.03, 0.015], [0.05, 0.04, 0.06]);
    let e = resonance_terms(&sys).e;
    let (s31, s35) = (sys.s.get(3, 1), sys.s.get(3, 5));
    let [a1, _, _] = complex_amplitudes(&sys, [true, false, false]);
    let lhs = a1[0].norm_sqr() + a1[1].norm_sqr();
    let d1 = (e[0] * e[3] - s31 * s31).powi(2) + e[3].powi(2) * sys.gamma[0].powi(2);
    let rhs = sys.gamma[0] / PI * (e[3].powi(2) + s31 * s31) / d1;
    assert!((lhs / rhs - 1.0).abs() < 1e-10);
    assert!((a1[1] / a1[0] - c(s31 / e[3])).norm() < 1e-12);

    let [_, _, a5] = complex_amplitudes(&sys, [false, false, true]);
    let lhs = a5[0].norm_sqr() + a5[1].norm_sqr();
    let d5 = (e[2] * e[5] - s35 * s35).powi(2) + e[2].powi(2) * sys.gamma[2].powi(2);
    let rhs = sys.gamma[2] / PI * (e[2].powi(2) + s35 * s35) / d5;
    assert!((lhs / rhs - 1.0).abs() < 1e-10);
}

proptest! {
    #[test]
    fn denominators_are_green_function_determinants(
        el in -0.5f64..0.5, er in -0.5f64..0.5,
        s1 in -0.1f64..0.1, s3 in -0.1f64..0.1, s5 in -0.1f64..0.1,
        g1 in 1e-3f64..0.2, g3 in 1e-3f64..0.2, g5 in 1e-3f64..0.2,
    ) {
        let sys = system(el, er, [s1, s3, s5], [g1, g3, g5]);
        for dev in denominator_check(&sys) {
            prop_assert!(dev < 1e-8, "{dev}");
        }
    }
}
