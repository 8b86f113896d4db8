//! Independent quadrature oracles for the special functions.

use finqsim_core::special::*;
use finqsim_core::Dimensionality;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(16);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for &(x, w) in &rule {
            sum += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * sum
}

/// J_n(x) = (1/2π)∫₀^{2π} cos(nτ − x sin τ) dτ by the trapezoid rule, which
/// converges geometrically for this periodic integrand.
fn oracle_j(n: u32, x: f64) -> f64 {
    let m = 1024;
    let h = 2.0 * PI / m as f64;
    (0..m).map(|k| (n as f64 * k as f64 * h - x * (k as f64 * h).sin()).cos()).sum::<f64>() / m as f64
}

/// Y_n(x) = (1/π)∫₀^π sin(x sinθ − nθ)dθ − (1/π)∫₀^∞ (e^{nt} + (−1)ⁿe^{−nt}) e^{−x sinh t} dt.
fn oracle_y(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let first = integrate(|t| (x * t.sin() - nf * t).sin(), 0.0, PI, 200);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let t_max = (50.0 / x).asinh();
    let second = integrate(|t| ((nf * t).exp() + sign * (-nf * t).exp()) * (-x * t.sinh()).exp(), 0.0, t_max, 400);
    (first - second) / PI
}

fn oracle_si(x: f64) -> f64 {
    let panels = 20 + (x * 2.0) as usize;
    integrate(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, panels) - FRAC_PI_2
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (f(m) > 0.0) == (fa > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn first_zeros_match_oracle_bisection() {
    let z_j0 = bisect(|x| oracle_j(0, x), 2.0, 3.0);
    assert!((z_j0 - 2.404826).abs() < 1e-5);
    assert!(bessel_j(0, 2.404826).unwrap().abs() < 1e-5);

    let z_y0 = bisect(|x| oracle_y(0, x), 0.5, 1.5);
    assert!((z_y0 - 0.893577).abs() < 1e-5);
    assert!(bessel_y(0, 0.893577).unwrap().abs() < 1e-5);
}

#[test]
fn y0_small_argument_asymptote() {
    let x = 1e-3;
    let asym = y0_small_argument(x);
    assert!((bessel_y(0, x).unwrap() - asym).abs() < 1e-4);
    assert!(bessel_y(1, 1e-6).unwrap() < -1e5);
}

#[test]
fn sine_integral_examples() {
    assert!((sine_integral_si(PI).unwrap() - 0.281141).abs() < 1e-6);
    assert!((oracle_si(PI) - 0.281141).abs() < 1e-6);
    assert!(sine_integral_si(100.0).unwrap().abs() < 0.011);
    // si(x) ≈ −cos(x)/x for large x
    let x = 100.0;
    assert!((sine_integral_si(x).unwrap() + x.cos() / x).abs() < 2.0 / (x * x));
    let f1 = range_function(RangeFunctionKind::coupling(Dimensionality::One), PI / 4.0).unwrap();
    // Si(π/2) = 1.3707621, so si(π/2) = −0.2000342.
    assert!((f1 - oracle_si(PI / 2.0)).abs() < 1e-10);
    assert!((f1 + 0.2000342).abs() < 1e-6);
}

#[test]
fn random_points_agree_with_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(0.0..100.0);
        assert!((bessel_j(0, x).unwrap() - oracle_j(0, x)).abs() < 1e-10, "J0({x})");
        assert!((bessel_j(1, x).unwrap() - oracle_j(1, x)).abs() < 1e-10, "J1({x})");
        let xy = 1e-3 + x;
        assert!((bessel_y(0, xy).unwrap() - oracle_y(0, xy)).abs() < 1e-9, "Y0({xy})");
        // Y1 grows like 2/(πx) near the origin, so compare relatively there.
        let y1 = bessel_y(1, xy).unwrap();
        assert!((y1 - oracle_y(1, xy)).abs() < 1e-9 * y1.abs().max(1.0), "Y1({xy})");
        assert!((sine_integral_si(x).unwrap() - oracle_si(x)).abs() < 1e-8, "si({x})");
    }
}

#[test]
fn f2_prime_oscillates_inside_envelope() {
    // J0Y0 + J1Y1 behaves like -sin(2x)/(πx²) at large x: it changes sign
    // every half period and stays inside the 1/(πx²) envelope.
    let mut sign_changes = 0;
    let mut prev = 0.0;
    for i in 0..=9000 {
        let x = 10.0 + 0.01 * i as f64;
        let v = range_function(RangeFunctionKind::coupling(Dimensionality::Two), x).unwrap();
        assert!(v.abs() <= 1.05 / (PI * x * x), "F2'({x}) = {v} outside envelope");
        let lead = -(2.0 * x).sin() / (PI * x * x);
        assert!((v - lead).abs() < 0.2 / (PI * x * x), "F2'({x}) = {v}, leading term {lead}");
        if i > 0 && v * prev < 0.0 {
            sign_changes += 1;
        }
        prev = v;
    }
    // 90 units of x span about 57 half periods of sin(2x).
    assert!((55..=59).contains(&sign_changes), "{sign_changes}");
}

proptest! {
    #[test]
    fn relaxation_functions_bounded(x in 0.0f64..200.0) {
        for d in [Dimensionality::One, Dimensionality::Two] {
            let g = range_function(RangeFunctionKind::relaxation(d), x).unwrap();
            prop_assert!((0.0..=1.0).contains(&g));
        }
    }

    #[test]
    fn f1_prime_decays(x in 5.0f64..500.0) {
        let f = range_function(RangeFunctionKind::coupling(Dimensionality::One), x).unwrap();
        prop_assert!(f.abs() <= 1.1 / x);
    }

    #[test]
    fn bessel_j_bounded(x in -200.0f64..200.0) {
        prop_assert!(bessel_j(0, x).unwrap().abs() <= 1.0);
        prop_assert!(bessel_j(1, x).unwrap().abs() <= 1.0);
    }
}
