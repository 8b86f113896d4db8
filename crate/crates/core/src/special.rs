//! Bessel functions of orders 0 and 1, the sine integral, and the range and
//! relaxation functions built from them.
//!
//! Evaluation strategy for J and Y: ascending power series for `x <= 8`,
//! Steed's continued-fraction method on `8 < x < 30`, and the Hankel
//! asymptotic expansion beyond. The sine integral uses its power series up to
//! `x = 4` and the continued fraction for E₁(ix) above.

use crate::error::{Error, Result};
use crate::Dimensionality;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_MAX: f64 = 8.0;
const ASYMPTOTIC_MIN: f64 = 30.0;
const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;

/// Which of the two function families a range function belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeFlavor {
    /// F′_d, entering the exchange coupling.
    Coupling,
    /// G′_d, entering the relaxation rate.
    Relaxation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeFunctionKind {
    pub dimensionality: Dimensionality,
    pub flavor: RangeFlavor,
}

impl RangeFunctionKind {
    pub fn coupling(dimensionality: Dimensionality) -> Self {
        RangeFunctionKind { dimensionality, flavor: RangeFlavor::Coupling }
    }

    pub fn relaxation(dimensionality: Dimensionality) -> Self {
        RangeFunctionKind { dimensionality, flavor: RangeFlavor::Relaxation }
    }
}

/// Bessel function of the first kind, order 0 or 1.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("bessel_j", format!("argument must be finite, got {x}")));
    }
    match order {
        0 => Ok(j0(x)),
        1 => Ok(j1(x)),
        _ => Err(Error::invalid("bessel_j", format!("only orders 0 and 1 are supported, got {order}"))),
    }
}

/// Bessel function of the second kind (Neumann function), order 0 or 1.
///
/// Returns an error for `x <= 0`: both orders are singular at the origin.
pub fn bessel_y(order: u32, x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain("bessel_y", format!("argument must be finite and > 0, got {x}")));
    }
    match order {
        0 => Ok(j0_y0(x).1),
        1 => Ok(j1_y1(x).1),
        _ => Err(Error::invalid("bessel_y", format!("only orders 0 and 1 are supported, got {order}"))),
    }
}

/// J₀(x) for any finite x.
pub fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_MAX {
        series_j0(ax)
    } else if ax < ASYMPTOTIC_MIN {
        steed(ax).j0
    } else {
        hankel(0, ax).0
    }
}

/// J₁(x) for any finite x.
pub fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_MAX {
        series_j1(ax)
    } else if ax < ASYMPTOTIC_MIN {
        steed(ax).j1
    } else {
        hankel(1, ax).0
    };
    if x < 0.0 { -v } else { v }
}

/// (J₀, Y₀) at x > 0.
fn j0_y0(x: f64) -> (f64, f64) {
    if x <= SERIES_MAX {
        let j = series_j0(x);
        (j, series_y0(x, j))
    } else if x < ASYMPTOTIC_MIN {
        let s = steed(x);
        (s.j0, s.y0)
    } else {
        hankel(0, x)
    }
}

/// (J₁, Y₁) at x > 0.
fn j1_y1(x: f64) -> (f64, f64) {
    if x <= SERIES_MAX {
        let j = series_j1(x);
        (j, series_y1(x, j))
    } else if x < ASYMPTOTIC_MIN {
        let s = steed(x);
        (s.j1, s.y1)
    } else {
        hankel(1, x)
    }
}

fn series_j0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        sum += term;
        if term.abs() < EPS * 1e-3 {
            break;
        }
    }
    sum
}

fn series_j1(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        sum += term;
        if term.abs() < EPS * 1e-3 {
            break;
        }
    }
    sum
}

fn series_y0(x: f64, j0x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        // (-1)^{k+1} H_k q^k/(k!)^2 == -H_k * term
        let add = -harmonic * term;
        sum += add;
        if add.abs() < EPS * 1e-3 {
            break;
        }
    }
    (2.0 / PI) * (((0.5 * x).ln() + EULER_GAMMA) * j0x + sum)
}

fn series_y1(x: f64, j1x: f64) -> f64 {
    let q = 0.25 * x * x;
    // term_k = (-1)^k (x/2)^{2k+1} / (k! (k+1)!)
    let mut term = 0.5 * x;
    let mut h_k = 0.0;
    let mut h_k1 = 1.0;
    let mut sum = term * (h_k + h_k1 - 2.0 * EULER_GAMMA);
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        h_k += 1.0 / kf;
        h_k1 += 1.0 / (kf + 1.0);
        let add = term * (h_k + h_k1 - 2.0 * EULER_GAMMA);
        sum += add;
        if add.abs() < EPS * 1e-3 {
            break;
        }
    }
    -2.0 / (PI * x) + (2.0 / PI) * (0.5 * x).ln() * j1x - sum / PI
}

struct SteedValues {
    j0: f64,
    j1: f64,
    y0: f64,
    y1: f64,
}

/// Steed's method for order zero: CF1 gives J₀′/J₀, CF2 gives (p + iq) from
/// the Hankel function ratio, and the Wronskian fixes the normalisation.
/// Valid for x >= 2.
fn steed(x: f64) -> SteedValues {
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = FPMIN;
    let mut b = 0.0;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    let rjl = isign * FPMIN;
    let rjpl = h * rjl;
    let f = rjpl / rjl;

    let mut a = 0.25;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
    let rymu = rjmu * gam;
    let rymup = rymu * (p + q / gam);
    let scale = rjmu / rjl;
    let rj = rjl * scale;
    let rjp = rjpl * scale;
    SteedValues { j0: rj, j1: -rjp, y0: rymu, y1: -rymup }
}

/// Hankel asymptotic expansion; returns (J_n, Y_n).
fn hankel(n: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (n as f64).powi(2);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if term.abs() > last || term.abs() < EPS * 1e-3 {
            break;
        }
        last = term.abs();
        // a_k / x^k with sign (-1)^{floor(k/2)}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
    }
    let chi = x - (0.5 * n as f64 + 0.25) * PI;
    let amp = (2.0 / (PI * x)).sqrt();
    let (s, c) = chi.sin_cos();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// Sine integral Si(x) = ∫₀ˣ sin t / t dt, for x >= 0.
pub fn sine_integral_upper(x: f64) -> Result<f64> {
    Ok(sine_integral_si(x)? + FRAC_PI_2)
}

/// Shifted sine integral si(x) = Si(x) − π/2, for x >= 0. Decays to zero as
/// x grows.
pub fn sine_integral_si(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("sine_integral_si", format!("argument must be finite and >= 0, got {x}")));
    }
    Ok(si_unchecked(x))
}

fn si_unchecked(x: f64) -> f64 {
    if x <= 4.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for k in 1..100 {
            let kf = k as f64;
            term *= -x2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            let add = term / (2.0 * kf + 1.0);
            sum += add;
            if add.abs() < EPS * 1e-3 {
                break;
            }
        }
        sum - FRAC_PI_2
    } else {
        // Modified Lentz evaluation of E1(ix); Si = π/2 + Im(h·e^{-ix}).
        let mut b = Complex64::new(1.0, x);
        let mut c = Complex64::new(1.0 / FPMIN, 0.0);
        let mut d = b.inv();
        let mut h = d;
        for i in 2..MAXIT {
            let a = -((i - 1) as f64).powi(2);
            b += 2.0;
            d = (d * a + b).inv();
            c = b + c.inv() * a;
            let del = c * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < EPS {
                break;
            }
        }
        let (s, co) = x.sin_cos();
        (h * Complex64::new(co, -s)).im
    }
}

/// Range (F′) or relaxation (G′) function of the given kind at `x = k_F·W`.
///
/// | kind | formula |
/// |---|---|
/// | F′₁ | si(2x) |
/// | F′₂ | J₀(x)Y₀(x) + J₁(x)Y₁(x) |
/// | G′₁ | (1 − cos 2x)/2 |
/// | G′₂ | 1 − J₀(x)² |
pub fn range_function(kind: RangeFunctionKind, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("range_function", format!("argument must be finite and >= 0, got {x}")));
    }
    match (kind.dimensionality, kind.flavor) {
        (Dimensionality::One, RangeFlavor::Coupling) => Ok(si_unchecked(2.0 * x)),
        (Dimensionality::Two, RangeFlavor::Coupling) => {
            if x == 0.0 {
                return Err(Error::domain("range_function", "F2' is singular at x = 0 (Y0 diverges)"));
            }
            let (j0x, y0x) = j0_y0(x);
            let (j1x, y1x) = j1_y1(x);
            Ok(j0x * y0x + j1x * y1x)
        }
        (Dimensionality::One, RangeFlavor::Relaxation) => Ok(0.5 * (1.0 - (2.0 * x).cos())),
        (Dimensionality::Two, RangeFlavor::Relaxation) => {
            let j = j0(x);
            Ok(1.0 - j * j)
        }
    }
}

/// Small-argument limit of Y₀, (2/π)(ln(x/2) + γ).
pub fn y0_small_argument(x: f64) -> f64 {
    (2.0 / PI) * ((0.5 * x).ln() + EULER_GAMMA)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert!((sine_integral_si(0.0).unwrap() + FRAC_PI_2).abs() < 1e-15);
        assert_eq!(range_function(RangeFunctionKind::relaxation(Dimensionality::Two), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j(0, f64::NAN).is_err());
        assert!(bessel_j(0, f64::INFINITY).is_err());
        assert!(bessel_j(2, 1.0).is_err());
        assert!(bessel_y(0, 0.0).is_err());
        assert!(bessel_y(1, -1.0).is_err());
        assert!(sine_integral_si(-0.1).is_err());
        assert!(range_function(RangeFunctionKind::coupling(Dimensionality::Two), 0.0).is_err());
        assert!(range_function(RangeFunctionKind::coupling(Dimensionality::One), -1.0).is_err());
    }

    #[test]
    fn odd_and_even_symmetry() {
        for x in [0.5, 3.0, 12.0, 45.0] {
            assert_eq!(j0(-x), j0(x));
            assert_eq!(j1(-x), -j1(x));
        }
    }

    #[test]
    fn branches_join_continuously() {
        // The functions have slopes of order one, so a 2e-9 step may move
        // them by about that much; a branch mismatch would show up far above.
        for edge in [SERIES_MAX, ASYMPTOTIC_MIN] {
            let below = edge - 1e-9;
            let above = edge + 1e-9;
            assert!((j0(below) - j0(above)).abs() < 5e-9);
            assert!((j1(below) - j1(above)).abs() < 5e-9);
            assert!((bessel_y(0, below).unwrap() - bessel_y(0, above).unwrap()).abs() < 5e-9);
            assert!((bessel_y(1, below).unwrap() - bessel_y(1, above).unwrap()).abs() < 5e-9);
        }
        assert!((si_unchecked(4.0) - si_unchecked(4.0 + 1e-12)).abs() < 1e-11);
    }

    #[test]
    fn wronskian_holds() {
        // J1 Y0 - J0 Y1 = 2/(πx)
        for i in 1..400 {
            let x = 0.25 * i as f64;
            let (j0x, y0x) = j0_y0(x);
            let (j1x, y1x) = j1_y1(x);
            let w = j1x * y0x - j0x * y1x;
            assert!((w * PI * x / 2.0 - 1.0).abs() < 1e-10, "x = {x}: {w}");
        }
    }
}
