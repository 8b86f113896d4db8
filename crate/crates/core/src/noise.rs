//! Shot and thermal noise of a readout channel, the resulting conductance
//! fluctuation, and the Gaussian-overlap fidelity of a spin measurement.
//!
//! Conductances `g` are in units of 2e²/h as returned by the conductance
//! module. The noise formulas use g′ = g_yy·R_K (units of e²/h), so g′ = 2g.

use crate::conductance::{middle_channel_conductance, ChannelDotSystem};
use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use std::f64::consts::SQRT_2;

/// Bandwidth unit of the quoted noise coefficients, s⁻¹.
pub const BANDWIDTH_UNIT: f64 = 1e12;

/// Drive and measurement settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseEnv {
    /// Drain voltage V_D, volt.
    pub v_d: f64,
    /// Temperature, K.
    pub temperature: f64,
    /// Measurement bandwidth Δf, Hz.
    pub bandwidth: f64,
}

impl Default for NoiseEnv {
    fn default() -> Self {
        NoiseEnv { v_d: 0.5, temperature: 0.1, bandwidth: BANDWIDTH_UNIT }
    }
}

impl NoiseEnv {
    pub fn validate(&self) -> Result<()> {
        if !(self.v_d > 0.0) || !(self.bandwidth > 0.0) || !(self.temperature >= 0.0) {
            return Err(Error::invalid("NoiseEnv", format!("need V_D > 0, Δf > 0, T ≥ 0, got {self:?}")));
        }
        Ok(())
    }
}

/// Noise spectral density and the conductance fluctuation it causes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseFigure {
    /// Current noise, A²/Hz.
    pub spectral_density: f64,
    /// Δg′ in units of e²/h.
    pub dg_prime: f64,
    /// The same fluctuation in units of 2e²/h.
    pub dg: f64,
}

fn check_g(op: &'static str, g: f64) -> Result<f64> {
    if !(g >= 0.0) || !g.is_finite() {
        return Err(Error::domain(op, format!("conductance must be finite and ≥ 0, got {g}")));
    }
    Ok(2.0 * g)
}

/// S_q = 2qI = 2q·g_yy·V_D and Δg′ = √(2q·R_K·g′·Δf/V_D).
pub fn shot_noise(c: &ConstantsTable, env: &NoiseEnv, g: f64) -> Result<NoiseFigure> {
    env.validate()?;
    let gp = check_g("shot_noise", g)?;
    let dg_prime = (2.0 * c.e_charge * c.r_k * gp * env.bandwidth / env.v_d).sqrt();
    Ok(NoiseFigure {
        spectral_density: 2.0 * c.e_charge * gp / c.r_k * env.v_d,
        dg_prime,
        dg: dg_prime / 2.0,
    })
}

/// S_T = 4k_BT·g_yy and Δg_T′ = √(4k_BT·R_K·g′·Δf/V_D²).
pub fn thermal_noise(c: &ConstantsTable, env: &NoiseEnv, g: f64) -> Result<NoiseFigure> {
    env.validate()?;
    let gp = check_g("thermal_noise", g)?;
    let kt = c.k_b_si() * env.temperature;
    let dg_prime = (4.0 * kt * c.r_k * gp * env.bandwidth).sqrt() / env.v_d;
    Ok(NoiseFigure { spectral_density: 4.0 * kt * gp / c.r_k, dg_prime, dg: dg_prime / 2.0 })
}

/// S_q per unit g′: 2q·V_D/R_K, A²/Hz.
pub fn shot_density_coefficient(c: &ConstantsTable, v_d: f64) -> f64 {
    2.0 * c.e_charge * v_d / c.r_k
}

/// Δg_q′ per √(g′Δf/V_D) with Δf in units of 10¹² s⁻¹.
pub fn shot_fluctuation_coefficient(c: &ConstantsTable) -> f64 {
    (2.0 * c.e_charge * c.r_k * BANDWIDTH_UNIT).sqrt()
}

/// Δg_T′ per √(g′Δf/V_D²) with Δf in units of 10¹² s⁻¹.
pub fn thermal_fluctuation_coefficient(c: &ConstantsTable, temperature: f64) -> f64 {
    (4.0 * c.k_b_si() * temperature * c.r_k * BANDWIDTH_UNIT).sqrt()
}

/// Fluctuation Δg_yy = √(2q·g_yy·Δf/V_D) of an SI conductance, siemens.
pub fn conductance_fluctuation_si(c: &ConstantsTable, env: &NoiseEnv, g_si: f64) -> f64 {
    (2.0 * c.e_charge * g_si * env.bandwidth / env.v_d).sqrt()
}

/// Smallest SI conductance that exceeds its own shot fluctuation, 2qΔf/V_D.
pub fn shot_threshold_si(c: &ConstantsTable, env: &NoiseEnv) -> f64 {
    2.0 * c.e_charge * env.bandwidth / env.v_d
}

fn check_sigma(op: &'static str, sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(op, format!("sigma must be finite and > 0, got {sigma}")));
    }
    Ok(())
}

/// ∫ max{P_meas(g) − P_ref(g), 0} dg for equal-width Gaussians, in closed
/// form: erf(|g_meas − g_ref|/(2√2σ)).
pub fn measurement_fidelity(g_meas: f64, g_ref: f64, sigma: f64) -> Result<f64> {
    check_sigma("measurement_fidelity", sigma)?;
    Ok(libm::erf((g_meas - g_ref).abs() / (2.0 * SQRT_2 * sigma)))
}

fn gaussian(x: f64, mean: f64, sigma: f64) -> f64 {
    let u = (x - mean) / sigma;
    (-0.5 * u * u).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, eps, 48)
}

/// Points where two Gaussian densities are equal.
fn crossings(ma: f64, sa: f64, mb: f64, sb: f64) -> Vec<f64> {
    if (sa - sb).abs() <= 1e-15 * sa.max(sb) {
        return vec![0.5 * (ma + mb)];
    }
    // ln P_a = ln P_b is a quadratic A x² + B x + C = 0.
    let (va, vb) = (sa * sa, sb * sb);
    let a = 1.0 / vb - 1.0 / va;
    let b = 2.0 * (ma / va - mb / vb);
    let cc = mb * mb / vb - ma * ma / va + 2.0 * (sb / sa).ln();
    let disc = b * b - 4.0 * a * cc;
    if disc < 0.0 {
        return Vec::new();
    }
    let r = disc.sqrt();
    vec![(-b - r) / (2.0 * a), (-b + r) / (2.0 * a)]
}

/// Overlap-difference fidelity by adaptive quadrature. Widths may differ;
/// with `sigma_meas == sigma_ref` it reproduces [`measurement_fidelity`].
pub fn fidelity_quadrature(g_meas: f64, sigma_meas: f64, g_ref: f64, sigma_ref: f64) -> Result<f64> {
    check_sigma("fidelity_quadrature", sigma_meas)?;
    check_sigma("fidelity_quadrature", sigma_ref)?;
    let span = 40.0 * sigma_meas.max(sigma_ref);
    let lo = g_meas.min(g_ref) - span;
    let hi = g_meas.max(g_ref) + span;
    let mut cuts = vec![lo, hi, g_meas, g_ref];
    cuts.extend(crossings(g_meas, sigma_meas, g_ref, sigma_ref).into_iter().filter(|x| *x > lo && *x < hi));
    // Extra cuts near the peak keep the integrator from stepping over it.
    for k in -3..=3 {
        cuts.push(g_meas + k as f64 * sigma_meas);
    }
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();
    let f = |x: f64| (gaussian(x, g_meas, sigma_meas) - gaussian(x, g_ref, sigma_ref)).max(0.0);
    let total: f64 = cuts.windows(2).filter(|w| w[1] > w[0]).map(|w| adaptive_simpson(&f, w[0], w[1], 1e-13)).sum();
    Ok(total.clamp(0.0, 1.0))
}

/// |g_meas − g_ref| divided by the shot fluctuation at g_meas.
pub fn snr(c: &ConstantsTable, env: &NoiseEnv, g_meas: f64, g_ref: f64) -> Result<f64> {
    let dg = shot_noise(c, env, g_meas)?.dg;
    let diff = (g_meas - g_ref).abs();
    if diff == 0.0 {
        return Ok(0.0);
    }
    Ok(diff / dg)
}

/// Conductances of the middle channel with the left dot at `level` and the
/// right dot either at the same level (reference, g↑=↓) or raised by
/// `zeeman` (g↑≠↓). Returns (g_meas, g_ref).
pub fn branch_conductances(template: &ChannelDotSystem, level: f64, zeeman: f64) -> Result<(f64, f64)> {
    let g_meas = middle_channel_conductance(&template.with_levels(level, level + zeeman))?;
    let g_ref = middle_channel_conductance(&template.with_levels(level, level))?;
    Ok((g_meas, g_ref))
}

/// Shot-noise-limited fidelity of the branch measurement at field `b_z` (T).
pub fn branch_fidelity(c: &ConstantsTable, env: &NoiseEnv, template: &ChannelDotSystem, level: f64, b_z: f64) -> Result<f64> {
    let zeeman = c.zeeman_splitting(b_z, c.g_factor)?;
    let (g_meas, g_ref) = branch_conductances(template, level, zeeman)?;
    let sigma = shot_noise(c, env, g_meas)?.dg;
    measurement_fidelity(g_meas, g_ref, sigma)
}

/// Smallest field on `b_grid` whose branch fidelity reaches `target`.
pub fn required_field(
    c: &ConstantsTable,
    env: &NoiseEnv,
    template: &ChannelDotSystem,
    level: f64,
    target: f64,
    b_grid: &[f64],
) -> Result<Option<f64>> {
    for &b in b_grid {
        if branch_fidelity(c, env, template, level, b)? >= target {
            return Ok(Some(b));
        }
    }
    Ok(None)
}
