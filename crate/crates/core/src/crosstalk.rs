//! Local current lines (LCLs): currents that switch on the field at one
//! qubit while cancelling it at every other qubit.
//!
//! Line i runs a distance r above qubit i, neighbouring lines are a pitch L
//! apart, and a line reaches the neighbouring qubit with weight
//! p = r/√(r² + L²). Adjacent lines run in opposite directions, so the
//! physical current of line i is (−1)^i·I_i and the cancellation conditions
//! read I_i = p(I_{i−1} + I_{i+1}) for every i other than the target.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Largest condition number accepted by [`solve_currents`].
pub const MAX_CONDITION: f64 = 1e12;

/// A row of N + 1 lines over N + 1 qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LclArray {
    /// Index of the last line and qubit; there are N + 1 of each.
    pub n_max: usize,
    /// Line–qubit distance, nm.
    pub r: f64,
    /// Line pitch, nm.
    pub l: f64,
    /// Target qubit n.
    pub target: usize,
    /// Current I_n in the target line, A.
    pub i_n: f64,
}

impl LclArray {
    pub fn coupling(&self) -> f64 {
        coupling(self.r, self.l)
    }

    pub fn line_count(&self) -> usize {
        self.n_max + 1
    }

    fn validate(&self) -> Result<()> {
        // L = ∞ is allowed and decouples the lines (p = 0).
        if !(self.r > 0.0) || !(self.l > 0.0) || !self.r.is_finite() {
            return Err(Error::domain("LclArray", format!("need finite r > 0 and L > 0, got r={}, L={}", self.r, self.l)));
        }
        if self.target > self.n_max {
            return Err(Error::invalid("LclArray", format!("target {} outside 0..={}", self.target, self.n_max)));
        }
        if !self.i_n.is_finite() {
            return Err(Error::invalid("LclArray", "I_n must be finite"));
        }
        Ok(())
    }
}

/// p = r/√(r² + L²).
pub fn coupling(r: f64, l: f64) -> f64 {
    r / r.hypot(l)
}

/// Condition number of the m×m chain with unit diagonal and −p off the
/// diagonal, whose eigenvalues are 1 − 2p·cos(kπ/(m+1)).
pub fn chain_condition(m: usize, p: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in 1..=m {
        let lambda = (1.0 - 2.0 * p * (k as f64 * PI / (m as f64 + 1.0)).cos()).abs();
        lo = lo.min(lambda);
        hi = hi.max(lambda);
    }
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Currents I_0..I_N that null the field at every qubit except the target.
pub fn solve_currents(arr: &LclArray) -> Result<Vec<f64>> {
    arr.validate()?;
    let p = arr.coupling();
    let left = arr.target;
    let right = arr.n_max - arr.target;
    let cond = chain_condition(left, p).max(chain_condition(right, p));
    if !(cond <= MAX_CONDITION) {
        return Err(Error::Singular {
            op: "solve_currents",
            reason: format!("condition number {cond:.3e} at p = {p}; avoid L = √(m−1)·r and nearby pitches"),
        });
    }
    // Each side of the target is a tridiagonal chain; eliminating from its
    // far edge gives I_k = ρ_k·I_{k+1} with ρ_0 = p and ρ_k = p/(1 − p·ρ_{k−1}).
    // Treating both sides alike keeps mirrored targets bit-identical.
    let mut currents = vec![0.0; arr.line_count()];
    currents[arr.target] = arr.i_n;
    let left_side = chain_from_target(left, p, arr.i_n);
    let right_side = chain_from_target(right, p, arr.i_n);
    for (k, v) in left_side.into_iter().enumerate() {
        currents[arr.target - 1 - k] = v;
    }
    for (k, v) in right_side.into_iter().enumerate() {
        currents[arr.target + 1 + k] = v;
    }
    Ok(currents)
}

/// Currents of an m-line chain hanging off the target, listed outward.
fn chain_from_target(m: usize, p: f64, i_n: f64) -> Vec<f64> {
    let mut ratios = Vec::with_capacity(m);
    let mut rho = 0.0;
    for _ in 0..m {
        rho = p / (1.0 - p * rho);
        ratios.push(rho);
    }
    let mut out = Vec::with_capacity(m);
    let mut next = i_n;
    for rho in ratios.into_iter().rev() {
        next *= rho;
        out.push(next);
    }
    out
}

fn neighbour_sum(currents: &[f64], i: usize) -> f64 {
    let before = if i > 0 { currents[i - 1] } else { 0.0 };
    let after = currents.get(i + 1).copied().unwrap_or(0.0);
    before + after
}

/// Field magnitude at the target, h_n = [I_n − p(I_{n−1} + I_{n+1})]/(2πr),
/// as an H-field in A/m.
pub fn target_field(arr: &LclArray, currents: &[f64]) -> f64 {
    let i = arr.target;
    (currents[i] - arr.coupling() * neighbour_sum(currents, i)) / (2.0 * PI * arr.r * 1e-9)
}

/// The dimensionless bracket 2πr·h_n/I_n.
pub fn target_bracket(arr: &LclArray, currents: &[f64]) -> f64 {
    target_field(arr, currents) * 2.0 * PI * arr.r * 1e-9 / arr.i_n
}

/// B = μ_r·μ₀·h, tesla.
pub fn target_flux_density(arr: &LclArray, currents: &[f64], mu_r: f64, mu0: f64) -> f64 {
    mu_r * mu0 * target_field(arr, currents)
}

/// Signed nearest-neighbour field at every qubit, A/m, with the
/// alternating line orientation applied.
pub fn qubit_fields(arr: &LclArray, currents: &[f64]) -> Vec<f64> {
    let p = arr.coupling();
    let scale = 1.0 / (2.0 * PI * arr.r * 1e-9);
    (0..currents.len())
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * scale * (currents[i] - p * neighbour_sum(currents, i))
        })
        .collect()
}

/// Field at each qubit from lines two or more pitches away, which the
/// nearest-neighbour model leaves out. Signed like [`qubit_fields`].
pub fn dropped_field(arr: &LclArray, currents: &[f64]) -> Vec<f64> {
    let n = currents.len();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j.abs_diff(i) >= 2)
                .map(|j| {
                    let orient = if j % 2 == 0 { 1.0 } else { -1.0 };
                    let d = arr.r.hypot(j.abs_diff(i) as f64 * arr.l) * 1e-9;
                    orient * currents[j] / (2.0 * PI * d)
                })
                .sum()
        })
        .collect()
}

/// A flagged geometry from the simple crosstalk condition m·p² ≠ 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForbiddenGeometry {
    pub m: usize,
    /// Pitch √(m−1)·r at which m·p² = 1, nm.
    pub pitch: f64,
    /// |m·p² − 1| at the queried geometry.
    pub distance: f64,
}

/// Every m in 1..=m_max with |m·p² − 1| < tol at the given r, L. `l` may
/// be 0 (p = 1).
pub fn singularity_check(r: f64, l: f64, m_max: usize, tol: f64) -> Result<Vec<ForbiddenGeometry>> {
    if !(r > 0.0) || !(l >= 0.0) {
        return Err(Error::domain("singularity_check", "need r > 0 and L ≥ 0"));
    }
    let p2 = r * r / (r * r + l * l);
    Ok((1..=m_max)
        .filter_map(|m| {
            let distance = (m as f64 * p2 - 1.0).abs();
            (distance < tol).then(|| ForbiddenGeometry { m, pitch: forbidden_pitch(r, m), distance })
        })
        .collect())
}

/// L = √(m − 1)·r.
pub fn forbidden_pitch(r: f64, m: usize) -> f64 {
    ((m as f64) - 1.0).sqrt() * r
}

/// Couplings p ≤ 1 at which an m-line chain is exactly singular,
/// p = 1/(2cos(kπ/(m+1))). Chains of 2 and 3 lines give p² = 1 and 1/2,
/// the first two cases of m·p² = 1; longer chains depart from that rule.
pub fn exact_singular_couplings(m: usize) -> Vec<f64> {
    (1..=m)
        .map(|k| (k as f64 * PI / (m as f64 + 1.0)).cos())
        .filter(|c| *c >= 0.5 - 1e-12)
        .map(|c| (1.0 / (2.0 * c)).min(1.0))
        .collect()
}
