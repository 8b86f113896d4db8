//! Resonant-level conductance of two dots between three fin channels, the
//! single-channel closed form, conductance maps, and spin readout.
//!
//! Energies are reduced by [`ChannelDotSystem::energy_scale`] before the
//! formulas are evaluated, so a broadening of `0.01·E_F` is entered as
//! `gamma = 0.01 * e_kf` with the default scale `E_F`. Couplings enter through
//! the broadenings only: |V_i|² ∝ Γ_i, normalised so that |V_3|² = 1.
//! Results are in units of 2e²/h and already include the dimensionality
//! factor k_d.

pub mod readout;

use crate::error::{Error, Result};
use crate::Dimensionality;
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Channel indices as used by the self-energy table.
pub const CHANNELS: [usize; 3] = [1, 3, 5];

fn slot(i: usize) -> usize {
    match i {
        1 => 0,
        3 => 1,
        5 => 2,
        _ => panic!("channel index must be 1, 3 or 5, got {i}"),
    }
}

/// Self-energies s_ij = Σ_i(E_kj) for i, j ∈ {1, 3, 5}, in eV.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SelfEnergyTable {
    values: [[f64; 3]; 3],
}

impl SelfEnergyTable {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Table where every channel momentum sits at the Fermi level, so that
    /// s_ij = Σ_i(E_F) does not depend on j.
    pub fn fermi_consistent(s1: f64, s3: f64, s5: f64) -> Self {
        let row = |v: f64| [v, v, v];
        SelfEnergyTable { values: [row(s1), row(s3), row(s5)] }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[slot(i)][slot(j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[slot(i)][slot(j)] = v;
    }
}

/// Inputs shared by every conductance formula. Energies in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDotSystem {
    /// Channel energy at the Fermi wavevector.
    pub e_kf: f64,
    /// Left dot level (E_2).
    pub e_sl: f64,
    /// Right dot level (E_4).
    pub e_sr: f64,
    pub s: SelfEnergyTable,
    /// Broadenings Γ_1, Γ_3, Γ_5.
    pub gamma: [f64; 3],
    pub dimensionality: Dimensionality,
    /// Sheet density, nm⁻², used by k_2.
    pub n_e2: f64,
    /// Fin width, nm, used by k_2.
    pub w: f64,
    /// Energy unit the formulas are evaluated in.
    pub energy_scale: f64,
}

impl ChannelDotSystem {
    /// 1D system with zero self-energies and equal broadenings, reduced by
    /// the Fermi energy.
    pub fn symmetric(e_kf: f64, e_sl: f64, e_sr: f64, gamma: f64) -> Self {
        ChannelDotSystem {
            e_kf,
            e_sl,
            e_sr,
            s: SelfEnergyTable::zero(),
            gamma: [gamma; 3],
            dimensionality: Dimensionality::One,
            n_e2: 0.0,
            w: 0.0,
            energy_scale: e_kf,
        }
    }

    pub fn with_levels(&self, e_sl: f64, e_sr: f64) -> Self {
        ChannelDotSystem { e_sl, e_sr, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma.iter().any(|g| !(*g > 0.0) || !g.is_finite()) {
            return Err(Error::invalid("ChannelDotSystem", format!("broadenings must be > 0, got {:?}", self.gamma)));
        }
        if !(self.energy_scale > 0.0) || !self.energy_scale.is_finite() {
            return Err(Error::invalid("ChannelDotSystem", format!("energy_scale must be > 0, got {}", self.energy_scale)));
        }
        for v in [self.e_kf, self.e_sl, self.e_sr] {
            if !v.is_finite() {
                return Err(Error::invalid("ChannelDotSystem", "energies must be finite"));
            }
        }
        if self.dimensionality == Dimensionality::Two && !(self.n_e2 > 0.0 && self.w > 0.0) {
            return Err(Error::invalid("ChannelDotSystem", "2D systems need n_e2 > 0 and W > 0 for k_2"));
        }
        Ok(())
    }

    /// Dimensionality factor: k_1 = 1, k_2 = π·n_e2·W².
    pub fn k_d(&self) -> f64 {
        match self.dimensionality {
            Dimensionality::One => 1.0,
            Dimensionality::Two => PI * self.n_e2 * self.w * self.w,
        }
    }

    fn reduced(&self) -> Reduced {
        let u = self.energy_scale;
        let mut s = [[0.0; 3]; 3];
        for (a, row) in s.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v = self.s.values[a][b] / u;
            }
        }
        Reduced {
            e_kf: self.e_kf / u,
            e_sl: self.e_sl / u,
            e_sr: self.e_sr / u,
            s,
            gamma: [self.gamma[0] / u, self.gamma[1] / u, self.gamma[2] / u],
        }
    }
}

struct Reduced {
    e_kf: f64,
    e_sl: f64,
    e_sr: f64,
    s: [[f64; 3]; 3],
    gamma: [f64; 3],
}

impl Reduced {
    fn s(&self, i: usize, j: usize) -> f64 {
        self.s[slot(i)][slot(j)]
    }
}

/// The six resonance energies e1..e6, in units of the energy scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceTerms {
    pub e: [f64; 6],
}

pub fn resonance_terms(sys: &ChannelDotSystem) -> ResonanceTerms {
    resonance_terms_reduced(&sys.reduced())
}

fn resonance_terms_reduced(r: &Reduced) -> ResonanceTerms {
    let left = r.e_kf - r.e_sl;
    let right = r.e_kf - r.e_sr;
    ResonanceTerms {
        e: [
            left - r.s(1, 1) - r.s(3, 1),
            left - r.s(1, 3) - r.s(3, 3),
            left - r.s(1, 5) - r.s(3, 5),
            right - r.s(5, 1) - r.s(3, 1),
            right - r.s(5, 3) - r.s(3, 3),
            right - r.s(5, 5) - r.s(3, 5),
        ],
    }
}

/// The six contributions to the conductance, before the k_d factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConductanceTerms {
    pub direct_1: f64,
    pub direct_3: f64,
    pub direct_5: f64,
    pub cross_13: f64,
    pub cross_15: f64,
    pub cross_35: f64,
}

impl ConductanceTerms {
    /// Sum grouped in mirror pairs, so that swapping the two dots (with
    /// mirrored parameters) gives a bit-identical result.
    pub fn sum(&self) -> f64 {
        (self.direct_1 + self.direct_5) + self.direct_3 + (self.cross_13 + self.cross_35) + self.cross_15
    }
}

fn pole(op: &'static str) -> Error {
    Error::Singular { op, reason: "on-resonance pole: broadenings inconsistent".into() }
}

/// All six terms of the two-dot, three-channel conductance.
pub fn conductance_terms(sys: &ChannelDotSystem) -> Result<ConductanceTerms> {
    sys.validate()?;
    let r = sys.reduced();
    let [e1, e2, e3, e4, e5, e6] = resonance_terms_reduced(&r).e;
    let [g1, g3, g5] = r.gamma;
    let (s31, s33, s35) = (r.s(3, 1), r.s(3, 3), r.s(3, 5));
    let (w1, w5) = (g1 / g3, g5 / g3);

    let d1 = (e1 * e4 - s31 * s31).powi(2) + e4 * e4 * g1 * g1;
    let d3 = (e2 * e5 - s33 * s33).powi(2) + g3 * g3 * (e2 + e5 + 2.0 * s33).powi(2);
    let d5 = (e3 * e6 - s35 * s35).powi(2) + e3 * e3 * g5 * g5;
    if d3 == 0.0 {
        return Err(pole("full_conductance"));
    }

    // With s31 = 0 the first term is w1²(e4²)²/[e4²(e1² + Γ1²)]², which
    // stays finite when e4 vanishes; the same holds for the fifth channel.
    let direct_1 = if s31 == 0.0 {
        w1 * w1 / (e1 * e1 + g1 * g1).powi(2)
    } else if d1 == 0.0 {
        return Err(pole("full_conductance"));
    } else {
        w1 * w1 * (e4 * e4 + s31 * s31).powi(2) / (d1 * d1)
    };
    let direct_5 = if s35 == 0.0 {
        w5 * w5 / (e6 * e6 + g5 * g5).powi(2)
    } else if d5 == 0.0 {
        return Err(pole("full_conductance"));
    } else {
        w5 * w5 * (e3 * e3 + s35 * s35).powi(2) / (d5 * d5)
    };
    let direct_3 = ((e2 + s33).powi(2) + (e5 + s33).powi(2)).powi(2) / (d3 * d3);

    // Cross terms: divide the numerators by the e4 and e3 factors hidden in
    // D1 and D5 so that vanishing e4 or e3 with s31 = s35 = 0 is harmless.
    let x13 = if s31 == 0.0 {
        2.0 * w1 * (e2 + s33).powi(2) / ((e1 * e1 + g1 * g1) * d3)
    } else {
        2.0 * w1 * (e4 * (e2 + s33) + s31 * (e5 + s33)).powi(2) / (d1 * d3)
    };
    let x35 = if s35 == 0.0 {
        2.0 * w5 * (e5 + s33).powi(2) / ((e6 * e6 + g5 * g5) * d3)
    } else {
        2.0 * w5 * (s35 * (e2 + s33) + e3 * (e5 + s33)).powi(2) / (d3 * d5)
    };
    let x15 = if s31 == 0.0 && s35 == 0.0 {
        0.0
    } else if d1 == 0.0 || d5 == 0.0 {
        return Err(pole("full_conductance"));
    } else {
        2.0 * w1 * w5 * (s35 * e4 + s31 * e3).powi(2) / (d1 * d5)
    };
    Ok(ConductanceTerms {
        direct_1,
        direct_3,
        direct_5,
        cross_13: x13,
        cross_15: x15,
        cross_35: x35,
    })
}

/// Full conductance in units of 2e²/h, including k_d.
pub fn full_conductance(sys: &ChannelDotSystem) -> Result<f64> {
    Ok(sys.k_d() * conductance_terms(sys)?.sum())
}

/// Centre offset Δ and half-splitting δ of the two renormalised dot levels,
/// in units of the energy scale.
///
/// Δ = (2E_kF − E_SL − E_SR − s11 − s55)/2 and
/// δ = ((E_SL + s11) − (E_SR + s55))/2. With a Fermi-consistent self-energy
/// table this makes [`middle_channel_conductance`] identical to the middle
/// term of the full formula.
pub fn detuning(sys: &ChannelDotSystem) -> (f64, f64) {
    let r = sys.reduced();
    let left = r.e_sl + r.s(1, 1);
    let right = r.e_sr + r.s(5, 5);
    (r.e_kf - 0.5 * (left + right), 0.5 * (left - right))
}

/// Single-channel closed form 4(Δ² + δ²)²/[(Δ² − 2s33Δ − δ²)² + 4Δ²Γ3²]², all
/// arguments in the same reduced units, without k_d.
pub fn single_channel_form(delta_c: f64, delta_h: f64, s33: f64, gamma3: f64) -> Result<f64> {
    let num = 4.0 * (delta_c * delta_c + delta_h * delta_h).powi(2);
    let den = (delta_c * delta_c - 2.0 * s33 * delta_c - delta_h * delta_h).powi(2)
        + 4.0 * delta_c * delta_c * gamma3 * gamma3;
    if den == 0.0 {
        return Err(pole("middle_channel_conductance"));
    }
    Ok(num / (den * den))
}

/// Conductance of the middle channel alone, in units of 2e²/h with k_d.
pub fn middle_channel_conductance(sys: &ChannelDotSystem) -> Result<f64> {
    sys.validate()?;
    let (dc, dh) = detuning(sys);
    let r = sys.reduced();
    Ok(sys.k_d() * single_channel_form(dc, dh, r.s(3, 3), r.gamma[1])?)
}

/// Conductance of an edge channel coupled to a single dot at `level`, using
/// the channel-1 broadening and self-energy.
pub fn edge_channel_conductance(sys: &ChannelDotSystem, level: f64) -> Result<f64> {
    sys.validate()?;
    let r = sys.with_levels(level, level).reduced();
    let e1 = r.e_kf - r.e_sl - r.s(1, 1);
    let g1 = r.gamma[0];
    let w1 = g1 / r.gamma[1];
    Ok(sys.k_d() * w1 * w1 / (e1 * e1 + g1 * g1).powi(2))
}

/// Conductance over a grid of dot levels. Rows follow `e_sl_grid`, columns
/// follow `e_sr_grid`.
pub fn conductance_map(sys: &ChannelDotSystem, e_sl_grid: &[f64], e_sr_grid: &[f64]) -> Result<DMatrix<f64>> {
    for grid in [e_sl_grid, e_sr_grid] {
        if grid.is_empty() || grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("conductance_map", "grids must be non-empty and finite"));
        }
        if grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("conductance_map", "grids must be sorted ascending"));
        }
    }
    sys.validate()?;
    let cols = e_sr_grid.len();
    let values: Vec<f64> = (0..e_sl_grid.len() * cols)
        .into_par_iter()
        .map(|idx| full_conductance(&sys.with_levels(e_sl_grid[idx / cols], e_sr_grid[idx % cols])))
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_row_slice(e_sl_grid.len(), cols, &values))
}

/// Indices of strict local maxima. A plateau counts once, at its leftmost
/// point, when both sides fall away; endpoints never count.
pub fn local_maxima(series: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    let n = series.len();
    let mut i = 1;
    while i + 1 < n {
        if series[i] > series[i - 1] {
            let mut j = i;
            while j + 1 < n && series[j + 1] == series[i] {
                j += 1;
            }
            if j + 1 < n && series[j + 1] < series[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Anti-diagonal of a square matrix, from (0, n−1) to (n−1, 0).
pub fn anti_diagonal(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows().min(m.ncols());
    (0..n).map(|i| m[(i, n - 1 - i)]).collect()
}
