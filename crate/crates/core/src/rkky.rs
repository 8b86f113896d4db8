//! s–d coupling between a dot and the channel, the RKKY interaction it
//! mediates between two dots, the competing Kondo scale, decoherence and the
//! resulting gate budget.
//!
//! All energies are in eV, lengths in nm and temperatures in K.

use crate::constants::ConstantsTable;
use crate::device::{charging_energy, fermi_energy_from_density, fermi_wavevector, DeviceGeometry};
use crate::error::{Error, Result};
use crate::special::{range_function, RangeFunctionKind};
use crate::Dimensionality;
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Carrier density used in the RKKY figures: n_e1 = 0.21 nm⁻¹ and
/// n_e2 = 0.21² nm⁻².
pub const FIGURE_DENSITY_1D: f64 = 0.21;
pub const FIGURE_DENSITY_2D: f64 = 0.21 * 0.21;
/// Temperature of the RKKY figures, K.
pub const FIGURE_TEMPERATURE: f64 = 0.1;

/// Parameters of one dot pair coupled through the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingInput {
    /// Tunnel broadening Γ.
    pub gamma: f64,
    /// Charging energy U.
    pub u: f64,
    /// E_m = E_F − ε₀. `None` selects the default 2·V_tun.
    pub e_m: Option<f64>,
    pub dimensionality: Dimensionality,
    /// n_e1 (nm⁻¹) or n_e2 (nm⁻²).
    pub n_ed: f64,
    /// Dot separation W.
    pub w: f64,
    /// Gate length L, the channel extent used for the density of states.
    pub l: f64,
    /// Fin height, entering the 2D conducting area L(W + 2·HFIN).
    pub hfin: f64,
    pub temperature: f64,
    pub m_eff_ratio: f64,
}

impl CouplingInput {
    /// Figure settings: L = W, HFIN = 30 nm, T = 100 mK, m*/m₀ = 0.2 and U
    /// from the default dot geometry.
    pub fn figure(c: &ConstantsTable, d: Dimensionality, gamma: f64, l: f64) -> Self {
        let n_ed = match d {
            Dimensionality::One => FIGURE_DENSITY_1D,
            Dimensionality::Two => FIGURE_DENSITY_2D,
        };
        CouplingInput {
            gamma,
            u: charging_energy(c, &DeviceGeometry::default()).expect("default geometry is valid"),
            e_m: None,
            dimensionality: d,
            n_ed,
            w: l,
            l,
            hfin: 30.0,
            temperature: FIGURE_TEMPERATURE,
            m_eff_ratio: 0.2,
        }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        CouplingInput { gamma, ..self }
    }

    /// Same input with L = W = `l`.
    pub fn with_length(self, l: f64) -> Self {
        CouplingInput { w: l, l, ..self }
    }

    fn check(&self, op: &'static str) -> Result<()> {
        let positive = [
            ("Gamma", self.gamma),
            ("U", self.u),
            ("n_ed", self.n_ed),
            ("W", self.w),
            ("L", self.l),
            ("m_eff_ratio", self.m_eff_ratio),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(op, format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !(self.hfin >= 0.0) || !(self.temperature >= 0.0) {
            return Err(Error::domain(op, "HFIN and T must be ≥ 0"));
        }
        Ok(())
    }
}

fn hbar2_over_m(c: &ConstantsTable, input: &CouplingInput) -> f64 {
    2.0 * c.hbar2_over_2m0() / input.m_eff_ratio
}

pub fn fermi_k(input: &CouplingInput) -> f64 {
    fermi_wavevector(input.dimensionality, input.n_ed)
}

pub fn fermi_energy(c: &ConstantsTable, input: &CouplingInput) -> f64 {
    fermi_energy_from_density(c, input.dimensionality, input.n_ed, input.m_eff_ratio)
}

/// ρ_F per unit length (1D, eV⁻¹nm⁻¹) or area (2D, eV⁻¹nm⁻²):
/// m*/(πħ²k_F) and m*/(πħ²).
pub fn dos_density(c: &ConstantsTable, input: &CouplingInput) -> f64 {
    let base = 1.0 / (PI * hbar2_over_m(c, input));
    match input.dimensionality {
        Dimensionality::One => base / fermi_k(input),
        Dimensionality::Two => base,
    }
}

/// Channel extent over which the dot hybridises: L in 1D, the area
/// L(W + 2·HFIN) of two side walls and the top in 2D.
pub fn channel_extent(input: &CouplingInput) -> f64 {
    match input.dimensionality {
        Dimensionality::One => input.l,
        Dimensionality::Two => input.l * (input.w + 2.0 * input.hfin),
    }
}

/// Total density of states at E_F, eV⁻¹.
pub fn total_dos(c: &ConstantsTable, input: &CouplingInput) -> f64 {
    dos_density(c, input) * channel_extent(input)
}

/// V_tun from Γ = 2π|V_tun|²ρ.
pub fn tunneling_amplitude(c: &ConstantsTable, input: &CouplingInput) -> f64 {
    (input.gamma / (2.0 * PI * total_dos(c, input))).sqrt()
}

/// E_m, either as given or 2·V_tun.
pub fn level_depth(c: &ConstantsTable, input: &CouplingInput) -> f64 {
    input.e_m.unwrap_or_else(|| 2.0 * tunneling_amplitude(c, input))
}

/// Upper validity bound Γ_max = πρU²/4.
pub fn gamma_max(c: &ConstantsTable, input: &CouplingInput) -> f64 {
    PI * total_dos(c, input) * input.u * input.u / 4.0
}

/// z_d = ΓU/((U − E_m)E_m).
pub fn z_factor(c: &ConstantsTable, input: &CouplingInput) -> Result<f64> {
    input.check("z_factor")?;
    let e_m = level_depth(c, input);
    if !(e_m > 0.0 && e_m < input.u) {
        return Err(Error::domain("z_factor", format!("E_m = {e_m} eV outside (0, U = {} eV)", input.u)));
    }
    Ok(input.gamma * input.u / ((input.u - e_m) * e_m))
}

/// s–d coupling J_sd = z/(πρ_F): ħk_F z/m* in eV·nm (1D), zħ²/m* in eV·nm² (2D).
pub fn j_sd(c: &ConstantsTable, input: &CouplingInput) -> Result<f64> {
    let z = z_factor(c, input)?;
    let h = hbar2_over_m(c, input);
    Ok(match input.dimensionality {
        Dimensionality::One => h * fermi_k(input) * z,
        Dimensionality::Two => h * z,
    })
}

fn xi(d: Dimensionality) -> f64 {
    match d {
        Dimensionality::One => 1.0,
        Dimensionality::Two => 1.0 / (4.0 * PI * PI),
    }
}

fn eta(d: Dimensionality) -> f64 {
    match d {
        Dimensionality::One => 2.0,
        Dimensionality::Two => 8.0 / PI,
    }
}

/// F_d′(k_F W).
pub fn coupling_range(input: &CouplingInput) -> Result<f64> {
    range_function(RangeFunctionKind::coupling(input.dimensionality), fermi_k(input) * input.w)
}

/// Signed RKKY coupling J_d = z²E_F ξ_d F_d′(k_F W)/π.
pub fn j_rkky(c: &ConstantsTable, input: &CouplingInput) -> Result<f64> {
    let z = z_factor(c, input)?;
    let f = coupling_range(input)?;
    Ok(z * z * fermi_energy(c, input) / PI * xi(input.dimensionality) * f)
}

/// T_K = √(ΓU)/2·exp(−π/z), in eV. Has no dependence on W or n beyond E_m.
pub fn kondo_temperature(c: &ConstantsTable, input: &CouplingInput) -> Result<f64> {
    let z = z_factor(c, input)?;
    Ok((input.gamma * input.u).sqrt() / 2.0 * (-PI / z).exp())
}

/// Decoherence rate γ_d in eV. The constant part (G′ = 1, the shortest
/// coherence time) unless `use_range_function` multiplies by G_d′(k_F W).
pub fn decoherence_rate(c: &ConstantsTable, input: &CouplingInput, use_range_function: bool) -> Result<f64> {
    if !(input.temperature > 0.0) {
        return Err(Error::domain("decoherence_rate", "T must be > 0"));
    }
    let z = z_factor(c, input)?;
    let kt = c.k_b * input.temperature;
    let base = match input.dimensionality {
        Dimensionality::One => 2.0 * z * z * kt / PI,
        Dimensionality::Two => z * z * kt / (8.0 * PI * PI),
    };
    if !use_range_function {
        return Ok(base);
    }
    let g = range_function(RangeFunctionKind::relaxation(input.dimensionality), fermi_k(input) * input.w)?;
    Ok(base * g)
}

/// √SWAP time, coherence time and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperationBudget {
    /// πħ/(2|J|), s.
    pub tau_op: f64,
    /// ħ/γ, s.
    pub tau_coh: f64,
    /// τ_coh/τ_op = 2|J|/(πγ).
    pub ratio: f64,
    /// Sign of J: +1 antiferromagnetic, −1 ferromagnetic.
    pub sign: f64,
}

/// Operation budget with the worst-case decoherence rate.
pub fn operation_budget(c: &ConstantsTable, input: &CouplingInput) -> Result<OperationBudget> {
    let j = j_rkky(c, input)?;
    if j == 0.0 {
        return Err(Error::domain("operation_budget", "coupling node: choose different W or n"));
    }
    let gamma = decoherence_rate(c, input, false)?;
    Ok(OperationBudget {
        tau_op: PI * c.hbar / (2.0 * j.abs()),
        tau_coh: c.hbar / gamma,
        ratio: 2.0 * j.abs() / (PI * gamma),
        sign: j.signum(),
    })
}

/// The same ratio written without z: η_d E_F |F_d′(k_F W)|/(2πk_BT).
pub fn ratio_closed_form(c: &ConstantsTable, input: &CouplingInput) -> Result<f64> {
    let f = coupling_range(input)?;
    Ok(eta(input.dimensionality) * fermi_energy(c, input) * f.abs() / (2.0 * PI * c.k_b * input.temperature))
}

/// One inequality of the operating-regime diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeInequality {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Every inequality is evaluated; nothing short-circuits.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub inequalities: Vec<RegimeInequality>,
}

impl RegimeReport {
    pub fn all_pass(&self) -> bool {
        self.inequalities.iter().all(|i| i.pass)
    }

    pub fn get(&self, name: &str) -> Option<&RegimeInequality> {
        self.inequalities.iter().find(|i| i.name == name)
    }
}

fn less(name: &'static str, lhs: f64, rhs: f64) -> RegimeInequality {
    RegimeInequality { name, lhs, rhs, pass: lhs < rhs }
}

/// Checks k_BT < |J| < 2μ_B B_z < E_F, |J| > T_K and Γ < Γ_max/10.
/// `b_z` in tesla.
pub fn regime_check(c: &ConstantsTable, input: &CouplingInput, b_z: f64) -> Result<RegimeReport> {
    let j = j_rkky(c, input)?.abs();
    let tk = kondo_temperature(c, input)?;
    let zeeman = 2.0 * c.mu_b * b_z.abs();
    let kt = c.k_b * input.temperature;
    let mut inequalities = vec![
        less("kT < |J|", kt, j),
        less("|J| < 2 muB Bz", j, zeeman),
        less("2 muB Bz < E_F", zeeman, fermi_energy(c, input)),
        less("T_K < |J|", tk, j),
        less("Gamma < Gamma_max/10", input.gamma, gamma_max(c, input) / 10.0),
    ];
    // At T = 0 the thermal bound holds whatever J is.
    if kt == 0.0 {
        inequalities[0].pass = true;
    }
    Ok(RegimeReport { inequalities })
}

/// One row of a Γ sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub gamma: f64,
    pub l: f64,
    pub j: f64,
    pub t_k: f64,
    pub j_sd: f64,
    pub budget: OperationBudget,
}

/// Evaluates `base` on every (L, Γ) pair with L = W, L-major.
pub fn gamma_sweep(c: &ConstantsTable, base: &CouplingInput, gammas: &[f64], lengths: &[f64]) -> Result<Vec<SweepPoint>> {
    let pairs: Vec<(f64, f64)> = lengths.iter().flat_map(|&l| gammas.iter().map(move |&g| (l, g))).collect();
    pairs
        .par_iter()
        .map(|&(l, g)| {
            let input = base.with_length(l).with_gamma(g);
            Ok(SweepPoint {
                gamma: g,
                l,
                j: j_rkky(c, &input)?,
                t_k: kondo_temperature(c, &input)?,
                j_sd: j_sd(c, &input)?,
                budget: operation_budget(c, &input)?,
            })
        })
        .collect()
}

/// Smallest Γ on the (ascending) grid where T_K reaches |J|, or `None` when
/// |J| > T_K everywhere on the grid.
pub fn kondo_crossing(c: &ConstantsTable, input: &CouplingInput, gammas: &[f64]) -> Result<Option<f64>> {
    for &g in gammas {
        let at = input.with_gamma(g);
        if kondo_temperature(c, &at)? >= j_rkky(c, &at)?.abs() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// τ_coh/τ_op over densities (rows) and separations W = L (columns). The
/// ratio does not involve Γ, so `base.gamma` only has to be valid.
pub fn ratio_map(c: &ConstantsTable, base: &CouplingInput, n_grid: &[f64], w_grid: &[f64]) -> Result<DMatrix<f64>> {
    if n_grid.is_empty() || w_grid.is_empty() {
        return Err(Error::invalid("ratio_map", "empty grid"));
    }
    if n_grid.iter().chain(w_grid).any(|v| !v.is_finite()) {
        return Err(Error::invalid("ratio_map", "grid values must be finite"));
    }
    let values: Vec<f64> = n_grid
        .par_iter()
        .flat_map_iter(|&n| {
            w_grid.iter().map(move |&w| {
                let input = CouplingInput { n_ed: n, ..base.with_length(w) };
                input.check("ratio_map")?;
                ratio_closed_form(c, &input)
            })
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_row_slice(n_grid.len(), w_grid.len(), &values))
}
