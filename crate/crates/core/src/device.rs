//! Device-level estimates: carrier densities and Fermi energies, charging
//! energy, box levels of the dot and their size sensitivity, local current
//! line fields, and the wire power budget.

use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use crate::Dimensionality;
use log::warn;
use std::f64::consts::PI;

/// Fin, dot and local-current-line geometry. Lengths in nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceGeometry {
    /// Gate length.
    pub l: f64,
    /// Fin spacing / width.
    pub w: f64,
    /// Fin height.
    pub hfin: f64,
    /// Tunnel barrier thickness.
    pub w_d: f64,
    /// Edge of the cubic dot.
    pub l_qd: f64,
    /// Distance between a current line and the qubit below it.
    pub r: f64,
    /// Relative permittivity of the tunnel barrier.
    pub eps_barrier: f64,
    /// Relative permeability of the channel material.
    pub mu_channel: f64,
}

impl DeviceGeometry {
    /// Geometry with `L = W = l`, `L_QD = l/2` and the default barrier, fin
    /// height and current-line distance.
    pub fn with_length(l: f64) -> Self {
        DeviceGeometry {
            l,
            w: l,
            hfin: 30.0,
            w_d: 1.0,
            l_qd: 0.5 * l,
            r: 20.0,
            eps_barrier: 3.9,
            mu_channel: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lengths = [
            ("L", self.l),
            ("W", self.w),
            ("HFIN", self.hfin),
            ("w_d", self.w_d),
            ("L_QD", self.l_qd),
            ("r", self.r),
        ];
        for (name, v) in lengths {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid("DeviceGeometry", format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !(self.eps_barrier > 0.0) || !(self.mu_channel > 0.0) {
            return Err(Error::invalid("DeviceGeometry", "eps_barrier and mu_channel must be > 0"));
        }
        if self.l > 28.0 {
            warn!("gate length {} nm exceeds the 28 nm design range", self.l);
        }
        Ok(())
    }
}

impl Default for DeviceGeometry {
    fn default() -> Self {
        DeviceGeometry::with_length(10.0)
    }
}

/// Bulk carrier density and the channel it is projected onto.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierSpec {
    /// Bulk density, cm⁻³.
    pub n3d: f64,
    pub dimensionality: Dimensionality,
    /// m*/m₀.
    pub m_eff_ratio: f64,
}

impl CarrierSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.n3d > 0.0) || !self.n3d.is_finite() {
            return Err(Error::invalid("CarrierSpec", format!("n3d must be > 0, got {}", self.n3d)));
        }
        if !(self.m_eff_ratio > 0.0) {
            return Err(Error::invalid("CarrierSpec", format!("m_eff_ratio must be > 0, got {}", self.m_eff_ratio)));
        }
        if !(1e15..=1e20).contains(&self.n3d) {
            warn!("density {:e} cm^-3 is outside the 1e15..1e20 design range", self.n3d);
        }
        Ok(())
    }
}

/// Channel density n_e1 (nm⁻¹) or n_e2 (nm⁻²) from the bulk density,
/// n_ed = n3d^(d/3).
pub fn reduced_density(spec: &CarrierSpec) -> Result<f64> {
    spec.validate()?;
    Ok(match spec.dimensionality {
        // cm⁻¹ → nm⁻¹ and cm⁻² → nm⁻²
        Dimensionality::One => spec.n3d.cbrt() * 1e-7,
        Dimensionality::Two => spec.n3d.cbrt().powi(2) * 1e-14,
    })
}

/// Fermi wavevector in nm⁻¹: πn_e1 in 1D, √(2πn_e2) in 2D.
pub fn fermi_wavevector(d: Dimensionality, n_ed: f64) -> f64 {
    match d {
        Dimensionality::One => PI * n_ed,
        Dimensionality::Two => (2.0 * PI * n_ed).sqrt(),
    }
}

/// E_F = ħ²k_F²/(2m*) for a channel density already in nm units.
pub fn fermi_energy_from_density(c: &ConstantsTable, d: Dimensionality, n_ed: f64, m_eff_ratio: f64) -> f64 {
    let k = fermi_wavevector(d, n_ed);
    c.hbar2_over_2m0() * k * k / m_eff_ratio
}

/// Fermi energy of the channel in eV.
pub fn fermi_energy(c: &ConstantsTable, spec: &CarrierSpec) -> Result<f64> {
    let n = reduced_density(spec)?;
    Ok(fermi_energy_from_density(c, spec.dimensionality, n, spec.m_eff_ratio))
}

/// Capacitance of the dot to both channels, 2εε₀L_QD²/w_d, in farad.
pub fn dot_capacitance(c: &ConstantsTable, geom: &DeviceGeometry) -> f64 {
    2.0 * geom.eps_barrier * c.eps0 * (geom.l_qd * 1e-9).powi(2) / (geom.w_d * 1e-9)
}

/// Charging energy U = e²/(2C) in eV.
pub fn charging_energy(c: &ConstantsTable, geom: &DeviceGeometry) -> Result<f64> {
    if !(geom.l_qd > 0.0) || !(geom.w_d > 0.0) {
        return Err(Error::domain("charging_energy", "L_QD and w_d must be > 0"));
    }
    Ok(c.e_charge / (2.0 * dot_capacitance(c, geom)))
}

fn level_sum(n: [u32; 3]) -> f64 {
    n.iter().map(|&k| (k as f64 + 1.0).powi(2)).sum()
}

/// Particle-in-a-box level of the cubic dot for quantum numbers `n`, in eV.
pub fn qd_levels(c: &ConstantsTable, geom: &DeviceGeometry, m_eff_ratio: f64, n: [u32; 3]) -> Result<f64> {
    if !(geom.l_qd > 0.0) || !(m_eff_ratio > 0.0) {
        return Err(Error::domain("qd_levels", "L_QD and m_eff_ratio must be > 0"));
    }
    Ok(c.hbar2_over_2m0() / m_eff_ratio * PI * PI * level_sum(n) / (geom.l_qd * geom.l_qd))
}

/// Level shift of a dot whose edge changes from L_QD to L_QD + dL.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelShift {
    /// −2(dL/L_QD)·ε_n, eV.
    pub first_order: f64,
    /// ε_n(L_QD + dL) − ε_n(L_QD), eV.
    pub exact: f64,
    /// 15.5·(dL/L_QD)·Σ(n_l+1)² meV expressed in eV. The coefficient is
    /// quoted for L_QD = 10 nm and m*/m₀ = 0.5 and is not rescaled.
    pub quoted_form: f64,
}

/// Coefficient of the quoted size-variation formula, meV.
pub const QUOTED_VARIATION_COEFFICIENT_MEV: f64 = 15.5;

/// Magnitude of the first-order coefficient 2π²ħ²/(2m*L_QD²), eV, so that
/// |Δε_n| = coefficient·(dL/L_QD)·Σ(n_l+1)².
pub fn variation_coefficient(c: &ConstantsTable, l_qd: f64, m_eff_ratio: f64) -> f64 {
    2.0 * c.hbar2_over_2m0() / m_eff_ratio * PI * PI / (l_qd * l_qd)
}

pub fn qd_level_variation(
    c: &ConstantsTable,
    geom: &DeviceGeometry,
    m_eff_ratio: f64,
    n: [u32; 3],
    dl: f64,
) -> Result<LevelShift> {
    if !(dl.abs() < geom.l_qd) {
        return Err(Error::domain("qd_level_variation", format!("|dL| must be < L_QD, got {dl}")));
    }
    let e0 = qd_levels(c, geom, m_eff_ratio, n)?;
    let shifted = DeviceGeometry { l_qd: geom.l_qd + dl, ..*geom };
    let e1 = qd_levels(c, &shifted, m_eff_ratio, n)?;
    let frac = dl / geom.l_qd;
    Ok(LevelShift {
        first_order: -2.0 * frac * e0,
        exact: e1 - e0,
        quoted_form: QUOTED_VARIATION_COEFFICIENT_MEV * 1e-3 * frac * level_sum(n),
    })
}

/// Field of a straight current line, B = μ_r·μ₀·I/(2πr), in tesla.
pub fn lcl_field(c: &ConstantsTable, geom: &DeviceGeometry, current: f64) -> f64 {
    geom.mu_channel * c.mu0 * current / (2.0 * PI * geom.r * 1e-9)
}

/// Current needed for a field `b`, inverse of [`lcl_field`], in ampere.
pub fn lcl_current_for_field(c: &ConstantsTable, geom: &DeviceGeometry, b: f64) -> f64 {
    2.0 * PI * geom.r * 1e-9 * b / (geom.mu_channel * c.mu0)
}

/// Current, resistance and Joule power of one wire, and how many such
/// wires fit a chip power budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireBudget {
    pub current: f64,
    pub resistance: f64,
    pub per_wire_power: f64,
    pub max_wires: f64,
}

/// Wire budget from resistivity (μΩ·cm), current density (A/cm²), cross
/// section and length (nm), and chip power (W).
pub fn wire_budget(
    resistivity_uohm_cm: f64,
    current_density_a_cm2: f64,
    width: f64,
    height: f64,
    length: f64,
    chip_power: f64,
) -> Result<WireBudget> {
    let inputs = [resistivity_uohm_cm, current_density_a_cm2, width, height, length, chip_power];
    if inputs.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::invalid("wire_budget", "all inputs must be finite and > 0"));
    }
    let area_m2 = width * height * 1e-18;
    let current = current_density_a_cm2 * 1e4 * area_m2;
    let resistance = resistivity_uohm_cm * 1e-8 * length * 1e-9 / area_m2;
    let per_wire_power = current * current * resistance;
    Ok(WireBudget {
        current,
        resistance,
        per_wire_power,
        max_wires: (chip_power / per_wire_power).floor(),
    })
}
