//! Physical constants in the {eV, nm, s, T, K} working unit system, plus the
//! handful of SI values the noise and magnetostatics formulas need.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Constants table. Construct once with [`ConstantsTable::default`] and share
/// freely; it is never mutated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsTable {
    /// Reduced Planck constant, eV·s.
    pub hbar: f64,
    /// Bohr magneton, eV/T.
    pub mu_b: f64,
    /// Boltzmann constant, eV/K.
    pub k_b: f64,
    /// Elementary charge, C.
    pub e_charge: f64,
    /// von Klitzing constant h/e², Ω.
    pub r_k: f64,
    /// Bohr radius, nm.
    pub a0: f64,
    /// Rydberg energy, eV.
    pub ry: f64,
    /// Vacuum permeability, T·m/A.
    pub mu0: f64,
    /// Vacuum permittivity, F/m.
    pub eps0: f64,
    /// Electron g-factor used throughout.
    pub g_factor: f64,
}

impl Default for ConstantsTable {
    fn default() -> Self {
        // CODATA 2018; h and e are exact in the revised SI.
        let h = 6.626_070_15e-34;
        let e = 1.602_176_634e-19;
        ConstantsTable {
            hbar: 6.582_119_569e-16,
            mu_b: 5.788_381_806_0e-5,
            k_b: 8.617_333_262e-5,
            e_charge: e,
            r_k: h / (e * e),
            a0: 0.052_917_721_090_3,
            ry: 13.605_693_122_994,
            mu0: 1.256_637_062_12e-6,
            eps0: 8.854_187_812_8e-12,
            g_factor: 2.0,
        }
    }
}

impl ConstantsTable {
    /// ħ²/(2m₀) = a₀²·Ry in eV·nm².
    pub fn hbar2_over_2m0(&self) -> f64 {
        self.a0 * self.a0 * self.ry
    }

    /// Boltzmann constant in J/K.
    pub fn k_b_si(&self) -> f64 {
        self.k_b * self.e_charge
    }

    /// Conductance quantum 2e²/h in siemens.
    pub fn conductance_quantum(&self) -> f64 {
        2.0 / self.r_k
    }

    /// Name/value pairs in a fixed order, used by the `params --constants` dump.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("hbar_eV_s", self.hbar),
            ("mu_B_eV_per_T", self.mu_b),
            ("k_B_eV_per_K", self.k_b),
            ("e_charge_C", self.e_charge),
            ("R_K_ohm", self.r_k),
            ("a0_nm", self.a0),
            ("Ry_eV", self.ry),
            ("mu0_T_m_per_A", self.mu0),
            ("eps0_F_per_m", self.eps0),
            ("g_factor", self.g_factor),
        ]
    }

    /// Zeeman splitting g·μ_B·B in eV.
    pub fn zeeman_splitting(&self, b_tesla: f64, g: f64) -> Result<f64> {
        if !(b_tesla >= 0.0) {
            return Err(Error::domain("zeeman_splitting", format!("field must be >= 0, got {b_tesla}")));
        }
        Ok(g * self.mu_b * b_tesla)
    }

    /// E/k_B in kelvin.
    pub fn energy_to_temperature(&self, energy_ev: f64) -> Result<f64> {
        if !(energy_ev >= 0.0) {
            return Err(Error::domain(
                "energy_to_temperature",
                format!("energy must be >= 0, got {energy_ev}"),
            ));
        }
        Ok(energy_ev / self.k_b)
    }

    /// Cyclic Larmor frequency g·μ_B·B/(2πħ) in Hz.
    pub fn larmor_frequency(&self, b_tesla: f64, g: f64) -> Result<f64> {
        Ok(self.larmor_angular(b_tesla, g)? / (2.0 * PI))
    }

    /// Angular Larmor frequency g·μ_B·B/ħ in rad/s.
    pub fn larmor_angular(&self, b_tesla: f64, g: f64) -> Result<f64> {
        if !(b_tesla >= 0.0) {
            return Err(Error::domain("larmor_frequency", format!("field must be >= 0, got {b_tesla}")));
        }
        Ok(g * self.mu_b * b_tesla / self.hbar)
    }

    /// ħω in eV for an angular frequency in rad/s.
    pub fn angular_to_energy(&self, omega: f64) -> f64 {
        self.hbar * omega
    }
}
