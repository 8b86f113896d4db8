//! Numerical models for common-gate FinFET spin qubits.
//!
//! The crate covers device-parameter estimates, resonant-level conductance and
//! spin readout, RKKY coupling against the Kondo scale, noise-limited
//! measurement fidelity, local-current-line crosstalk and small-scale
//! Heisenberg annealing. All energies are in eV and lengths in nm unless a
//! name says otherwise.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annealer;
pub mod conductance;
pub mod constants;
pub mod crosstalk;
pub mod device;
pub mod error;
pub mod noise;
pub mod oracle;
pub mod rkky;
pub mod special;

pub use constants::ConstantsTable;
pub use error::{Error, Result};

/// Spatial dimensionality of the conduction channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimensionality {
    One,
    Two,
}

impl Dimensionality {
    pub fn from_int(d: u32) -> Result<Self> {
        match d {
            1 => Ok(Dimensionality::One),
            2 => Ok(Dimensionality::Two),
            _ => Err(Error::invalid("dimensionality", format!("must be 1 or 2, got {d}"))),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Dimensionality::One => 1,
            Dimensionality::Two => 2,
        }
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/device.md")]
    mod device {}
    #[doc = include_str!("../../../book/src/conductance.md")]
    mod conductance {}
    #[doc = include_str!("../../../book/src/rkky.md")]
    mod rkky {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/crosstalk.md")]
    mod crosstalk {}
    #[doc = include_str!("../../../book/src/annealer.md")]
    mod annealer {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
