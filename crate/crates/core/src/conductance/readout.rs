//! Spin readout through the fin channels.
//!
//! N dots sit between N+1 channels. Channel `i` sees dots `i−1` and `i`;
//! the two outer channels see one dot each. Interior channels use the
//! single-channel closed form, edge channels the one-dot reduction.
//! Measurement alternates between the even and the odd channels so that a
//! measured channel never has an active neighbour.

use super::{edge_channel_conductance, middle_channel_conductance, ChannelDotSystem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn symbol(self) -> char {
        match self {
            Spin::Up => 'u',
            Spin::Down => 'd',
        }
    }
}

/// Spin states of a chain of dots and the Zeeman-split singlet levels.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinConfig {
    pub spins: Vec<Spin>,
    /// Level of an up-spin dot, eV.
    pub e_s_up: f64,
    /// Zeeman splitting; a down-spin dot sits at `e_s_up − delta_z`.
    pub delta_z: f64,
}

impl SpinConfig {
    pub fn level(&self, spin: Spin) -> f64 {
        match spin {
            Spin::Up => self.e_s_up,
            Spin::Down => self.e_s_up - self.delta_z,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.spins.is_empty() {
            return Err(Error::invalid("readout_signature", "need at least one dot"));
        }
        if !(self.delta_z >= 0.0) {
            return Err(Error::invalid("readout_signature", format!("delta_z must be >= 0, got {}", self.delta_z)));
        }
        Ok(())
    }
}

/// Which dots a channel sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    /// One dot, index given.
    Edge(usize),
    /// Left and right dot indices.
    Interior(usize, usize),
}

pub fn channel_kind(n_dots: usize, channel: usize) -> ChannelKind {
    if channel == 0 {
        ChannelKind::Edge(0)
    } else if channel == n_dots {
        ChannelKind::Edge(n_dots - 1)
    } else {
        ChannelKind::Interior(channel - 1, channel)
    }
}

fn channel_value(template: &ChannelDotSystem, e_up: f64, dz: f64, spins: &[Spin]) -> Result<f64> {
    let level = |s: Spin| if s == Spin::Up { e_up } else { e_up - dz };
    match spins {
        [s] => edge_channel_conductance(template, level(*s)),
        [l, r] => middle_channel_conductance(&template.with_levels(level(*l), level(*r))),
        _ => unreachable!(),
    }
}

/// Per-channel conductances, the equal-spin reference, and their difference.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutSignature {
    pub g: Vec<f64>,
    pub reference: Vec<f64>,
    pub difference: Vec<f64>,
}

/// Conductance of every channel for the given spins. The reference for an
/// interior channel puts both dots in the left dot's state; for an edge
/// channel it is the up-spin dot.
pub fn readout_signature(config: &SpinConfig, template: &ChannelDotSystem) -> Result<ReadoutSignature> {
    config.validate()?;
    let n = config.spins.len();
    let (mut g, mut reference) = (Vec::with_capacity(n + 1), Vec::with_capacity(n + 1));
    for c in 0..=n {
        let (measured, refs): (Vec<Spin>, Vec<Spin>) = match channel_kind(n, c) {
            ChannelKind::Edge(d) => (vec![config.spins[d]], vec![Spin::Up]),
            ChannelKind::Interior(l, r) => (vec![config.spins[l], config.spins[r]], vec![config.spins[l]; 2]),
        };
        g.push(channel_value(template, config.e_s_up, config.delta_z, &measured)?);
        reference.push(channel_value(template, config.e_s_up, config.delta_z, &refs)?);
    }
    let difference = g.iter().zip(&reference).map(|(a, b)| a - b).collect();
    Ok(ReadoutSignature { g, reference, difference })
}

/// Values read in the two switching patterns: `even[k]` is channel 2k with
/// the odd channels off, `odd[k]` is channel 2k+1 with the even channels off.
#[derive(Debug, Clone, PartialEq)]
pub struct InterleavedReadout {
    pub even: Vec<f64>,
    pub odd: Vec<f64>,
}

impl InterleavedReadout {
    pub fn from_channels(g: &[f64]) -> Self {
        InterleavedReadout {
            even: g.iter().step_by(2).copied().collect(),
            odd: g.iter().skip(1).step_by(2).copied().collect(),
        }
    }

    pub fn channel_count(&self) -> usize {
        self.even.len() + self.odd.len()
    }

    pub fn channel(&self, c: usize) -> f64 {
        if c % 2 == 0 {
            self.even[c / 2]
        } else {
            self.odd[c / 2]
        }
    }
}

/// Simulates both switching patterns for a spin configuration.
pub fn measure_interleaved(config: &SpinConfig, template: &ChannelDotSystem) -> Result<InterleavedReadout> {
    Ok(InterleavedReadout::from_channels(&readout_signature(config, template)?.g))
}

/// Expected conductance of every channel for every state of its dots.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    pub n_dots: usize,
    /// `entries[c]` lists (dot states, g) for channel c.
    pub entries: Vec<Vec<(Vec<Spin>, f64)>>,
}

impl ReferenceTable {
    pub fn build(n_dots: usize, e_s_up: f64, delta_z: f64, template: &ChannelDotSystem) -> Result<Self> {
        if n_dots == 0 {
            return Err(Error::invalid("ReferenceTable", "need at least one dot"));
        }
        let mut entries = Vec::with_capacity(n_dots + 1);
        for c in 0..=n_dots {
            let states: Vec<Vec<Spin>> = match channel_kind(n_dots, c) {
                ChannelKind::Edge(_) => Spin::BOTH.iter().map(|s| vec![*s]).collect(),
                ChannelKind::Interior(..) => {
                    Spin::BOTH.iter().flat_map(|l| Spin::BOTH.iter().map(move |r| vec![*l, *r])).collect()
                }
            };
            let mut row = Vec::with_capacity(states.len());
            for s in states {
                let g = channel_value(template, e_s_up, delta_z, &s)?;
                row.push((s, g));
            }
            entries.push(row);
        }
        Ok(ReferenceTable { n_dots, entries })
    }

    /// Half of the smallest separation between distinct reference values of
    /// a channel. Exactly degenerate states do not count as separated.
    pub fn default_tolerance(&self, channel: usize) -> f64 {
        let vals: Vec<f64> = self.entries[channel].iter().map(|e| e.1).collect();
        let scale = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let mut gap = f64::INFINITY;
        for (i, a) in vals.iter().enumerate() {
            for b in &vals[i + 1..] {
                let d = (a - b).abs();
                if d > 1e-12 * scale {
                    gap = gap.min(d);
                }
            }
        }
        if gap.is_finite() {
            0.5 * gap
        } else {
            1e-12 * scale
        }
    }
}

/// Recovers the spin of every dot from an interleaved readout.
///
/// Each channel is matched against its reference values within `tolerance`
/// (per channel default: [`ReferenceTable::default_tolerance`]). The chain is
/// then solved left to right; the result must be unique.
pub fn infer_spins(measured: &InterleavedReadout, table: &ReferenceTable, tolerance: Option<f64>) -> Result<Vec<Spin>> {
    let n = table.n_dots;
    if measured.channel_count() != n + 1 {
        return Err(Error::invalid(
            "infer_spins",
            format!("expected {} channels, got {}", n + 1, measured.channel_count()),
        ));
    }
    let candidates: Vec<Vec<&Vec<Spin>>> = (0..=n)
        .map(|c| {
            let tol = tolerance.unwrap_or_else(|| table.default_tolerance(c));
            let g = measured.channel(c);
            table.entries[c].iter().filter(|(_, r)| (g - r).abs() <= tol).map(|(s, _)| s).collect()
        })
        .collect();
    let empty: Vec<usize> = (0..=n).filter(|&c| candidates[c].is_empty()).collect();
    if !empty.is_empty() {
        return Err(Error::InconsistentReadout { channels: empty });
    }

    // count[k][s]: assignments of dots 0..=k that satisfy channels 0..=k
    // and end with dot k in state s; prev[k][s] remembers one predecessor.
    let idx = |s: Spin| if s == Spin::Up { 0 } else { 1 };
    let mut count = vec![[0u64; 2]; n];
    let mut prev = vec![[0usize; 2]; n];
    let allows = |c: usize, states: &[Spin]| candidates[c].iter().any(|s| s.as_slice() == states);
    for s in Spin::BOTH {
        if allows(0, &[s]) {
            count[0][idx(s)] = 1;
        }
    }
    for k in 1..n {
        for s in Spin::BOTH {
            for p in Spin::BOTH {
                if count[k - 1][idx(p)] > 0 && allows(k, &[p, s]) {
                    count[k][idx(s)] = count[k][idx(s)].saturating_add(count[k - 1][idx(p)]);
                    prev[k][idx(s)] = idx(p);
                }
            }
        }
        if count[k] == [0, 0] {
            return Err(Error::InconsistentReadout { channels: vec![k - 1, k] });
        }
    }
    let mut total = 0u64;
    let mut last = 0;
    for s in Spin::BOTH {
        if count[n - 1][idx(s)] > 0 && allows(n, &[s]) {
            total = total.saturating_add(count[n - 1][idx(s)]);
            last = idx(s);
        }
    }
    if total == 0 {
        return Err(Error::InconsistentReadout { channels: vec![n - 1, n] });
    }
    if total > 1 {
        let ambiguous = (0..=n).filter(|&c| candidates[c].len() > 1).collect();
        return Err(Error::InconsistentReadout { channels: ambiguous });
    }
    let mut out = vec![Spin::Up; n];
    let mut cur = last;
    for k in (0..n).rev() {
        out[k] = Spin::BOTH[cur];
        if k > 0 {
            cur = prev[k][cur];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn template() -> ChannelDotSystem {
        ChannelDotSystem::symmetric(1.0, 0.0, 0.0, 0.01)
    }

    fn config(spins: Vec<Spin>) -> SpinConfig {
        SpinConfig { spins, e_s_up: 0.9, delta_z: 0.02 }
    }

    #[test]
    fn equal_spins_give_zero_difference() {
        let sig = readout_signature(&config(vec![Spin::Up, Spin::Up, Spin::Up]), &template()).unwrap();
        assert!(sig.difference.iter().all(|d| *d == 0.0));
        let sig = readout_signature(&config(vec![Spin::Down, Spin::Down]), &template()).unwrap();
        // Interior channel compares with itself; edges compare with up.
        assert_eq!(sig.difference[1], 0.0);
        assert!(sig.difference[0] != 0.0);
    }

    #[test]
    fn no_dots_rejected() {
        assert!(readout_signature(&config(vec![]), &template()).is_err());
        assert!(ReferenceTable::build(0, 0.9, 0.02, &template()).is_err());
    }

    #[test]
    fn difference_vanishes_with_splitting() {
        let t = template();
        let mut prev = f64::INFINITY;
        for dz in [1e-2, 1e-3, 1e-4, 1e-6] {
            let c = SpinConfig { spins: vec![Spin::Up, Spin::Down], e_s_up: 0.9, delta_z: dz };
            let sig = readout_signature(&c, &t).unwrap();
            let d = sig.difference[1].abs() / sig.reference[1];
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn interleaving_round_trip() {
        let r = InterleavedReadout::from_channels(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(r.even, vec![1.0, 3.0, 5.0]);
        assert_eq!(r.odd, vec![2.0, 4.0]);
        assert_eq!((0..5).map(|c| r.channel(c)).collect::<Vec<_>>(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn conflicting_channels_reported() {
        let t = template();
        let table = ReferenceTable::build(2, 0.9, 0.02, &t).unwrap();
        let mut m = measure_interleaved(&config(vec![Spin::Up, Spin::Down]), &t).unwrap();
        m.odd[0] = -1.0;
        match infer_spins(&m, &table, None) {
            Err(Error::InconsistentReadout { channels }) => assert_eq!(channels, vec![1]),
            other => panic!("{other:?}"),
        }
    }
}
