//! Exact simulation of a small quantum annealer with Heisenberg couplings,
//!
//! H(t) = Σ_{i<j} J_ij (σ_i·σ_j)/4 + Σ_i [Bz_i σ_i^z + Δ_i(t) σ_i^x],
//!
//! on the full 2^N state space. Basis state bit i = 0 is spin i up
//! (σ^z = +1). The Hamiltonian is real in this basis, so it is applied
//! matrix-free to complex state vectors and built densely only for
//! diagonalisation.

use crate::constants::ConstantsTable;
use crate::device::{lcl_field, DeviceGeometry};
use crate::error::{Error, Result};
use crate::rkky::{j_rkky, CouplingInput};
use log::warn;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Largest network simulated.
pub const MAX_SPINS: usize = 12;
/// Largest accepted ‖H‖·dt/ħ per step.
pub const MAX_PHASE_PER_STEP: f64 = 0.1;

type C = Complex64;

/// Piecewise-linear transverse drive Δ(t), held constant outside its knots.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule {
    knots: Vec<(f64, f64)>,
}

impl Schedule {
    /// Knots (t in s, Δ in eV) with strictly increasing times.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.iter().any(|(t, d)| !t.is_finite() || !d.is_finite()) {
            return Err(Error::invalid("Schedule", "knots must be finite"));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid("Schedule", "knot times must increase strictly"));
        }
        Ok(Schedule { knots })
    }

    /// Linear ramp from `delta0` at t = 0 to zero at `total_time`.
    pub fn linear_ramp(delta0: f64, total_time: f64) -> Result<Self> {
        if total_time <= 0.0 {
            return Schedule::new(vec![(0.0, 0.0)]);
        }
        Schedule::new(vec![(0.0, delta0), (total_time, 0.0)])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.knots.as_slice() {
            [] => 0.0,
            [(_, d)] => *d,
            k => {
                if t <= k[0].0 {
                    return k[0].1;
                }
                let last = k[k.len() - 1];
                if t >= last.0 {
                    return last.1;
                }
                let i = k.partition_point(|&(tk, _)| tk <= t);
                let ((t0, d0), (t1, d1)) = (k[i - 1], k[i]);
                d0 + (d1 - d0) * (t - t0) / (t1 - t0)
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.knots.iter().map(|(_, d)| d.abs()).fold(0.0, f64::max)
    }

    pub fn end_time(&self) -> f64 {
        self.knots.last().map_or(0.0, |k| k.0)
    }
}

/// Problem instance plus drive.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinNetwork {
    pub n: usize,
    /// Symmetric couplings J_ij in eV, zero diagonal.
    pub j: DMatrix<f64>,
    /// Local fields g·μ_B·B_i in eV.
    pub bz: Vec<f64>,
    pub schedule: Schedule,
    /// Per-qubit multipliers of the global Δ(t).
    pub delta_weights: Vec<f64>,
    /// Keep only the σ^zσ^z part of each coupling.
    pub ising: bool,
    /// Annealing time, s.
    pub total_time: f64,
    /// Requested step, s. The run uses total_time/⌈total_time/dt⌉.
    pub dt: f64,
}

impl SpinNetwork {
    pub fn new(n: usize) -> Self {
        SpinNetwork {
            n,
            j: DMatrix::zeros(n, n),
            bz: vec![0.0; n],
            schedule: Schedule::default(),
            delta_weights: vec![1.0; n],
            ising: false,
            total_time: 0.0,
            dt: 0.0,
        }
    }

    pub fn set_coupling(&mut self, i: usize, k: usize, value: f64) {
        self.j[(i, k)] = value;
        self.j[(k, i)] = value;
    }

    pub fn dimension(&self) -> usize {
        1 << self.n
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_SPINS {
            return Err(Error::invalid("SpinNetwork", format!("N must be in 1..={MAX_SPINS}, got {}", self.n)));
        }
        if self.j.shape() != (self.n, self.n) || self.bz.len() != self.n || self.delta_weights.len() != self.n {
            return Err(Error::invalid("SpinNetwork", "J, Bz and Δ weights must match N"));
        }
        for i in 0..self.n {
            if self.j[(i, i)] != 0.0 {
                return Err(Error::invalid("SpinNetwork", format!("J has nonzero diagonal at {i}")));
            }
            for k in 0..self.n {
                if self.j[(i, k)] != self.j[(k, i)] || !self.j[(i, k)].is_finite() {
                    return Err(Error::invalid("SpinNetwork", format!("J not symmetric and finite at ({i}, {k})")));
                }
            }
        }
        if self.bz.iter().chain(&self.delta_weights).any(|v| !v.is_finite()) {
            return Err(Error::invalid("SpinNetwork", "fields must be finite"));
        }
        Ok(())
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |k| (i, k, self.j[(i, k)]))).filter(|p| p.2 != 0.0)
    }

    fn deltas(&self, t: f64) -> Vec<f64> {
        let d = self.schedule.value(t);
        self.delta_weights.iter().map(|w| w * d).collect()
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.dimension())
            .map(|b| {
                let s = |i: usize| if b >> i & 1 == 0 { 1.0 } else { -1.0 };
                let fields: f64 = (0..self.n).map(|i| self.bz[i] * s(i)).sum();
                let zz: f64 = self.pairs().map(|(i, k, j)| 0.25 * j * s(i) * s(k)).sum();
                fields + zz
            })
            .collect()
    }

    /// Upper bound on ‖H(t)‖ over the run, eV.
    pub fn energy_scale(&self) -> f64 {
        let fields: f64 = self.bz.iter().map(|b| b.abs()).sum();
        let couplings: f64 = self.pairs().map(|(_, _, j)| 0.75 * j.abs()).sum();
        let drive: f64 = self.delta_weights.iter().map(|w| w.abs()).sum::<f64>() * self.schedule.max_abs();
        fields + couplings + drive
    }
}

/// Matrix-free H(t) for repeated application.
struct Operator {
    diag: Vec<f64>,
    pairs: Vec<(usize, usize, f64)>,
}

impl Operator {
    fn new(net: &SpinNetwork) -> Self {
        let pairs = if net.ising { Vec::new() } else { net.pairs().collect() };
        Operator { diag: net.diagonal(), pairs }
    }

    fn apply(&self, deltas: &[f64], x: &[C], y: &mut [C]) {
        for (b, out) in y.iter_mut().enumerate() {
            let mut acc = x[b] * self.diag[b];
            // σ⁺σ⁻ + σ⁻σ⁺ swaps antiparallel pairs with amplitude J/2.
            for &(i, k, j) in &self.pairs {
                if (b >> i & 1) != (b >> k & 1) {
                    acc += x[b ^ (1 << i) ^ (1 << k)] * (0.5 * j);
                }
            }
            for (i, &d) in deltas.iter().enumerate() {
                if d != 0.0 {
                    acc += x[b ^ (1 << i)] * d;
                }
            }
            *out = acc;
        }
    }
}

/// Dense H(t), real symmetric.
pub fn build_hamiltonian(net: &SpinNetwork, t: f64) -> Result<DMatrix<f64>> {
    net.validate()?;
    let op = Operator::new(net);
    let dim = net.dimension();
    let deltas = net.deltas(t);
    let mut h = DMatrix::zeros(dim, dim);
    let mut e = vec![C::new(0.0, 0.0); dim];
    let mut col = vec![C::new(0.0, 0.0); dim];
    for b in 0..dim {
        e[b] = C::new(1.0, 0.0);
        op.apply(&deltas, &e, &mut col);
        for (r, v) in col.iter().enumerate() {
            h[(r, b)] = v.re;
        }
        e[b] = C::new(0.0, 0.0);
    }
    Ok(h)
}

/// Lowest eigenvalue and an orthonormal basis of its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub basis: Vec<DVector<f64>>,
}

impl GroundState {
    pub fn degeneracy(&self) -> usize {
        self.basis.len()
    }

    /// Σ_k |⟨g_k|ψ⟩|².
    pub fn overlap(&self, psi: &[C]) -> f64 {
        self.basis
            .iter()
            .map(|g| g.iter().zip(psi).map(|(a, b)| b * *a).sum::<C>().norm_sqr())
            .sum()
    }
}

/// Ground space of H(t). Levels within 1e-9 of the spectral width count as
/// degenerate.
pub fn ground_state(net: &SpinNetwork, t: f64) -> Result<GroundState> {
    let h = build_hamiltonian(net, t)?;
    let eig = SymmetricEigen::new(h);
    let values = eig.eigenvalues;
    let min = values.min();
    let width = (values.max() - min).abs().max(f64::MIN_POSITIVE);
    let tol = 1e-9 * width;
    let basis = (0..values.len())
        .filter(|&k| values[k] - min <= tol)
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect();
    Ok(GroundState { energy: min, basis })
}

/// exp(−iτH)v by Lanczos with full reorthogonalisation.
fn expm_krylov(op: &Operator, deltas: &[f64], v: &[C], tau: f64) -> Vec<C> {
    let dim = v.len();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return v.to_vec();
    }
    let max_m = dim.min(40);
    let mut basis: Vec<Vec<C>> = vec![v.iter().map(|c| c / norm).collect()];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![C::new(0.0, 0.0); dim];
    loop {
        let j = basis.len() - 1;
        op.apply(deltas, &basis[j], &mut w);
        let a = basis[j].iter().zip(&w).map(|(q, x)| q.conj() * x).sum::<C>().re;
        alpha.push(a);
        // Two Gram–Schmidt passes keep the basis orthonormal to rounding.
        for _ in 0..2 {
            for q in &basis {
                let proj: C = q.iter().zip(&w).map(|(qi, x)| qi.conj() * x).sum();
                for (x, qi) in w.iter_mut().zip(q) {
                    *x -= proj * qi;
                }
            }
        }
        let b = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let m = alpha.len();
        let small = small_exponential(&alpha, &beta, tau);
        let converged = b * small[m - 1].norm() < 1e-16 || b < 1e-14 * (1.0 + a.abs());
        if converged || m == max_m {
            let mut out = vec![C::new(0.0, 0.0); dim];
            for (q, &c) in basis.iter().zip(&small) {
                for (o, qi) in out.iter_mut().zip(q) {
                    *o += c * qi * norm;
                }
            }
            return out;
        }
        beta.push(b);
        basis.push(w.iter().map(|c| c / b).collect());
    }
}

/// exp(−iτT)e₁ for the tridiagonal Lanczos matrix T.
fn small_exponential(alpha: &[f64], beta: &[f64], tau: f64) -> Vec<C> {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    (0..m)
        .map(|r| {
            (0..m)
                .map(|k| {
                    let u = &eig.eigenvectors;
                    C::from_polar(u[(r, k)] * u[(0, k)], -tau * eig.eigenvalues[k])
                })
                .sum()
        })
        .collect()
}

/// One sample of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Time, s.
    pub t: f64,
    /// ⟨H(t)⟩, eV.
    pub energy: f64,
    /// Weight in the Δ = 0 ground space.
    pub fidelity: f64,
}

/// Outcome of an annealing run.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub final_state: Vec<C>,
    /// Weight of the final state in the Δ = 0 ground space.
    pub fidelity: f64,
    /// Samples at t = 0 and about every 1/1000 of the run.
    pub trace: Vec<TracePoint>,
    /// |‖ψ‖ − 1| at the end of the run.
    pub norm_drift: f64,
    pub steps: usize,
}

fn expectation(op: &Operator, deltas: &[f64], psi: &[C]) -> f64 {
    let mut hpsi = vec![C::new(0.0, 0.0); psi.len()];
    op.apply(deltas, psi, &mut hpsi);
    psi.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum()
}

fn step_count(c: &ConstantsTable, net: &SpinNetwork) -> Result<usize> {
    if !(net.total_time >= 0.0) || !net.total_time.is_finite() {
        return Err(Error::invalid("evolve", "total_time must be finite and ≥ 0"));
    }
    if net.total_time == 0.0 {
        return Ok(0);
    }
    if !(net.dt > 0.0) {
        return Err(Error::invalid("evolve", "dt must be > 0"));
    }
    let phase = net.energy_scale() * net.dt / c.hbar;
    if phase > MAX_PHASE_PER_STEP {
        let limit = MAX_PHASE_PER_STEP * c.hbar / net.energy_scale();
        return Err(Error::invalid("evolve", format!("dt too large: ‖H‖·dt/ħ = {phase:.3} > {MAX_PHASE_PER_STEP}; use dt ≤ {limit:.3e} s")));
    }
    Ok((net.total_time / net.dt).ceil() as usize)
}

/// Evolves `psi0` from t = 0 to total_time with midpoint exponential steps
/// (second-order Magnus).
pub fn evolve_state(c: &ConstantsTable, net: &SpinNetwork, psi0: &[C]) -> Result<Evolution> {
    net.validate()?;
    if psi0.len() != net.dimension() {
        return Err(Error::invalid("evolve", "initial state has the wrong dimension"));
    }
    let steps = step_count(c, net)?;
    let op = Operator::new(net);
    let h = if steps == 0 { 0.0 } else { net.total_time / steps as f64 };
    let stride = (steps / 1000).max(1);
    let problem = SpinNetwork { schedule: Schedule::default(), ..net.clone() };
    let ground = ground_state(&problem, 0.0)?;
    let sample = |t: f64, psi: &[C]| TracePoint { t, energy: expectation(&op, &net.deltas(t), psi), fidelity: ground.overlap(psi) };
    let mut psi = psi0.to_vec();
    let mut trace = vec![sample(0.0, &psi)];
    for s in 0..steps {
        let mid = (s as f64 + 0.5) * h;
        psi = expm_krylov(&op, &net.deltas(mid), &psi, h / c.hbar);
        if (s + 1) % stride == 0 || s + 1 == steps {
            trace.push(sample((s + 1) as f64 * h, &psi));
        }
    }
    let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    Ok(Evolution { fidelity: ground.overlap(&psi), final_state: psi, trace, norm_drift: (norm - 1.0).abs(), steps })
}

/// Anneals from the ground state of H(0).
pub fn evolve(c: &ConstantsTable, net: &SpinNetwork) -> Result<Evolution> {
    let start = ground_state(net, 0.0)?;
    if start.degeneracy() > 1 {
        warn!("initial Hamiltonian has a {}-fold ground space; starting from one basis vector", start.degeneracy());
    }
    let psi0: Vec<C> = start.basis[0].iter().map(|&x| C::new(x, 0.0)).collect();
    evolve_state(c, net, &psi0)
}

/// ‖ψ_dt − ψ_{dt/2}‖ for the same run, a check on the step size.
pub fn step_halving_error(c: &ConstantsTable, net: &SpinNetwork) -> Result<f64> {
    let coarse = evolve(c, net)?;
    let fine = evolve(c, &SpinNetwork { dt: net.dt / 2.0, ..net.clone() })?;
    Ok(coarse.final_state.iter().zip(&fine.final_state).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
}

/// Network of qubits at `positions` (nm) along one channel. Couplings come
/// from the RKKY model with W = |x_i − x_k|; fields from the current in
/// each qubit's line. Pairs at a node of the range function get J = 0.
pub fn couplings_from_device(
    c: &ConstantsTable,
    base: &CouplingInput,
    positions: &[f64],
    geom: &DeviceGeometry,
    line_currents: &[f64],
) -> Result<SpinNetwork> {
    let n = positions.len();
    if line_currents.len() != n {
        return Err(Error::invalid("couplings_from_device", "one line current per qubit"));
    }
    let mut net = SpinNetwork::new(n);
    for i in 0..n {
        for k in (i + 1)..n {
            let w = (positions[i] - positions[k]).abs();
            let input = CouplingInput { w, ..*base };
            let j = j_rkky(c, &input)?;
            let scale = j_rkky(c, &CouplingInput { w: 1.0, ..input })?.abs().max(f64::MIN_POSITIVE);
            if j.abs() <= 1e-12 * scale {
                warn!("qubits {i} and {k} sit at a node of the range function; J set to 0");
                net.set_coupling(i, k, 0.0);
            } else {
                net.set_coupling(i, k, j);
            }
        }
        net.bz[i] = c.g_factor * c.mu_b * lcl_field(c, geom, line_currents[i]);
    }
    Ok(net)
}

/// Reads an instance from lines `i j J_eV`, `field i Bz_eV` and
/// `schedule t_s Delta_eV`. Blank lines and `#` comments are skipped. N is
/// one more than the largest index; total_time is the last schedule time.
pub fn parse_instance(text: &str) -> Result<SpinNetwork> {
    let mut couplings = Vec::new();
    let mut fields = Vec::new();
    let mut knots = Vec::new();
    let bad = |line: usize, why: &str| Error::invalid("parse_instance", format!("line {line}: {why}"));
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(no + 1, &format!("not a number: {s}")));
        let idx = |s: &str| s.parse::<usize>().map_err(|_| bad(no + 1, &format!("not an index: {s}")));
        match tok.as_slice() {
            ["field", i, b] => fields.push((idx(i)?, num(b)?)),
            ["schedule", t, d] => knots.push((num(t)?, num(d)?)),
            [i, k, j] => {
                let (i, k) = (idx(i)?, idx(k)?);
                if i == k {
                    return Err(bad(no + 1, "self-coupling"));
                }
                couplings.push((i, k, num(j)?));
            }
            _ => return Err(bad(no + 1, "expected `i j J`, `field i Bz` or `schedule t Delta`")),
        }
    }
    let n = couplings
        .iter()
        .flat_map(|&(i, k, _)| [i, k])
        .chain(fields.iter().map(|f| f.0))
        .max()
        .map_or(0, |m| m + 1);
    if n == 0 || n > MAX_SPINS {
        return Err(Error::invalid("parse_instance", format!("instance must have 1..={MAX_SPINS} spins, found {n}")));
    }
    let mut net = SpinNetwork::new(n);
    for (i, k, j) in couplings {
        net.set_coupling(i, k, j);
    }
    for (i, b) in fields {
        net.bz[i] = b;
    }
    net.schedule = Schedule::new(knots)?;
    net.total_time = net.schedule.end_time();
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pair(j: f64) -> SpinNetwork {
        let mut net = SpinNetwork::new(2);
        net.set_coupling(0, 1, j);
        net
    }

    #[test]
    fn singlet_triplet() {
        let j = 1e-5;
        let h = build_hamiltonian(&pair(j), 0.0).unwrap();
        let mut e: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        assert!((e[0] + 0.75 * j).abs() < 1e-12 * j);
        for v in &e[1..] {
            assert!((v - 0.25 * j).abs() < 1e-12 * j);
        }
        let g = ground_state(&pair(j), 0.0).unwrap();
        assert_eq!(g.degeneracy(), 1);
        let s = &g.basis[0];
        // Singlet (|↑↓⟩ − |↓↑⟩)/√2 up to a global sign.
        assert!(s[0].abs() < 1e-12 && s[3].abs() < 1e-12);
        assert_relative_eq!(s[1], -s[2], epsilon = 1e-12);
    }

    #[test]
    fn single_spin_in_field() {
        let mut net = SpinNetwork::new(1);
        net.bz[0] = 3e-5;
        let h = build_hamiltonian(&net, 0.0).unwrap();
        assert_eq!(h[(0, 0)], 3e-5);
        assert_eq!(h[(1, 1)], -3e-5);
        let g = ground_state(&net, 0.0).unwrap();
        assert_eq!(g.energy, -3e-5);
        assert_eq!(g.basis[0][1].abs(), 1.0);
    }

    #[test]
    fn ising_toggle_drops_flip_flop() {
        let mut net = pair(1e-5);
        net.ising = true;
        let h = build_hamiltonian(&net, 0.0).unwrap();
        assert_eq!(h[(1, 2)], 0.0);
        net.ising = false;
        assert_eq!(build_hamiltonian(&net, 0.0).unwrap()[(1, 2)], 0.5e-5);
    }

    #[test]
    fn rejects_bad_networks() {
        assert!(SpinNetwork::new(13).validate().is_err());
        let mut net = pair(1.0);
        net.j[(0, 1)] = 2.0;
        assert!(net.validate().is_err());
        let mut net = pair(1.0);
        net.j[(0, 0)] = 1.0;
        assert!(net.validate().is_err());
    }

    #[test]
    fn schedule_interpolates() {
        let s = Schedule::new(vec![(0.0, 2.0), (1.0, 0.0), (3.0, 1.0)]).unwrap();
        assert_eq!(s.value(-1.0), 2.0);
        assert_eq!(s.value(0.5), 1.0);
        assert_eq!(s.value(2.0), 0.5);
        assert_eq!(s.value(9.0), 1.0);
        assert!(Schedule::new(vec![(1.0, 0.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn dt_guard() {
        let c = ConstantsTable::default();
        let mut net = pair(1e-5);
        net.total_time = 1e-9;
        net.dt = 1e-9;
        let err = evolve(&c, &net).unwrap_err();
        assert!(err.to_string().contains("dt too large"));
    }

    #[test]
    fn precession_under_constant_drive() {
        // H = Δσx on one spin: |↑⟩ → cos(Δt/ħ)|↑⟩ − i sin(Δt/ħ)|↓⟩.
        let c = ConstantsTable::default();
        let mut net = SpinNetwork::new(1);
        let d = 1e-5;
        net.schedule = Schedule::new(vec![(0.0, d)]).unwrap();
        net.total_time = 2e-10;
        net.dt = 1e-12;
        let psi0 = vec![C::new(1.0, 0.0), C::new(0.0, 0.0)];
        let ev = evolve_state(&c, &net, &psi0).unwrap();
        let phase = d * net.total_time / c.hbar;
        assert!((ev.final_state[0] - C::new(phase.cos(), 0.0)).norm() < 1e-10);
        assert!((ev.final_state[1] - C::new(0.0, -phase.sin())).norm() < 1e-10);
        assert!(ev.norm_drift < 1e-12);
    }

    #[test]
    fn parses_instance_text() {
        let text = "# chain\n0 1 1e-5\n1 2 2e-5\nfield 2 -1e-6\nschedule 0 5e-5\nschedule 1e-9 0\n";
        let net = parse_instance(text).unwrap();
        assert_eq!(net.n, 3);
        assert_eq!(net.j[(2, 1)], 2e-5);
        assert_eq!(net.bz[2], -1e-6);
        assert_eq!(net.total_time, 1e-9);
        assert!(parse_instance("0 0 1").is_err());
        assert!(parse_instance("0 1 x").is_err());
        assert!(parse_instance("bogus").is_err());
    }
}
