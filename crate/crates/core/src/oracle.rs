//! Brute-force check of the analytic transport coefficients.
//!
//! Three channels of `N_k` modes each on a flat band `[−D, D]` couple to two
//! dots through constant hoppings V_1, V_3, V_5 (channel 3 couples to both
//! dots). The real-symmetric Hamiltonian is diagonalised densely, and the dot
//! block of its Green's function is compared with the continuum result
//!
//! ```text
//! Σ_i(E) = |V_i|²ρ·ln((E + D)/(D − E)) − iΓ_i,   Γ_i = π|V_i|²ρ,
//! ```
//!
//! where ρ = N_k/(2D). The formulas' Γ is this half width; the full width at
//! half maximum of a dot level is 2Γ = 2π|V|²ρ.

use crate::conductance::{ChannelDotSystem, SelfEnergyTable};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest matrix dimension accepted.
pub const MAX_DIMENSION: usize = 5000;
/// Smoothing width of the numeric Green's function in units of the mode
/// spacing. Large enough to wash out the discrete-mode ripple, small enough
/// that the remaining bias shrinks like 1/N_k.
pub const SMOOTHING_IN_SPACINGS: f64 = 1.0;

const DOT_L: usize = 0;
const DOT_R: usize = 1;

/// Tunnelling Hamiltonian on a uniform grid of channel energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizedHamiltonian {
    /// Half bandwidth, eV.
    pub d: f64,
    /// Modes per channel.
    pub n_k: usize,
    /// Left and right dot levels, eV.
    pub e2: f64,
    pub e4: f64,
    /// Hoppings V_1, V_3, V_5, eV.
    pub v: [f64; 3],
}

impl DiscretizedHamiltonian {
    /// Hoppings chosen so the half widths π|V_i|²ρ equal `gamma`, which keeps
    /// the continuum physics fixed as `n_k` grows.
    pub fn from_broadenings(d: f64, n_k: usize, e2: f64, e4: f64, gamma: [f64; 3]) -> Self {
        let rho = n_k as f64 / (2.0 * d);
        let v = gamma.map(|g| (g / (PI * rho)).sqrt());
        DiscretizedHamiltonian { d, n_k, e2, e4, v }
    }

    pub fn dimension(&self) -> usize {
        3 * self.n_k + 2
    }

    /// Density of modes per channel, 1/eV.
    pub fn rho(&self) -> f64 {
        self.n_k as f64 / (2.0 * self.d)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.d / self.n_k as f64
    }

    /// Half widths π|V_i|²ρ.
    pub fn gamma(&self) -> [f64; 3] {
        self.v.map(|v| PI * v * v * self.rho())
    }

    /// Mode energies: midpoints of `n_k` equal cells of [−D, D].
    pub fn grid(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n_k).map(|k| -self.d + (k as f64 + 0.5) * h).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.n_k < 10 {
            return Err(Error::invalid("DiscretizedHamiltonian", format!("n_k must be >= 10, got {}", self.n_k)));
        }
        if self.dimension() > MAX_DIMENSION {
            return Err(Error::invalid(
                "DiscretizedHamiltonian",
                format!("dimension {} exceeds the cap of {MAX_DIMENSION}", self.dimension()),
            ));
        }
        if !(self.d > 0.0) || ![self.e2, self.e4, self.v[0], self.v[1], self.v[2]].iter().all(|x| x.is_finite()) {
            return Err(Error::invalid("DiscretizedHamiltonian", "D must be > 0 and all parameters finite"));
        }
        Ok(())
    }

    /// Dense matrix. Rows 0 and 1 are the dots, then channels 1, 3 and 5 in
    /// blocks of `n_k`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.n_k;
        let mut h = DMatrix::zeros(self.dimension(), self.dimension());
        h[(DOT_L, DOT_L)] = self.e2;
        h[(DOT_R, DOT_R)] = self.e4;
        for (k, e) in self.grid().into_iter().enumerate() {
            for ch in 0..3 {
                let row = 2 + ch * n + k;
                h[(row, row)] = e;
            }
            let (c1, c3, c5) = (2 + k, 2 + n + k, 2 + 2 * n + k);
            for (c, dot, v) in [(c1, DOT_L, self.v[0]), (c3, DOT_L, self.v[1]), (c3, DOT_R, self.v[1]), (c5, DOT_R, self.v[2])] {
                h[(c, dot)] = v;
                h[(dot, c)] = v;
            }
        }
        h
    }

    /// Continuum self-energy of channel `ch` (0, 1, 2 for channels 1, 3, 5).
    pub fn continuum_self_energy(&self, ch: usize, e: f64) -> Complex64 {
        let v2 = self.v[ch] * self.v[ch];
        Complex64::new(v2 * self.rho() * ((e + self.d) / (self.d - e)).ln(), -PI * v2 * self.rho())
    }

    /// Continuum dot-block Green's function [E − H_dd − Σ(E)]⁻¹.
    pub fn continuum_green(&self, e: f64) -> Matrix2<Complex64> {
        let [s1, s3, s5] = [0, 1, 2].map(|c| self.continuum_self_energy(c, e));
        let ez = Complex64::new(e, 0.0);
        let inv = Matrix2::new(ez - self.e2 - s1 - s3, -s3, -s3, ez - self.e4 - s5 - s3);
        inverse2(&inv)
    }

    /// Dot levels, self-energies and broadenings at energy `e`, in the form
    /// the conductance formulas take.
    pub fn channel_dot_system(&self, e: f64) -> ChannelDotSystem {
        let s = [0, 1, 2].map(|c| self.continuum_self_energy(c, e).re);
        let mut sys = ChannelDotSystem::symmetric(e, self.e2, self.e4, 1.0);
        sys.s = SelfEnergyTable::fermi_consistent(s[0], s[1], s[2]);
        sys.gamma = self.gamma();
        sys.energy_scale = 1.0;
        sys
    }
}

fn inverse2(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det
}

/// Eigenvalues in ascending order and the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl Eigenpairs {
    /// Numeric dot-block Green's function Σ_n u_n u_nᵀ/(z − E_n).
    pub fn dot_green(&self, z: Complex64) -> Matrix2<Complex64> {
        let mut g = Matrix2::zeros();
        for (n, &en) in self.values.iter().enumerate() {
            let (a, b) = (self.vectors[(DOT_L, n)], self.vectors[(DOT_R, n)]);
            let w = (z - en).inv();
            g[(0, 0)] += w * a * a;
            g[(0, 1)] += w * a * b;
            g[(1, 1)] += w * b * b;
        }
        g[(1, 0)] = g[(0, 1)];
        g
    }
}

/// Full eigendecomposition, eigenvalues ascending.
pub fn diagonalize(h: &DiscretizedHamiltonian) -> Result<Eigenpairs> {
    h.validate()?;
    let eig = SymmetricEigen::new(h.matrix());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigenpairs { values, vectors })
}

/// Largest deviation among the dot completeness identities: both dot norms
/// summed over all eigenstates equal 1 and the cross sum vanishes.
pub fn completeness_check(eig: &Eigenpairs) -> f64 {
    let (mut nl, mut nr, mut cross) = (0.0, 0.0, 0.0);
    for n in 0..eig.values.len() {
        let (a, b) = (eig.vectors[(DOT_L, n)], eig.vectors[(DOT_R, n)]);
        nl += a * a;
        nr += b * b;
        cross += a * b;
    }
    (nl - 1.0).abs().max((nr - 1.0).abs()).max(cross.abs())
}

/// One analytic-versus-numeric comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientComparison {
    pub name: &'static str,
    /// max |numeric − analytic| over the window divided by max |analytic|.
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientReport {
    pub n_k: usize,
    pub completeness: f64,
    pub comparisons: Vec<CoefficientComparison>,
}

impl CoefficientReport {
    pub fn max_error(&self) -> f64 {
        self.comparisons.iter().map(|c| c.relative_error).fold(0.0, f64::max)
    }
}

fn sample_energies(window: f64) -> Vec<f64> {
    let m = 41;
    (0..m).map(|i| -window + 2.0 * window * i as f64 / (m - 1) as f64).collect()
}

/// Spectral matrix A = (G − G†)/(−2πi) of the numeric dot block at E + iη.
fn numeric_spectral(eig: &Eigenpairs, e: f64, eta: f64) -> Matrix2<f64> {
    let g = eig.dot_green(Complex64::new(e, eta));
    let gh = g.adjoint();
    (g - gh).map(|z| (z / Complex64::new(0.0, -2.0 * PI)).re)
}

fn compare(
    name: &'static str,
    energies: &[f64],
    numeric: impl Fn(f64) -> f64,
    analytic: impl Fn(f64) -> f64,
) -> CoefficientComparison {
    let (mut err, mut scale) = (0.0f64, 0.0f64);
    for &e in energies {
        let a = analytic(e);
        err = err.max((numeric(e) - a).abs());
        scale = scale.max(a.abs());
    }
    CoefficientComparison { name, relative_error: err / scale }
}

/// Analytic dot amplitudes of scattering states, read off the conductance
/// variables: (|x1|², |y3|²) for channels 1 and 5 alone and
/// (|x2|², |y2|², x2·y2*) for channel 3 alone. Each is multiplied by the
/// mode density ρ, which turns |V|² = Γ/(πρ) into Γ/π and makes the result
/// directly comparable with a dot spectral weight.
pub fn analytic_amplitudes(sys: &ChannelDotSystem) -> ([f64; 2], [f64; 3]) {
    let [e1, e2, _e3, _e4, e5, e6] = crate::conductance::resonance_terms(sys).e;
    let u = sys.energy_scale;
    let [g1, g3, g5] = sys.gamma.map(|g| g / u);
    let s33 = sys.s.get(3, 3) / u;
    let s31 = sys.s.get(3, 1) / u;
    let s35 = sys.s.get(3, 5) / u;
    let v2 = |g: f64| g / PI;
    // With channel 3 decoupled, s31 = s35 = 0 and the outer amplitudes are
    // plain Lorentzians in e1 and e6.
    let x1 = v2(g1) / ((e1 + s31).powi(2) + g1 * g1);
    let y3 = v2(g5) / ((e6 + s35).powi(2) + g5 * g5);
    let d3 = (e2 * e5 - s33 * s33).powi(2) + g3 * g3 * (e2 + e5 + 2.0 * s33).powi(2);
    // The left-dot amplitude is weighted by the right dot's detuning and vice
    // versa.
    let x2 = v2(g3) * (e5 + s33).powi(2) / d3;
    let y2 = v2(g3) * (e2 + s33).powi(2) / d3;
    let x2y2 = v2(g3) * (e2 + s33) * (e5 + s33) / d3;
    ([x1, y3], [x2, y2, x2y2])
}

/// Compares numeric dot spectral weights with the analytic coefficients on
/// `energy_window` around the band centre, for three coupling patterns built
/// from `h`: channels 1 and 5 only, channel 3 only, and all channels.
pub fn coefficient_check(h: &DiscretizedHamiltonian, energy_window: f64) -> Result<CoefficientReport> {
    if !(energy_window > 0.0 && energy_window < h.d) {
        return Err(Error::domain("coefficient_check", format!("window must lie inside the band (0, {}), got {energy_window}", h.d)));
    }
    let energies = sample_energies(energy_window);
    let eta = SMOOTHING_IN_SPACINGS * h.spacing();
    let mut comparisons = Vec::new();

    let outer = DiscretizedHamiltonian { v: [h.v[0], 0.0, h.v[2]], ..*h };
    let eig_outer = diagonalize(&outer)?;
    let amp = |hh: &DiscretizedHamiltonian, e: f64| analytic_amplitudes(&hh.channel_dot_system(e));
    comparisons.push(compare("abs_x1_sq", &energies, |e| numeric_spectral(&eig_outer, e, eta)[(0, 0)], |e| {
        amp(&outer, e).0[0]
    }));
    comparisons.push(compare("abs_y3_sq", &energies, |e| numeric_spectral(&eig_outer, e, eta)[(1, 1)], |e| {
        amp(&outer, e).0[1]
    }));

    let middle = DiscretizedHamiltonian { v: [0.0, h.v[1], 0.0], ..*h };
    let eig_middle = diagonalize(&middle)?;
    comparisons.push(compare("abs_x2_sq", &energies, |e| numeric_spectral(&eig_middle, e, eta)[(0, 0)], |e| {
        amp(&middle, e).1[0]
    }));
    comparisons.push(compare("abs_y2_sq", &energies, |e| numeric_spectral(&eig_middle, e, eta)[(1, 1)], |e| {
        amp(&middle, e).1[1]
    }));
    comparisons.push(compare("x2_y2_conj", &energies, |e| numeric_spectral(&eig_middle, e, eta)[(0, 1)], |e| {
        amp(&middle, e).1[2]
    }));

    let eig_full = diagonalize(h)?;
    let full_analytic = |e: f64| {
        let g = h.continuum_green(e);
        let gh = g.adjoint();
        (g - gh).map(|z| (z / Complex64::new(0.0, -2.0 * PI)).re)
    };
    for (name, idx) in [("spectral_LL", (0, 0)), ("spectral_RR", (1, 1)), ("spectral_LR", (0, 1))] {
        comparisons.push(compare(name, &energies, |e| numeric_spectral(&eig_full, e, eta)[idx], |e| full_analytic(e)[idx]));
    }

    Ok(CoefficientReport { n_k: h.n_k, completeness: completeness_check(&eig_full), comparisons })
}

/// Relative mismatch between each conductance denominator and |det[E − H_dd −
/// Σ]|² when only the matching broadening is kept imaginary: Γ_1 for the
/// first, Γ_3 for the middle and Γ_5 for the last.
pub fn denominator_check(sys: &ChannelDotSystem) -> [f64; 3] {
    let u = sys.energy_scale;
    let [e1, e2, e3, e4, e5, e6] = crate::conductance::resonance_terms(sys).e;
    let s = |i, j| sys.s.get(i, j) / u;
    let [g1, g3, g5] = sys.gamma.map(|g| g / u);
    let d1 = (e1 * e4 - s(3, 1).powi(2)).powi(2) + e4 * e4 * g1 * g1;
    let d3 = (e2 * e5 - s(3, 3).powi(2)).powi(2) + g3 * g3 * (e2 + e5 + 2.0 * s(3, 3)).powi(2);
    let d5 = (e3 * e6 - s(3, 5).powi(2)).powi(2) + e3 * e3 * g5 * g5;

    let ekf = sys.e_kf / u;
    let (el, er) = (sys.e_sl / u, sys.e_sr / u);
    let det = |sig: [Complex64; 3]| {
        let c = |x: f64| Complex64::new(x, 0.0);
        let m = Matrix2::new(
            c(ekf - el) - sig[0] - sig[1],
            -sig[1],
            -sig[1],
            c(ekf - er) - sig[2] - sig[1],
        );
        (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).norm_sqr()
    };
    let re = |x: f64| Complex64::new(x, 0.0);
    let det1 = det([Complex64::new(s(1, 1), -g1), re(s(3, 1)), re(s(5, 1))]);
    let det3 = det([re(s(1, 3)), Complex64::new(s(3, 3), -g3), re(s(5, 3))]);
    let det5 = det([re(s(1, 5)), re(s(3, 5)), Complex64::new(s(5, 5), -g5)]);
    [(d1 - det1).abs() / det1, (d3 - det3).abs() / det3, (d5 - det5).abs() / det5]
}

/// Width of a single level coupled to one channel, read from the numeric
/// spectral weight: the full width at half maximum of the smoothed curve
/// minus the smoothing contribution 2η.
pub fn level_width(h: &DiscretizedHamiltonian) -> Result<f64> {
    let single = DiscretizedHamiltonian { v: [h.v[0], 0.0, 0.0], ..*h };
    let eig = diagonalize(&single)?;
    let eta = SMOOTHING_IN_SPACINGS * h.spacing();
    let a = |e: f64| numeric_spectral(&eig, e, eta)[(0, 0)];
    // Locate the peak on a fine scan, then bisect the half-maximum crossings.
    let m = 4001;
    let lo = -0.9 * h.d;
    let step = 1.8 * h.d / (m - 1) as f64;
    let (mut peak_e, mut peak) = (lo, a(lo));
    for i in 1..m {
        let e = lo + i as f64 * step;
        let v = a(e);
        if v > peak {
            peak = v;
            peak_e = e;
        }
    }
    let half = 0.5 * peak;
    let cross = |mut inside: f64, mut outside: f64| {
        for _ in 0..80 {
            let mid = 0.5 * (inside + outside);
            if a(mid) > half {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    let mut right = peak_e;
    while a(right) > half {
        right += step;
        if right > h.d {
            return Err(Error::domain("level_width", "level wider than the band"));
        }
    }
    let mut left = peak_e;
    while a(left) > half {
        left -= step;
        if left < -h.d {
            return Err(Error::domain("level_width", "level wider than the band"));
        }
    }
    Ok(cross(peak_e, right) - cross(peak_e, left) - 2.0 * eta)
}

/// Dot-dominated eigenvalue from second-order perturbation theory for a
/// single dot coupled to channel 1: E_2 + Σ_k V²/(E_2 − E_k).
pub fn perturbative_level(h: &DiscretizedHamiltonian) -> f64 {
    let v2 = h.v[0] * h.v[0];
    h.e2 + h.grid().iter().map(|ek| v2 / (h.e2 - ek)).sum::<f64>()
}
