//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the report prints in order. The
//! process fails unless the set of failing criteria equals `KNOWN_RED`.

use finqsim_core::annealer::{build_hamiltonian, evolve, evolve_state, Schedule, SpinNetwork};
use finqsim_core::conductance::{
    anti_diagonal, conductance_map, conductance_terms, detuning, full_conductance, local_maxima, middle_channel_conductance,
    ChannelDotSystem, SelfEnergyTable,
};
use finqsim_core::crosstalk::{forbidden_pitch, qubit_fields, singularity_check, solve_currents, target_bracket, target_field, LclArray};
use finqsim_core::device::{self, DeviceGeometry};
use finqsim_core::noise::{self, fidelity_quadrature, measurement_fidelity};
use finqsim_core::oracle::{coefficient_check, completeness_check, denominator_check, diagonalize, DiscretizedHamiltonian};
use finqsim_core::rkky::{self, CouplingInput};
use finqsim_core::{ConstantsTable, Dimensionality};
use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;
use std::time::{Duration, Instant};

type C = nalgebra::Complex<f64>;

/// Criteria expected to fail, with the analysis kept in the project notes.
/// 5: the 2D coupling at L = W = 14 nm comes out about 2.9 times the
/// quoted value, outside the factor-2 band.
const KNOWN_RED: &[u8] = &[5];

// Pinned tolerances.
const TOL_U: f64 = 0.02;
const TOL_FERMI: f64 = 0.01;
const TOL_LCL: f64 = 0.02;
const TOL_CHAIN: f64 = 0.01;
const TOL_NOISE: f64 = 0.01;
const TOL_MIDDLE: f64 = 1e-10;
const TOL_ASYMPTOTIC: f64 = 5e-3;
const MAX_DETUNING_RATIO: f64 = 1e-3;
const TOL_COMPLETENESS: f64 = 1e-10;
const HALVING_BAND: (f64, f64) = (1.7, 2.3);
const TOL_ORACLE_400: f64 = 0.05;
const TOL_DENOMINATOR: f64 = 1e-10;
const FACTOR_J: f64 = 2.0;
const FACTOR_TAU: f64 = 3.0;
const TOL_IDENTITY: f64 = 1e-12;
const TOL_QUADRATURE: f64 = 1e-8;
const TOL_CROSSTALK: f64 = 1e-12;
const TOL_SPECTRUM: f64 = 1e-12;
const TOL_NORM: f64 = 1e-9;
const MIN_FIDELITY: f64 = 0.99;
const DRAWS: usize = 1000;

const LIMIT_ANCHOR: Duration = Duration::from_secs(1);
const LIMIT_CONDUCTANCE: Duration = Duration::from_secs(10);
const LIMIT_ORACLE: Duration = Duration::from_secs(120);
const LIMIT_IDENTITIES: Duration = Duration::from_secs(5);
const LIMIT_ANNEAL: Duration = Duration::from_secs(30);

type Check = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Check);

fn c() -> ConstantsTable {
    ConstantsTable::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(name: &str, computed: f64, expected: f64, rel: f64) -> Result<(), String> {
    let err = (computed / expected - 1.0).abs();
    ensure(err <= rel, || format!("{name}: {computed:.5e} vs {expected:.5e} (rel {err:.3e} > {rel})"))
}

fn in_time(name: &str, start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{name} took {:.2} s, limit {:.0} s", t.as_secs_f64(), limit.as_secs_f64()))
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_finqsim"))
}

fn reproduce(recipe: &str) -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = bin().args(["reproduce", recipe, "--out-dir"]).arg(dir.path()).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("reproduce {recipe} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn anchors() -> Check {
    let c = c();
    let geom = DeviceGeometry::default();
    let timed = |name: &str, f: &dyn Fn() -> Result<(), String>| {
        let start = Instant::now();
        f()?;
        in_time(name, start, LIMIT_ANCHOR)
    };
    timed("U", &|| within("U", device::charging_energy(&c, &geom).map_err(|e| e.to_string())?, 46.4e-3, TOL_U))?;
    timed("E_F", &|| {
        let ef = |n| device::fermi_energy_from_density(&c, Dimensionality::One, n, 0.2);
        within("E_F low", ef(0.01), 0.188e-3, TOL_FERMI)?;
        within("E_F high", ef(0.464), 0.405, TOL_FERMI)
    })?;
    timed("LCL", &|| within("LCL 10 uA", device::lcl_field(&c, &geom, 1e-5), 1e-3, TOL_LCL))?;
    for (current, [b, z, t]) in [(2.35e-4, [23.5e-3, 2.72e-6, 31.6e-3]), (4.70e-3, [0.470, 54.5e-6, 0.632])] {
        timed("chain", &|| {
            let field = device::lcl_field(&c, &geom, current);
            within("field", field, b, TOL_CHAIN)?;
            let zeeman = c.zeeman_splitting(field, c.g_factor).map_err(|e| e.to_string())?;
            within("Zeeman", zeeman, z, TOL_CHAIN)?;
            within("temperature", c.energy_to_temperature(zeeman).map_err(|e| e.to_string())?, t, TOL_CHAIN)
        })?;
    }
    Ok(format!("U, E_F x2, LCL, two chains; U ±{TOL_U}, E_F ±{TOL_FERMI}, LCL ±{TOL_LCL}, chains ±{TOL_CHAIN} per step, each < 1 s"))
}

fn noise_coefficients() -> Check {
    let c = c();
    within("shot density", noise::shot_density_coefficient(&c, 0.5), 6.21e-24, TOL_NOISE)?;
    within("shot fluctuation", noise::shot_fluctuation_coefficient(&c), 0.0909, TOL_NOISE)?;
    within("thermal fluctuation", noise::thermal_fluctuation_coefficient(&c, 0.1), 3.78e-4, TOL_NOISE)?;
    Ok(format!("three coefficients ±{TOL_NOISE}"))
}

fn random_system(rng: &mut ChaCha8Rng) -> ChannelDotSystem {
    let mut sys = ChannelDotSystem::symmetric(1.0, rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5), 0.01);
    sys.s = SelfEnergyTable::fermi_consistent(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
    sys.gamma = [rng.gen_range(0.001..0.1), rng.gen_range(0.001..0.1), rng.gen_range(0.001..0.1)];
    if rng.gen_bool(0.5) {
        sys.dimensionality = Dimensionality::Two;
        sys.n_e2 = rng.gen_range(0.001..0.1);
        sys.w = rng.gen_range(5.0..30.0);
    }
    sys
}

fn conductance_suite() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        let sys = random_system(&mut rng);
        let middle = sys.k_d() * conductance_terms(&sys).map_err(|e| e.to_string())?.direct_3;
        let closed = middle_channel_conductance(&sys).map_err(|e| e.to_string())?;
        worst = worst.max((middle / closed - 1.0).abs());
        let full = full_conductance(&sys).map_err(|e| e.to_string())?;
        ensure(full >= 0.0, || format!("negative conductance {full} for {sys:?}"))?;
    }
    ensure(worst <= TOL_MIDDLE, || format!("middle term mismatch {worst:.3e}"))?;

    let mut worst_asym = 0.0f64;
    for _ in 0..DRAWS {
        let dh: f64 = rng.gen_range(0.01..0.3) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let ratio: f64 = rng.gen_range(0.0..MAX_DETUNING_RATIO);
        let mut sys = ChannelDotSystem::symmetric(1.0, 1.0 - ratio * dh.abs() + dh, 1.0 - ratio * dh.abs() - dh, rng.gen_range(0.001..0.05));
        sys.s = SelfEnergyTable::zero();
        let (_, h) = detuning(&sys);
        let g = middle_channel_conductance(&sys).map_err(|e| e.to_string())?;
        worst_asym = worst_asym.max((g * h.powi(4) / (4.0 * sys.k_d()) - 1.0).abs());
    }
    ensure(worst_asym <= TOL_ASYMPTOTIC, || format!("asymptotic law off by {worst_asym:.3e}"))?;

    let sys = ChannelDotSystem::symmetric(1.0, 0.0, 0.0, 0.01);
    let grid: Vec<f64> = (0..200).map(|i| 0.88 + 0.2 * i as f64 / 199.0).collect();
    let map = conductance_map(&sys, &grid, &grid).map_err(|e| e.to_string())?;
    let peaks = local_maxima(&anti_diagonal(&map)).len();
    ensure(peaks == 2, || format!("library map has {peaks} anti-diagonal maxima"))?;
    let stdout = reproduce("fig4a")?;
    ensure(stdout.contains("computed 2 at"), || format!("fig4a recipe output: {stdout}"))?;
    in_time("conductance suite", start, LIMIT_CONDUCTANCE)?;
    Ok(format!(
        "{DRAWS} draws: middle term {worst:.1e} ≤ {TOL_MIDDLE:e}, asymptotic {worst_asym:.1e} ≤ {TOL_ASYMPTOTIC}, g ≥ 0; fig4a recipe has 2 maxima; {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn oracle() -> Check {
    let start = Instant::now();
    let mut reports = Vec::new();
    for nk in [200, 400] {
        let h = DiscretizedHamiltonian::from_broadenings(1.0, nk, -0.25, 0.25, [0.2, 0.2, 0.2]);
        let eig = diagonalize(&h).map_err(|e| e.to_string())?;
        let comp = completeness_check(&eig);
        ensure(comp <= TOL_COMPLETENESS, || format!("completeness {comp:.3e} at N_k = {nk}"))?;
        reports.push(coefficient_check(&h, 0.35).map_err(|e| e.to_string())?);
    }
    let mut ratios = Vec::new();
    for (a, b) in reports[0].comparisons.iter().zip(&reports[1].comparisons) {
        let ratio = a.relative_error / b.relative_error;
        ensure((HALVING_BAND.0..=HALVING_BAND.1).contains(&ratio), || format!("{}: error ratio {ratio:.3} from 200 to 400", a.name))?;
        ratios.push(ratio);
    }
    let at400 = reports[1].max_error();
    ensure(at400 < TOL_ORACLE_400, || format!("max error {at400:.3e} at N_k = 400"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst_den = 0.0f64;
    for _ in 0..DRAWS {
        let sys = random_system(&mut rng);
        worst_den = denominator_check(&sys).into_iter().fold(worst_den, f64::max);
    }
    ensure(worst_den <= TOL_DENOMINATOR, || format!("denominator mismatch {worst_den:.3e}"))?;
    in_time("oracle", start, LIMIT_ORACLE)?;
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    Ok(format!(
        "completeness ≤ {TOL_COMPLETENESS:e}; error ratio 200→400 in [{lo:.2}, {hi:.2}] ⊂ [{}, {}]; {at400:.2e} < {TOL_ORACLE_400} at 400; denominators {worst_den:.1e}; {:.1} s",
        HALVING_BAND.0,
        HALVING_BAND.1,
        start.elapsed().as_secs_f64()
    ))
}

fn rkky_anchors() -> Check {
    let c = c();
    let err = |e: finqsim_core::Error| e.to_string();
    let factor = |name: &str, computed: f64, quoted: f64, f: f64| {
        let r = computed / quoted;
        ensure((1.0 / f..=f).contains(&r), || format!("{name}: {computed:.4e} vs {quoted:.4e} (ratio {r:.3}, band ×{f})"))
    };
    let mut failures = Vec::new();
    let j1 = rkky::j_rkky(&c, &CouplingInput::figure(&c, Dimensionality::One, 2e-4, 28.0)).map_err(err)?.abs();
    let j2 = rkky::j_rkky(&c, &CouplingInput::figure(&c, Dimensionality::Two, 2e-4, 14.0)).map_err(err)?.abs();
    let tau = rkky::operation_budget(&c, &CouplingInput::figure(&c, Dimensionality::One, 1.5e-4, 28.0)).map_err(err)?.tau_coh;
    failures.extend(factor("|J1|", j1, 1e-5, FACTOR_J).err());
    failures.extend(factor("|J2|", j2, 0.2e-6, FACTOR_J).err());
    if !(1e-9 / FACTOR_TAU..=1e-8 * FACTOR_TAU).contains(&tau) {
        failures.push(format!("tau_coh {tau:.3e} s outside [1e-9, 1e-8] ×{FACTOR_TAU}"));
    }

    let gammas: Vec<f64> = (0..100).map(|i| (0.01 + 0.49 * i as f64 / 99.0) * 1e-3).collect();
    let lengths = [10.0, 20.0, 28.0];
    let base1 = CouplingInput::figure(&c, Dimensionality::One, 2e-4, 28.0);
    let sweep = rkky::gamma_sweep(&c, &base1, &gammas, &lengths).map_err(err)?;
    if !sweep.iter().all(|p| p.j.abs() > p.t_k) {
        failures.push("J1 ≤ T1^K somewhere on the 1D grid".into());
    }
    let base2 = CouplingInput::figure(&c, Dimensionality::Two, 2e-4, 28.0);
    let crossings: Vec<Option<f64>> =
        lengths.iter().map(|&l| rkky::kondo_crossing(&c, &base2.with_length(l), &gammas)).collect::<Result<_, _>>().map_err(err)?;
    let found: Vec<f64> = crossings.iter().flatten().copied().collect();
    if !(found.len() == lengths.len() && found.windows(2).all(|w| w[1] < w[0])) {
        failures.push(format!("2D crossings not decreasing in L: {crossings:?}"));
    }
    let summary = format!(
        "|J1| {:.3} meV, |J2| {:.3} ueV (×{FACTOR_J}), tau_coh {tau:.2e} s (×{FACTOR_TAU}), 2D crossings {:?} meV",
        j1 * 1e3,
        j2 * 1e6,
        found.iter().map(|g| (g * 1e7).round() / 1e4).collect::<Vec<_>>()
    );
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{}; {summary}", failures.join("; ")))
    }
}

fn identities() -> Check {
    let c = c();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let (mut worst_ratio, mut worst_z, mut evaluated) = (0.0f64, 0.0f64, 0);
    while evaluated < DRAWS {
        let d = if rng.gen_bool(0.5) { Dimensionality::Two } else { Dimensionality::One };
        let input = CouplingInput {
            n_ed: rng.gen_range(0.05..0.4),
            temperature: rng.gen_range(0.01..4.0),
            ..CouplingInput::figure(&c, d, rng.gen_range(1e-5..4e-4), rng.gen_range(3.0..40.0))
        };
        // Draws outside the model's domain (Γ beyond its ceiling) are redrawn.
        let Ok(budget) = rkky::operation_budget(&c, &input) else {
            continue;
        };
        evaluated += 1;
        let closed = rkky::ratio_closed_form(&c, &input).map_err(|e| e.to_string())?;
        worst_ratio = worst_ratio.max((budget.ratio / closed - 1.0).abs());
        let jsd = rkky::j_sd(&c, &input).map_err(|e| e.to_string())?;
        let z = rkky::z_factor(&c, &input).map_err(|e| e.to_string())?;
        worst_z = worst_z.max((jsd * std::f64::consts::PI * rkky::dos_density(&c, &input) / z - 1.0).abs());
    }
    ensure(worst_ratio <= TOL_IDENTITY, || format!("ratio forms differ by {worst_ratio:.3e}"))?;
    ensure(worst_z <= TOL_IDENTITY, || format!("j_sd·πρ_F vs z differ by {worst_z:.3e}"))?;

    let mut worst_q = 0.0f64;
    for _ in 0..DRAWS {
        let a: f64 = rng.gen_range(-5.0..5.0);
        let b: f64 = rng.gen_range(-5.0..5.0);
        let s = 10f64.powf(rng.gen_range(-3.0..1.0));
        let q = fidelity_quadrature(a, s, b, s).map_err(|e| e.to_string())?;
        worst_q = worst_q.max((q - measurement_fidelity(a, b, s).map_err(|e| e.to_string())?).abs());
    }
    ensure(worst_q <= TOL_QUADRATURE, || format!("fidelity quadrature off by {worst_q:.3e}"))?;
    in_time("identities", start, LIMIT_IDENTITIES)?;
    Ok(format!(
        "{DRAWS} draws each: ratio forms {worst_ratio:.1e}, j_sd·πρ_F/z {worst_z:.1e} (≤ {TOL_IDENTITY:e}), quadrature {worst_q:.1e} (≤ {TOL_QUADRATURE:e}); {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

fn crosstalk() -> Check {
    let rel = |name: &str, a: f64, b: f64| ensure((a - b).abs() <= TOL_CROSSTALK * b.abs(), || format!("{name}: {a:.16e} vs {b:.16e}"));
    for k in 1..=6 {
        let p = 0.1 * k as f64;
        let r = 20.0;
        let arr = LclArray { n_max: 5, r, l: r * (1.0 / (p * p) - 1.0).sqrt(), target: 3, i_n: 1e-5 };
        let p = arr.coupling();
        let i = solve_currents(&arr).map_err(|e| e.to_string())?;
        let q = p * p;
        rel("I2", i[2], p * (1.0 - q) / (1.0 - 2.0 * q) * i[3])?;
        rel("I4", i[4], p / (1.0 - q) * i[3])?;
        rel("I1", i[1], p / (1.0 - q) * i[2])?;
        rel("I5", i[5], p * i[4])?;
        rel("I0", i[0], p * i[1])?;
        rel("bracket", target_bracket(&arr, &i), 1.0 - q * (1.0 - q) / (1.0 - 2.0 * q) - q / (1.0 - q))?;
    }

    let mut solved = 0;
    let mut worst = 0.0f64;
    for n_max in 1..=10usize {
        for target in 0..=n_max {
            for k in 1..=9 {
                let p = k as f64 / 10.0;
                let arr = LclArray { n_max, r: 20.0, l: 20.0 * (1.0 / (p * p) - 1.0).sqrt(), target, i_n: 2.35e-4 };
                let Ok(cur) = solve_currents(&arr) else {
                    continue;
                };
                solved += 1;
                let h_n = target_field(&arr, &cur).abs();
                for (i, f) in qubit_fields(&arr, &cur).into_iter().enumerate() {
                    if i != target {
                        worst = worst.max(f.abs() / h_n);
                    }
                }
            }
        }
    }
    ensure(worst <= TOL_CROSSTALK, || format!("residual non-target field {worst:.3e}·h_n"))?;

    for m in 1..=10 {
        let r = 20.0;
        let l = forbidden_pitch(r, m);
        ensure(l == ((m - 1) as f64).sqrt() * r, || format!("m = {m}: pitch {l}"))?;
        let hits = singularity_check(r, l, 10, TOL_CROSSTALK).map_err(|e| e.to_string())?;
        ensure(hits.iter().any(|g| g.m == m && g.pitch == l), || format!("m = {m} not flagged at L = {l}"))?;
    }
    Ok(format!("N=5, n=3 ratios and bracket ≤ {TOL_CROSSTALK:e} at p = 0.1..0.6; {solved} arrays N ≤ 10 residual {worst:.1e}·h_n; L = √(m−1)·r for m ≤ 10"))
}

fn annealer() -> Check {
    let c = c();
    let j = 1e-5;
    let mut pair = SpinNetwork::new(2);
    pair.set_coupling(0, 1, j);
    let h = build_hamiltonian(&pair, 0.0).map_err(|e| e.to_string())?;
    let mut levels: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    levels.sort_by(f64::total_cmp);
    let expected = [-0.75 * j, 0.25 * j, 0.25 * j, 0.25 * j];
    for (a, b) in levels.iter().zip(expected) {
        ensure((a - b).abs() <= TOL_SPECTRUM * j, || format!("N=2 spectrum {levels:?}"))?;
    }

    let mut net = SpinNetwork::new(4);
    for i in 0..3 {
        net.set_coupling(i, i + 1, 1e-5);
    }
    net.bz = vec![2e-6, -1e-6, 1.5e-6, -0.5e-6];

    // Norm over a long run started from a generic state.
    let mut free = net.clone();
    free.schedule = Schedule::new(vec![(0.0, 8e-6)]).map_err(|e| e.to_string())?;
    free.dt = 0.05 * c.hbar / free.energy_scale();
    free.total_time = 1e4 * free.dt;
    let psi: Vec<C> = (0..16).map(|k| C::new((k as f64).sin(), (k as f64).cos())).collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let psi: Vec<C> = psi.iter().map(|z| z / norm).collect();
    let drift = evolve_state(&c, &free, &psi).map_err(|e| e.to_string())?.norm_drift;
    ensure(drift <= TOL_NORM, || format!("norm drift {drift:.3e}"))?;

    let start = Instant::now();
    let total = 1.6e-8;
    net.total_time = total;
    net.schedule = Schedule::linear_ramp(5e-5, total).map_err(|e| e.to_string())?;
    net.dt = 0.05 * c.hbar / net.energy_scale();
    let ev = evolve(&c, &net).map_err(|e| e.to_string())?;
    ensure(ev.fidelity >= MIN_FIDELITY, || format!("N=4 fidelity {:.4}", ev.fidelity))?;
    ensure(ev.norm_drift <= TOL_NORM, || format!("N=4 norm drift {:.3e}", ev.norm_drift))?;
    in_time("N=4 anneal", start, LIMIT_ANNEAL)?;
    Ok(format!(
        "N=2 spectrum ≤ {TOL_SPECTRUM:e}·J; drift {drift:.1e} ≤ {TOL_NORM:e}; N=4 fidelity {:.4} ≥ {MIN_FIDELITY} in {:.2} s",
        ev.fidelity,
        start.elapsed().as_secs_f64()
    ))
}

fn line<'a>(stdout: &'a str, needle: &str) -> Result<&'a str, String> {
    let found = stdout.lines().find(|l| l.contains(needle)).ok_or_else(|| format!("no line with {needle:?}"))?;
    ensure(found.contains("quoted") && found.contains("computed"), || format!("line lacks quoted/computed: {found}"))?;
    Ok(found)
}

fn documented_discrepancies() -> Check {
    let anchors = reproduce("anchors")?;
    line(&anchors, "wire power: quoted 1.7200e-10 W")?;
    let b = reproduce("fig4b")?;
    line(&b, "absolute conductance scale")?;
    ensure(line(&b, "shot-noise SNR")?.contains("decreasing away from E_F: true"), || "fig4b SNR trend".into())?;
    let d = reproduce("fig4d")?;
    line(&d, "B_z for fidelity 0.9")?;
    ensure(line(&d, "trend of the required B_z")?.contains("non-decreasing with the offset: true"), || "fig4d trend".into())?;
    let g = reproduce("fig5g")?;
    let taus: Vec<&str> = g.lines().filter(|l| l.contains("tau_op")).collect();
    ensure(taus.len() == 2 && taus.iter().all(|l| l.contains("quoted") && l.contains("computed")), || format!("fig5g lines: {taus:?}"))?;
    Ok("wire power, fig4b/4d scales and fig5g tau_op printed as quoted | computed; SNR and B_z trends true".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "parameter anchors", anchors),
        (2, "noise coefficients", noise_coefficients),
        (3, "conductance consistency", conductance_suite),
        (4, "oracle equivalence", oracle),
        (5, "RKKY anchors", rkky_anchors),
        (6, "algebraic identities", identities),
        (7, "crosstalk", crosstalk),
        (8, "annealer", annealer),
        (9, "documented figure-scale discrepancies", documented_discrepancies),
    ];
    let mut failing = Vec::new();
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id} PASS [{secs:.2} s] {name}: {detail}"),
            Err(why) => {
                let tag = if KNOWN_RED.contains(&id) { " (known)" } else { "" };
                println!("criterion {id} FAIL{tag} [{secs:.2} s] {name}: {why}");
                failing.push(id);
            }
        }
    }
    if failing != KNOWN_RED {
        eprintln!("failing criteria {failing:?}, expected {KNOWN_RED:?}");
        std::process::exit(1);
    }
}
