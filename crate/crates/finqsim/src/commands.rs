//! Subcommand implementations and the computations shared with recipes.

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::output::{self, fmt_num, Axis, Cell, Series, Table};
use crate::sweep::{linspace, parse_axis};
use finqsim_core::annealer::{self, parse_instance};
use finqsim_core::conductance::{self, ChannelDotSystem};
use finqsim_core::crosstalk::{self, LclArray};
use finqsim_core::device::{self, CarrierSpec, DeviceGeometry};
use finqsim_core::noise::{self, NoiseEnv};
use finqsim_core::oracle::{self, DiscretizedHamiltonian};
use finqsim_core::rkky::{self, CouplingInput, SweepPoint};
use finqsim_core::special::{self, RangeFunctionKind};
use finqsim_core::{ConstantsTable, Dimensionality};
use nalgebra::DMatrix;
use std::path::{Path, PathBuf};

/// Where a command's CSV (and optional SVG) goes.
#[derive(Debug, Clone, Default)]
pub struct Sink {
    pub out: Option<PathBuf>,
    pub svg: bool,
}

impl Sink {
    pub fn validate(&self) -> CliResult<()> {
        match &self.out {
            Some(p) => {
                output::check_writable(&output::with_ext(p, "csv"))?;
                if self.svg {
                    output::check_writable(&output::with_ext(p, "svg"))?;
                }
                Ok(())
            }
            None if self.svg => Err(CliError::Usage("--svg needs --out".into())),
            None => Ok(()),
        }
    }

    pub fn emit(&self, what: &str, table: &Table, svg: impl FnOnce() -> CliResult<String>) -> CliResult<()> {
        table.check_finite(what)?;
        match &self.out {
            Some(p) => {
                let image = if self.svg { Some(svg()?) } else { None };
                output::write_file(&output::with_ext(p, "csv"), &table.to_csv())?;
                if let Some(image) = image {
                    output::write_file(&output::with_ext(p, "svg"), &image)?;
                }
            }
            None => output::print(&table.to_csv())?,
        }
        Ok(())
    }
}

fn constants() -> ConstantsTable {
    ConstantsTable::default()
}

/// n3d in cm⁻³ that maps to n_e1 = 0.21 nm⁻¹.
pub const DEFAULT_N3D: f64 = 9.261e18;

pub fn params(config: Option<&Path>, show_constants: bool, current: f64, sink: &Sink) -> CliResult<()> {
    sink.validate()?;
    let c = constants();
    if show_constants {
        let mut t = Table::new(&["name", "value"]);
        for (name, v) in c.entries() {
            t.push(vec![Cell::from(name), Cell::Num(v)]);
        }
        return sink.emit("constants", &t, || Err(CliError::Usage("no SVG for constants".into())));
    }
    let cfg = match config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let d = DeviceGeometry::default();
    let geom = DeviceGeometry {
        l: cfg.f64_or("L", d.l)?,
        w: cfg.f64_or("W", d.w)?,
        hfin: cfg.f64_or("HFIN", d.hfin)?,
        w_d: cfg.f64_or("w_d", d.w_d)?,
        l_qd: cfg.f64_or("L_QD", d.l_qd)?,
        r: cfg.f64_or("r", d.r)?,
        eps_barrier: cfg.f64_or("eps_barrier", d.eps_barrier)?,
        mu_channel: cfg.f64_or("mu_channel", d.mu_channel)?,
    };
    let spec = CarrierSpec {
        n3d: cfg.f64_or("n3d", DEFAULT_N3D)?,
        dimensionality: Dimensionality::from_int(cfg.usize_or("dimensionality", 1)? as u32)?,
        m_eff_ratio: cfg.f64_or("m_eff_ratio", 0.2)?,
    };
    cfg.finish()?;
    geom.validate()?;
    if !current.is_finite() {
        return Err(CliError::Usage(format!("--current must be finite, got {current}")));
    }

    let n_ed = device::reduced_density(&spec)?;
    let e_f = device::fermi_energy(&c, &spec)?;
    let b = device::lcl_field(&c, &geom, current);
    let zeeman = c.zeeman_splitting(b.abs(), c.g_factor)?;
    let density_unit = match spec.dimensionality {
        Dimensionality::One => "1/nm",
        Dimensionality::Two => "1/nm^2",
    };
    let rows: Vec<(&str, f64, &str)> = vec![
        ("n_ed", n_ed, density_unit),
        ("k_F", device::fermi_wavevector(spec.dimensionality, n_ed), "1/nm"),
        ("E_F", e_f, "eV"),
        ("E_F_over_kB", c.energy_to_temperature(e_f)?, "K"),
        ("C_dot", device::dot_capacitance(&c, &geom), "F"),
        ("U", device::charging_energy(&c, &geom)?, "eV"),
        ("eps_000", device::qd_levels(&c, &geom, spec.m_eff_ratio, [0, 0, 0])?, "eV"),
        ("variation_coefficient", device::variation_coefficient(&c, geom.l_qd, spec.m_eff_ratio), "eV"),
        ("I_lcl", current, "A"),
        ("B_lcl", b, "T"),
        ("zeeman", zeeman, "eV"),
        ("zeeman_over_kB", c.energy_to_temperature(zeeman)?, "K"),
        ("larmor_frequency", c.larmor_frequency(b.abs(), c.g_factor)?, "Hz"),
    ];
    let mut text = format!("{:<24}{:>26}  unit\n", "quantity", "value");
    let mut t = Table::new(&["name", "value", "unit"]);
    for (name, v, unit) in rows {
        text += &format!("{name:<24}{v:>26.9e}  {unit}\n");
        t.push(vec![Cell::from(name), Cell::Num(v), Cell::from(unit)]);
    }
    output::print(&text)?;
    if sink.out.is_some() {
        sink.emit("params", &t, || Err(CliError::Usage("no SVG for params".into())))?;
    }
    Ok(())
}

pub fn special_function(name: &str, x: f64) -> CliResult<f64> {
    let d1 = Dimensionality::One;
    let d2 = Dimensionality::Two;
    Ok(match name {
        "J0" => special::bessel_j(0, x)?,
        "J1" => special::bessel_j(1, x)?,
        "Y0" => special::bessel_y(0, x)?,
        "Y1" => special::bessel_y(1, x)?,
        "Si" => special::sine_integral_upper(x)?,
        "si" => special::sine_integral_si(x)?,
        "F1" => special::range_function(RangeFunctionKind::coupling(d1), x)?,
        "F2" => special::range_function(RangeFunctionKind::coupling(d2), x)?,
        "G1" => special::range_function(RangeFunctionKind::relaxation(d1), x)?,
        "G2" => special::range_function(RangeFunctionKind::relaxation(d2), x)?,
        other => return Err(CliError::Usage(format!("unknown function {other}; use J0, J1, Y0, Y1, Si, si, F1, F2, G1 or G2"))),
    })
}

pub fn function(name: &str, from: f64, to: f64, points: usize, sink: &Sink) -> CliResult<()> {
    sink.validate()?;
    if points == 0 {
        return Err(CliError::Usage("--points must be >= 1".into()));
    }
    let xs = linspace(from, to, points);
    let mut t = Table::new(&["x", "value"]);
    for &x in &xs {
        t.push_nums(&[x, special_function(name, x)?]);
    }
    sink.emit(name, &t, || {
        let s = Series { label: name.to_string(), x: xs.clone(), y: t.column("value").unwrap_or_default() };
        output::line_plot(name, &[s], &Axis::linear("x"), &Axis::linear(name))
    })
}

/// Fermi energy of a 1D channel at density `n_e1` (nm⁻¹).
pub fn fermi_energy_1d(n_e1: f64, m_eff_ratio: f64) -> CliResult<f64> {
    if !(n_e1 > 0.0) || !(m_eff_ratio > 0.0) {
        return Err(CliError::Usage(format!("need n_e1 > 0 and m* > 0, got {n_e1}, {m_eff_ratio}")));
    }
    Ok(device::fermi_energy_from_density(&constants(), Dimensionality::One, n_e1, m_eff_ratio))
}

/// Conductance map over E_SL = E_SR = `grid`·E_F.
pub struct ConductanceMap {
    pub e_f: f64,
    pub grid: Vec<f64>,
    pub g: DMatrix<f64>,
}

pub fn conductance_map(e_f: f64, gamma_ratio: f64, grid_over_ef: &[f64]) -> CliResult<ConductanceMap> {
    let template = ChannelDotSystem::symmetric(e_f, e_f, e_f, gamma_ratio * e_f);
    let grid: Vec<f64> = grid_over_ef.iter().map(|v| v * e_f).collect();
    let g = conductance::conductance_map(&template, &grid, &grid)?;
    Ok(ConductanceMap { e_f, grid, g })
}

impl ConductanceMap {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["E_SL", "E_SR", "g_over_2e2h"]);
        for (r, &sl) in self.grid.iter().enumerate() {
            for (col, &sr) in self.grid.iter().enumerate() {
                t.push_nums(&[sl, sr, self.g[(r, col)]]);
            }
        }
        t
    }

    pub fn svg(&self, title: &str) -> CliResult<String> {
        let scaled: Vec<f64> = self.grid.iter().map(|v| v / self.e_f).collect();
        // Rows are E_SL; plot E_SL along x, so transpose.
        output::heatmap(
            title,
            &scaled,
            &scaled,
            &self.g.transpose(),
            &Axis::linear("E_SL / E_F"),
            &Axis::linear("E_SR / E_F"),
            "g (2e^2/h), log",
            output::ColorScale::Log,
        )
    }

    pub fn anti_diagonal_maxima(&self) -> usize {
        conductance::local_maxima(&conductance::anti_diagonal(&self.g)).len()
    }
}

pub fn conductance(e_f: Option<f64>, n_e1: f64, m_eff_ratio: f64, gamma_ratio: f64, grid: &str, sink: &Sink) -> CliResult<()> {
    sink.validate()?;
    let e_f = match e_f {
        Some(v) => v,
        None => fermi_energy_1d(n_e1, m_eff_ratio)?,
    };
    let axis = parse_axis("grid", grid)?;
    let map = conductance_map(e_f, gamma_ratio, &axis)?;
    eprintln!("E_F = {e_f:.6e} eV, Gamma_i = {:.6e} eV, anti-diagonal maxima: {}", gamma_ratio * e_f, map.anti_diagonal_maxima());
    sink.emit("conductance map", &map.table(), || map.svg("Conductance"))
}

/// Figure coupling input with optional overrides of density and temperature.
pub fn coupling_base(d: Dimensionality, n_ed: Option<f64>, temperature: Option<f64>) -> CouplingInput {
    let mut base = CouplingInput::figure(&constants(), d, 1e-4, 10.0);
    if let Some(n) = n_ed {
        base.n_ed = n;
    }
    if let Some(t) = temperature {
        base.temperature = t;
    }
    base
}

/// Γ sweep with Γ in meV.
pub fn rkky_sweep(base: &CouplingInput, gammas_mev: &[f64], lengths: &[f64]) -> CliResult<Vec<SweepPoint>> {
    let gammas: Vec<f64> = gammas_mev.iter().map(|g| g * 1e-3).collect();
    Ok(rkky::gamma_sweep(&constants(), base, &gammas, lengths)?)
}

pub fn rkky(d: u32, gamma_sweep: &str, lengths: &str, n_ed: Option<f64>, temperature: Option<f64>, sink: &Sink) -> CliResult<()> {
    sink.validate()?;
    let d = Dimensionality::from_int(d)?;
    let gammas = parse_axis("gamma-sweep", gamma_sweep)?;
    let lengths = parse_axis("L", lengths)?;
    let base = coupling_base(d, n_ed, temperature);
    let points = rkky_sweep(&base, &gammas, &lengths)?;
    let mut t = Table::new(&["Gamma_meV", "L_nm", "J_meV", "TK_meV", "tau_coh_s", "tau_op_s", "ratio"]);
    for p in &points {
        t.push_nums(&[p.gamma * 1e3, p.l, p.j * 1e3, p.t_k * 1e3, p.budget.tau_coh, p.budget.tau_op, p.budget.ratio]);
    }
    let c = constants();
    let ascending: Vec<f64> = {
        let mut g: Vec<f64> = gammas.iter().map(|g| g * 1e-3).collect();
        g.sort_by(f64::total_cmp);
        g
    };
    for &l in &lengths {
        match rkky::kondo_crossing(&c, &base.with_length(l), &ascending)? {
            Some(g) => eprintln!("L = {l} nm: T_K reaches |J| at Gamma = {:.4e} meV", g * 1e3),
            None => eprintln!("L = {l} nm: |J| > T_K on the whole grid"),
        }
    }
    sink.emit("rkky sweep", &t, || {
        let series: Vec<Series> = lengths
            .iter()
            .flat_map(|&l| {
                let rows: Vec<&SweepPoint> = points.iter().filter(|p| p.l == l).collect();
                [
                    Series { label: format!("|J| L={l}"), x: rows.iter().map(|p| p.gamma * 1e3).collect(), y: rows.iter().map(|p| p.j.abs() * 1e3).collect() },
                    Series { label: format!("T_K L={l}"), x: rows.iter().map(|p| p.gamma * 1e3).collect(), y: rows.iter().map(|p| p.t_k * 1e3).collect() },
                ]
            })
            .collect();
        output::line_plot("RKKY coupling and Kondo temperature", &series, &Axis::linear("Gamma (meV)"), &Axis::log("energy (meV)"))
    })
}

pub fn noise(env: NoiseEnv, g_sweep: &str, g_ref: f64, sink: &Sink) -> CliResult<()> {
    sink.validate()?;
    env.validate()?;
    let c = constants();
    let gs = parse_axis("g-sweep", g_sweep)?;
    let mut t = Table::new(&["g_prime", "dg_shot", "dg_thermal", "fidelity_vs_ref"]);
    for &g in &gs {
        let shot = noise::shot_noise(&c, &env, g)?;
        let thermal = noise::thermal_noise(&c, &env, g)?;
        let f = noise::measurement_fidelity(g, g_ref, shot.dg)?;
        t.push_nums(&[2.0 * g, shot.dg_prime, thermal.dg_prime, f]);
    }
    eprintln!("shot threshold g_yy > 2q df / V_D = {:.6e} S", noise::shot_threshold_si(&c, &env));
    sink.emit("noise sweep", &t, || {
        let x = t.column("g_prime").unwrap_or_default();
        let s1 = Series { label: "shot".into(), x: x.clone(), y: t.column("dg_shot").unwrap_or_default() };
        let s2 = Series { label: "thermal".into(), x, y: t.column("dg_thermal").unwrap_or_default() };
        output::line_plot("Conductance fluctuation", &[s1, s2], &Axis::linear("g' (e^2/h)"), &Axis::log("dg' (e^2/h)"))
    })
}

/// Pitch giving the nearest-neighbour ratio `p` at distance `r`.
pub fn pitch_for_coupling(r: f64, p: f64) -> CliResult<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(CliError::Usage(format!("--p must lie in [0, 1), got {p}")));
    }
    Ok(if p == 0.0 { f64::INFINITY } else { r * (1.0 / (p * p) - 1.0).sqrt() })
}

pub struct CrosstalkArgs {
    pub n_max: usize,
    pub target: usize,
    pub p: Option<f64>,
    pub r: f64,
    pub pitch: Option<f64>,
    pub i_n: f64,
    pub mu_r: f64,
}

pub fn crosstalk(a: &CrosstalkArgs, sink: &Sink) -> CliResult<()> {
    sink.validate()?;
    let l = match (a.p, a.pitch) {
        (Some(p), None) => pitch_for_coupling(a.r, p)?,
        (None, Some(l)) => l,
        _ => return Err(CliError::Usage("give exactly one of --p and --L".into())),
    };
    let arr = LclArray { n_max: a.n_max, r: a.r, l, target: a.target, i_n: a.i_n };
    let currents = crosstalk::solve_currents(&arr)?;
    let fields = crosstalk::qubit_fields(&arr, &currents);
    let dropped = crosstalk::dropped_field(&arr, &currents);
    let mut t = Table::new(&["line", "orientation", "current_A", "field_A_per_m", "dropped_A_per_m"]);
    for i in 0..arr.line_count() {
        let orient = if i % 2 == 0 { "+1" } else { "-1" };
        t.push(vec![Cell::Text(i.to_string()), Cell::from(orient), Cell::Num(currents[i]), Cell::Num(fields[i]), Cell::Num(dropped[i])]);
    }
    let c = constants();
    eprintln!(
        "p = {:.6}, bracket = {:.12}, h_n = {:.6e} A/m, B_n = {:.6e} T",
        arr.coupling(),
        crosstalk::target_bracket(&arr, &currents),
        crosstalk::target_field(&arr, &currents),
        crosstalk::target_flux_density(&arr, &currents, a.mu_r, c.mu0)
    );
    sink.emit("crosstalk", &t, || {
        let x = t.column("line").unwrap_or_default();
        let s = Series { label: "I_i".into(), x, y: currents.clone() };
        output::line_plot("Line currents", &[s], &Axis::linear("line index"), &Axis::linear("current (A)"))
    })
}

pub fn anneal(instance: &Path, dt: Option<f64>, ising: bool, check_step: bool, sink: &Sink) -> CliResult<()> {
    sink.validate()?;
    let text = std::fs::read_to_string(instance).map_err(|e| CliError::Read { path: instance.display().to_string(), source: e })?;
    let mut net = parse_instance(&text)?;
    net.ising = ising;
    net.dt = match dt {
        Some(v) => v,
        None => 0.05 * constants().hbar / net.energy_scale().max(f64::MIN_POSITIVE),
    };
    let c = constants();
    let ev = annealer::evolve(&c, &net)?;
    eprintln!("N = {}, steps = {}, final fidelity = {:.9}, norm drift = {:.3e}", net.n, ev.steps, ev.fidelity, ev.norm_drift);
    if check_step {
        eprintln!("step-halving difference = {:.3e}", annealer::step_halving_error(&c, &net)?);
    }
    let mut t = Table::new(&["t", "energy", "fidelity"]);
    for p in &ev.trace {
        t.push_nums(&[p.t, p.energy, p.fidelity]);
    }
    sink.emit("anneal trace", &t, || {
        let x = t.column("t").unwrap_or_default();
        let s = Series { label: "fidelity".into(), x, y: t.column("fidelity").unwrap_or_default() };
        output::line_plot("Annealing", &[s], &Axis::linear("t (s)"), &Axis::linear("ground-space weight"))
    })
}

pub struct OracleArgs {
    pub nk: usize,
    pub band: f64,
    pub e2: f64,
    pub e4: f64,
    pub gamma: f64,
    pub window: f64,
}

pub fn oracle_report(a: &OracleArgs) -> CliResult<Table> {
    let h = DiscretizedHamiltonian::from_broadenings(a.band, a.nk, a.e2, a.e4, [a.gamma; 3]);
    let report = oracle::coefficient_check(&h, a.window)?;
    let mut t = Table::new(&["identity", "relative_error"]);
    t.push(vec![Cell::from("completeness"), Cell::Num(report.completeness)]);
    for cmp in &report.comparisons {
        t.push(vec![Cell::from(cmp.name), Cell::Num(cmp.relative_error)]);
    }
    Ok(t)
}

pub fn oracle(a: &OracleArgs, report: Option<&Path>) -> CliResult<()> {
    if let Some(p) = report {
        output::check_writable(p)?;
    }
    let t = oracle_report(a)?;
    t.check_finite("oracle report")?;
    let worst = t.rows.iter().skip(1).filter_map(|r| match r[1] {
        Cell::Num(v) => Some(v),
        _ => None,
    });
    eprintln!("N_k = {}: max relative error {}", a.nk, fmt_num(worst.fold(0.0, f64::max)));
    match report {
        Some(p) => output::write_file(p, &t.to_csv()),
        None => output::print(&t.to_csv()),
    }
}
