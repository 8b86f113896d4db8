//! `finqsim`: parameter sweeps and figure recipes for the finqsim-core models.
//!
//! Exit codes: 0 on success, 2 for invalid input, configuration or paths,
//! 3 for numeric-domain failures. `FINQSIM_THREADS` caps the worker pool.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;
mod recipes;
mod sweep;

use clap::{Args, Parser, Subcommand};
use commands::{CrosstalkArgs, OracleArgs, Sink};
use error::{CliError, CliResult, EXIT_VALIDATION};
use finqsim_core::noise::NoiseEnv;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "finqsim", version, about = "Sweeps and figure recipes for common-gate FinFET spin-qubit models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output prefix; writes PREFIX.csv (and PREFIX.svg with --svg). CSV goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot next to the CSV.
    #[arg(long)]
    svg: bool,
}

impl OutArgs {
    fn sink(&self) -> Sink {
        Sink { out: self.out.clone(), svg: self.svg }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Derived device parameters, or the constants table with --constants.
    Params {
        /// Flat key = value file with DeviceGeometry and CarrierSpec fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Dump the physical constants as name,value CSV.
        #[arg(long)]
        constants: bool,
        /// Local current line current, A.
        #[arg(long, default_value_t = 2.35e-4)]
        current: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Tabulate a special function: J0, J1, Y0, Y1, Si, si, F1, F2, G1, G2.
    Fn {
        #[arg(long)]
        name: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Conductance map over the two dot levels (CSV E_SL,E_SR,g_over_2e2h).
    Conductance {
        /// Fermi energy, eV. Defaults to the 1D value at --n-e1.
        #[arg(long)]
        ef: Option<f64>,
        #[arg(long, default_value_t = 0.21)]
        n_e1: f64,
        #[arg(long, default_value_t = 0.2)]
        m_eff: f64,
        /// Gamma_i / E_F.
        #[arg(long, default_value_t = 0.01)]
        gamma_ratio: f64,
        /// Level grid in units of E_F, from:to:points or a list.
        #[arg(long, default_value = "0.88:1.08:200")]
        grid: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// RKKY coupling, Kondo temperature and operation budget against Gamma.
    Rkky {
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// Gamma in meV, from:to:points or a list.
        #[arg(long, default_value = "0.01:0.5:100")]
        gamma_sweep: String,
        /// L = W in nm, a list or from:to:points.
        #[arg(long = "L", default_value = "10,20,28")]
        lengths: String,
        /// Channel density n_e1 (1/nm) or n_e2 (1/nm^2); figure density by default.
        #[arg(long)]
        n: Option<f64>,
        /// Temperature, K.
        #[arg(long = "T")]
        temperature: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Shot and thermal conductance fluctuations over a conductance sweep.
    Noise {
        #[arg(long, default_value_t = 0.5)]
        vd: f64,
        #[arg(long = "T", default_value_t = 0.1)]
        temperature: f64,
        #[arg(long, default_value_t = 1e12)]
        df: f64,
        /// Conductance g in units of 2e^2/h, from:to:points or a list.
        #[arg(long, default_value = "0.1:10:100")]
        g_sweep: String,
        /// Reference conductance for the fidelity column, 2e^2/h.
        #[arg(long, default_value_t = 0.0)]
        g_ref: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compensating line currents that null the field at non-target qubits.
    Crosstalk {
        /// Index of the last line (N + 1 lines).
        #[arg(long = "N")]
        n_max: usize,
        /// Target qubit.
        #[arg(long = "n")]
        target: usize,
        /// Nearest-neighbour ratio r/sqrt(r^2 + L^2).
        #[arg(long)]
        p: Option<f64>,
        /// Line pitch, nm (instead of --p).
        #[arg(long = "L")]
        pitch: Option<f64>,
        /// Line-qubit distance, nm.
        #[arg(long, default_value_t = 20.0)]
        r: f64,
        /// Target line current, A.
        #[arg(long = "In", default_value_t = 1e-5)]
        i_n: f64,
        /// Relative permeability for the reported flux density.
        #[arg(long, default_value_t = 10.0)]
        mu_r: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Anneal a problem instance (CSV t, energy, fidelity).
    Anneal {
        /// Instance file with lines `i j J_eV`, `field i Bz_eV`, `schedule t_s Delta_eV`.
        instance: PathBuf,
        /// Time step, s. Defaults to 0.05 hbar / energy scale.
        #[arg(long)]
        dt: Option<f64>,
        /// Keep only the zz part of each coupling.
        #[arg(long)]
        ising: bool,
        /// Also report the difference against a run with half the step.
        #[arg(long)]
        check_step: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact-diagonalisation check of the analytic dot amplitudes.
    Oracle {
        #[arg(long, default_value_t = 400)]
        nk: usize,
        /// Half bandwidth D, eV.
        #[arg(long, default_value_t = 1.0)]
        band: f64,
        #[arg(long, default_value_t = -0.25, allow_negative_numbers = true)]
        e2: f64,
        #[arg(long, default_value_t = 0.25, allow_negative_numbers = true)]
        e4: f64,
        /// Half width of every dot-channel coupling, eV.
        #[arg(long, default_value_t = 0.2)]
        gamma: f64,
        /// Energies compared lie in (-window, window).
        #[arg(long, default_value_t = 0.35)]
        window: f64,
        /// CSV report path; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a figure recipe, or `list` to show them.
    Reproduce {
        recipe: String,
        /// Directory receiving RECIPE.csv and RECIPE.svg.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Overrides for keys the recipe file defines.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("FINQSIM_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| CliError::Usage(format!("FINQSIM_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Params { config, constants, current, out } => commands::params(config.as_deref(), constants, current, &out.sink()),
        Command::Fn { name, from, to, points, out } => commands::function(&name, from, to, points, &out.sink()),
        Command::Conductance { ef, n_e1, m_eff, gamma_ratio, grid, out } => commands::conductance(ef, n_e1, m_eff, gamma_ratio, &grid, &out.sink()),
        Command::Rkky { d, gamma_sweep, lengths, n, temperature, out } => commands::rkky(d, &gamma_sweep, &lengths, n, temperature, &out.sink()),
        Command::Noise { vd, temperature, df, g_sweep, g_ref, out } => {
            commands::noise(NoiseEnv { v_d: vd, temperature, bandwidth: df }, &g_sweep, g_ref, &out.sink())
        }
        Command::Crosstalk { n_max, target, p, pitch, r, i_n, mu_r, out } => {
            commands::crosstalk(&CrosstalkArgs { n_max, target, p, r, pitch, i_n, mu_r }, &out.sink())
        }
        Command::Anneal { instance, dt, ising, check_step, out } => commands::anneal(&instance, dt, ising, check_step, &out.sink()),
        Command::Oracle { nk, band, e2, e4, gamma, window, report } => {
            commands::oracle(&OracleArgs { nk, band, e2, e4, gamma, window }, report.as_deref())
        }
        Command::Reproduce { recipe, out_dir, config } => {
            if recipe == "list" {
                let text: String = recipes::RECIPES.iter().map(|r| format!("{:<8} {}\n", r.name, r.about)).collect();
                return output::print(&text);
            }
            let overrides = config.as_deref().map(config::Config::load).transpose()?;
            let names: Vec<&str> = if recipe == "all" { recipes::RECIPES.iter().map(|r| r.name).collect() } else { vec![recipe.as_str()] };
            for name in names {
                recipes::reproduce(recipes::find(name)?, overrides.as_ref(), &out_dir)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
