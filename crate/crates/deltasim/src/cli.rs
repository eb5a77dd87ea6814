//! Command-line surface. Every command is pure with respect to its config
//! file and flags: no environment variables are consulted and the only
//! execution-environment knob is the explicit `--threads` override, which
//! never changes output bytes.
//!
//! Exit codes: 0 success (possibly with per-cell warnings), 2 config error,
//! 3 solver failure, 4 internal invariant violation.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{microscopic_from_file, EvolutionMethod, ModelParams, ScenarioConfig};
use crate::error::{Error, Result};
use crate::experiments::{run_double_evolution, run_single_evolution, run_steady_sweep};
use crate::hilbert::HilbertSpace;
use crate::models::{
    build_single_hamiltonian, build_two_hamiltonian, dark_state_double, dark_state_single,
    effective_coeffs_approx, effective_coeffs_exact, single_excitation_energies,
    SingleEnsembleParams, TwoEnsembleParams,
};
use crate::observables::ObsValue;
use crate::output::OutputTable;
use crate::TWO_PI;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "deltasim",
    version,
    about = "Driven-dissipative cavity QED: steady-state phase maps, master-equation dynamics and quantum trajectories"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKindArg {
    Single,
    Double,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Effective-Hamiltonian coefficients from microscopic parameters
    /// (one row of the exact sums; `--approx` for the large-drive forms,
    /// `--compare` for both plus relative errors).
    Coeffs {
        /// Config file with a `[microscopic]` section.
        config: PathBuf,
        #[arg(long)]
        approx: bool,
        #[arg(long, conflicts_with = "approx")]
        compare: bool,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dark-state amplitudes, Hamiltonian residual and single-excitation
    /// spectrum at δ = δ_b = 0 with drives off.
    Darkstate {
        #[arg(long, value_enum)]
        kind: ModelKindArg,
        /// Atom–cavity coupling g/2π in MHz.
        #[arg(long)]
        g_mhz: f64,
        /// Exchange coupling J/2π in MHz.
        #[arg(long)]
        j_mhz: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Steady-state (δ, g) sweep to a long-format CSV table.
    SteadySweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores); output is identical for any
        /// value.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Master-equation time evolution (single- or two-ensemble model).
    Evolve {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Two-ensemble trajectory unraveling with per-point standard errors.
    Trajectories {
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config trajectory count.
        #[arg(long)]
        ntraj: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

/// Run a parsed command line, returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config { .. }
        | Error::InvalidParam(_)
        | Error::Degenerate(_)
        | Error::ProportionalityViolated { .. }
        | Error::Io(_) => EXIT_CONFIG,
        Error::Solver { .. } | Error::IllConditioned { .. } | Error::ResonantDenominator { .. } => {
            EXIT_SOLVER
        }
        Error::DimensionMismatch(_) | Error::InvalidState(_) => EXIT_INTERNAL,
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Coeffs {
            config,
            approx,
            compare,
            out,
        } => cmd_coeffs(&config, approx, compare, out.as_deref()),
        Command::Darkstate {
            kind,
            g_mhz,
            j_mhz,
            out,
        } => cmd_darkstate(kind, g_mhz, j_mhz, out.as_deref()),
        Command::SteadySweep {
            config,
            out,
            threads,
        } => with_pool(threads, || cmd_steady_sweep(&config, out.as_deref())),
        Command::Evolve {
            config,
            out,
            threads,
        } => with_pool(threads, || cmd_evolve(&config, out.as_deref())),
        Command::Trajectories {
            config,
            seed,
            ntraj,
            out,
            threads,
        } => with_pool(threads, || {
            cmd_trajectories(&config, seed, ntraj, out.as_deref())
        }),
    }
}

fn with_pool<T>(threads: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T>
where
    T: Send,
{
    match threads {
        None => f(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParam(format!("cannot build {n}-thread pool: {e}")))?;
            pool.install(f)
        }
    }
}

/// Write the table to `out` (plus `.meta` sidecar) or to stdout with the
/// metadata on stderr.
fn emit(table: &OutputTable, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => table.write_files(path),
        None => {
            print!("{}", table.to_csv());
            eprint!("{}", table.metadata_text());
            Ok(())
        }
    }
}

fn cmd_coeffs(config: &Path, approx: bool, compare: bool, out: Option<&Path>) -> Result<i32> {
    let params = microscopic_from_file(config)?;
    let mut header = vec!["variant".to_string()];
    let exact = effective_coeffs_exact(&params)?;
    for (name, _) in exact.fields() {
        header.push(format!("{name}_mhz"));
    }
    let mut table = OutputTable::new(header);
    let mut warnings = 0usize;

    // The variant tag is serialized through the header-free ObsValue row, so
    // rows carry it as metadata-ordered columns: variant encoded by position.
    let push_row = |table: &mut OutputTable, tag: f64, values: &[(&str, f64)], scale: f64| {
        let mut row = vec![ObsValue::Value(tag)];
        for (_, v) in values {
            row.push(ObsValue::Value(v * scale));
        }
        table.push_row(row);
    };

    if compare {
        let (approx_coeffs, warn) = effective_coeffs_approx(&params)?;
        if let Some(w) = warn {
            eprintln!("warning: {w}");
            warnings += 1;
        }
        push_row(&mut table, 0.0, &exact.fields(), 1.0 / TWO_PI);
        push_row(&mut table, 1.0, &approx_coeffs.fields(), 1.0 / TWO_PI);
        let errs = exact.rel_errors(&approx_coeffs);
        let mut row = vec![ObsValue::Value(2.0)];
        for (_, e) in errs {
            row.push(ObsValue::Value(e));
        }
        table.push_row(row);
        table.push_metadata(
            "variants",
            "0 = exact, 1 = approx, 2 = relative error (dimensionless)",
        );
    } else if approx {
        let (approx_coeffs, warn) = effective_coeffs_approx(&params)?;
        if let Some(w) = warn {
            eprintln!("warning: {w}");
            warnings += 1;
        }
        push_row(&mut table, 1.0, &approx_coeffs.fields(), 1.0 / TWO_PI);
        table.push_metadata("variants", "1 = approx");
    } else {
        push_row(&mut table, 0.0, &exact.fields(), 1.0 / TWO_PI);
        table.push_metadata("variants", "0 = exact");
    }
    table.push_metadata("units", "coefficients as nu = omega/2pi in MHz");
    table.push_metadata("warnings", warnings.to_string());
    emit(&table, out)?;
    Ok(EXIT_OK)
}

fn cmd_darkstate(kind: ModelKindArg, g_mhz: f64, j_mhz: f64, out: Option<&Path>) -> Result<i32> {
    let g = g_mhz * TWO_PI;
    let j = j_mhz * TWO_PI;
    let table = match kind {
        ModelKindArg::Single => {
            let space = HilbertSpace::single_ensemble(2, 2)?;
            let ds = dark_state_single(g, j, &space)?;
            let p = SingleEnsembleParams {
                delta: 0.0,
                delta_b: 0.0,
                g,
                j,
                drive_a: 0.0,
                drive_b: 0.0,
                kappa_a: 0.0,
                kappa_b: 0.0,
                gamma_1: 0.0,
                gamma_phi: 0.0,
                n_fock_a: 2,
                n_fock_b: 2,
            };
            let h = build_single_hamiltonian(&p, &space)?;
            let residual = (h.matrix() * ds.amplitudes()).norm();
            let eigs = single_excitation_energies(&h)?;
            let amp = |occ: &[usize], atom| {
                crate::hilbert::fock_state(&space, occ, atom)
                    .and_then(|s| s.inner(&ds))
                    .map(|v| v.re)
            };
            let mut table = OutputTable::new(
                [
                    "g_mhz",
                    "j_mhz",
                    "amp_a",
                    "amp_b",
                    "amp_atom",
                    "residual",
                    "eig_low_mhz",
                    "eig_mid_mhz",
                    "eig_high_mhz",
                ]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            );
            table.push_row(vec![
                ObsValue::Value(g_mhz),
                ObsValue::Value(j_mhz),
                ObsValue::Value(amp(&[1, 0], crate::hilbert::AtomState::G)?),
                ObsValue::Value(amp(&[0, 1], crate::hilbert::AtomState::G)?),
                ObsValue::Value(amp(&[0, 0], crate::hilbert::AtomState::E)?),
                ObsValue::Value(residual),
                ObsValue::Value(eigs[0] / TWO_PI),
                ObsValue::Value(eigs[1] / TWO_PI),
                ObsValue::Value(eigs[2] / TWO_PI),
            ]);
            table.push_metadata("model", "single");
            table
        }
        ModelKindArg::Double => {
            let space = HilbertSpace::two_ensemble(2, 2, 2)?;
            let ds = dark_state_double(g, j, &space)?;
            let p = TwoEnsembleParams {
                delta: 0.0,
                delta_b: 0.0,
                g,
                j_1: j,
                j_2: j,
                drive_1: 0.0,
                drive_2: 0.0,
                drive_b: 0.0,
                kappa_1: 0.0,
                kappa_2: 0.0,
                kappa_b: 0.0,
                gamma_1: 0.0,
                gamma_phi: 0.0,
                n_fock_1: 2,
                n_fock_b: 2,
                n_fock_2: 2,
            };
            let h = build_two_hamiltonian(&p, &space)?;
            let residual = (h.matrix() * ds.amplitudes()).norm();
            let eigs = single_excitation_energies(&h)?;
            let amp = |occ: &[usize], atom| {
                crate::hilbert::fock_state(&space, occ, atom)
                    .and_then(|s| s.inner(&ds))
                    .map(|v| v.re)
            };
            let mut table = OutputTable::new(
                [
                    "g_mhz",
                    "j_mhz",
                    "amp_a1",
                    "amp_b",
                    "amp_a2",
                    "amp_atom",
                    "residual",
                    "eig_1_mhz",
                    "eig_2_mhz",
                    "eig_3_mhz",
                    "eig_4_mhz",
                ]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            );
            table.push_row(vec![
                ObsValue::Value(g_mhz),
                ObsValue::Value(j_mhz),
                ObsValue::Value(amp(&[1, 0, 0], crate::hilbert::AtomState::G)?),
                ObsValue::Value(amp(&[0, 1, 0], crate::hilbert::AtomState::G)?),
                ObsValue::Value(amp(&[0, 0, 1], crate::hilbert::AtomState::G)?),
                ObsValue::Value(amp(&[0, 0, 0], crate::hilbert::AtomState::E)?),
                ObsValue::Value(residual),
                ObsValue::Value(eigs[0] / TWO_PI),
                ObsValue::Value(eigs[1] / TWO_PI),
                ObsValue::Value(eigs[2] / TWO_PI),
                ObsValue::Value(eigs[3] / TWO_PI),
            ]);
            table.push_metadata("model", "double");
            table
        }
    };
    emit(&table, out)?;
    Ok(EXIT_OK)
}

fn cmd_steady_sweep(config: &Path, out: Option<&Path>) -> Result<i32> {
    let cfg = ScenarioConfig::from_file(config)?;
    let grid = run_steady_sweep(&cfg)?;
    let table = grid.to_table();
    emit(&table, out)?;
    if grid.failures > 0 {
        eprintln!(
            "warning: {} cell(s) failed and were recorded as undef",
            grid.failures
        );
    }
    Ok(EXIT_OK)
}

fn cmd_evolve(config: &Path, out: Option<&Path>) -> Result<i32> {
    let mut cfg = ScenarioConfig::from_file(config)?;
    // `evolve` is the direct-integration surface.
    cfg.method = EvolutionMethod::Master;
    let series = match cfg.model {
        ModelParams::Single(_) => run_single_evolution(&cfg)?,
        ModelParams::Double(_) => run_double_evolution(&cfg)?,
    };
    emit_series(series, out)
}

fn cmd_trajectories(
    config: &Path,
    seed: Option<u64>,
    ntraj: Option<usize>,
    out: Option<&Path>,
) -> Result<i32> {
    let mut cfg = ScenarioConfig::from_file(config)?;
    cfg.method = EvolutionMethod::Trajectories;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(n) = ntraj {
        cfg.n_traj = n;
    }
    if matches!(cfg.model, ModelParams::Single(_)) {
        return Err(Error::Config {
            location: config.display().to_string(),
            message: "trajectory runs are defined for the double model; use 'evolve' for the single model"
                .into(),
        });
    }
    let series = run_double_evolution(&cfg)?;
    emit_series(series, out)
}

fn emit_series(series: crate::experiments::EvolutionSeries, out: Option<&Path>) -> Result<i32> {
    let table = series.to_table();
    match &series.failure {
        None => {
            emit(&table, out)?;
            Ok(EXIT_OK)
        }
        Some(msg) => {
            // Partial record: preserve it under a .partial suffix.
            match out {
                Some(path) => {
                    let mut partial = path.as_os_str().to_owned();
                    partial.push(".partial");
                    table.write_files(Path::new(&partial))?;
                }
                None => {
                    print!("{}", table.to_csv());
                    eprint!("{}", table.metadata_text());
                }
            }
            eprintln!("error: {msg}");
            Ok(EXIT_SOLVER)
        }
    }
}
