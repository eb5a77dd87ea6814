//! Scenario drivers reproducing the model's phase maps and non-equilibrium
//! runs: the steady-state (δ, g) sweep, single-ensemble master-equation
//! evolutions, and two-ensemble runs solved either by direct integration or
//! by trajectory unraveling.
//!
//! Grid cells and trajectories run as independent parallel tasks; results
//! are merged by index, so identical configurations (including seeds)
//! produce bit-identical tables for any worker count. Every result carries a
//! provenance block whose canonical config text regenerates the run.

use rayon::prelude::*;

use crate::config::{EvolutionMethod, ModelParams, ScenarioConfig};
use crate::dynamics::{
    build_liouvillian, evolve_master_with, evolve_trajectories, steady_state, TrajectoryOptions,
};
use crate::error::{Error, Result};
use crate::hilbert::{
    expectation, fock_state, partial_trace, AtomState, DensityMatrix, HilbertSpace, Operator,
    StateVector,
};
use crate::models::{
    build_single_hamiltonian, build_two_hamiltonian, collapse_operators_single,
    collapse_operators_two, single_excitation_energies, SingleEnsembleParams, TwoEnsembleParams,
};
use crate::observables::{
    atom_excitation, entropy_of, fidelity_pure, g2_zero, genuine_two_mode_from_moments,
    photon_number, population_fraction, schwinger_ops, spin_squeezing_x, ObsValue, ObservableSet,
};
use crate::output::{fnv1a, OutputTable};
use crate::{CMatrix, C64, TWO_PI};

/// Reproducibility block attached to every result.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// Canonical config text; parsing it reproduces the scenario exactly.
    pub config_echo: String,
    /// FNV-1a 64 fingerprint of `config_echo`.
    pub config_hash: u64,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub threads: usize,
    /// Wall time of the run (seconds); lives in the metadata sidecar only,
    /// never in data rows.
    pub wall_time_s: f64,
}

impl Provenance {
    fn new(cfg: &ScenarioConfig, seed: Option<u64>, wall_time_s: f64) -> Self {
        let echo = cfg.to_config_text();
        let hash = fnv1a(echo.as_bytes());
        Self {
            config_echo: echo,
            config_hash: hash,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            threads: rayon::current_num_threads(),
            wall_time_s,
        }
    }

    fn push_metadata(&self, table: &mut OutputTable) {
        table.push_metadata("tool", format!("deltasim {}", self.tool_version));
        table.push_metadata("config_hash", format!("{:016x}", self.config_hash));
        if let Some(seed) = self.seed {
            table.push_metadata("seed", seed.to_string());
        }
        table.push_metadata("threads", self.threads.to_string());
        table.push_metadata("wall_time_s", format!("{:.3}", self.wall_time_s));
        table.push_metadata("config", self.config_echo.trim_end().to_string());
    }
}

/// Numerical health of one steady-state solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellDiagnostics {
    pub residual_inf: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
    pub rcond_estimate: f64,
    pub raw_hermiticity_defect: f64,
}

/// One sweep cell. Solver failures are recorded, not propagated; the
/// observables of a failed cell are all undefined.
#[derive(Debug, Clone)]
pub struct CellResult {
    /// Probe detuning δ of this cell (rad/µs).
    pub delta: f64,
    /// Atom–cavity coupling g of this cell (rad/µs).
    pub g: f64,
    pub observables: ObservableSet,
    pub diagnostics: Option<CellDiagnostics>,
    pub error: Option<String>,
}

/// Steady-state sweep over (δ, g), δ-major cell order.
#[derive(Debug, Clone)]
pub struct GridResult {
    pub delta_axis: Vec<f64>,
    pub g_axis: Vec<f64>,
    pub cells: Vec<CellResult>,
    pub failures: usize,
    pub provenance: Provenance,
}

/// Column names of the steady-sweep observable block (13 columns).
pub const STEADY_OBSERVABLES: [&str; 13] = [
    "n_a",
    "n_b",
    "w",
    "entropy_a",
    "lambda_ab",
    "sigma_ee",
    "g2_a",
    "g2_b",
    "xi_x2",
    "branch_low_mhz",
    "branch_mid_mhz",
    "branch_high_mhz",
    "residual",
];

impl GridResult {
    /// Long-format table: δ, g axes then the 13 observable columns.
    pub fn to_table(&self) -> OutputTable {
        let mut header = vec!["delta_mhz".to_string(), "g_mhz".to_string()];
        header.extend(STEADY_OBSERVABLES.iter().map(|s| s.to_string()));
        let mut table = OutputTable::new(header);
        for cell in &self.cells {
            let mut row = vec![
                ObsValue::Value(cell.delta / TWO_PI),
                ObsValue::Value(cell.g / TWO_PI),
            ];
            for name in STEADY_OBSERVABLES {
                row.push(cell.observables.get(name).unwrap_or(ObsValue::Undefined));
            }
            table.push_row(row);
        }
        self.provenance.push_metadata(&mut table);
        table.push_metadata(
            "grid",
            format!(
                "{} delta x {} g cells",
                self.delta_axis.len(),
                self.g_axis.len()
            ),
        );
        table.push_metadata("cell_failures", self.failures.to_string());
        table
    }

    pub fn cell(&self, delta_idx: usize, g_idx: usize) -> &CellResult {
        &self.cells[delta_idx * self.g_axis.len() + g_idx]
    }
}

/// Solve one steady-state cell of a single-ensemble sweep.
pub fn steady_cell(base: &SingleEnsembleParams, delta: f64, g: f64) -> Result<CellResult> {
    let mut p = base.clone();
    p.delta = delta;
    p.g = g;
    let space = p.space()?;
    let h = build_single_hamiltonian(&p, &space)?;
    let collapses = collapse_operators_single(&p, &space)?;
    let liouv = build_liouvillian(&h, &collapses)?;
    let ss = steady_state(&liouv)?;
    let rho = &ss.rho;

    let mut obs = ObservableSet::new();
    obs.push("n_a", photon_number(rho, "a")?);
    obs.push("n_b", photon_number(rho, "b")?);
    obs.push("w", population_fraction(rho, "a", "b")?);
    obs.push("entropy_a", crate::observables::vn_entropy(rho, &[0])?);
    obs.push(
        "lambda_ab",
        crate::observables::genuine_two_mode(rho, "a", "b")?,
    );
    obs.push("sigma_ee", atom_excitation(rho)?);
    obs.push("g2_a", g2_zero(rho, "a")?);
    obs.push("g2_b", g2_zero(rho, "b")?);
    obs.push("xi_x2", spin_squeezing_x(rho, "a", "b")?);

    // Probe-resonance overlay: single-excitation branches of the undriven H.
    let mut undriven = p.clone();
    undriven.drive_a = 0.0;
    undriven.drive_b = 0.0;
    let h0 = build_single_hamiltonian(&undriven, &space)?;
    let branches = single_excitation_energies(&h0)?;
    obs.push("branch_low_mhz", branches[0] / TWO_PI);
    obs.push("branch_mid_mhz", branches[1] / TWO_PI);
    obs.push("branch_high_mhz", branches[2] / TWO_PI);
    obs.push("residual", ss.residual_inf);

    let diag = rho.diagnostics();
    Ok(CellResult {
        delta,
        g,
        observables: obs,
        diagnostics: Some(CellDiagnostics {
            residual_inf: ss.residual_inf,
            trace_error: diag.trace_error,
            min_eigenvalue: diag.min_eigenvalue,
            rcond_estimate: ss.rcond_estimate,
            raw_hermiticity_defect: ss.raw_hermiticity_defect,
        }),
        error: None,
    })
}

/// Run the steady-state (δ, g) sweep of the single-ensemble model.
pub fn run_steady_sweep(cfg: &ScenarioConfig) -> Result<GridResult> {
    let started = std::time::Instant::now();
    let base = match &cfg.model {
        ModelParams::Single(p) => p.clone(),
        ModelParams::Double(_) => {
            return Err(Error::InvalidParam(
                "steady sweep is defined for the single model".into(),
            ))
        }
    };
    let grid = cfg
        .grid
        .as_ref()
        .ok_or_else(|| Error::InvalidParam("steady sweep needs a [grid] section".into()))?;
    let delta_axis: Vec<f64> = grid.delta.values().iter().map(|v| v * TWO_PI).collect();
    let g_axis: Vec<f64> = grid.g.values().iter().map(|v| v * TWO_PI).collect();

    let n_g = g_axis.len();
    let cells: Vec<CellResult> = (0..delta_axis.len() * n_g)
        .into_par_iter()
        .map(|flat| {
            let delta = delta_axis[flat / n_g];
            let g = g_axis[flat % n_g];
            steady_cell(&base, delta, g).unwrap_or_else(|err| {
                let mut obs = ObservableSet::new();
                for name in STEADY_OBSERVABLES {
                    obs.push(name, ObsValue::Undefined);
                }
                CellResult {
                    delta,
                    g,
                    observables: obs,
                    diagnostics: None,
                    error: Some(err.to_string()),
                }
            })
        })
        .collect();

    let failures = cells.iter().filter(|c| c.error.is_some()).count();
    Ok(GridResult {
        delta_axis,
        g_axis,
        cells,
        failures,
        provenance: Provenance::new(cfg, None, started.elapsed().as_secs_f64()),
    })
}

/// Named time series produced by an evolution scenario.
#[derive(Debug, Clone)]
pub struct EvolutionSeries {
    /// Sample times (µs).
    pub times: Vec<f64>,
    pub series: Vec<(String, Vec<ObsValue>)>,
    pub provenance: Provenance,
    /// Set when the integrator aborted; the series then holds the partial
    /// record up to the failure.
    pub failure: Option<String>,
}

impl EvolutionSeries {
    pub fn get(&self, name: &str) -> Option<&[ObsValue]> {
        self.series
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.as_slice())
    }

    pub fn to_table(&self) -> OutputTable {
        let mut header = vec!["t_us".to_string()];
        header.extend(self.series.iter().map(|(n, _)| n.clone()));
        let mut table = OutputTable::new(header);
        for (k, &t) in self.times.iter().enumerate() {
            let mut row = vec![ObsValue::Value(t)];
            for (_, s) in &self.series {
                row.push(s[k]);
            }
            table.push_row(row);
        }
        self.provenance.push_metadata(&mut table);
        table
    }
}

/// Fidelity target labels of the single-ensemble evolution, in column order.
pub const SINGLE_FIDELITY_TARGETS: [(&str, [usize; 2], AtomState); 5] = [
    ("f_11g", [1, 1], AtomState::G),
    ("f_10e", [1, 0], AtomState::E),
    ("f_20g", [2, 0], AtomState::G),
    ("f_02g", [0, 2], AtomState::G),
    ("f_01e", [0, 1], AtomState::E),
];

/// Master-equation evolution of the single-ensemble model: entropy, spin
/// squeezing, the five reference-state fidelities and populations.
pub fn run_single_evolution(cfg: &ScenarioConfig) -> Result<EvolutionSeries> {
    let started = std::time::Instant::now();
    let p = match &cfg.model {
        ModelParams::Single(p) => p.clone(),
        ModelParams::Double(_) => {
            return Err(Error::InvalidParam(
                "single-ensemble evolution needs the single model".into(),
            ))
        }
    };
    if p.n_fock_a < 3 || p.n_fock_b < 3 {
        return Err(Error::InvalidParam(
            "fidelity targets use two-photon states; need n_fock >= 3".into(),
        ));
    }
    let space = p.space()?;
    let h = build_single_hamiltonian(&p, &space)?;
    let collapses = collapse_operators_single(&p, &space)?;
    let psi0 = fock_state(&space, &cfg.initial.occupations, cfg.initial.atom)?;
    let rho0 = psi0.to_density();
    let times = cfg.time.times();

    let targets: Vec<(String, StateVector)> = SINGLE_FIDELITY_TARGETS
        .iter()
        .map(|(name, occ, atom)| Ok((name.to_string(), fock_state(&space, occ, *atom)?)))
        .collect::<Result<_>>()?;

    let names: Vec<String> = ["entropy_a", "xi_x2"]
        .iter()
        .map(|s| s.to_string())
        .chain(targets.iter().map(|(n, _)| n.clone()))
        .chain(["n_a", "n_b", "sigma_ee"].iter().map(|s| s.to_string()))
        .collect();
    let mut columns: Vec<Vec<ObsValue>> = vec![Vec::with_capacity(times.len()); names.len()];

    let outcome = evolve_master_with(
        &h,
        &collapses,
        &rho0,
        &times,
        cfg.solver.integrator(),
        &mut |_, _, rho| {
            let dm = DensityMatrix::from_matrix_unchecked(space.clone(), rho.clone());
            let s = crate::observables::vn_entropy(&dm, &[0]).expect("subsystem 0 exists");
            let mut vals = vec![
                ObsValue::Value(s),
                spin_squeezing_x(&dm, "a", "b").expect("modes exist"),
            ];
            for (_, target) in &targets {
                vals.push(ObsValue::Value(
                    fidelity_pure(&dm, target).expect("same space"),
                ));
            }
            vals.push(ObsValue::Value(photon_number(&dm, "a").expect("mode a")));
            vals.push(ObsValue::Value(photon_number(&dm, "b").expect("mode b")));
            vals.push(ObsValue::Value(atom_excitation(&dm).expect("atom")));
            for (col, v) in columns.iter_mut().zip(vals) {
                col.push(v);
            }
        },
    );
    finish_series(outcome, times, names, columns, cfg, None, started)
}

/// Assemble the series, truncating to the partial record when the
/// integrator aborted mid-run.
fn finish_series(
    outcome: Result<()>,
    times: Vec<f64>,
    names: Vec<String>,
    columns: Vec<Vec<ObsValue>>,
    cfg: &ScenarioConfig,
    seed: Option<u64>,
    started: std::time::Instant,
) -> Result<EvolutionSeries> {
    let (times, failure) = match outcome {
        Ok(()) => (times, None),
        Err(err @ (Error::Solver { .. } | Error::IllConditioned { .. })) => {
            let collected = columns.iter().map(|c| c.len()).min().unwrap_or(0);
            (times[..collected].to_vec(), Some(err.to_string()))
        }
        Err(other) => return Err(other),
    };
    let mut columns = columns;
    for col in &mut columns {
        col.truncate(times.len());
    }
    Ok(EvolutionSeries {
        times,
        series: names.into_iter().zip(columns).collect(),
        provenance: Provenance::new(cfg, seed, started.elapsed().as_secs_f64()),
        failure,
    })
}

/// Two-ensemble evolution: populations, the three pairwise mode-entanglement
/// parameters, atomic excitation and the first optical mode's entropy.
/// Solved by trajectory unraveling or direct integration per
/// `cfg.method`; trajectory output carries per-point standard errors for the
/// population-type columns.
pub fn run_double_evolution(cfg: &ScenarioConfig) -> Result<EvolutionSeries> {
    let started = std::time::Instant::now();
    let p = match &cfg.model {
        ModelParams::Double(p) => p.clone(),
        ModelParams::Single(_) => {
            return Err(Error::InvalidParam(
                "two-ensemble evolution needs the double model".into(),
            ))
        }
    };
    let space = p.space()?;
    let h = build_two_hamiltonian(&p, &space)?;
    let collapses = collapse_operators_two(&p, &space)?;
    let psi0 = fock_state(&space, &cfg.initial.occupations, cfg.initial.atom)?;
    let times = cfg.time.times();

    let n_1 = Operator::number_mode(&space, "a1")?;
    let n_b = Operator::number_mode(&space, "b")?;
    let n_2 = Operator::number_mode(&space, "a2")?;
    let sigma = Operator::qubit_lower(&space)?;
    let see = &sigma.dagger() * &sigma;
    let a1 = Operator::destroy_mode(&space, "a1")?;
    let a2 = Operator::destroy_mode(&space, "a2")?;
    let b = Operator::destroy_mode(&space, "b")?;
    let cross_12 = &a1.dagger() * &a2;
    let cross_1b = &a1.dagger() * &b;
    let cross_2b = &a2.dagger() * &b;
    let nn_12 = &n_1 * &n_2;
    let nn_1b = &n_1 * &n_b;
    let nn_2b = &n_2 * &n_b;

    match cfg.method {
        EvolutionMethod::Master => {
            let rho0 = psi0.to_density();
            let names = [
                "n_1",
                "n_b",
                "n_2",
                "sigma_ee",
                "lambda_12",
                "lambda_1b",
                "lambda_2b",
                "entropy_a1",
            ];
            let mut columns: Vec<Vec<ObsValue>> =
                vec![Vec::with_capacity(times.len()); names.len()];
            let outcome = evolve_master_with(
                &h,
                &collapses,
                &rho0,
                &times,
                cfg.solver.integrator(),
                &mut |_, _, rho| {
                    let dm = DensityMatrix::from_matrix_unchecked(space.clone(), rho.clone());
                    let ex = |op: &Operator| expectation(&dm, op).expect("same space");
                    columns[0].push(ObsValue::Value(ex(&n_1).re));
                    columns[1].push(ObsValue::Value(ex(&n_b).re));
                    columns[2].push(ObsValue::Value(ex(&n_2).re));
                    columns[3].push(ObsValue::Value(ex(&see).re));
                    columns[4].push(ObsValue::Value(genuine_two_mode_from_moments(
                        ex(&cross_12),
                        ex(&nn_12).re,
                    )));
                    columns[5].push(ObsValue::Value(genuine_two_mode_from_moments(
                        ex(&cross_1b),
                        ex(&nn_1b).re,
                    )));
                    columns[6].push(ObsValue::Value(genuine_two_mode_from_moments(
                        ex(&cross_2b),
                        ex(&nn_2b).re,
                    )));
                    let reduced = partial_trace(&dm, &[0]).expect("subsystem 0");
                    columns[7].push(ObsValue::Value(entropy_of(&reduced)));
                },
            );
            finish_series(
                outcome,
                times,
                names.iter().map(|s| s.to_string()).collect(),
                columns,
                cfg,
                None,
                started,
            )
        }
        EvolutionMethod::Trajectories => {
            let operators = vec![
                ("n_1".to_string(), n_1),
                ("n_b".to_string(), n_b),
                ("n_2".to_string(), n_2),
                ("sigma_ee".to_string(), see),
                ("cross_12".to_string(), cross_12),
                ("cross_1b".to_string(), cross_1b),
                ("cross_2b".to_string(), cross_2b),
                ("nn_12".to_string(), nn_12),
                ("nn_1b".to_string(), nn_1b),
                ("nn_2b".to_string(), nn_2b),
            ];
            let opts = TrajectoryOptions {
                n_traj: cfg.n_traj,
                seed: cfg.seed,
                integrator: cfg.solver.integrator(),
                average_states: true,
            };
            let rec = evolve_trajectories(&h, &collapses, &psi0, &times, &operators, &opts)?;

            let real_series = |name: &str| -> Vec<ObsValue> {
                rec.mean_series(name)
                    .expect("series recorded")
                    .iter()
                    .map(|v| ObsValue::Value(v.re))
                    .collect()
            };
            let se_series = |name: &str| -> Vec<ObsValue> {
                rec.std_error_series(name)
                    .expect("series recorded")
                    .iter()
                    .map(|&v| ObsValue::Value(v))
                    .collect()
            };
            let lambda_series = |cross: &str, nn: &str| -> Vec<ObsValue> {
                rec.mean_series(cross)
                    .expect("series recorded")
                    .iter()
                    .zip(rec.mean_series(nn).expect("series recorded"))
                    .map(|(c, n)| ObsValue::Value(genuine_two_mode_from_moments(*c, n.re)))
                    .collect()
            };
            let entropy_series: Vec<ObsValue> = rec
                .avg_states
                .as_ref()
                .expect("averaged states retained")
                .iter()
                .map(|dm| {
                    let reduced = partial_trace(dm, &[0]).expect("subsystem 0");
                    ObsValue::Value(entropy_of(&reduced))
                })
                .collect();

            let series = vec![
                ("n_1".to_string(), real_series("n_1")),
                ("se_n_1".to_string(), se_series("n_1")),
                ("n_b".to_string(), real_series("n_b")),
                ("se_n_b".to_string(), se_series("n_b")),
                ("n_2".to_string(), real_series("n_2")),
                ("se_n_2".to_string(), se_series("n_2")),
                ("sigma_ee".to_string(), real_series("sigma_ee")),
                ("se_sigma_ee".to_string(), se_series("sigma_ee")),
                ("lambda_12".to_string(), lambda_series("cross_12", "nn_12")),
                ("lambda_1b".to_string(), lambda_series("cross_1b", "nn_1b")),
                ("lambda_2b".to_string(), lambda_series("cross_2b", "nn_2b")),
                ("entropy_a1".to_string(), entropy_series),
            ];
            let provenance = Provenance::new(cfg, Some(cfg.seed), started.elapsed().as_secs_f64());
            Ok(EvolutionSeries {
                times,
                series,
                provenance,
                failure: None,
            })
        }
    }
}

/// Damping presets used by the evolution scenarios (per-mode loss, qubit
/// relaxation, qubit dephasing, all ν = ω/2π in MHz).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DampingPreset {
    /// No dissipation, drives off.
    Lossless,
    /// κ = 2π·0.4, γ₁ = 2π·0.02, γ_φ = 2π·0.3 (steady-state damping set).
    Strong,
    /// κ = 2π·0.1, γ₁ = 2π·0.02, γ_φ = 2π·0.1 (moderate damping set).
    Weak,
}

impl DampingPreset {
    pub fn kappa_mhz(self) -> f64 {
        match self {
            DampingPreset::Lossless => 0.0,
            DampingPreset::Strong => 0.4,
            DampingPreset::Weak => 0.1,
        }
    }

    pub fn gamma_1_mhz(self) -> f64 {
        match self {
            DampingPreset::Lossless => 0.0,
            _ => 0.02,
        }
    }

    pub fn gamma_phi_mhz(self) -> f64 {
        match self {
            DampingPreset::Lossless => 0.0,
            DampingPreset::Strong => 0.3,
            DampingPreset::Weak => 0.1,
        }
    }
}

/// Reference exchange coupling J/2π = 1 MHz used by all presets.
pub const J_MHZ: f64 = 1.0;

/// Steady-sweep defaults: δ_b = J, κ_a = κ_b = 2π·0.4, γ₁ = 2π·0.02,
/// γ_φ = 2π·0.3, E = 0.1 κ_b, J = 2π·1, truncation 4 levels per mode, grid
/// δ/2π ∈ [−5, 5] (41 points) × g/2π ∈ [0, 4] (21 points).
pub fn steady_sweep_default() -> ScenarioConfig {
    let kappa = 0.4;
    let p = SingleEnsembleParams {
        delta: 0.0,
        delta_b: J_MHZ * TWO_PI,
        g: 0.0,
        j: J_MHZ * TWO_PI,
        drive_a: 0.1 * kappa * TWO_PI,
        drive_b: 0.1 * kappa * TWO_PI,
        kappa_a: kappa * TWO_PI,
        kappa_b: kappa * TWO_PI,
        gamma_1: 0.02 * TWO_PI,
        gamma_phi: 0.3 * TWO_PI,
        n_fock_a: 4,
        n_fock_b: 4,
    };
    ScenarioConfig {
        model: ModelParams::Single(p),
        grid: Some(crate::config::GridSpec {
            delta: crate::config::AxisSpec {
                start: -5.0,
                stop: 5.0,
                count: 41,
            },
            g: crate::config::AxisSpec {
                start: 0.0,
                stop: 4.0,
                count: 21,
            },
        }),
        time: crate::config::TimeGrid {
            t_max: 2.0,
            samples: 400,
        },
        initial: crate::config::InitialState {
            occupations: vec![0, 0],
            atom: AtomState::G,
        },
        n_traj: 25,
        seed: 1,
        method: EvolutionMethod::Master,
        solver: Default::default(),
    }
}

/// Single-ensemble evolution preset from |11g⟩ at δ_b = 0 (lossless and
/// weak damping) or δ_b = J (strong damping), δ = √(g² + J²), truncation 8.
pub fn single_evolution_preset(g_over_j: f64, damping: DampingPreset) -> ScenarioConfig {
    let j = J_MHZ * TWO_PI;
    let g = g_over_j * j;
    let kappa = damping.kappa_mhz() * TWO_PI;
    let delta_b = match damping {
        DampingPreset::Strong => j,
        _ => 0.0,
    };
    let p = SingleEnsembleParams {
        delta: (g * g + j * j).sqrt(),
        delta_b,
        g,
        j,
        drive_a: 0.1 * kappa,
        drive_b: 0.1 * kappa,
        kappa_a: kappa,
        kappa_b: kappa,
        gamma_1: damping.gamma_1_mhz() * TWO_PI,
        gamma_phi: damping.gamma_phi_mhz() * TWO_PI,
        n_fock_a: 8,
        n_fock_b: 8,
    };
    ScenarioConfig {
        model: ModelParams::Single(p),
        grid: None,
        time: crate::config::TimeGrid {
            t_max: 2.0,
            samples: 400,
        },
        initial: crate::config::InitialState {
            occupations: vec![1, 1],
            atom: AtomState::G,
        },
        n_traj: 25,
        seed: 1,
        method: EvolutionMethod::Master,
        solver: Default::default(),
    }
}

/// Two-ensemble preset: symmetric couplings J₁ = J₂ = 2π·1, δ_b = 0,
/// δ = √(J² + g²), E_x = 0.1 κ_x, truncation 3 levels per radiation mode.
pub fn double_evolution_preset(
    g_over_j: f64,
    damping: DampingPreset,
    initial: crate::config::InitialState,
    method: EvolutionMethod,
) -> ScenarioConfig {
    let j = J_MHZ * TWO_PI;
    let g = g_over_j * j;
    let kappa = damping.kappa_mhz() * TWO_PI;
    let p = TwoEnsembleParams {
        delta: (g * g + j * j).sqrt(),
        delta_b: 0.0,
        g,
        j_1: j,
        j_2: j,
        drive_1: 0.1 * kappa,
        drive_2: 0.1 * kappa,
        drive_b: 0.1 * kappa,
        kappa_1: kappa,
        kappa_2: kappa,
        kappa_b: kappa,
        gamma_1: damping.gamma_1_mhz() * TWO_PI,
        gamma_phi: damping.gamma_phi_mhz() * TWO_PI,
        n_fock_1: 3,
        n_fock_b: 3,
        n_fock_2: 3,
    };
    ScenarioConfig {
        model: ModelParams::Double(p),
        grid: None,
        time: crate::config::TimeGrid {
            t_max: 2.0,
            samples: 400,
        },
        initial,
        n_traj: 25,
        seed: 1,
        method,
        solver: Default::default(),
    }
}

/// Maximal contiguous interval (by sample count) in which at least two of
/// the three mode-entanglement parameters exceed `threshold`
/// simultaneously. Returns the interval bounds in µs.
pub fn w_state_window(
    times: &[f64],
    lambdas: [&[ObsValue]; 3],
    threshold: f64,
) -> Option<(f64, f64)> {
    let flags: Vec<bool> = (0..times.len())
        .map(|k| {
            let count = lambdas
                .iter()
                .filter(|l| matches!(l[k], ObsValue::Value(v) if v > threshold))
                .count();
            count >= 2
        })
        .collect();
    let mut best: Option<(usize, usize)> = None;
    let mut run_start = None;
    for (k, &f) in flags.iter().enumerate() {
        match (f, run_start) {
            (true, None) => run_start = Some(k),
            (false, Some(s)) => {
                if best.is_none_or(|(bs, be)| k - 1 - s > be - bs) {
                    best = Some((s, k - 1));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        let e = flags.len() - 1;
        if best.is_none_or(|(bs, be)| e - s > be - bs) {
            best = Some((s, e));
        }
    }
    best.map(|(s, e)| (times[s], times[e]))
}

/// Swap-symmetric cross-check operator for tests: the squeezing operators of
/// the two optical modes (unused by the standard column set).
pub fn optical_schwinger(space: &HilbertSpace) -> Result<(Operator, Operator, Operator)> {
    schwinger_ops(space, "a1", "a2")
}

/// Maximum |n₁(t) − n₂(t)| of a two-ensemble master run, for symmetry checks.
pub fn max_population_asymmetry(series: &EvolutionSeries) -> Option<f64> {
    let n1 = series.get("n_1")?;
    let n2 = series.get("n_2")?;
    let mut worst = 0.0f64;
    for (a, b) in n1.iter().zip(n2) {
        match (a, b) {
            (ObsValue::Value(a), ObsValue::Value(b)) => worst = worst.max((a - b).abs()),
            _ => return None,
        }
    }
    Some(worst)
}

/// Trajectory-averaged density matrix comparison helper: trace distance
/// ½ Σ |eig(ρ₁ − ρ₂)|.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = a - b;
    let sym = (&diff + diff.adjoint()) * C64::new(0.5, 0.0);
    0.5 * crate::linalg::eigvalsh(&sym)
        .iter()
        .map(|v| v.abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_window_finds_longest_run() {
        let times: Vec<f64> = (0..8).map(|k| k as f64 * 0.1).collect();
        let v = |x: f64| ObsValue::Value(x);
        let l1 = vec![
            v(0.0),
            v(1.0),
            v(1.0),
            v(0.0),
            v(1.0),
            v(1.0),
            v(1.0),
            v(0.0),
        ];
        let l2 = vec![
            v(0.0),
            v(1.0),
            v(1.0),
            v(0.0),
            v(1.0),
            v(1.0),
            v(1.0),
            v(0.0),
        ];
        let l3 = vec![v(0.0); 8];
        let win = w_state_window(&times, [&l1, &l2, &l3], 0.5).unwrap();
        assert!((win.0 - 0.4).abs() < 1e-12);
        assert!((win.1 - 0.6).abs() < 1e-12);
    }

    #[test]
    fn w_window_none_when_single_lambda() {
        let times: Vec<f64> = (0..4).map(|k| k as f64).collect();
        let v = |x: f64| ObsValue::Value(x);
        let l1 = vec![v(1.0); 4];
        let l2 = vec![v(0.0); 4];
        let l3 = vec![ObsValue::Undefined; 4];
        assert!(w_state_window(&times, [&l1, &l2, &l3], 0.5).is_none());
    }

    #[test]
    fn steady_cell_g_zero_decouples_atom() {
        // The qubit couples only through g; at g = 0 with no qubit drive its
        // steady state is the ground state. Oracle: bare-qubit relaxation.
        let cfg = steady_sweep_default();
        let base = match &cfg.model {
            ModelParams::Single(p) => p.clone(),
            _ => unreachable!(),
        };
        let cell = steady_cell(&base, 1.0 * TWO_PI, 0.0).unwrap();
        let see = cell.observables.get("sigma_ee").unwrap().value().unwrap();
        assert!(see.abs() < 1e-10, "sigma_ee = {see:.3e}");
        assert!(cell.observables.get("lambda_ab").unwrap().is_defined());
    }

    #[test]
    fn steady_cell_far_detuned_bounded_by_empty_cavity() {
        // Far off every branch the populations stay below the detuned
        // empty-cavity value E²/(Δ² + κ²/4) with margin.
        let cfg = steady_sweep_default();
        let base = match &cfg.model {
            ModelParams::Single(p) => p.clone(),
            _ => unreachable!(),
        };
        let delta = -5.0 * TWO_PI;
        let cell = steady_cell(&base, delta, 0.0).unwrap();
        let n_a = cell.observables.get("n_a").unwrap().value().unwrap();
        let n_b = cell.observables.get("n_b").unwrap().value().unwrap();
        // Nearest branch at g = 0 sits at δ = −J, distance 4·2π.
        let dist = (delta + J_MHZ * TWO_PI).abs();
        let kappa = base.kappa_a;
        let e = base.drive_a;
        let bound = e * e / (dist * dist + kappa * kappa / 4.0) * 1.5;
        assert!(n_a < bound, "n_a = {n_a:.3e} vs bound {bound:.3e}");
        assert!(n_b < bound, "n_b = {n_b:.3e} vs bound {bound:.3e}");
    }

    #[test]
    fn small_sweep_shape_and_diagnostics() {
        let mut cfg = steady_sweep_default();
        cfg.grid = Some(crate::config::GridSpec {
            delta: crate::config::AxisSpec {
                start: -1.0,
                stop: 1.0,
                count: 3,
            },
            g: crate::config::AxisSpec {
                start: 0.0,
                stop: 2.0,
                count: 2,
            },
        });
        let grid = run_steady_sweep(&cfg).unwrap();
        assert_eq!(grid.cells.len(), 6);
        assert_eq!(grid.failures, 0);
        for cell in &grid.cells {
            let d = cell.diagnostics.unwrap();
            assert!(d.residual_inf < 1e-9);
            assert!(d.trace_error < 1e-10);
            assert!(d.min_eigenvalue > -1e-9);
        }
        let table = grid.to_table();
        assert_eq!(table.header().len(), 15);
        assert_eq!(table.rows().len(), 6);
    }

    #[test]
    fn provenance_regenerates_cells() {
        let mut cfg = steady_sweep_default();
        cfg.grid = Some(crate::config::GridSpec {
            delta: crate::config::AxisSpec {
                start: 0.0,
                stop: 1.0,
                count: 2,
            },
            g: crate::config::AxisSpec {
                start: 0.5,
                stop: 1.0,
                count: 2,
            },
        });
        let grid = run_steady_sweep(&cfg).unwrap();
        let reparsed = ScenarioConfig::from_text(&grid.provenance.config_echo, "echo.cfg").unwrap();
        let regenerated = run_steady_sweep(&reparsed).unwrap();
        for (a, b) in grid.cells.iter().zip(&regenerated.cells) {
            for name in STEADY_OBSERVABLES {
                assert_eq!(a.observables.get(name), b.observables.get(name));
            }
        }
    }
}
