//! Plain-text scenario configuration: flat `key = value` entries grouped in
//! `[section]` blocks, `#` comments. Frequencies are given as ν = ω/2π in
//! MHz and times in µs; the single unit conversion (×2π) to the internal
//! angular rad/µs happens here.
//!
//! Unknown keys are rejected with the key and line named, so typos cannot
//! silently fall back to defaults.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hilbert::AtomState;
use crate::models::{MicroscopicParams, SingleEnsembleParams, TwoEnsembleParams};
use crate::TWO_PI;

/// Parsed but untyped config file: sections of key/value/line triples.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    source: String,
    sections: Vec<RawSection>,
}

#[derive(Debug, Clone)]
struct RawSection {
    name: String,
    line: usize,
    entries: Vec<(String, String, usize)>,
}

impl RawConfig {
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut cfg = RawConfig {
            source: source_name.to_string(),
            sections: Vec::new(),
        };
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| Error::Config {
                    location: format!("{source_name}:{line_no}"),
                    message: format!("malformed section header '{raw_line}'"),
                })?;
                cfg.sections.push(RawSection {
                    name: name.trim().to_string(),
                    line: line_no,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                location: format!("{source_name}:{line_no}"),
                message: format!("expected 'key = value', found '{line}'"),
            })?;
            let section = cfg.sections.last_mut().ok_or_else(|| Error::Config {
                location: format!("{source_name}:{line_no}"),
                message: "entry before any [section] header".into(),
            })?;
            section
                .entries
                .push((key.trim().to_string(), value.trim().to_string(), line_no));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    fn section(&self, name: &str) -> Option<SectionView<'_>> {
        self.sections
            .iter()
            .find(|s| s.name == name)
            .map(|s| SectionView {
                source: &self.source,
                section: s,
                used: BTreeSet::new(),
            })
    }

    fn require(&self, name: &str) -> Result<SectionView<'_>> {
        self.section(name).ok_or_else(|| Error::Config {
            location: self.source.clone(),
            message: format!("missing [{name}] section"),
        })
    }

    fn has_section(&self, name: &str) -> bool {
        self.sections.iter().any(|s| s.name == name)
    }

    fn check_sections(&self, allowed: &[&str]) -> Result<()> {
        for s in &self.sections {
            if !allowed.contains(&s.name.as_str()) {
                return Err(Error::Config {
                    location: format!("{}:{}", self.source, s.line),
                    message: format!("unknown section [{}]", s.name),
                });
            }
        }
        Ok(())
    }
}

/// Typed accessor over one section; tracks key usage so leftovers can be
/// reported as unknown keys.
struct SectionView<'a> {
    source: &'a str,
    section: &'a RawSection,
    used: BTreeSet<usize>,
}

impl<'a> SectionView<'a> {
    fn lookup(&mut self, key: &str) -> Option<&'a str> {
        for (i, (k, v, _)) in self.section.entries.iter().enumerate() {
            if k == key {
                self.used.insert(i);
                return Some(v.as_str());
            }
        }
        None
    }

    fn err(&self, key: &str, message: String) -> Error {
        let line = self
            .section
            .entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, _, l)| *l)
            .unwrap_or(self.section.line);
        Error::Config {
            location: format!("{}:{line}", self.source),
            message,
        }
    }

    fn f64(&mut self, key: &str) -> Result<f64> {
        let v = self.lookup(key).ok_or_else(|| {
            self.err(
                key,
                format!("missing key '{key}' in [{}]", self.section.name),
            )
        })?;
        v.parse::<f64>()
            .map_err(|_| self.err(key, format!("key '{key}': cannot parse '{v}' as a number")))
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.lookup(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| self.err(key, format!("key '{key}': cannot parse '{v}' as a number"))),
        }
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Result<usize> {
        match self.lookup(key) {
            None => Ok(default),
            Some(v) => v.parse::<usize>().map_err(|_| {
                self.err(
                    key,
                    format!("key '{key}': cannot parse '{v}' as an integer"),
                )
            }),
        }
    }

    fn u64_or(&mut self, key: &str, default: u64) -> Result<u64> {
        match self.lookup(key) {
            None => Ok(default),
            Some(v) => v.parse::<u64>().map_err(|_| {
                self.err(
                    key,
                    format!("key '{key}': cannot parse '{v}' as an integer"),
                )
            }),
        }
    }

    fn string(&mut self, key: &str) -> Result<String> {
        self.lookup(key).map(str::to_string).ok_or_else(|| {
            self.err(
                key,
                format!("missing key '{key}' in [{}]", self.section.name),
            )
        })
    }

    fn string_or(&mut self, key: &str, default: &str) -> String {
        self.lookup(key)
            .map(str::to_string)
            .unwrap_or_else(|| default.to_string())
    }

    /// Fail on any key never looked up.
    fn finish(self) -> Result<()> {
        for (i, (k, _, line)) in self.section.entries.iter().enumerate() {
            if !self.used.contains(&i) {
                return Err(Error::Config {
                    location: format!("{}:{line}", self.source),
                    message: format!("unknown key '{k}' in [{}]", self.section.name),
                });
            }
        }
        Ok(())
    }
}

/// Which effective model a scenario runs.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    Single(SingleEnsembleParams),
    Double(TwoEnsembleParams),
}

/// Inclusive linear axis (values in MHz in the file, stored in rad/µs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|k| self.start + (self.stop - self.start) * k as f64 / (self.count - 1) as f64)
            .collect()
    }

    fn parse(text: &str) -> Option<Self> {
        let mut it = text.split(':');
        let start = it.next()?.trim().parse::<f64>().ok()?;
        let stop = it.next()?.trim().parse::<f64>().ok()?;
        let count = it.next()?.trim().parse::<usize>().ok()?;
        if it.next().is_some() || count < 2 {
            return None;
        }
        Some(Self { start, stop, count })
    }
}

/// (δ, g) sweep axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub delta: AxisSpec,
    pub g: AxisSpec,
}

/// Uniform sample-time grid from 0 to `t_max` (µs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub samples: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        (0..self.samples)
            .map(|k| self.t_max * k as f64 / (self.samples - 1) as f64)
            .collect()
    }
}

/// Initial pure product state: photon occupations per mode plus atom state.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    pub occupations: Vec<usize>,
    pub atom: AtomState,
}

impl InitialState {
    fn parse(text: &str) -> Option<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let (last, occ) = parts.split_last()?;
        let atom = match *last {
            "g" => AtomState::G,
            "e" => AtomState::E,
            _ => return None,
        };
        let occupations = occ
            .iter()
            .map(|p| p.parse::<usize>().ok())
            .collect::<Option<Vec<_>>>()?;
        Some(Self { occupations, atom })
    }

    fn to_text(&self) -> String {
        let mut parts: Vec<String> = self.occupations.iter().map(|o| o.to_string()).collect();
        parts.push(match self.atom {
            AtomState::G => "g".into(),
            AtomState::E => "e".into(),
        });
        parts.join(",")
    }
}

/// Integration control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub rtol: f64,
    pub atol: f64,
    /// When set, use fixed-step RK4 with this step (µs) instead of the
    /// adaptive pair.
    pub fixed_step: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            fixed_step: None,
        }
    }
}

impl SolverConfig {
    pub fn integrator(&self) -> crate::dynamics::Integrator {
        match self.fixed_step {
            Some(dt) => crate::dynamics::Integrator::FixedRk4 { dt },
            None => crate::dynamics::Integrator::DormandPrince {
                rtol: self.rtol,
                atol: self.atol,
            },
        }
    }
}

/// How a two-ensemble evolution is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionMethod {
    Master,
    Trajectories,
}

/// A full scenario definition: model parameters, sweep or time grid, initial
/// state, trajectory controls and solver tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub model: ModelParams,
    pub grid: Option<GridSpec>,
    pub time: TimeGrid,
    pub initial: InitialState,
    pub n_traj: usize,
    pub seed: u64,
    pub method: EvolutionMethod,
    pub solver: SolverConfig,
}

impl ScenarioConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::from_raw(&RawConfig::from_file(path)?)
    }

    pub fn from_text(text: &str, source_name: &str) -> Result<Self> {
        Self::from_raw(&RawConfig::parse(text, source_name)?)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        raw.check_sections(&["model", "grid", "time", "initial", "solver", "trajectories"])?;
        let mut model = raw.require("model")?;
        let kind = model.string("kind")?;
        let to_ang = TWO_PI; // ν in MHz → ω in rad/µs
        let kappa_scale = model.f64_or("kappa_scale", 1.0)?;

        let params = match kind.as_str() {
            "single" => {
                let p = SingleEnsembleParams {
                    delta: model.f64_or("delta_mhz", 0.0)? * to_ang,
                    delta_b: model.f64_or("delta_b_mhz", 0.0)? * to_ang,
                    g: model.f64("g_mhz")? * to_ang,
                    j: model.f64("j_mhz")? * to_ang,
                    drive_a: model.f64_or("drive_a_mhz", 0.0)? * to_ang,
                    drive_b: model.f64_or("drive_b_mhz", 0.0)? * to_ang,
                    kappa_a: model.f64_or("kappa_a_mhz", 0.0)? * to_ang * kappa_scale,
                    kappa_b: model.f64_or("kappa_b_mhz", 0.0)? * to_ang * kappa_scale,
                    gamma_1: model.f64_or("gamma1_mhz", 0.0)? * to_ang,
                    gamma_phi: model.f64_or("gamma_phi_mhz", 0.0)? * to_ang,
                    n_fock_a: model.usize_or("n_fock_a", 4)?,
                    n_fock_b: model.usize_or("n_fock_b", 4)?,
                };
                p.validate()?;
                ModelParams::Single(p)
            }
            "double" => {
                let p = TwoEnsembleParams {
                    delta: model.f64_or("delta_mhz", 0.0)? * to_ang,
                    delta_b: model.f64_or("delta_b_mhz", 0.0)? * to_ang,
                    g: model.f64("g_mhz")? * to_ang,
                    j_1: model.f64("j1_mhz")? * to_ang,
                    j_2: model.f64("j2_mhz")? * to_ang,
                    drive_1: model.f64_or("drive_1_mhz", 0.0)? * to_ang,
                    drive_2: model.f64_or("drive_2_mhz", 0.0)? * to_ang,
                    drive_b: model.f64_or("drive_b_mhz", 0.0)? * to_ang,
                    kappa_1: model.f64_or("kappa_1_mhz", 0.0)? * to_ang * kappa_scale,
                    kappa_2: model.f64_or("kappa_2_mhz", 0.0)? * to_ang * kappa_scale,
                    kappa_b: model.f64_or("kappa_b_mhz", 0.0)? * to_ang * kappa_scale,
                    gamma_1: model.f64_or("gamma1_mhz", 0.0)? * to_ang,
                    gamma_phi: model.f64_or("gamma_phi_mhz", 0.0)? * to_ang,
                    n_fock_1: model.usize_or("n_fock_1", 3)?,
                    n_fock_b: model.usize_or("n_fock_b", 3)?,
                    n_fock_2: model.usize_or("n_fock_2", 3)?,
                };
                p.validate()?;
                ModelParams::Double(p)
            }
            other => {
                return Err(model.err(
                    "kind",
                    format!("kind must be 'single' or 'double', got '{other}'"),
                ))
            }
        };
        model.finish()?;

        let grid = if raw.has_section("grid") {
            let mut g = raw.require("grid")?;
            let delta_text = g.string("delta_mhz")?;
            let delta = AxisSpec::parse(&delta_text).ok_or_else(|| {
                g.err(
                    "delta_mhz",
                    format!("expected 'start:stop:count', got '{delta_text}'"),
                )
            })?;
            let g_text = g.string("g_mhz")?;
            let gax = AxisSpec::parse(&g_text).ok_or_else(|| {
                g.err(
                    "g_mhz",
                    format!("expected 'start:stop:count', got '{g_text}'"),
                )
            })?;
            g.finish()?;
            Some(GridSpec { delta, g: gax })
        } else {
            None
        };

        let time = if raw.has_section("time") {
            let mut t = raw.require("time")?;
            let t_max = t.f64("t_max_us")?;
            let samples = t.usize_or("samples", 400)?;
            t.finish()?;
            if t_max <= 0.0 || samples < 2 {
                return Err(Error::Config {
                    location: raw.source.clone(),
                    message: "time grid needs t_max_us > 0 and samples >= 2".into(),
                });
            }
            TimeGrid { t_max, samples }
        } else {
            TimeGrid {
                t_max: 2.0,
                samples: 400,
            }
        };

        let initial = if raw.has_section("initial") {
            let mut i = raw.require("initial")?;
            let text = i.string("state")?;
            let parsed = InitialState::parse(&text).ok_or_else(|| {
                i.err(
                    "state",
                    format!("expected occupations plus atom state like '1,1,g', got '{text}'"),
                )
            })?;
            i.finish()?;
            parsed
        } else {
            match &params {
                ModelParams::Single(_) => InitialState {
                    occupations: vec![0, 0],
                    atom: AtomState::G,
                },
                ModelParams::Double(_) => InitialState {
                    occupations: vec![0, 0, 0],
                    atom: AtomState::G,
                },
            }
        };
        let expected_modes = match &params {
            ModelParams::Single(_) => 2,
            ModelParams::Double(_) => 3,
        };
        if initial.occupations.len() != expected_modes {
            return Err(Error::Config {
                location: raw.source.clone(),
                message: format!(
                    "initial state has {} occupations, model has {expected_modes} modes",
                    initial.occupations.len()
                ),
            });
        }

        let mut solver = SolverConfig::default();
        if raw.has_section("solver") {
            let mut s = raw.require("solver")?;
            solver.rtol = s.f64_or("rtol", solver.rtol)?;
            solver.atol = s.f64_or("atol", solver.atol)?;
            let fixed = s.f64_or("fixed_step_us", 0.0)?;
            solver.fixed_step = (fixed > 0.0).then_some(fixed);
            s.finish()?;
        }

        let (mut n_traj, mut seed, mut method) = (25usize, 1u64, EvolutionMethod::Trajectories);
        if raw.has_section("trajectories") {
            let mut t = raw.require("trajectories")?;
            n_traj = t.usize_or("n_traj", n_traj)?;
            seed = t.u64_or("seed", seed)?;
            method = match t.string_or("method", "trajectories").as_str() {
                "trajectories" => EvolutionMethod::Trajectories,
                "master" => EvolutionMethod::Master,
                other => {
                    return Err(t.err(
                        "method",
                        format!("method must be 'trajectories' or 'master', got '{other}'"),
                    ))
                }
            };
            t.finish()?;
        }

        Ok(ScenarioConfig {
            model: params,
            grid,
            time,
            initial,
            n_traj,
            seed,
            method,
            solver,
        })
    }

    /// Canonical config text; parsing it reproduces `self` exactly. Used as
    /// the provenance block of results.
    pub fn to_config_text(&self) -> String {
        use std::fmt::Write;
        let from_ang = 1.0 / TWO_PI;
        let mut s = String::new();
        match &self.model {
            ModelParams::Single(p) => {
                let _ = writeln!(s, "[model]");
                let _ = writeln!(s, "kind = single");
                let _ = writeln!(s, "delta_mhz = {}", p.delta * from_ang);
                let _ = writeln!(s, "delta_b_mhz = {}", p.delta_b * from_ang);
                let _ = writeln!(s, "g_mhz = {}", p.g * from_ang);
                let _ = writeln!(s, "j_mhz = {}", p.j * from_ang);
                let _ = writeln!(s, "drive_a_mhz = {}", p.drive_a * from_ang);
                let _ = writeln!(s, "drive_b_mhz = {}", p.drive_b * from_ang);
                let _ = writeln!(s, "kappa_a_mhz = {}", p.kappa_a * from_ang);
                let _ = writeln!(s, "kappa_b_mhz = {}", p.kappa_b * from_ang);
                let _ = writeln!(s, "gamma1_mhz = {}", p.gamma_1 * from_ang);
                let _ = writeln!(s, "gamma_phi_mhz = {}", p.gamma_phi * from_ang);
                let _ = writeln!(s, "n_fock_a = {}", p.n_fock_a);
                let _ = writeln!(s, "n_fock_b = {}", p.n_fock_b);
            }
            ModelParams::Double(p) => {
                let _ = writeln!(s, "[model]");
                let _ = writeln!(s, "kind = double");
                let _ = writeln!(s, "delta_mhz = {}", p.delta * from_ang);
                let _ = writeln!(s, "delta_b_mhz = {}", p.delta_b * from_ang);
                let _ = writeln!(s, "g_mhz = {}", p.g * from_ang);
                let _ = writeln!(s, "j1_mhz = {}", p.j_1 * from_ang);
                let _ = writeln!(s, "j2_mhz = {}", p.j_2 * from_ang);
                let _ = writeln!(s, "drive_1_mhz = {}", p.drive_1 * from_ang);
                let _ = writeln!(s, "drive_2_mhz = {}", p.drive_2 * from_ang);
                let _ = writeln!(s, "drive_b_mhz = {}", p.drive_b * from_ang);
                let _ = writeln!(s, "kappa_1_mhz = {}", p.kappa_1 * from_ang);
                let _ = writeln!(s, "kappa_2_mhz = {}", p.kappa_2 * from_ang);
                let _ = writeln!(s, "kappa_b_mhz = {}", p.kappa_b * from_ang);
                let _ = writeln!(s, "gamma1_mhz = {}", p.gamma_1 * from_ang);
                let _ = writeln!(s, "gamma_phi_mhz = {}", p.gamma_phi * from_ang);
                let _ = writeln!(s, "n_fock_1 = {}", p.n_fock_1);
                let _ = writeln!(s, "n_fock_b = {}", p.n_fock_b);
                let _ = writeln!(s, "n_fock_2 = {}", p.n_fock_2);
            }
        }
        if let Some(grid) = &self.grid {
            let _ = writeln!(s, "[grid]");
            let _ = writeln!(
                s,
                "delta_mhz = {}:{}:{}",
                grid.delta.start, grid.delta.stop, grid.delta.count
            );
            let _ = writeln!(
                s,
                "g_mhz = {}:{}:{}",
                grid.g.start, grid.g.stop, grid.g.count
            );
        }
        let _ = writeln!(s, "[time]");
        let _ = writeln!(s, "t_max_us = {}", self.time.t_max);
        let _ = writeln!(s, "samples = {}", self.time.samples);
        let _ = writeln!(s, "[initial]");
        let _ = writeln!(s, "state = {}", self.initial.to_text());
        let _ = writeln!(s, "[solver]");
        let _ = writeln!(s, "rtol = {}", self.solver.rtol);
        let _ = writeln!(s, "atol = {}", self.solver.atol);
        if let Some(dt) = self.solver.fixed_step {
            let _ = writeln!(s, "fixed_step_us = {dt}");
        }
        let _ = writeln!(s, "[trajectories]");
        let _ = writeln!(s, "n_traj = {}", self.n_traj);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(
            s,
            "method = {}",
            match self.method {
                EvolutionMethod::Trajectories => "trajectories",
                EvolutionMethod::Master => "master",
            }
        );
        s
    }
}

/// Config for the coefficient pipeline: a single `[microscopic]` section.
pub fn microscopic_from_text(text: &str, source_name: &str) -> Result<MicroscopicParams> {
    let raw = RawConfig::parse(text, source_name)?;
    raw.check_sections(&["microscopic"])?;
    let mut m = raw.require("microscopic")?;
    let to_ang = TWO_PI;
    let p = MicroscopicParams::from_detunings(
        m.f64("rabi_mhz")? * to_ang,
        m.f64_or("delta_mhz", 0.0)? * to_ang,
        m.f64_or("delta_a_mhz", 0.0)? * to_ang,
        m.f64_or("delta_b_mhz", 0.0)? * to_ang,
        m.f64_or("omega_spin_b_mhz", 0.0)? * to_ang,
        m.f64("g_a_mhz")? * to_ang,
        m.f64("g_b_mhz")? * to_ang,
        m.f64_or("g_mhz", 0.0)? * to_ang,
        m.f64_or("probe_a_mhz", 0.0)? * to_ang,
        m.f64_or("drive_b_mhz", 0.0)? * to_ang,
        m.f64_or("omega_0_mhz", 0.0)? * to_ang,
    );
    m.finish()?;
    Ok(p)
}

pub fn microscopic_from_file(path: &std::path::Path) -> Result<MicroscopicParams> {
    let text = std::fs::read_to_string(path)?;
    microscopic_from_text(&text, &path.display().to_string())
}
