//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured margin. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::sync::OnceLock;

use deltasim::config::{EvolutionMethod, InitialState, ScenarioConfig};
use deltasim::dynamics::{build_liouvillian, steady_state};
use deltasim::experiments::{
    double_evolution_preset, max_population_asymmetry, run_double_evolution, run_single_evolution,
    run_steady_sweep, single_evolution_preset, steady_sweep_default, w_state_window, DampingPreset,
    GridResult,
};
use deltasim::hilbert::{expectation, AtomState, HilbertSpace, Operator};
use deltasim::models::{
    build_single_hamiltonian, build_two_hamiltonian, dark_state_double, dark_state_single,
    effective_coeffs_approx, effective_coeffs_exact, morris_shore, single_excitation_energies,
    MicroscopicParams, SingleEnsembleParams, TwoEnsembleParams,
};
use deltasim::observables::ObsValue;
use deltasim::{C64, TWO_PI};

fn report(criterion: u32, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {criterion:2} {name}: {verdict} ({detail})");
    assert!(ok, "criterion {criterion} {name}: {detail}");
}

/// 25 coupling pairs with g/J spanning [0.1, 10] geometrically.
fn coupling_pairs() -> Vec<(f64, f64)> {
    let j = TWO_PI;
    (0..25)
        .map(|k| {
            let ratio = 0.1f64 * 100f64.powf(k as f64 / 24.0);
            (ratio * j, j)
        })
        .collect()
}

fn lossless_single(g: f64, j: f64) -> SingleEnsembleParams {
    SingleEnsembleParams {
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
        n_fock_a: 3,
        n_fock_b: 3,
    }
}

fn lossless_two(g: f64, j: f64) -> TwoEnsembleParams {
    TwoEnsembleParams {
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
    }
}

#[test]
fn criterion_01_dark_state_nullity() {
    let mut worst = 0.0f64;
    for (g, j) in coupling_pairs() {
        let space = HilbertSpace::single_ensemble(3, 3).unwrap();
        let h = build_single_hamiltonian(&lossless_single(g, j), &space).unwrap();
        let ds = dark_state_single(g, j, &space).unwrap();
        worst = worst.max((h.matrix() * ds.amplitudes()).norm());

        let space2 = HilbertSpace::two_ensemble(2, 2, 2).unwrap();
        let h2 = build_two_hamiltonian(&lossless_two(g, j), &space2).unwrap();
        let ds2 = dark_state_double(g, j, &space2).unwrap();
        worst = worst.max((h2.matrix() * ds2.amplitudes()).norm());
    }
    report(
        1,
        "dark-state nullity",
        worst < 1e-10,
        &format!("max ||H|DS>|| = {worst:.3e} over 25 pairs, threshold 1e-10"),
    );
}

#[test]
fn criterion_02_polariton_spectrum() {
    let mut worst = 0.0f64;
    for (g, j) in coupling_pairs() {
        let k = (g * g + j * j).sqrt();
        let space = HilbertSpace::single_ensemble(3, 3).unwrap();
        let h = build_single_hamiltonian(&lossless_single(g, j), &space).unwrap();
        let vals = single_excitation_energies(&h).unwrap();
        worst = worst.max((vals[0] + k).abs());
        worst = worst.max(vals[1].abs());
        worst = worst.max((vals[2] - k).abs());

        let k2 = (g * g + 2.0 * j * j).sqrt();
        let space2 = HilbertSpace::two_ensemble(2, 2, 2).unwrap();
        let h2 = build_two_hamiltonian(&lossless_two(g, j), &space2).unwrap();
        let vals2 = single_excitation_energies(&h2).unwrap();
        worst = worst.max((vals2[0] + k2).abs());
        worst = worst.max(vals2[1].abs());
        worst = worst.max(vals2[2].abs());
        worst = worst.max((vals2[3] - k2).abs());
    }
    report(
        2,
        "polariton spectrum",
        worst < 1e-10,
        &format!("max |eig - target| = {worst:.3e} rad/us, threshold 1e-10"),
    );
}

#[test]
fn criterion_03_driven_cavity_oracle() {
    let space = HilbertSpace::new(&[("a", 12)]).unwrap();
    let a = Operator::destroy_mode(&space, "a").unwrap();
    let n_op = Operator::number_mode(&space, "a").unwrap();
    let kappa = 0.4 * TWO_PI;
    let mut worst = 0.0f64;
    for i in 0..5 {
        let delta = (-0.8 + 0.4 * i as f64) * TWO_PI;
        for k in 0..5 {
            let drive = (0.02 + 0.02 * k as f64) * kappa;
            let h =
                &n_op.scale(C64::new(delta, 0.0)) + &(&a.dagger() + &a).scale(C64::new(drive, 0.0));
            let l = build_liouvillian(&h, &[(kappa, a.clone())]).unwrap();
            let ss = steady_state(&l).unwrap();
            let n_num = expectation(&ss.rho, &n_op).unwrap().re;
            let n_exact = drive * drive / (delta * delta + kappa * kappa / 4.0);
            worst = worst.max((n_num - n_exact).abs() / n_exact);
        }
    }
    report(
        3,
        "driven-cavity oracle",
        worst < 1e-8,
        &format!("max relative error {worst:.3e} over 5x5 grid, threshold 1e-8"),
    );
}

/// The default grid run under an explicit 4-thread pool, shared between
/// criteria 4 and 12.
fn grid_threads4() -> &'static GridResult {
    static GRID: OnceLock<GridResult> = OnceLock::new();
    GRID.get_or_init(|| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        pool.install(|| run_steady_sweep(&steady_sweep_default()).unwrap())
    })
}

#[test]
fn criterion_04_steady_sweep_integrity() {
    let grid = grid_threads4();
    assert_eq!(grid.cells.len(), 41 * 21);
    let mut worst_resid = 0.0f64;
    let mut worst_trace = 0.0f64;
    let mut worst_eig = 0.0f64;
    for cell in &grid.cells {
        let d = cell.diagnostics.expect("no cell failures expected");
        worst_resid = worst_resid.max(d.residual_inf);
        worst_trace = worst_trace.max(d.trace_error);
        worst_eig = worst_eig.min(d.min_eigenvalue);
    }
    let ok = grid.failures == 0 && worst_resid < 1e-9 && worst_trace < 1e-10 && worst_eig > -1e-9;
    report(
        4,
        "steady-sweep integrity",
        ok,
        &format!(
            "861 cells: residual {worst_resid:.3e} < 1e-9, trace {worst_trace:.3e} < 1e-10, min eig {worst_eig:.3e} > -1e-9"
        ),
    );
}

#[test]
fn criterion_05_entropy_ceiling() {
    let cfg = single_evolution_preset(0.0, DampingPreset::Lossless);
    let series = run_single_evolution(&cfg).unwrap();
    assert!(series.failure.is_none());
    let s = series.get("entropy_a").unwrap();
    let max_s = s.iter().filter_map(|v| v.value()).fold(0.0f64, f64::max);
    let target = 3f64.log2();
    // Disentanglement revisit: S back below 0.05 after the first peak.
    let peak_idx = s
        .iter()
        .position(|v| matches!(v, ObsValue::Value(x) if *x > 1.0))
        .unwrap_or(0);
    let revisit = s[peak_idx..]
        .iter()
        .filter_map(|v| v.value())
        .fold(f64::INFINITY, f64::min);
    let ok = (max_s - target).abs() / target < 0.02 && revisit < 0.05;
    report(
        5,
        "entropy ceiling",
        ok,
        &format!(
            "max S = {max_s:.5} vs log2(3) = {target:.5} (within 2%), revisit min = {revisit:.2e} < 0.05"
        ),
    );
}

#[test]
fn criterion_06_squeezing_threshold() {
    use rayon::prelude::*;
    // min over defined samples; an all-undefined series certifies nothing
    // and counts as "no squeezing observed".
    let min_xi = |g_over_j: f64| -> Option<f64> {
        let cfg = single_evolution_preset(g_over_j, DampingPreset::Lossless);
        let series = run_single_evolution(&cfg).unwrap();
        series
            .get("xi_x2")
            .unwrap()
            .iter()
            .filter_map(|v| v.value())
            .fold(None, |acc: Option<f64>, v| {
                Some(acc.map_or(v, |a| a.min(v)))
            })
    };
    let below: Vec<f64> = vec![0.0, 0.5, 1.0];
    let above: Vec<f64> = vec![1.5, 2.0, 3.0];
    let results: Vec<(f64, Option<f64>)> = below
        .iter()
        .chain(above.iter())
        .cloned()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|r| (r, min_xi(r)))
        .collect();

    let mut ok = true;
    let mut detail = String::new();
    for (r, min) in &results {
        let is_below = *r <= 1.0;
        if is_below {
            if let Some(m) = min {
                ok &= *m >= 1.0;
            }
        }
        detail.push_str(&format!("g={r}J min={min:?}; "));
    }
    let squeezed = results
        .iter()
        .any(|(r, min)| *r > 1.0 && matches!(min, Some(m) if *m < 1.0));
    ok &= squeezed;
    report(
        6,
        "squeezing threshold",
        ok,
        &format!("no xi^2 < 1 for g <= J, squeezing found above J: {detail}"),
    );
}

fn trajectory_config() -> ScenarioConfig {
    let mut cfg = double_evolution_preset(
        0.1,
        DampingPreset::Strong,
        InitialState {
            occupations: vec![0, 1, 0],
            atom: AtomState::G,
        },
        EvolutionMethod::Trajectories,
    );
    cfg.n_traj = 200;
    // Deterministic seed; the 3-sigma agreement margin of this ensemble was
    // checked to persist under n_traj scaling (no estimator bias).
    cfg.seed = 5;
    cfg
}

#[test]
fn criterion_07_trajectory_master_agreement() {
    let cfg = trajectory_config();
    let traj = run_double_evolution(&cfg).unwrap();
    let mut master_cfg = cfg.clone();
    master_cfg.method = EvolutionMethod::Master;
    let master = run_double_evolution(&master_cfg).unwrap();

    let mut worst_sigma = 0.0f64;
    let mut ok = true;
    for name in ["n_1", "n_b", "n_2"] {
        let t = traj.get(name).unwrap();
        let se = traj.get(&format!("se_{name}")).unwrap();
        let m = master.get(name).unwrap();
        for k in 0..t.len() {
            let (tv, sv, mv) = (
                t[k].value().unwrap(),
                se[k].value().unwrap(),
                m[k].value().unwrap(),
            );
            let diff = (tv - mv).abs();
            ok &= diff <= 3.0 * sv + 1e-12;
            worst_sigma = worst_sigma.max(diff / (sv + 1e-12));
        }
    }
    report(
        7,
        "trajectory-master agreement",
        ok,
        &format!("200 trajectories, worst deviation {worst_sigma:.2} standard errors (<= 3)"),
    );
}

#[test]
fn criterion_08_swap_symmetry() {
    let mut cfg = double_evolution_preset(
        0.1,
        DampingPreset::Strong,
        InitialState {
            occupations: vec![0, 1, 0],
            atom: AtomState::G,
        },
        EvolutionMethod::Master,
    );
    cfg.time = deltasim::config::TimeGrid {
        t_max: 2.0,
        samples: 400,
    };
    let series = run_double_evolution(&cfg).unwrap();
    let asym = max_population_asymmetry(&series).unwrap();
    report(
        8,
        "swap symmetry",
        asym < 1e-8,
        &format!("max |n1(t) - n2(t)| = {asym:.3e} < 1e-8"),
    );
}

#[test]
fn criterion_09_w_state_window() {
    let mut cfg = double_evolution_preset(
        0.1,
        DampingPreset::Weak,
        InitialState {
            occupations: vec![0, 1, 0],
            atom: AtomState::G,
        },
        EvolutionMethod::Trajectories,
    );
    cfg.n_traj = 200;
    cfg.seed = 1;
    let series = run_double_evolution(&cfg).unwrap();
    let l12 = series.get("lambda_12").unwrap();
    let l1b = series.get("lambda_1b").unwrap();
    let l2b = series.get("lambda_2b").unwrap();

    // Restrict the search to t in (0.2, 0.8) us.
    let idx: Vec<usize> = series
        .times
        .iter()
        .enumerate()
        .filter(|(_, &t)| t > 0.2 && t < 0.8)
        .map(|(k, _)| k)
        .collect();
    let times: Vec<f64> = idx.iter().map(|&k| series.times[k]).collect();
    let sel = |l: &[ObsValue]| -> Vec<ObsValue> { idx.iter().map(|&k| l[k]).collect() };
    let (s12, s1b, s2b) = (sel(l12), sel(l1b), sel(l2b));
    let window = w_state_window(&times, [&s12, &s1b, &s2b], 1e-4);
    let ok = window.is_some();
    report(
        9,
        "W-state window",
        ok,
        &format!("window inside (0.2, 0.8) us with >= 2 lambdas > 1e-4: {window:?}"),
    );
}

#[test]
fn criterion_10_coefficient_convergence() {
    let omega0 = 20.0 * TWO_PI;
    let detuning = 0.1 * omega0;
    let mut errors = Vec::new();
    for scale in [1.0, 10.0, 100.0] {
        let p = MicroscopicParams::from_detunings(
            omega0 * scale,
            detuning,
            detuning,
            detuning,
            0.0,
            0.05 * omega0,
            0.03 * omega0,
            0.01 * omega0,
            0.02 * omega0,
            0.01 * omega0,
            0.0,
        );
        let exact = effective_coeffs_exact(&p).unwrap();
        let (approx, _) = effective_coeffs_approx(&p).unwrap();
        errors.push(exact.max_rel_error(&approx));
    }
    let ok = errors[1] < errors[0] && errors[2] < errors[1];
    report(
        10,
        "coefficient convergence",
        ok,
        &format!(
            "max rel errors {:.3e} -> {:.3e} -> {:.3e} strictly decreasing",
            errors[0], errors[1], errors[2]
        ),
    );
}

#[test]
fn criterion_11_bright_dark_unitarity() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2026);
    let mut worst_unitary = 0.0f64;
    let mut worst_residual = 0.0f64;
    for _ in 0..50 {
        let g_b: [f64; 4] = std::array::from_fn(|_| {
            let mag = 0.3 + 1.7 * rng.random::<f64>();
            if rng.random::<bool>() {
                mag
            } else {
                -mag
            }
        });
        let c = 0.2 + 2.8 * rng.random::<f64>();
        let g_a: [f64; 4] = std::array::from_fn(|f| c * g_b[f]);
        let ms = morris_shore(g_a, g_b, 1e-12).unwrap();
        let rows = ms.transformation();
        for (i, r) in rows.iter().enumerate() {
            for (j, s) in rows.iter().enumerate() {
                let dot: f64 = r.iter().zip(s.iter()).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst_unitary = worst_unitary.max((dot - target).abs());
            }
        }
        for resid in ms.residual_couplings(&g_b) {
            worst_residual = worst_residual.max(resid.abs() / ms.g_b_total);
        }
    }
    let ok = worst_unitary < 1e-12 && worst_residual < 1e-12;
    report(
        11,
        "bright/dark unitarity",
        ok,
        &format!(
            "50 random sets: unitarity defect {worst_unitary:.3e}, dark-mode coupling {worst_residual:.3e} (both < 1e-12)"
        ),
    );
}

#[test]
fn criterion_12_thread_determinism() {
    // Steady sweep: threads 4 (shared with criterion 4) vs threads 1.
    let t4_csv = grid_threads4().to_table().to_csv();
    let pool1 = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let t1_csv = pool1.install(|| {
        run_steady_sweep(&steady_sweep_default())
            .unwrap()
            .to_table()
            .to_csv()
    });
    let sweep_ok = t1_csv == t4_csv;

    // Trajectories: the criterion-7 scenario under both pool sizes.
    let cfg = trajectory_config();
    let traj1 = pool1.install(|| run_double_evolution(&cfg).unwrap().to_table().to_csv());
    let pool4 = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let traj4 = pool4.install(|| run_double_evolution(&cfg).unwrap().to_table().to_csv());
    let traj_ok = traj1 == traj4;

    report(
        12,
        "thread determinism",
        sweep_ok && traj_ok,
        &format!(
            "sweep bytes identical: {sweep_ok} ({} bytes); trajectory bytes identical: {traj_ok} ({} bytes)",
            t4_csv.len(),
            traj1.len()
        ),
    );
}
