//! Monte-Carlo wavefunction unraveling of the master equation.
//!
//! Each trajectory evolves |ψ⟩ under the non-Hermitian
//! H_eff = H − (i/2) Σ r c†c without renormalization; when the squared norm
//! falls below a uniform random threshold, a jump channel is drawn with
//! probability ∝ r‖cψ‖², the state is collapsed and renormalized, and the
//! threshold is redrawn. Expectation values are taken on the normalized
//! state at each sample time and averaged over trajectories.
//!
//! Randomness is fully reproducible: trajectory k draws from a ChaCha12
//! stream cipher seeded with the run seed and stream index k
//! ([`trajectory_rng`]), so results are independent of the number of worker
//! threads; trajectories are reduced in index order, which makes the
//! averages bit-identical for any parallelism degree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use super::ode::{rk4_step, DormandPrince, Integrator};
use super::SparseOp;
use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Operator, StateVector};
use crate::{CMatrix, CVector, C64};

/// Options for [`evolve_trajectories`].
#[derive(Debug, Clone)]
pub struct TrajectoryOptions {
    pub n_traj: usize,
    pub seed: u64,
    pub integrator: Integrator,
    /// Accumulate the trajectory-averaged density matrix at every sample.
    pub average_states: bool,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self {
            n_traj: 25,
            seed: 1,
            integrator: Integrator::default(),
            average_states: false,
        }
    }
}

/// The RNG of trajectory `k` for a given run seed: ChaCha12 with the seed
/// expanded from `seed` and the stream index set to `k`.
pub fn trajectory_rng(seed: u64, k: usize) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

/// Averaged trajectory ensemble.
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub seed: u64,
    pub n_traj: usize,
    /// Named operator means over trajectories, per sample time.
    pub means: Vec<(String, Vec<C64>)>,
    /// Standard errors of those means (norm-based over complex samples).
    pub std_errors: Vec<(String, Vec<f64>)>,
    /// Jump events (time, channel index) per trajectory.
    pub jump_log: Vec<Vec<(f64, usize)>>,
    /// Outer-product average of the normalized states, when requested.
    pub avg_states: Option<Vec<DensityMatrix>>,
}

impl TrajectoryRecord {
    pub fn mean_series(&self, name: &str) -> Option<&[C64]> {
        self.means
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.as_slice())
    }

    pub fn std_error_series(&self, name: &str) -> Option<&[f64]> {
        self.std_errors
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.as_slice())
    }
}

struct TrajectoryOutput {
    samples: Vec<Vec<C64>>,
    jumps: Vec<(f64, usize)>,
    states: Option<Vec<CVector>>,
}

/// Unravel the master equation into `n_traj` stochastic pure-state
/// trajectories and average the named operator expectations.
pub fn evolve_trajectories(
    h: &Operator,
    collapses: &[(f64, Operator)],
    psi0: &StateVector,
    times: &[f64],
    operators: &[(String, Operator)],
    opts: &TrajectoryOptions,
) -> Result<TrajectoryRecord> {
    if psi0.space() != h.space() {
        return Err(Error::DimensionMismatch(
            "initial state space differs from Hamiltonian space".into(),
        ));
    }
    if (psi0.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidState(
            "trajectory initial state must be normalized".into(),
        ));
    }
    if opts.n_traj == 0 {
        return Err(Error::InvalidParam("need at least one trajectory".into()));
    }
    for (_, op) in operators {
        if op.space() != h.space() {
            return Err(Error::DimensionMismatch("observable space differs".into()));
        }
    }
    for w in times.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParam(
                "sample times must be strictly increasing".into(),
            ));
        }
    }

    // H_eff = H − (i/2) Σ r c†c as one complex sparse operator.
    let d = h.space().total_dim();
    let mut heff = h.matrix().clone();
    for (rate, c) in collapses {
        if c.space() != h.space() {
            return Err(Error::DimensionMismatch(
                "collapse operator space differs".into(),
            ));
        }
        let cdc = c.matrix().adjoint() * c.matrix();
        heff += cdc * C64::new(0.0, -0.5 * rate);
    }
    let heff = SparseOp::from_dense(&heff);
    let channels: Vec<(f64, SparseOp)> = collapses
        .iter()
        .map(|(rate, c)| (*rate, SparseOp::from_dense(c.matrix())))
        .collect();
    let op_sparse: Vec<SparseOp> = operators
        .iter()
        .map(|(_, op)| SparseOp::from_dense(op.matrix()))
        .collect();

    let results: Vec<Result<TrajectoryOutput>> = (0..opts.n_traj)
        .into_par_iter()
        .map(|k| {
            run_trajectory(
                &heff,
                &channels,
                psi0.amplitudes(),
                times,
                &op_sparse,
                trajectory_rng(opts.seed, k),
                opts,
            )
        })
        .collect();

    // Fixed-order reduction keeps the averages identical for any thread count.
    let mut outputs = Vec::with_capacity(opts.n_traj);
    for r in results {
        outputs.push(r?);
    }

    let n_t = times.len();
    let n_ops = operators.len();
    let n = opts.n_traj as f64;
    let mut means = vec![vec![C64::new(0.0, 0.0); n_t]; n_ops];
    for out in &outputs {
        for (o, series) in out.samples.iter().enumerate() {
            for (t, v) in series.iter().enumerate() {
                means[o][t] += v;
            }
        }
    }
    for series in &mut means {
        for v in series.iter_mut() {
            *v /= C64::new(n, 0.0);
        }
    }
    let mut std_errors = vec![vec![0.0f64; n_t]; n_ops];
    if opts.n_traj > 1 {
        for out in &outputs {
            for (o, series) in out.samples.iter().enumerate() {
                for (t, v) in series.iter().enumerate() {
                    std_errors[o][t] += (v - means[o][t]).norm_sqr();
                }
            }
        }
        for series in &mut std_errors {
            for v in series.iter_mut() {
                *v = (*v / (n * (n - 1.0))).sqrt();
            }
        }
    }

    let avg_states = opts.average_states.then(|| {
        let space = h.space().clone();
        (0..n_t)
            .map(|t| {
                let mut acc = CMatrix::zeros(d, d);
                for out in &outputs {
                    let psi = &out.states.as_ref().expect("states retained")[t];
                    // acc += |ψ><ψ| / n
                    for col in 0..d {
                        let w = psi[col].conj() / C64::new(n, 0.0);
                        if w != C64::new(0.0, 0.0) {
                            for row in 0..d {
                                acc[(row, col)] += psi[row] * w;
                            }
                        }
                    }
                }
                DensityMatrix::from_matrix_unchecked(space.clone(), acc)
            })
            .collect()
    });

    Ok(TrajectoryRecord {
        times: times.to_vec(),
        seed: opts.seed,
        n_traj: opts.n_traj,
        means: operators
            .iter()
            .map(|(name, _)| name.clone())
            .zip(means)
            .collect(),
        std_errors: operators
            .iter()
            .map(|(name, _)| name.clone())
            .zip(std_errors)
            .collect(),
        jump_log: outputs.iter().map(|o| o.jumps.clone()).collect(),
        avg_states,
    })
}

fn draw_threshold(rng: &mut ChaCha12Rng) -> f64 {
    let r: f64 = rng.random();
    if r == 0.0 {
        f64::MIN_POSITIVE
    } else {
        r
    }
}

enum Stepping {
    Adaptive(DormandPrince<CVector>),
    Fixed { dt: f64, next: CVector },
}

#[allow(clippy::too_many_arguments)]
fn run_trajectory(
    heff: &SparseOp,
    channels: &[(f64, SparseOp)],
    psi0: &CVector,
    times: &[f64],
    operators: &[SparseOp],
    mut rng: ChaCha12Rng,
    opts: &TrajectoryOptions,
) -> Result<TrajectoryOutput> {
    let d = heff.dim();
    let mut psi = psi0.clone();
    let mut rhs = |y: &CVector, dy: &mut CVector| {
        dy.fill(C64::new(0.0, 0.0));
        heff.acc_mul_vec(C64::new(0.0, -1.0), y, dy);
    };

    let span = times[times.len() - 1] - times[0];
    // Jump localization bisects inside a step with fixed RK4 substeps from
    // the pre-step state, so both stepping modes share the same jump logic.
    let mut stepping = match opts.integrator {
        Integrator::DormandPrince { rtol, atol } => {
            Stepping::Adaptive(DormandPrince::new(&psi, rtol, atol, span * 1e-3))
        }
        Integrator::FixedRk4 { dt } => Stepping::Fixed {
            dt,
            next: psi.clone(),
        },
    };

    let mut samples = vec![Vec::with_capacity(times.len()); operators.len()];
    let mut states = opts.average_states.then(|| Vec::with_capacity(times.len()));
    let mut jumps = Vec::new();
    let mut threshold = if channels.is_empty() {
        0.0
    } else {
        draw_threshold(&mut rng)
    };
    let mut t = times[0];
    let mut prev = psi.clone();
    let mut scratch = [
        psi.clone(),
        psi.clone(),
        psi.clone(),
        psi.clone(),
        psi.clone(),
    ];
    let mut candidate = psi.clone();

    let record = |psi: &CVector, samples: &mut Vec<Vec<C64>>, states: &mut Option<Vec<CVector>>| {
        let norm = psi.norm();
        let normalized = psi / C64::new(norm, 0.0);
        for (o, op) in operators.iter().enumerate() {
            let mut tmp = CVector::zeros(d);
            op.acc_mul_vec(C64::new(1.0, 0.0), &normalized, &mut tmp);
            samples[o].push(normalized.dotc(&tmp));
        }
        if let Some(states) = states {
            states.push(normalized);
        }
    };

    record(&psi, &mut samples, &mut states);
    for (idx, &t_target) in times.iter().enumerate().skip(1) {
        let _ = idx;
        while t < t_target {
            prev.copy_from(&psi);
            let t_before = t;
            t = match &mut stepping {
                Stepping::Adaptive(stepper) => stepper.step(&mut rhs, t, &mut psi, t_target)?,
                Stepping::Fixed { dt, next } => {
                    let capped = *dt >= t_target - t;
                    let h = if capped { t_target - t } else { *dt };
                    rk4_step(&mut rhs, &prev, h, next, &mut scratch);
                    psi.copy_from(next);
                    if capped {
                        t_target
                    } else {
                        t + h
                    }
                }
            };
            if !channels.is_empty() && psi.norm_squared() < threshold {
                // Locate the crossing time inside (t_before, t] by bisection
                // on a fresh RK4 substep from the pre-step state.
                let dt_full = t - t_before;
                let mut lo = 0.0f64;
                let mut hi = dt_full;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    rk4_step(&mut rhs, &prev, mid, &mut candidate, &mut scratch);
                    if candidate.norm_squared() < threshold {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                rk4_step(&mut rhs, &prev, hi, &mut candidate, &mut scratch);
                psi.copy_from(&candidate);
                t = t_before + hi;

                // Channel draw with probability ∝ r‖cψ‖².
                let mut weights = Vec::with_capacity(channels.len());
                let mut total = 0.0;
                let mut collapsed: Vec<CVector> = Vec::with_capacity(channels.len());
                for (rate, c) in channels {
                    let mut cpsi = CVector::zeros(d);
                    c.acc_mul_vec(C64::new(1.0, 0.0), &psi, &mut cpsi);
                    let w = rate * cpsi.norm_squared();
                    total += w;
                    weights.push(w);
                    collapsed.push(cpsi);
                }
                if total <= 0.0 || !total.is_finite() {
                    return Err(Error::Solver {
                        time: t,
                        message: format!(
                            "zero-norm collapse: total jump weight {total:.3e} at threshold {threshold:.3e}"
                        ),
                    });
                }
                let u: f64 = rng.random::<f64>() * total;
                let mut acc = 0.0;
                let mut channel = channels.len() - 1;
                for (k, w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        channel = k;
                        break;
                    }
                }
                let norm = collapsed[channel].norm();
                if norm <= 0.0 {
                    return Err(Error::Solver {
                        time: t,
                        message: format!("zero-norm collapse on channel {channel}"),
                    });
                }
                psi.copy_from(&collapsed[channel]);
                psi /= C64::new(norm, 0.0);
                jumps.push((t, channel));
                threshold = draw_threshold(&mut rng);
                if let Stepping::Adaptive(stepper) = &mut stepping {
                    stepper.invalidate_fsal();
                }
            }
        }
        record(&psi, &mut samples, &mut states);
    }

    Ok(TrajectoryOutput {
        samples,
        jumps,
        states,
    })
}
