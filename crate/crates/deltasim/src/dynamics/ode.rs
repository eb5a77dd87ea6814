//! Embedded Dormand–Prince 5(4) stepper with PI-free step control, plus a
//! fixed-step RK4 fallback for reproducibility runs. The state type is
//! generic so the same machinery integrates density matrices and pure-state
//! vectors.

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64};

/// Integration scheme selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Integrator {
    /// Adaptive embedded Runge–Kutta 5(4).
    DormandPrince { rtol: f64, atol: f64 },
    /// Classic RK4 with a fixed step (µs); segment lengths are divided into
    /// equal steps that land exactly on the sample times.
    FixedRk4 { dt: f64 },
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator::DormandPrince {
            rtol: 1e-8,
            atol: 1e-10,
        }
    }
}

/// Hard cap on accepted + rejected steps per integration run.
pub const MAX_STEPS: usize = 2_000_000;

/// Minimal container interface the stepper needs.
pub trait OdeState: Clone {
    fn elems(&self) -> &[C64];
    fn elems_mut(&mut self) -> &mut [C64];

    /// self = y + Σ (c_k · k_k), coefficients real.
    fn assign_combination(&mut self, y: &Self, dt: f64, terms: &[(f64, &Self)]) {
        let n = self.elems().len();
        {
            let dst = self.elems_mut();
            dst.copy_from_slice(y.elems());
        }
        for (c, k) in terms {
            let c = C64::new(dt * *c, 0.0);
            let dst = self.elems_mut();
            let src = k.elems();
            for i in 0..n {
                dst[i] += c * src[i];
            }
        }
    }
}

impl OdeState for CMatrix {
    fn elems(&self) -> &[C64] {
        self.as_slice()
    }
    fn elems_mut(&mut self) -> &mut [C64] {
        self.as_mut_slice()
    }
}

impl OdeState for CVector {
    fn elems(&self) -> &[C64] {
        self.as_slice()
    }
    fn elems_mut(&mut self) -> &mut [C64] {
        self.as_mut_slice()
    }
}

// Dormand–Prince tableau.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
/// b − b̂ including the FSAL stage.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Adaptive Dormand–Prince stepper. Owns its stage buffers so repeated steps
/// allocate nothing.
pub struct DormandPrince<S: OdeState> {
    rtol: f64,
    atol: f64,
    dt: f64,
    k: Vec<S>,
    y_stage: S,
    y_new: S,
    fsal_valid: bool,
    steps_taken: usize,
}

impl<S: OdeState> DormandPrince<S> {
    pub fn new(prototype: &S, rtol: f64, atol: f64, dt_initial: f64) -> Self {
        Self {
            rtol,
            atol,
            dt: dt_initial,
            k: vec![prototype.clone(); 7],
            y_stage: prototype.clone(),
            y_new: prototype.clone(),
            fsal_valid: false,
            steps_taken: 0,
        }
    }

    /// Invalidate the first-same-as-last cache after `y` was modified outside
    /// the stepper (e.g. a quantum jump).
    pub fn invalidate_fsal(&mut self) {
        self.fsal_valid = false;
    }

    /// Advance `y` by one accepted step from `t`, never beyond `t_limit`.
    /// Returns the new time.
    pub fn step<F>(&mut self, rhs: &mut F, t: f64, y: &mut S, t_limit: f64) -> Result<f64>
    where
        F: FnMut(&S, &mut S),
    {
        debug_assert!(t_limit > t);
        if !self.fsal_valid {
            let (k1, rest) = self.k.split_first_mut().unwrap();
            let _ = rest;
            rhs(y, k1);
            self.fsal_valid = true;
        }
        loop {
            self.steps_taken += 1;
            if self.steps_taken > MAX_STEPS {
                return Err(Error::Solver {
                    time: t,
                    message: format!("step budget of {MAX_STEPS} exhausted"),
                });
            }
            let remaining = t_limit - t;
            let capped = self.dt >= remaining;
            let dt = if capped { remaining } else { self.dt };
            let dt_floor = 1e-14 * t_limit.abs().max(1.0);
            if dt.is_nan() || dt <= 0.0 || self.dt < dt_floor {
                return Err(Error::Solver {
                    time: t,
                    message: "step size underflow".into(),
                });
            }

            self.y_stage
                .assign_combination(y, dt, &[(A2[0], &self.k[0])]);
            rhs(&self.y_stage, &mut self.k[1]);
            self.y_stage
                .assign_combination(y, dt, &[(A3[0], &self.k[0]), (A3[1], &self.k[1])]);
            rhs(&self.y_stage, &mut self.k[2]);
            self.y_stage.assign_combination(
                y,
                dt,
                &[
                    (A4[0], &self.k[0]),
                    (A4[1], &self.k[1]),
                    (A4[2], &self.k[2]),
                ],
            );
            rhs(&self.y_stage, &mut self.k[3]);
            self.y_stage.assign_combination(
                y,
                dt,
                &[
                    (A5[0], &self.k[0]),
                    (A5[1], &self.k[1]),
                    (A5[2], &self.k[2]),
                    (A5[3], &self.k[3]),
                ],
            );
            rhs(&self.y_stage, &mut self.k[4]);
            self.y_stage.assign_combination(
                y,
                dt,
                &[
                    (A6[0], &self.k[0]),
                    (A6[1], &self.k[1]),
                    (A6[2], &self.k[2]),
                    (A6[3], &self.k[3]),
                    (A6[4], &self.k[4]),
                ],
            );
            rhs(&self.y_stage, &mut self.k[5]);
            // Fifth-order solution; its derivative is the FSAL stage.
            self.y_new.assign_combination(
                y,
                dt,
                &[
                    (B[0], &self.k[0]),
                    (B[2], &self.k[2]),
                    (B[3], &self.k[3]),
                    (B[4], &self.k[4]),
                    (B[5], &self.k[5]),
                ],
            );
            rhs(&self.y_new, &mut self.k[6]);

            let err_norm = self.error_norm(y, dt);
            if err_norm.is_finite() && err_norm <= 1.0 {
                let factor = if err_norm == 0.0 {
                    5.0
                } else {
                    (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
                };
                // Grow from the controller's size, not the output-capped one,
                // so dense sampling cannot starve the step.
                self.dt *= factor;
                std::mem::swap(y, &mut self.y_new);
                self.k.swap(0, 6); // FSAL
                                   // Snap to the boundary so segment loops terminate exactly.
                return Ok(if capped { t_limit } else { t + dt });
            }
            let shrink = if err_norm.is_finite() {
                (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            self.dt = dt * shrink;
        }
    }

    /// RMS of |err_i| / (atol + rtol·max(|y_i|, |y_new_i|)).
    fn error_norm(&self, y: &S, dt: f64) -> f64 {
        let n = y.elems().len();
        let mut acc = 0.0f64;
        for i in 0..n {
            let mut err = C64::new(0.0, 0.0);
            for (s, e) in E.iter().enumerate() {
                if *e != 0.0 {
                    err += C64::new(dt * e, 0.0) * self.k[s].elems()[i];
                }
            }
            let scale =
                self.atol + self.rtol * y.elems()[i].norm().max(self.y_new.elems()[i].norm());
            let r = err.norm() / scale;
            acc += r * r;
        }
        (acc / n as f64).sqrt()
    }
}

/// Single classic RK4 step of size `dt` from `y`, result written to `out`.
/// `scratch` must hold 5 state buffers.
pub fn rk4_step<S, F>(rhs: &mut F, y: &S, dt: f64, out: &mut S, scratch: &mut [S; 5])
where
    S: OdeState,
    F: FnMut(&S, &mut S),
{
    let [k1, k2, k3, k4, tmp] = scratch;
    rhs(y, k1);
    tmp.assign_combination(y, dt, &[(0.5, k1)]);
    rhs(tmp, k2);
    tmp.assign_combination(y, dt, &[(0.5, k2)]);
    rhs(tmp, k3);
    tmp.assign_combination(y, dt, &[(1.0, k3)]);
    rhs(tmp, k4);
    out.assign_combination(
        y,
        dt,
        &[
            (1.0 / 6.0, k1),
            (1.0 / 3.0, k2),
            (1.0 / 3.0, k3),
            (1.0 / 6.0, k4),
        ],
    );
}

/// Integrate an autonomous ODE over strictly increasing sample times,
/// invoking `observe(index, t, y)` at every sample including the first.
pub fn integrate<S, F, O>(
    rhs: &mut F,
    mut y: S,
    times: &[f64],
    integrator: Integrator,
    observe: &mut O,
) -> Result<()>
where
    S: OdeState,
    F: FnMut(&S, &mut S),
    O: FnMut(usize, f64, &S),
{
    if times.is_empty() {
        return Ok(());
    }
    for w in times.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParam(
                "sample times must be strictly increasing".into(),
            ));
        }
    }
    observe(0, times[0], &y);
    match integrator {
        Integrator::DormandPrince { rtol, atol } => {
            let span = times[times.len() - 1] - times[0];
            let mut stepper = DormandPrince::new(&y, rtol, atol, span * 1e-3);
            let mut t = times[0];
            for (idx, &t_target) in times.iter().enumerate().skip(1) {
                while t < t_target {
                    t = stepper.step(rhs, t, &mut y, t_target)?;
                }
                observe(idx, t_target, &y);
            }
        }
        Integrator::FixedRk4 { dt } => {
            if dt.is_nan() || dt <= 0.0 {
                return Err(Error::InvalidParam("fixed step must be positive".into()));
            }
            let mut scratch = [y.clone(), y.clone(), y.clone(), y.clone(), y.clone()];
            let mut y_next = y.clone();
            for (idx, w) in times.windows(2).enumerate() {
                let seg = w[1] - w[0];
                let n_steps = (seg / dt).ceil().max(1.0) as usize;
                let h = seg / n_steps as f64;
                for _ in 0..n_steps {
                    rk4_step(rhs, &y, h, &mut y_next, &mut scratch);
                    std::mem::swap(&mut y, &mut y_next);
                }
                observe(idx + 1, w[1], &y);
            }
        }
    }
    Ok(())
}
