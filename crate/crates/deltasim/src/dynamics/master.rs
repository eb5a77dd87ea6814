//! Direct integration of the master equation in matrix form. The right-hand
//! side is evaluated through sparse applications of H and the collapse
//! operators, so one evaluation costs O(nnz·d²) rather than O(d³).

use super::ode::{integrate, Integrator};
use super::SparseOp;
use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Operator};
use crate::{CMatrix, C64};

/// Options for [`evolve_master`].
#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    pub integrator: Integrator,
    /// Retain the density matrix at every sample time.
    pub keep_states: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            integrator: Integrator::default(),
            keep_states: true,
        }
    }
}

/// Sampled master-equation evolution.
#[derive(Debug, Clone)]
pub struct EvolutionRecord {
    /// Sample times (µs), strictly increasing.
    pub times: Vec<f64>,
    /// States at the sample times when retention was requested.
    pub states: Option<Vec<DensityMatrix>>,
}

struct LindbladRhs {
    h: SparseOp,
    collapses: Vec<Collapse>,
    scratch: CMatrix,
}

struct Collapse {
    rate: f64,
    c: SparseOp,
    c_dag: SparseOp,
    cdc: SparseOp,
}

impl LindbladRhs {
    fn new(h: &Operator, collapses: &[(f64, Operator)]) -> Result<Self> {
        let d = h.space().total_dim();
        let mut terms = Vec::with_capacity(collapses.len());
        for (rate, c) in collapses {
            if c.space() != h.space() {
                return Err(Error::DimensionMismatch(
                    "collapse operator space differs from Hamiltonian space".into(),
                ));
            }
            if *rate < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "collapse rate {rate} must be >= 0"
                )));
            }
            let cm = c.matrix();
            terms.push(Collapse {
                rate: *rate,
                c: SparseOp::from_dense(cm),
                c_dag: SparseOp::from_dense(&cm.adjoint()),
                cdc: SparseOp::from_dense(&(cm.adjoint() * cm)),
            });
        }
        Ok(Self {
            h: SparseOp::from_dense(h.matrix()),
            collapses: terms,
            scratch: CMatrix::zeros(d, d),
        })
    }

    /// out = −i(Hρ − ρH) + Σ r [ cρc† − ½(c†c)ρ − ½ρ(c†c) ].
    fn eval(&mut self, rho: &CMatrix, out: &mut CMatrix) {
        out.fill(C64::new(0.0, 0.0));
        self.h.acc_mul_left(C64::new(0.0, -1.0), rho, out);
        self.h.acc_mul_right(C64::new(0.0, 1.0), rho, out);
        for col in &self.collapses {
            self.scratch.fill(C64::new(0.0, 0.0));
            col.c
                .acc_mul_left(C64::new(col.rate, 0.0), rho, &mut self.scratch);
            col.c_dag
                .acc_mul_right(C64::new(1.0, 0.0), &self.scratch, out);
            col.cdc
                .acc_mul_left(C64::new(-0.5 * col.rate, 0.0), rho, out);
            col.cdc
                .acc_mul_right(C64::new(-0.5 * col.rate, 0.0), rho, out);
        }
    }
}

/// Integrate ρ̇ = Lρ from `rho0` over `times`, calling
/// `sample(index, t, rho)` at every sample time (including the first). The
/// trace is not renormalized along the way; integration quality is the
/// caller's check.
pub fn evolve_master_with<F>(
    h: &Operator,
    collapses: &[(f64, Operator)],
    rho0: &DensityMatrix,
    times: &[f64],
    integrator: Integrator,
    sample: &mut F,
) -> Result<()>
where
    F: FnMut(usize, f64, &CMatrix),
{
    if rho0.space() != h.space() {
        return Err(Error::DimensionMismatch(
            "initial state space differs from Hamiltonian space".into(),
        ));
    }
    let mut rhs = LindbladRhs::new(h, collapses)?;
    integrate(
        &mut |rho: &CMatrix, out: &mut CMatrix| rhs.eval(rho, out),
        rho0.matrix().clone(),
        times,
        integrator,
        sample,
    )
}

/// Integrate the master equation and return the sampled states.
pub fn evolve_master(
    h: &Operator,
    collapses: &[(f64, Operator)],
    rho0: &DensityMatrix,
    times: &[f64],
    opts: &EvolveOptions,
) -> Result<EvolutionRecord> {
    let space = h.space().clone();
    let mut states = opts.keep_states.then(|| Vec::with_capacity(times.len()));
    evolve_master_with(
        h,
        collapses,
        rho0,
        times,
        opts.integrator,
        &mut |_, _, rho| {
            if let Some(states) = states.as_mut() {
                states.push(DensityMatrix::from_matrix_unchecked(
                    space.clone(),
                    rho.clone(),
                ));
            }
        },
    )?;
    Ok(EvolutionRecord {
        times: times.to_vec(),
        states,
    })
}
