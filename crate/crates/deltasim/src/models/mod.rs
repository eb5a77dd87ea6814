//! Effective models of the driven cavity system: one or two bosonic
//! "ensemble" modes exchange-coupled to a microwave mode that talks to a
//! two-level atom.
//!
//! In the frame rotating at the microwave probe, the single-ensemble
//! Hamiltonian is
//!
//! ```text
//! H = δ a†a + δ b†b + ((δ − δ_b)/2) σ_z
//!     + g (σ b† + b σ†) − J (a†b + b†a)
//!     + E_a (a† + a) + E_b (b† + b)
//! ```
//!
//! with δ the probe detuning common to both radiation modes and
//! δ_b = ω_b − ω₀ the cavity–atom detuning. The two-ensemble model replaces
//! `a` by `a1`, `a2` with exchange couplings J₁, J₂ and drives E₁, E₂, in the
//! same rotating frame. Parameters are angular frequencies in rad/µs.
//!
//! All constructors are pure functions over immutable parameter records and
//! are safe to call from parallel sweeps.

mod coeffs;
mod morris_shore;

pub use coeffs::{
    bogoliubov, effective_coeffs_approx, effective_coeffs_exact, BogoliubovCoeffs, EffectiveCoeffs,
    MicroscopicParams, DENOM_THRESHOLD,
};
pub use morris_shore::{morris_shore, MorrisShore};

use crate::error::{Error, Result};
use crate::hilbert::{fock_state, AtomState, HilbertSpace, Operator, StateVector};
use crate::{CMatrix, CVector, C64};

/// Parameters of the single-ensemble effective model.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleEnsembleParams {
    /// Probe detuning δ = ω_b − ω̃_b (shared by both radiation modes).
    pub delta: f64,
    /// Cavity–atom detuning δ_b = ω_b − ω₀.
    pub delta_b: f64,
    /// Atom–cavity coupling g.
    pub g: f64,
    /// Effective mode–mode exchange coupling J.
    pub j: f64,
    /// Drive amplitude E_a on the optical mode.
    pub drive_a: f64,
    /// Drive amplitude E_b on the microwave mode.
    pub drive_b: f64,
    /// Photon loss rate κ_a.
    pub kappa_a: f64,
    /// Photon loss rate κ_b.
    pub kappa_b: f64,
    /// Qubit relaxation rate γ₁.
    pub gamma_1: f64,
    /// Qubit pure dephasing rate γ_φ.
    pub gamma_phi: f64,
    /// Fock levels kept for mode a.
    pub n_fock_a: usize,
    /// Fock levels kept for mode b.
    pub n_fock_b: usize,
}

impl SingleEnsembleParams {
    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [
            ("kappa_a", self.kappa_a),
            ("kappa_b", self.kappa_b),
            ("gamma_1", self.gamma_1),
            ("gamma_phi", self.gamma_phi),
        ] {
            if rate < 0.0 {
                return Err(Error::InvalidParam(format!("{name} = {rate} must be >= 0")));
            }
        }
        if self.n_fock_a < 2 || self.n_fock_b < 2 {
            return Err(Error::InvalidParam(
                "Fock truncation must be >= 2 levels".into(),
            ));
        }
        Ok(())
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::single_ensemble(self.n_fock_a, self.n_fock_b)
    }
}

/// Parameters of the two-ensemble effective model.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoEnsembleParams {
    pub delta: f64,
    pub delta_b: f64,
    pub g: f64,
    /// Exchange couplings of the two ensemble modes to the cavity.
    pub j_1: f64,
    pub j_2: f64,
    /// Drives on the ensemble modes.
    pub drive_1: f64,
    pub drive_2: f64,
    pub drive_b: f64,
    pub kappa_1: f64,
    pub kappa_2: f64,
    pub kappa_b: f64,
    pub gamma_1: f64,
    pub gamma_phi: f64,
    pub n_fock_1: usize,
    pub n_fock_b: usize,
    pub n_fock_2: usize,
}

impl TwoEnsembleParams {
    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [
            ("kappa_1", self.kappa_1),
            ("kappa_2", self.kappa_2),
            ("kappa_b", self.kappa_b),
            ("gamma_1", self.gamma_1),
            ("gamma_phi", self.gamma_phi),
        ] {
            if rate < 0.0 {
                return Err(Error::InvalidParam(format!("{name} = {rate} must be >= 0")));
            }
        }
        if self.n_fock_1 < 2 || self.n_fock_b < 2 || self.n_fock_2 < 2 {
            return Err(Error::InvalidParam(
                "Fock truncation must be >= 2 levels".into(),
            ));
        }
        Ok(())
    }

    /// True when both ensembles share identical couplings, drives and losses.
    pub fn is_symmetric(&self) -> bool {
        self.j_1 == self.j_2
            && self.drive_1 == self.drive_2
            && self.kappa_1 == self.kappa_2
            && self.n_fock_1 == self.n_fock_2
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::two_ensemble(self.n_fock_1, self.n_fock_b, self.n_fock_2)
    }
}

fn displacement(space: &HilbertSpace, label: &str) -> Result<Operator> {
    let a = Operator::destroy_mode(space, label)?;
    Ok(&a.dagger() + &a)
}

fn exchange(space: &HilbertSpace, from: &str, to: &str) -> Result<Operator> {
    // x†y + y†x
    let x = Operator::destroy_mode(space, from)?;
    let y = Operator::destroy_mode(space, to)?;
    let t = &x.dagger() * &y;
    Ok(&t + &t.dagger())
}

/// Single-ensemble effective Hamiltonian on the given space.
pub fn build_single_hamiltonian(
    p: &SingleEnsembleParams,
    space: &HilbertSpace,
) -> Result<Operator> {
    p.validate()?;
    let n_a = Operator::number_mode(space, "a")?;
    let n_b = Operator::number_mode(space, "b")?;
    let sigma = Operator::qubit_lower(space)?;
    let sigma_z = Operator::qubit_z(space)?;
    let b = Operator::destroy_mode(space, "b")?;

    // g (σ b† + b σ†)
    let jc = &(&b.dagger() * &sigma) + &(&sigma.dagger() * &b);

    let mut h = n_a.scale(C64::new(p.delta, 0.0)).into_matrix();
    h += n_b.scale(C64::new(p.delta, 0.0)).matrix();
    h += sigma_z
        .scale(C64::new(0.5 * (p.delta - p.delta_b), 0.0))
        .matrix();
    h += jc.scale(C64::new(p.g, 0.0)).matrix();
    h += exchange(space, "a", "b")?
        .scale(C64::new(-p.j, 0.0))
        .matrix();
    h += displacement(space, "a")?
        .scale(C64::new(p.drive_a, 0.0))
        .matrix();
    h += displacement(space, "b")?
        .scale(C64::new(p.drive_b, 0.0))
        .matrix();
    Operator::new(space.clone(), h)
}

/// Two-ensemble effective Hamiltonian on the given space. The rotating frame
/// matches the single-ensemble one: δ on every radiation mode and
/// (δ − δ_b)/2 on σ_z.
pub fn build_two_hamiltonian(p: &TwoEnsembleParams, space: &HilbertSpace) -> Result<Operator> {
    p.validate()?;
    let sigma = Operator::qubit_lower(space)?;
    let sigma_z = Operator::qubit_z(space)?;
    let b = Operator::destroy_mode(space, "b")?;
    let jc = &(&b.dagger() * &sigma) + &(&sigma.dagger() * &b);

    let mut h = Operator::number_mode(space, "a1")?
        .scale(C64::new(p.delta, 0.0))
        .into_matrix();
    h += Operator::number_mode(space, "a2")?
        .scale(C64::new(p.delta, 0.0))
        .matrix();
    h += Operator::number_mode(space, "b")?
        .scale(C64::new(p.delta, 0.0))
        .matrix();
    h += sigma_z
        .scale(C64::new(0.5 * (p.delta - p.delta_b), 0.0))
        .matrix();
    h += jc.scale(C64::new(p.g, 0.0)).matrix();
    h += exchange(space, "a1", "b")?
        .scale(C64::new(-p.j_1, 0.0))
        .matrix();
    h += exchange(space, "a2", "b")?
        .scale(C64::new(-p.j_2, 0.0))
        .matrix();
    h += displacement(space, "a1")?
        .scale(C64::new(p.drive_1, 0.0))
        .matrix();
    h += displacement(space, "a2")?
        .scale(C64::new(p.drive_2, 0.0))
        .matrix();
    h += displacement(space, "b")?
        .scale(C64::new(p.drive_b, 0.0))
        .matrix();
    Operator::new(space.clone(), h)
}

/// Lindblad collapse channels (rate, operator) of the single-ensemble model:
/// (κ_a, a), (κ_b, b), (γ₁, σ), (γ_φ/2, σ_z). Zero-rate channels are omitted.
pub fn collapse_operators_single(
    p: &SingleEnsembleParams,
    space: &HilbertSpace,
) -> Result<Vec<(f64, Operator)>> {
    p.validate()?;
    let mut out = Vec::new();
    if p.kappa_a > 0.0 {
        out.push((p.kappa_a, Operator::destroy_mode(space, "a")?));
    }
    if p.kappa_b > 0.0 {
        out.push((p.kappa_b, Operator::destroy_mode(space, "b")?));
    }
    if p.gamma_1 > 0.0 {
        out.push((p.gamma_1, Operator::qubit_lower(space)?));
    }
    if p.gamma_phi > 0.0 {
        out.push((0.5 * p.gamma_phi, Operator::qubit_z(space)?));
    }
    Ok(out)
}

/// Collapse channels of the two-ensemble model, in space order
/// (κ₁, a₁), (κ_b, b), (κ₂, a₂) followed by the atom channels.
pub fn collapse_operators_two(
    p: &TwoEnsembleParams,
    space: &HilbertSpace,
) -> Result<Vec<(f64, Operator)>> {
    p.validate()?;
    let mut out = Vec::new();
    if p.kappa_1 > 0.0 {
        out.push((p.kappa_1, Operator::destroy_mode(space, "a1")?));
    }
    if p.kappa_b > 0.0 {
        out.push((p.kappa_b, Operator::destroy_mode(space, "b")?));
    }
    if p.kappa_2 > 0.0 {
        out.push((p.kappa_2, Operator::destroy_mode(space, "a2")?));
    }
    if p.gamma_1 > 0.0 {
        out.push((p.gamma_1, Operator::qubit_lower(space)?));
    }
    if p.gamma_phi > 0.0 {
        out.push((0.5 * p.gamma_phi, Operator::qubit_z(space)?));
    }
    Ok(out)
}

/// Zero-energy superposition of the single-excitation manifold for the
/// single-ensemble model at δ = δ_b = 0 with drives off:
/// (cos α σ† − sin α a†)|vac⟩ with α = −arctan(g/J).
pub fn dark_state_single(g: f64, j: f64, space: &HilbertSpace) -> Result<StateVector> {
    if g == 0.0 && j == 0.0 {
        return Err(Error::Degenerate(
            "dark state undefined at g = J = 0".into(),
        ));
    }
    let alpha = -g.atan2(j);
    let mut amp = CVector::zeros(space.total_dim());
    let excited = fock_state(space, &[0, 0], AtomState::E)?;
    let photon = fock_state(space, &[1, 0], AtomState::G)?;
    amp += excited.amplitudes() * C64::new(alpha.cos(), 0.0);
    amp -= photon.amplitudes() * C64::new(alpha.sin(), 0.0);
    StateVector::new(space.clone(), amp, true)
}

/// Zero-energy superposition of the single-excitation manifold for the
/// two-ensemble model (symmetric couplings J) at δ = δ_b = 0 with drives
/// off:
///
/// ```text
/// |DS⟩ = (−√2 J σ† − (g/√2) a₁† − (g/√2) a₂†) |000g⟩ / √(g² + 2J²)
/// ```
///
/// For g ≫ J this tends to −(|100g⟩ + |001g⟩)/√2, for g ≪ J to |000e⟩ up to
/// sign.
pub fn dark_state_double(g: f64, j: f64, space: &HilbertSpace) -> Result<StateVector> {
    if g == 0.0 && j == 0.0 {
        return Err(Error::Degenerate(
            "dark state undefined at g = J = 0".into(),
        ));
    }
    let norm = (g * g + 2.0 * j * j).sqrt();
    let mut amp = CVector::zeros(space.total_dim());
    let excited = fock_state(space, &[0, 0, 0], AtomState::E)?;
    let one_1 = fock_state(space, &[1, 0, 0], AtomState::G)?;
    let one_2 = fock_state(space, &[0, 0, 1], AtomState::G)?;
    amp -= excited.amplitudes() * C64::new(2f64.sqrt() * j / norm, 0.0);
    amp -= one_1.amplitudes() * C64::new(g / (2f64.sqrt() * norm), 0.0);
    amp -= one_2.amplitudes() * C64::new(g / (2f64.sqrt() * norm), 0.0);
    StateVector::new(space.clone(), amp, true)
}

/// Dressed polariton modes of the single-ensemble model at δ_b = 0:
/// coefficient triples over (a, b, σ) with energies (0, +K, −K),
/// K = √(g² + J²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonModes {
    pub k: f64,
    /// q_D = (−g a − J σ)/K, energy 0.
    pub dark: [f64; 3],
    /// q_+ = (−J a + K b + g σ)/(√2 K), energy +K.
    pub plus: [f64; 3],
    /// q_− = (−J a − K b + g σ)/(√2 K), energy −K.
    pub minus: [f64; 3],
}

pub fn polariton_modes(g: f64, j: f64) -> Result<PolaritonModes> {
    let k = (g * g + j * j).sqrt();
    if k == 0.0 {
        return Err(Error::Degenerate(
            "polariton modes undefined at g = J = 0".into(),
        ));
    }
    let s = 1.0 / (2f64.sqrt() * k);
    Ok(PolaritonModes {
        k,
        dark: [-g / k, 0.0, -j / k],
        plus: [-j * s, k * s, g * s],
        minus: [-j * s, -k * s, g * s],
    })
}

/// Matrix elements of `h` in the single-excitation manifold, relative to the
/// vacuum energy: basis states are one photon in each mode (atom in g) plus
/// the bare atomic excitation, in space order. Only meaningful for
/// excitation-conserving Hamiltonians (drives off).
pub fn single_excitation_block(h: &Operator) -> Result<CMatrix> {
    let space = h.space();
    let atom_pos = space.position("atom")?;
    let n_sub = space.subsystem_count();
    let mut kets = Vec::with_capacity(n_sub);
    for pos in 0..n_sub {
        let mut idx = vec![0usize; n_sub];
        if pos == atom_pos {
            idx[atom_pos] = 1;
        } else {
            idx[pos] = 1;
        }
        kets.push(space.flat_index(&idx)?);
    }
    let vac = space.flat_index(&vec![0usize; n_sub])?;
    let e_vac = h.matrix()[(vac, vac)];
    let n = kets.len();
    let mut block = CMatrix::zeros(n, n);
    for (r, &i) in kets.iter().enumerate() {
        for (c, &j) in kets.iter().enumerate() {
            block[(r, c)] = h.matrix()[(i, j)];
        }
        block[(r, r)] -= e_vac;
    }
    Ok(block)
}

/// Sorted single-excitation energies of `h` relative to vacuum.
pub fn single_excitation_energies(h: &Operator) -> Result<Vec<f64>> {
    Ok(crate::linalg::eigvalsh(&single_excitation_block(h)?))
}
