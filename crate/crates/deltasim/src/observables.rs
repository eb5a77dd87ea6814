//! Quantum-statistical observables of the radiation modes: populations,
//! zero-delay second-order coherence, von Neumann entropy, genuine two-mode
//! entanglement, spin squeezing, fidelities and atomic excitation.
//!
//! Observables that lose meaning on a given state (vanishing population for
//! g²(0), degenerate pseudo-spin denominator for ξ_x²) return
//! [`ObsValue::Undefined`] instead of NaN, so sweep tables stay
//! machine-readable. All functions are pure.

use crate::error::{Error, Result};
use crate::hilbert::{expectation, partial_trace, DensityMatrix, Operator, StateVector};
use crate::linalg;
use crate::C64;

/// A real observable value or an explicit "undefined" marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObsValue {
    Value(f64),
    Undefined,
}

impl ObsValue {
    pub fn value(self) -> Option<f64> {
        match self {
            ObsValue::Value(v) => Some(v),
            ObsValue::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, ObsValue::Value(_))
    }
}

impl From<f64> for ObsValue {
    fn from(v: f64) -> Self {
        ObsValue::Value(v)
    }
}

impl std::fmt::Display for ObsValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            // Full round-trip precision; `{}` on f64 prints the shortest
            // representation that parses back to the same value.
            ObsValue::Value(v) => write!(f, "{v}"),
            ObsValue::Undefined => write!(f, "undef"),
        }
    }
}

/// Named observable values of one state (one sweep cell or sample time).
#[derive(Debug, Clone, Default)]
pub struct ObservableSet {
    entries: Vec<(String, ObsValue)>,
}

impl ObservableSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, value: impl Into<ObsValue>) {
        self.entries.push((name.into(), value.into()));
    }

    pub fn get(&self, name: &str) -> Option<ObsValue> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, ObsValue)> {
        self.entries.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Population floor below which the fraction w is reported undefined.
const POPULATION_FLOOR: f64 = 1e-12;
/// Mean-photon floor below which g²(0) is reported undefined.
const G2_FLOOR: f64 = 1e-9;
/// Denominator floor of the spin-squeezing parameter.
const SQUEEZING_FLOOR: f64 = 1e-12;
/// Eigenvalues below this are dropped from the entropy sum.
const ENTROPY_FLOOR: f64 = 1e-12;

/// ⟨x†x⟩ of the labelled mode.
pub fn photon_number(rho: &DensityMatrix, mode: &str) -> Result<f64> {
    let n = Operator::number_mode(rho.space(), mode)?;
    Ok(expectation(rho, &n)?.re)
}

/// Population fraction w = (n_i − n_j)/(n_i + n_j); undefined when both
/// populations sit below the floor.
pub fn population_fraction(rho: &DensityMatrix, mode_i: &str, mode_j: &str) -> Result<ObsValue> {
    let n_i = photon_number(rho, mode_i)?;
    let n_j = photon_number(rho, mode_j)?;
    let total = n_i + n_j;
    if total < POPULATION_FLOOR {
        return Ok(ObsValue::Undefined);
    }
    Ok(ObsValue::Value((n_i - n_j) / total))
}

/// Zero-delay second-order coherence g²(0) = ⟨x†x†xx⟩/⟨x†x⟩²; undefined when
/// the mean photon number sits below the floor.
pub fn g2_zero(rho: &DensityMatrix, mode: &str) -> Result<ObsValue> {
    let a = Operator::destroy_mode(rho.space(), mode)?;
    let n = &a.dagger() * &a;
    let mean = expectation(rho, &n)?.re;
    if mean <= G2_FLOOR {
        return Ok(ObsValue::Undefined);
    }
    let aa = &a * &a;
    let numerator = expectation(rho, &(&aa.dagger() * &aa))?.re;
    Ok(ObsValue::Value(numerator / (mean * mean)))
}

/// Von Neumann entropy S = −Tr(ρ_A log₂ ρ_A) of the reduced state on the
/// kept subsystems; eigenvalues below 1e-12 are dropped (0·log 0 = 0).
pub fn vn_entropy(rho: &DensityMatrix, keep: &[usize]) -> Result<f64> {
    let reduced = partial_trace(rho, keep)?;
    Ok(entropy_of(&reduced))
}

/// Entropy of an already-reduced density matrix.
pub fn entropy_of(rho: &DensityMatrix) -> f64 {
    let sym = (rho.matrix() + rho.matrix().adjoint()) * C64::new(0.5, 0.0);
    linalg::eigvalsh(&sym)
        .iter()
        .filter(|&&p| p > ENTROPY_FLOOR)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Genuine two-mode entanglement parameter
/// λ_ij = |⟨a_i†a_j⟩|² − ⟨a_i†a_i a_j†a_j⟩; λ > 0 certifies genuine two-mode
/// entanglement.
pub fn genuine_two_mode(rho: &DensityMatrix, mode_i: &str, mode_j: &str) -> Result<f64> {
    if mode_i == mode_j {
        return Err(Error::InvalidParam(
            "genuine_two_mode needs distinct modes".into(),
        ));
    }
    let a_i = Operator::destroy_mode(rho.space(), mode_i)?;
    let a_j = Operator::destroy_mode(rho.space(), mode_j)?;
    let cross = expectation(rho, &(&a_i.dagger() * &a_j))?;
    let nn = expectation(rho, &(&(&a_i.dagger() * &a_i) * &(&a_j.dagger() * &a_j)))?.re;
    Ok(cross.norm_sqr() - nn)
}

/// Same parameter evaluated from precomputed moments ⟨a_i†a_j⟩ and
/// ⟨n_i n_j⟩ (as produced by trajectory averaging).
pub fn genuine_two_mode_from_moments(cross: C64, nn: f64) -> f64 {
    cross.norm_sqr() - nn
}

/// Pseudo-spin operators over two bosonic modes: J_x = (a†b + ab†)/2,
/// J_y = (a†b − ab†)/2i, J_z = (a†a − b†b)/2.
pub fn schwinger_ops(
    space: &crate::hilbert::HilbertSpace,
    mode_a: &str,
    mode_b: &str,
) -> Result<(Operator, Operator, Operator)> {
    let a = Operator::destroy_mode(space, mode_a)?;
    let b = Operator::destroy_mode(space, mode_b)?;
    let adb = &a.dagger() * &b;
    let abd = adb.dagger();
    let jx = (&adb + &abd).scale(C64::new(0.5, 0.0));
    let jy = (&adb - &abd).scale(C64::new(0.0, -0.5));
    let jz = (&(&a.dagger() * &a) - &(&b.dagger() * &b)).scale(C64::new(0.5, 0.0));
    Ok((jx, jy, jz))
}

/// Spin-squeezing parameter ξ_x² = ⟨N⟩(ΔJ_x)²/(⟨J_y⟩² + ⟨J_z⟩²) with
/// ⟨N⟩ = ⟨a†a + b†b⟩ evaluated on the same state; values < 1 certify
/// particle entanglement. Undefined on a degenerate denominator.
pub fn spin_squeezing_x(rho: &DensityMatrix, mode_a: &str, mode_b: &str) -> Result<ObsValue> {
    let (jx, jy, jz) = schwinger_ops(rho.space(), mode_a, mode_b)?;
    let jy_mean = expectation(rho, &jy)?.re;
    let jz_mean = expectation(rho, &jz)?.re;
    let denom = jy_mean * jy_mean + jz_mean * jz_mean;
    if denom <= SQUEEZING_FLOOR {
        return Ok(ObsValue::Undefined);
    }
    let jx_mean = expectation(rho, &jx)?.re;
    let jx2 = expectation(rho, &(&jx * &jx))?.re;
    let var = jx2 - jx_mean * jx_mean;
    let n_total = photon_number(rho, mode_a)? + photon_number(rho, mode_b)?;
    Ok(ObsValue::Value(n_total * var / denom))
}

/// Fidelity F = ⟨ψ|ρ|ψ⟩ against a pure target state.
pub fn fidelity_pure(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    if rho.space() != psi.space() {
        return Err(Error::DimensionMismatch(
            "fidelity across different spaces".into(),
        ));
    }
    let v = psi.amplitudes();
    let f = v.dotc(&(rho.matrix() * v));
    Ok(f.re)
}

/// Excited-state population ⟨σ†σ⟩ of the atom.
pub fn atom_excitation(rho: &DensityMatrix) -> Result<f64> {
    let sigma = Operator::qubit_lower(rho.space())?;
    Ok(expectation(rho, &(&sigma.dagger() * &sigma))?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{basis_state, fock_state, AtomState, HilbertSpace, StateVector};
    use crate::{CMatrix, CVector};
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn two_mode(n: usize) -> HilbertSpace {
        HilbertSpace::new(&[("a", n), ("b", n)]).unwrap()
    }

    #[test]
    fn photon_number_basics() {
        let space = two_mode(3);
        let vac = basis_state(&space, &[0, 0]).unwrap().to_density();
        assert!(photon_number(&vac, "a").unwrap().abs() < 1e-14);
        let one = basis_state(&space, &[1, 0]).unwrap().to_density();
        assert!((photon_number(&one, "a").unwrap() - 1.0).abs() < 1e-14);
        assert!(photon_number(&one, "c").is_err());
    }

    #[test]
    fn population_fraction_limits() {
        let space = two_mode(3);
        let a_only = basis_state(&space, &[1, 0]).unwrap().to_density();
        assert_eq!(
            population_fraction(&a_only, "a", "b").unwrap(),
            ObsValue::Value(1.0)
        );
        let b_only = basis_state(&space, &[0, 1]).unwrap().to_density();
        assert_eq!(
            population_fraction(&b_only, "a", "b").unwrap(),
            ObsValue::Value(-1.0)
        );
        let both = StateVector::normalized(
            space.clone(),
            basis_state(&space, &[1, 0]).unwrap().amplitudes()
                + basis_state(&space, &[0, 1]).unwrap().amplitudes(),
        )
        .unwrap()
        .to_density();
        let w = population_fraction(&both, "a", "b")
            .unwrap()
            .value()
            .unwrap();
        assert!(w.abs() < 1e-14);
        let vac = basis_state(&space, &[0, 0]).unwrap().to_density();
        assert_eq!(
            population_fraction(&vac, "a", "b").unwrap(),
            ObsValue::Undefined
        );
    }

    #[test]
    fn g2_fock_states() {
        let space = HilbertSpace::new(&[("a", 4)]).unwrap();
        let one = basis_state(&space, &[1]).unwrap().to_density();
        assert_eq!(g2_zero(&one, "a").unwrap(), ObsValue::Value(0.0));
        let two = basis_state(&space, &[2]).unwrap().to_density();
        let g2 = g2_zero(&two, "a").unwrap().value().unwrap();
        assert!((g2 - 0.5).abs() < 1e-13);
        let vac = basis_state(&space, &[0]).unwrap().to_density();
        assert_eq!(g2_zero(&vac, "a").unwrap(), ObsValue::Undefined);
    }

    #[test]
    fn g2_coherent_state_poissonian() {
        let n_levels = 14;
        let space = HilbertSpace::new(&[("a", n_levels)]).unwrap();
        let alpha_sq = 0.5f64;
        let alpha = alpha_sq.sqrt();
        let mut amp = CVector::zeros(n_levels);
        let mut log_fact = 0.0;
        for k in 0..n_levels {
            if k > 0 {
                log_fact += (k as f64).ln();
            }
            amp[k] = c((-0.5 * alpha_sq + k as f64 * alpha.ln() - 0.5 * log_fact).exp());
        }
        let rho = StateVector::normalized(space, amp).unwrap().to_density();
        let g2 = g2_zero(&rho, "a").unwrap().value().unwrap();
        assert!((g2 - 1.0).abs() < 1e-6, "g2 = {g2}");
    }

    #[test]
    fn g2_vacuum_one_photon_mixture_vanishes() {
        let space = HilbertSpace::new(&[("a", 3)]).unwrap();
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(0.55);
        m[(1, 1)] = c(0.45);
        let rho = DensityMatrix::new(space, m).unwrap();
        assert_eq!(g2_zero(&rho, "a").unwrap(), ObsValue::Value(0.0));
    }

    #[test]
    fn entropy_product_bell_and_qutrit_cases() {
        let space = two_mode(2);
        let prod = basis_state(&space, &[1, 0]).unwrap().to_density();
        assert!(vn_entropy(&prod, &[0]).unwrap().abs() < 1e-12);

        let bell = StateVector::normalized(
            space.clone(),
            basis_state(&space, &[0, 1]).unwrap().amplitudes()
                + basis_state(&space, &[1, 0]).unwrap().amplitudes(),
        )
        .unwrap()
        .to_density();
        assert!((vn_entropy(&bell, &[0]).unwrap() - 1.0).abs() < 1e-12);

        // (|20> + |02> + i|11>)/√3 reduced to one mode: S = log₂3.
        let space3 = two_mode(3);
        let mut amp = CVector::zeros(9);
        amp[space3.flat_index(&[2, 0]).unwrap()] = c(1.0);
        amp[space3.flat_index(&[0, 2]).unwrap()] = c(1.0);
        amp[space3.flat_index(&[1, 1]).unwrap()] = C64::new(0.0, 1.0);
        let rho = StateVector::normalized(space3, amp).unwrap().to_density();
        let s = vn_entropy(&rho, &[0]).unwrap();
        assert!((s - 3f64.log2()).abs() < 1e-12, "S = {s}");
    }

    #[test]
    fn genuine_two_mode_cases() {
        // Product of coherent-ish states factorizes: λ = 0.
        let space = two_mode(8);
        let mut amp_a = CVector::zeros(8);
        let mut amp_b = CVector::zeros(8);
        let alpha = 0.3f64;
        let beta = 0.2f64;
        let mut fact = 1.0;
        for k in 0..8 {
            if k > 0 {
                fact *= k as f64;
            }
            amp_a[k] = c(alpha.powi(k as i32) / fact.sqrt());
            amp_b[k] = c(beta.powi(k as i32) / fact.sqrt());
        }
        let mut amp = CVector::zeros(64);
        for i in 0..8 {
            for j in 0..8 {
                amp[space.flat_index(&[i, j]).unwrap()] = amp_a[i] * amp_b[j];
            }
        }
        let rho = StateVector::normalized(space.clone(), amp)
            .unwrap()
            .to_density();
        let lam = genuine_two_mode(&rho, "a", "b").unwrap();
        assert!(lam.abs() < 1e-10, "product state λ = {lam}");

        // Single-excitation Bell pair: λ = 1/4.
        let space2 = two_mode(2);
        let bell = StateVector::normalized(
            space2.clone(),
            basis_state(&space2, &[1, 0]).unwrap().amplitudes()
                + basis_state(&space2, &[0, 1]).unwrap().amplitudes(),
        )
        .unwrap()
        .to_density();
        let lam = genuine_two_mode(&bell, "a", "b").unwrap();
        assert!((lam - 0.25).abs() < 1e-13);

        assert!(genuine_two_mode(&bell, "a", "a").is_err());
    }

    #[test]
    fn genuine_two_mode_w_state() {
        // W state over (a1, b, a2): λ_1b = |1/3|²·... = 1/9 with zero cross
        // number term.
        let space = HilbertSpace::new(&[("a1", 2), ("b", 2), ("a2", 2)]).unwrap();
        let mut amp = CVector::zeros(8);
        amp[space.flat_index(&[1, 0, 0]).unwrap()] = c(1.0);
        amp[space.flat_index(&[0, 1, 0]).unwrap()] = c(1.0);
        amp[space.flat_index(&[0, 0, 1]).unwrap()] = c(1.0);
        let rho = StateVector::normalized(space, amp).unwrap().to_density();
        let lam = genuine_two_mode(&rho, "a1", "b").unwrap();
        assert!((lam - 1.0 / 9.0).abs() < 1e-13, "λ_1b = {lam}");
    }

    #[test]
    fn spin_squeezing_single_mode_population() {
        // |1,0>: J_z eigenstate with ⟨J_z⟩ = 1/2, (ΔJ_x)² = 1/4, ⟨N⟩ = 1:
        // ξ² = 1. Hand evaluation on the 2-dim single-excitation block.
        let space = two_mode(3);
        let rho = basis_state(&space, &[1, 0]).unwrap().to_density();
        let xi = spin_squeezing_x(&rho, "a", "b").unwrap().value().unwrap();
        assert!((xi - 1.0).abs() < 1e-12, "ξ² = {xi}");
    }

    #[test]
    fn spin_squeezing_degenerate_denominator_flags() {
        let space = two_mode(3);
        let vac = basis_state(&space, &[0, 0]).unwrap().to_density();
        assert_eq!(
            spin_squeezing_x(&vac, "a", "b").unwrap(),
            ObsValue::Undefined
        );

        // Symmetric two-photon state: ⟨J_y⟩ = ⟨J_z⟩ = 0 → flagged, no blowup.
        let mut amp = CVector::zeros(9);
        amp[space.flat_index(&[2, 0]).unwrap()] = c(1.0);
        amp[space.flat_index(&[0, 2]).unwrap()] = c(1.0);
        let rho = StateVector::normalized(space, amp).unwrap().to_density();
        assert_eq!(
            spin_squeezing_x(&rho, "a", "b").unwrap(),
            ObsValue::Undefined
        );
    }

    #[test]
    fn schwinger_commutator_closes() {
        let space = two_mode(5);
        let (jx, jy, jz) = schwinger_ops(&space, "a", "b").unwrap();
        // [J_x, J_y] = i J_z away from the truncation edge: compare on the
        // subspace with total occupation below the cutoff.
        let comm = &(&jx * &jy) - &(&jy * &jx);
        let expect = jz.scale(C64::new(0.0, 1.0));
        for i in 0..25 {
            for j in 0..25 {
                let (na_i, nb_i) = (i / 5, i % 5);
                let (na_j, nb_j) = (j / 5, j % 5);
                if na_i + nb_i < 4 && na_j + nb_j < 4 {
                    let diff = (comm.matrix()[(i, j)] - expect.matrix()[(i, j)]).norm();
                    assert!(diff < 1e-10, "entry ({i},{j}) off by {diff:.3e}");
                }
            }
        }
    }

    #[test]
    fn fidelity_cases() {
        let space = two_mode(2);
        let psi = StateVector::normalized(
            space.clone(),
            basis_state(&space, &[1, 0]).unwrap().amplitudes() * c(0.6)
                + basis_state(&space, &[0, 1]).unwrap().amplitudes() * c(0.8),
        )
        .unwrap();
        let rho = psi.to_density();
        assert!((fidelity_pure(&rho, &psi).unwrap() - 1.0).abs() < 1e-12);

        let orth = StateVector::normalized(
            space.clone(),
            basis_state(&space, &[1, 0]).unwrap().amplitudes() * c(0.8)
                - basis_state(&space, &[0, 1]).unwrap().amplitudes() * c(0.6),
        )
        .unwrap();
        assert!(fidelity_pure(&rho, &orth).unwrap().abs() < 1e-12);

        let d = space.total_dim();
        let mixed = DensityMatrix::new(space, CMatrix::identity(d, d) * c(1.0 / d as f64)).unwrap();
        assert!((fidelity_pure(&mixed, &psi).unwrap() - 1.0 / d as f64).abs() < 1e-12);
    }

    #[test]
    fn atom_excitation_cases() {
        let space = HilbertSpace::single_ensemble(2, 2).unwrap();
        let g = fock_state(&space, &[0, 0], AtomState::G)
            .unwrap()
            .to_density();
        assert!(atom_excitation(&g).unwrap().abs() < 1e-14);
        let e = fock_state(&space, &[0, 0], AtomState::E)
            .unwrap()
            .to_density();
        assert!((atom_excitation(&e).unwrap() - 1.0).abs() < 1e-14);
        let plus = StateVector::normalized(
            space.clone(),
            fock_state(&space, &[0, 0], AtomState::G)
                .unwrap()
                .amplitudes()
                + fock_state(&space, &[0, 0], AtomState::E)
                    .unwrap()
                    .amplitudes(),
        )
        .unwrap()
        .to_density();
        assert!((atom_excitation(&plus).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn entropy_schmidt_symmetric_for_pure_states() {
        // S(ρ_A) = S(ρ_B) for a random pure bipartite state.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        let space = HilbertSpace::new(&[("a", 3), ("b", 4)]).unwrap();
        let amp = CVector::from_fn(12, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let rho = StateVector::normalized(space, amp).unwrap().to_density();
        let s_a = vn_entropy(&rho, &[0]).unwrap();
        let s_b = vn_entropy(&rho, &[1]).unwrap();
        assert!((s_a - s_b).abs() < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn observables_invariant_under_global_phase(seed in 0u64..500, phase in 0.0..std::f64::consts::TAU) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let space = two_mode(3);
            let amp = CVector::from_fn(9, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let psi = StateVector::normalized(space.clone(), amp.clone()).unwrap();
            let rotated = StateVector::normalized(
                space.clone(),
                amp * C64::new(phase.cos(), phase.sin()),
            )
            .unwrap();
            let rho1 = psi.to_density();
            let rho2 = rotated.to_density();
            prop_assert!((photon_number(&rho1, "a").unwrap() - photon_number(&rho2, "a").unwrap()).abs() < 1e-12);
            prop_assert!((vn_entropy(&rho1, &[0]).unwrap() - vn_entropy(&rho2, &[0]).unwrap()).abs() < 1e-10);
            let l1 = genuine_two_mode(&rho1, "a", "b").unwrap();
            let l2 = genuine_two_mode(&rho2, "a", "b").unwrap();
            prop_assert!((l1 - l2).abs() < 1e-12);
        }

        #[test]
        fn genuine_two_mode_symmetric(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let space = two_mode(3);
            let g = CMatrix::from_fn(9, 9, |_, _| {
                C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
            });
            let h = &g * g.adjoint();
            let tr = h.diagonal().sum();
            let rho = DensityMatrix::new(space, h / tr).unwrap();
            let lam_ab = genuine_two_mode(&rho, "a", "b").unwrap();
            let lam_ba = genuine_two_mode(&rho, "b", "a").unwrap();
            prop_assert!((lam_ab - lam_ba).abs() < 1e-12);
        }
    }
}
