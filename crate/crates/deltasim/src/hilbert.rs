//! Truncated multi-mode Fock ⊗ qubit spaces and the dense operator algebra
//! on them: construction, tensor embedding, states, partial trace,
//! expectations.
//!
//! Everything here is immutable after construction and safe to share across
//! parallel workers; all operations are pure functions.

use crate::error::{Error, Result};
use crate::linalg;
use crate::{CMatrix, CVector, C64};

/// Ordered list of subsystem dimensions with unique labels.
///
/// The flat index of a basis state (i₀, i₁, …) is
/// i₀·(d₁·d₂·…) + i₁·(d₂·…) + …, first subsystem most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl HilbertSpace {
    pub fn new(parts: &[(&str, usize)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParam(
                "space needs at least one subsystem".into(),
            ));
        }
        for (label, dim) in parts {
            if *dim < 2 {
                return Err(Error::InvalidParam(format!(
                    "subsystem '{label}' has dimension {dim}, need >= 2"
                )));
            }
        }
        let labels: Vec<String> = parts.iter().map(|(l, _)| l.to_string()).collect();
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(Error::InvalidParam(format!(
                    "duplicate subsystem label '{l}'"
                )));
            }
        }
        Ok(Self {
            dims: parts.iter().map(|(_, d)| *d).collect(),
            labels,
        })
    }

    /// (a, b, atom) with the given Fock truncations (number of levels).
    pub fn single_ensemble(n_fock_a: usize, n_fock_b: usize) -> Result<Self> {
        Self::new(&[("a", n_fock_a), ("b", n_fock_b), ("atom", 2)])
    }

    /// (a1, b, a2, atom); kets read |n₁ n_b n₂ s⟩.
    pub fn two_ensemble(n_fock_1: usize, n_fock_b: usize, n_fock_2: usize) -> Result<Self> {
        Self::new(&[
            ("a1", n_fock_1),
            ("b", n_fock_b),
            ("a2", n_fock_2),
            ("atom", 2),
        ])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn subsystem_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidParam(format!("unknown subsystem label '{label}'")))
    }

    /// Flat index of a basis state given per-subsystem indices.
    pub fn flat_index(&self, indices: &[usize]) -> Result<usize> {
        if indices.len() != self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} indices for {} subsystems",
                indices.len(),
                self.dims.len()
            )));
        }
        let mut flat = 0;
        for (k, (&i, &d)) in indices.iter().zip(&self.dims).enumerate() {
            if i >= d {
                return Err(Error::InvalidParam(format!(
                    "index {i} exceeds dimension {d} of subsystem '{}'",
                    self.labels[k]
                )));
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }

    /// Strides of each subsystem in the flat index.
    fn strides(&self) -> Vec<usize> {
        let n = self.dims.len();
        let mut s = vec![1usize; n];
        for k in (0..n - 1).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }
}

/// Dense operator on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "operator matrix is {}x{}, space dimension is {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        Self {
            space: space.clone(),
            matrix: CMatrix::identity(space.total_dim(), space.total_dim()),
        }
    }

    pub fn zero(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space: space.clone(),
            matrix: CMatrix::zeros(d, d),
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dagger(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, alpha: C64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * alpha,
        }
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        linalg::max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Annihilation operator of the mode with the given label, embedded.
    pub fn destroy_mode(space: &HilbertSpace, label: &str) -> Result<Self> {
        let pos = space.position(label)?;
        embed(&destroy(space.dims()[pos])?, space, pos)
    }

    /// Number operator of the mode with the given label, embedded.
    pub fn number_mode(space: &HilbertSpace, label: &str) -> Result<Self> {
        let a = Self::destroy_mode(space, label)?;
        Ok(&a.dagger() * &a)
    }

    /// σ = |g⟩⟨e| on the atom subsystem, embedded.
    pub fn qubit_lower(space: &HilbertSpace) -> Result<Self> {
        let pos = space.position("atom")?;
        let (sigma, _) = qubit_ops();
        embed(&sigma, space, pos)
    }

    /// σ_z = diag(−1, +1) on the atom subsystem, embedded.
    pub fn qubit_z(space: &HilbertSpace) -> Result<Self> {
        let pos = space.position("atom")?;
        let (_, sigma_z) = qubit_ops();
        embed(&sigma_z, space, pos)
    }
}

macro_rules! op_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait<&Operator> for &Operator {
            type Output = Operator;
            fn $method(self, rhs: &Operator) -> Operator {
                assert_eq!(self.space, rhs.space, "operator spaces differ");
                Operator {
                    space: self.space.clone(),
                    matrix: &self.matrix $op &rhs.matrix,
                }
            }
        }
    };
}

op_binop!(Add, add, +);
op_binop!(Sub, sub, -);

impl std::ops::Mul<&Operator> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

/// Annihilation operator on a single mode with `n_levels` Fock levels:
/// M[k, k+1] = √(k+1).
pub fn destroy(n_levels: usize) -> Result<CMatrix> {
    if n_levels < 2 {
        return Err(Error::InvalidParam(format!(
            "annihilation operator needs at least 2 levels, got {n_levels}"
        )));
    }
    let mut m = CMatrix::zeros(n_levels, n_levels);
    for k in 0..n_levels - 1 {
        m[(k, k + 1)] = C64::new(((k + 1) as f64).sqrt(), 0.0);
    }
    Ok(m)
}

/// Qubit operators in the (g, e) ordering: σ = |g⟩⟨e| and σ_z = diag(−1, +1).
pub fn qubit_ops() -> (CMatrix, CMatrix) {
    let mut sigma = CMatrix::zeros(2, 2);
    sigma[(0, 1)] = C64::new(1.0, 0.0);
    let mut sigma_z = CMatrix::zeros(2, 2);
    sigma_z[(0, 0)] = C64::new(-1.0, 0.0);
    sigma_z[(1, 1)] = C64::new(1.0, 0.0);
    (sigma, sigma_z)
}

/// Embed a single-subsystem operator at `position`:
/// I ⊗ … ⊗ op ⊗ … ⊗ I in the space ordering.
pub fn embed(op: &CMatrix, space: &HilbertSpace, position: usize) -> Result<Operator> {
    if position >= space.subsystem_count() {
        return Err(Error::InvalidParam(format!(
            "position {position} out of range ({} subsystems)",
            space.subsystem_count()
        )));
    }
    let d_sub = space.dims()[position];
    if op.nrows() != d_sub || op.ncols() != d_sub {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, subsystem '{}' has dimension {d_sub}",
            op.nrows(),
            op.ncols(),
            space.labels()[position]
        )));
    }
    let left: usize = space.dims()[..position].iter().product();
    let right: usize = space.dims()[position + 1..].iter().product();
    let d = space.total_dim();
    let mut m = CMatrix::zeros(d, d);
    // (I_left ⊗ op ⊗ I_right): blocks of `op` scaled along left diagonal,
    // with each op entry expanded by the right identity.
    for bl in 0..left {
        for r in 0..d_sub {
            for c in 0..d_sub {
                let v = op[(r, c)];
                if v == C64::new(0.0, 0.0) {
                    continue;
                }
                let row0 = (bl * d_sub + r) * right;
                let col0 = (bl * d_sub + c) * right;
                for k in 0..right {
                    m[(row0 + k, col0 + k)] = v;
                }
            }
        }
    }
    Ok(Operator {
        space: space.clone(),
        matrix: m,
    })
}

/// Atom state tag for [`fock_state`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomState {
    G,
    E,
}

impl AtomState {
    pub fn index(self) -> usize {
        match self {
            AtomState::G => 0,
            AtomState::E => 1,
        }
    }
}

/// Pure state on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    amplitudes: CVector,
    normalized: bool,
}

impl StateVector {
    /// Wrap an amplitude vector; `normalized` asserts unit norm within 1e-12.
    pub fn new(space: HilbertSpace, amplitudes: CVector, normalized: bool) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector has length {}, space dimension is {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        if normalized {
            let n = amplitudes.norm();
            if (n - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidState(format!(
                    "state flagged normalized but |psi| = {n:.15}"
                )));
            }
        }
        Ok(Self {
            space,
            amplitudes,
            normalized,
        })
    }

    /// Build from raw amplitudes and normalize.
    pub fn normalized(space: HilbertSpace, amplitudes: CVector) -> Result<Self> {
        let n = amplitudes.norm();
        if n == 0.0 {
            return Err(Error::InvalidState(
                "cannot normalize the zero vector".into(),
            ));
        }
        Self::new(space, amplitudes / C64::new(n, 0.0), true)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized_flag(&self) -> bool {
        self.normalized
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(
                "inner product across different spaces".into(),
            ));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// ⟨ψ|O|ψ⟩.
    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        if self.space != op.space {
            return Err(Error::DimensionMismatch(
                "expectation across different spaces".into(),
            ));
        }
        Ok(self.amplitudes.dotc(&(op.matrix() * &self.amplitudes)))
    }

    pub fn to_density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix {
            space: self.space.clone(),
            matrix: m,
        }
    }
}

/// Computational-basis unit vector: photon occupations for every non-atom
/// subsystem in order, plus the atom state.
pub fn fock_state(
    space: &HilbertSpace,
    occupations: &[usize],
    atom: AtomState,
) -> Result<StateVector> {
    let atom_pos = space.position("atom")?;
    if space.dims()[atom_pos] != 2 {
        return Err(Error::InvalidParam(
            "atom subsystem must have dimension 2".into(),
        ));
    }
    if occupations.len() != space.subsystem_count() - 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} occupations for {} bosonic subsystems",
            occupations.len(),
            space.subsystem_count() - 1
        )));
    }
    let mut indices = Vec::with_capacity(space.subsystem_count());
    let mut it = occupations.iter();
    for pos in 0..space.subsystem_count() {
        if pos == atom_pos {
            indices.push(atom.index());
        } else {
            indices.push(*it.next().expect("occupation count checked above"));
        }
    }
    basis_state(space, &indices)
}

/// Basis vector from raw per-subsystem indices.
pub fn basis_state(space: &HilbertSpace, indices: &[usize]) -> Result<StateVector> {
    let flat = space.flat_index(indices)?;
    let mut amp = CVector::zeros(space.total_dim());
    amp[flat] = C64::new(1.0, 0.0);
    StateVector::new(space.clone(), amp, true)
}

/// Density matrix on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: CMatrix,
}

/// Validation summary for a density matrix. Positivity is monitored through
/// `min_eigenvalue`, never clipped.
#[derive(Debug, Clone, Copy)]
pub struct DensityDiagnostics {
    pub trace_error: f64,
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
}

impl DensityMatrix {
    /// Checked constructor: Hermitian within 1e-10 (max elementwise) and unit
    /// trace within 1e-10. Positivity is not enforced here; use
    /// [`DensityMatrix::diagnostics`] to monitor it.
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "density matrix is {}x{}, space dimension is {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = linalg::max_abs(&(&matrix - matrix.adjoint()));
        if herm > 1e-10 {
            return Err(Error::InvalidState(format!(
                "density matrix not Hermitian: max |rho - rho^dag| = {herm:.3e}"
            )));
        }
        let tr = matrix.diagonal().sum();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidState(format!("density matrix trace is {tr}")));
        }
        Ok(Self { space, matrix })
    }

    /// Unchecked constructor for internal evolution loops; the invariants are
    /// monitored by the callers' diagnostics instead of per-step checks.
    pub fn from_matrix_unchecked(space: HilbertSpace, matrix: CMatrix) -> Self {
        Self { space, matrix }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        psi.to_density()
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diagonal().sum()
    }

    pub fn diagnostics(&self) -> DensityDiagnostics {
        let herm = linalg::max_abs(&(&self.matrix - self.matrix.adjoint()));
        let tr = (self.trace() - C64::new(1.0, 0.0)).norm();
        let sym = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let min_eig = linalg::eigvalsh(&sym)[0];
        DensityDiagnostics {
            trace_error: tr,
            hermiticity_deviation: herm,
            min_eigenvalue: min_eig,
        }
    }

    /// Purity Tr(ρ²).
    pub fn purity(&self) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                acc += self.matrix[(i, j)] * self.matrix[(j, i)];
            }
        }
        acc.re
    }
}

/// Reduced density matrix on the kept subsystems (indices strictly
/// increasing); the kept subsystems retain their original order and labels.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let space = rho.space();
    let n_sub = space.subsystem_count();
    if keep.is_empty() {
        return Err(Error::InvalidParam(
            "partial_trace needs a nonempty keep set".into(),
        ));
    }
    for w in keep.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParam(
                "keep indices must be strictly increasing".into(),
            ));
        }
    }
    if *keep.last().unwrap() >= n_sub {
        return Err(Error::InvalidParam(format!(
            "keep index {} out of range ({n_sub} subsystems)",
            keep.last().unwrap()
        )));
    }

    let strides = space.strides();
    let traced: Vec<usize> = (0..n_sub).filter(|k| !keep.contains(k)).collect();

    let offsets = |subsys: &[usize]| -> Vec<usize> {
        let mut offs = vec![0usize];
        for &s in subsys {
            let d = space.dims()[s];
            let stride = strides[s];
            let mut next = Vec::with_capacity(offs.len() * d);
            for &o in &offs {
                for i in 0..d {
                    next.push(o + i * stride);
                }
            }
            offs = next;
        }
        offs
    };

    let keep_offs = offsets(keep);
    let trace_offs = offsets(&traced);

    let dk = keep_offs.len();
    let mut out = CMatrix::zeros(dk, dk);
    let m = rho.matrix();
    for (p, &ro) in keep_offs.iter().enumerate() {
        for (q, &co) in keep_offs.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &trace_offs {
                acc += m[(ro + t, co + t)];
            }
            out[(p, q)] = acc;
        }
    }

    let parts: Vec<(&str, usize)> = keep
        .iter()
        .map(|&k| (space.labels()[k].as_str(), space.dims()[k]))
        .collect();
    let sub_space = HilbertSpace::new(&parts)?;
    Ok(DensityMatrix {
        space: sub_space,
        matrix: out,
    })
}

/// Tr(ρ·op).
pub fn expectation(rho: &DensityMatrix, op: &Operator) -> Result<C64> {
    if rho.space() != op.space() {
        return Err(Error::DimensionMismatch(
            "expectation across different spaces".into(),
        ));
    }
    let d = rho.matrix().nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += rho.matrix()[(i, j)] * op.matrix()[(j, i)];
        }
    }
    Ok(acc)
}
