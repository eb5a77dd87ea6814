//! Driven-dissipative cavity QED on truncated Fock spaces.
//!
//! The models are one or two driven bosonic modes (an optical mode `a`, or a
//! pair `a1`, `a2`) exchange-coupled to a driven microwave mode `b`, which in
//! turn couples to a single two-level atom. The crate builds the effective
//! Hamiltonians and their Lindblad dissipators, solves for steady states,
//! integrates the master equation, unravels it into Monte-Carlo wavefunction
//! trajectories, and evaluates the quantum-statistical observables of the
//! radiation (photon statistics, entropies, mode-entanglement parameters,
//! spin squeezing, fidelities).
//!
//! # Conventions
//!
//! These are fixed crate-wide; cross-implementations that follow them agree
//! bit-for-bit on operator and superoperator layouts.
//!
//! * **Units.** All angular frequencies and rates are in rad/µs, all times in
//!   µs. Configuration files and output tables use ν = ω/2π in MHz and t in
//!   µs; since 1 MHz = 1/µs the only conversion at the boundary is the factor
//!   2π, applied exactly once (in [`config`]/[`output`]).
//! * **Subsystem ordering.** Single-ensemble spaces are ordered `(a, b,
//!   atom)`, two-ensemble spaces `(a1, b, a2, atom)`, so kets read
//!   |n_a n_b s⟩ and |n₁ n_b n₂ s⟩.
//! * **Composite index map.** A basis state with per-subsystem indices
//!   (i₀, i₁, …) has flat index i₀·(d₁·d₂·…) + i₁·(d₂·…) + …, i.e. the first
//!   subsystem is the most significant digit, matching `A ⊗ B` with the first
//!   factor leftmost.
//! * **Qubit basis.** (g, e) with g at index 0; σ = |g⟩⟨e| is the lowering
//!   operator and σ_z = diag(−1, +1).
//! * **Master equation.** `ρ̇ = −i[H,ρ] + Σ_x r_x D[x]ρ` with
//!   `D[x]ρ = (2xρx† − x†xρ − ρx†x)/2`. A mode with photon loss rate κ
//!   decays as n(t) = n(0)·e^{−κt}.
//! * **Vectorization.** Column stacking: `vec(ρ)[j·d + i] = ρ[i,j]` (row
//!   i, column j). Under this map the Liouvillian is
//!   L = −i(I⊗H − Hᵀ⊗I) + Σ_x r_x [ x̄⊗x − ½ I⊗(x†x) − ½ (x†x)ᵀ⊗I ],
//!   where `⊗` is the standard Kronecker product and `x̄` the entrywise
//!   conjugate.
//!
//! # Layout
//!
//! * [`hilbert`]: truncated Fock ⊗ qubit spaces, operators, states, partial
//!   trace, expectations.
//! * [`models`]: effective Hamiltonians, collapse operators, the microscopic
//!   coefficient pipeline (Bogoliubov normal modes and the large-drive
//!   elimination), dark states, polariton modes, Morris–Shore bright/dark
//!   decomposition.
//! * [`dynamics`]: Liouvillian assembly, steady states, adaptive
//!   master-equation integration, trajectory unraveling.
//! * [`observables`]: populations, g²(0), von Neumann entropy, genuine
//!   two-mode entanglement, spin squeezing, fidelities.
//! * [`experiments`]: scenario presets and sweep/evolution drivers with
//!   reproducible, provenance-carrying results.
//! * [`config`]/[`output`]/[`cli`]: plain-text scenario configs, CSV tables
//!   with metadata sidecars, and the command-line surface.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod linalg;
pub mod models;
pub mod observables;
pub mod output;

pub use error::Error;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix (column-major).
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex vector.
pub type CVector = nalgebra::DVector<C64>;

/// 2π, for converting ν in MHz to angular frequency in rad/µs.
pub const TWO_PI: f64 = std::f64::consts::TAU;
