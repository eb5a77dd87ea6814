//! Microscopic coefficient pipeline: Bogoliubov normal modes of the driven
//! quasi-spin-wave pair and the second-order elimination that produces the
//! effective mode–mode coupling J, renormalized frequencies and transferred
//! drives.
//!
//! The elimination removes the normal modes p_± (frequencies Ω_±) from the
//! dynamics through a canonical transformation with mixing amplitudes
//! x_λ = g_a u_λ/(ϖ_a − Ω_λ) and y_λ = g_b v_λ/(ω_b − Ω_λ); every effective
//! coefficient is a λ-sum over those amplitudes. [`effective_coeffs_exact`]
//! evaluates the sums as written; [`effective_coeffs_approx`] evaluates their
//! closed-form large-Ω asymptotics.

use crate::error::{Error, Result};

/// Relative safety threshold for the perturbative denominators:
/// |ω − Ω_λ| must exceed `DENOM_THRESHOLD · Ω`.
pub const DENOM_THRESHOLD: f64 = 1e-6;

/// Inputs of the coefficient pipeline. All frequencies are angular, in the
/// frame rotating at the classical drive; detunings are exposed as derived
/// quantities so they cannot drift out of sync with the frame frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicroscopicParams {
    /// Classical drive Rabi frequency Ω on the A–B transition.
    pub rabi: f64,
    /// Collectively enhanced optical coupling g_a (already √N-scaled).
    pub g_a: f64,
    /// Collectively enhanced microwave coupling g_b.
    pub g_b: f64,
    /// Qubit–cavity coupling g.
    pub g: f64,
    /// Probe drive Ω_A on the quasi-spin-wave A mode.
    pub probe_a: f64,
    /// Microwave cavity drive E_b.
    pub drive_b: f64,
    /// Optical field frequency ϖ_a in the rotating frame.
    pub varpi_a: f64,
    /// Quasi-spin-wave A-mode frequency ϖ_A in the rotating frame.
    pub varpi_spin_a: f64,
    /// Microwave cavity frequency ω_b.
    pub omega_b: f64,
    /// Quasi-spin-wave B-mode frequency ω_B.
    pub omega_spin_b: f64,
    /// Qubit splitting ω₀.
    pub omega_0: f64,
}

impl MicroscopicParams {
    /// Construct from the detunings Δ = ω_d − ω_AB, Δ_a = ω_a − ω_A,
    /// Δ_b = ω_b − ω_B with ω_B as the frame anchor:
    /// ϖ_A = ω_B − Δ, ϖ_a = ω_B − Δ + Δ_a, ω_b = ω_B + Δ_b.
    #[allow(clippy::too_many_arguments)]
    pub fn from_detunings(
        rabi: f64,
        delta: f64,
        delta_a: f64,
        delta_b: f64,
        omega_spin_b: f64,
        g_a: f64,
        g_b: f64,
        g: f64,
        probe_a: f64,
        drive_b: f64,
        omega_0: f64,
    ) -> Self {
        Self {
            rabi,
            g_a,
            g_b,
            g,
            probe_a,
            drive_b,
            varpi_a: omega_spin_b - delta + delta_a,
            varpi_spin_a: omega_spin_b - delta,
            omega_b: omega_spin_b + delta_b,
            omega_spin_b,
            omega_0,
        }
    }

    /// Δ = ω_B − ϖ_A (drive detuning from the A–B transition).
    pub fn delta(&self) -> f64 {
        self.omega_spin_b - self.varpi_spin_a
    }

    /// Δ_a = ϖ_a − ϖ_A.
    pub fn delta_a(&self) -> f64 {
        self.varpi_a - self.varpi_spin_a
    }

    /// Δ_b = ω_b − ω_B.
    pub fn delta_b(&self) -> f64 {
        self.omega_b - self.omega_spin_b
    }

    /// Three-photon resonance Δ_a − Δ − Δ_b = 0 (equivalently ϖ_a = ω_b)
    /// within `tol`.
    pub fn three_photon_resonant(&self, tol: f64) -> bool {
        (self.delta_a() - self.delta() - self.delta_b()).abs() <= tol
    }

    /// max(|Δ|, |Δ_a|, |Δ_b|) / Ω, the expansion parameter of the
    /// approximate coefficients.
    pub fn detuning_ratio(&self) -> f64 {
        let dmax = self
            .delta()
            .abs()
            .max(self.delta_a().abs())
            .max(self.delta_b().abs());
        if self.rabi == 0.0 {
            f64::INFINITY
        } else {
            dmax / self.rabi.abs()
        }
    }
}

/// Bogoliubov rotation mixing the quasi-spin-wave modes (A, B) into normal
/// modes p_± = u_± A + v_± B with frequencies Ω_±.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovCoeffs {
    pub u_plus: f64,
    pub u_minus: f64,
    pub v_plus: f64,
    pub v_minus: f64,
    /// η = √((ϖ_A − ω_B)² + 4Ω²), the normal-mode splitting.
    pub eta: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

/// Normal modes of the driven (A, B) pair:
/// u_± = √((η ± (ϖ_A − ω_B))/2η), v_+ = √((η − (ϖ_A − ω_B))/2η),
/// u_− = −v_+, v_− = u_+, Ω_± = (ϖ_A + ω_B ± η)/2.
pub fn bogoliubov(varpi_spin_a: f64, omega_spin_b: f64, rabi: f64) -> Result<BogoliubovCoeffs> {
    if rabi < 0.0 {
        return Err(Error::InvalidParam(format!(
            "rabi frequency {rabi} must be >= 0"
        )));
    }
    let split = varpi_spin_a - omega_spin_b;
    let eta = (split * split + 4.0 * rabi * rabi).sqrt();
    if eta == 0.0 {
        return Err(Error::Degenerate(
            "normal modes undefined: drive off and degenerate spin-wave frequencies".into(),
        ));
    }
    let u_plus = ((eta + split) / (2.0 * eta)).sqrt();
    let v_plus = ((eta - split) / (2.0 * eta)).sqrt();
    Ok(BogoliubovCoeffs {
        u_plus,
        u_minus: -v_plus,
        v_plus,
        v_minus: u_plus,
        eta,
        omega_plus: 0.5 * (varpi_spin_a + omega_spin_b + eta),
        omega_minus: 0.5 * (varpi_spin_a + omega_spin_b - eta),
    })
}

/// Coefficients of the effective Hamiltonian after eliminating the normal
/// modes p_±.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoeffs {
    /// Renormalized optical frequency ϖ_a′.
    pub varpi_a_prime: f64,
    /// Renormalized microwave frequency ω_b′.
    pub omega_b_prime: f64,
    /// Effective mode–mode exchange coupling J.
    pub j: f64,
    /// Renormalized normal-mode frequencies Ω_±′.
    pub omega_prime_plus: f64,
    pub omega_prime_minus: f64,
    /// Symmetric p_+ ↔ p_− cross coupling Q.
    pub q: f64,
    /// Residual qubit–normal-mode couplings G_±.
    pub g_plus: f64,
    pub g_minus: f64,
    /// Drive E_a transferred onto the optical mode.
    pub drive_a: f64,
    /// Renormalized microwave drive E_b′.
    pub drive_b_prime: f64,
    /// Residual drives E_p± on the normal modes.
    pub drive_p_plus: f64,
    pub drive_p_minus: f64,
}

impl EffectiveCoeffs {
    /// Named coefficient list in a fixed order (table column order).
    pub fn fields(&self) -> [(&'static str, f64); 12] {
        [
            ("varpi_a_prime", self.varpi_a_prime),
            ("omega_b_prime", self.omega_b_prime),
            ("j", self.j),
            ("omega_prime_plus", self.omega_prime_plus),
            ("omega_prime_minus", self.omega_prime_minus),
            ("q", self.q),
            ("g_plus", self.g_plus),
            ("g_minus", self.g_minus),
            ("drive_a", self.drive_a),
            ("drive_b_prime", self.drive_b_prime),
            ("drive_p_plus", self.drive_p_plus),
            ("drive_p_minus", self.drive_p_minus),
        ]
    }

    /// Per-field relative differences |self − other| / max(|self|, |other|,
    /// floor). The floor is 1e-12 of the largest coefficient magnitude in
    /// either set, so fields that vanish analytically but carry a few ulps
    /// of λ-sum cancellation residue do not register as order-one errors.
    pub fn rel_errors(&self, other: &EffectiveCoeffs) -> Vec<(&'static str, f64)> {
        let floor = 1e-12
            * self
                .fields()
                .iter()
                .chain(other.fields().iter())
                .fold(0.0f64, |acc, (_, v)| acc.max(v.abs()));
        self.fields()
            .iter()
            .zip(other.fields().iter())
            .map(|((name, a), (_, b))| {
                let scale = a.abs().max(b.abs()).max(floor);
                let err = if scale == 0.0 {
                    0.0
                } else {
                    (a - b).abs() / scale
                };
                (*name, err)
            })
            .collect()
    }

    pub fn max_rel_error(&self, other: &EffectiveCoeffs) -> f64 {
        self.rel_errors(other)
            .iter()
            .fold(0.0f64, |acc, (_, e)| acc.max(*e))
    }
}

/// Exact λ-sums for the effective coefficients.
///
/// Fails when a perturbative denominator |ϖ_a − Ω_λ| or |ω_b − Ω_λ| drops
/// below [`DENOM_THRESHOLD`]·Ω, naming the offending normal mode.
pub fn effective_coeffs_exact(p: &MicroscopicParams) -> Result<EffectiveCoeffs> {
    let bg = bogoliubov(p.varpi_spin_a, p.omega_spin_b, p.rabi)?;
    let threshold = DENOM_THRESHOLD * p.rabi.abs();
    let modes = [
        ('+', bg.u_plus, bg.v_plus, bg.omega_plus),
        ('-', bg.u_minus, bg.v_minus, bg.omega_minus),
    ];
    for (lambda, _, _, omega) in modes {
        let d_a = p.varpi_a - omega;
        if d_a.abs() <= threshold {
            return Err(Error::ResonantDenominator {
                lambda,
                omega_name: "varpi_a",
                value: d_a.abs(),
                threshold,
            });
        }
        let d_b = p.omega_b - omega;
        if d_b.abs() <= threshold {
            return Err(Error::ResonantDenominator {
                lambda,
                omega_name: "omega_b",
                value: d_b.abs(),
                threshold,
            });
        }
    }

    let mut varpi_shift = 0.0;
    let mut omega_b_shift = 0.0;
    let mut j = 0.0;
    let mut drive_a = 0.0;
    let mut drive_b_shift = 0.0;
    let mut omega_prime = [0.0f64; 2];
    let mut g_lambda = [0.0f64; 2];
    let mut drive_p = [0.0f64; 2];
    for (k, (_, u, v, omega)) in modes.iter().enumerate() {
        let d_a = p.varpi_a - omega;
        let d_b = p.omega_b - omega;
        varpi_shift += p.g_a * p.g_a * u * u / d_a;
        omega_b_shift += p.g_b * p.g_b * v * v / d_b;
        j += -0.5 * p.g_a * p.g_b * u * v * (1.0 / d_b + 1.0 / d_a);
        drive_a += p.probe_a * p.g_a * u * u / d_a;
        drive_b_shift += p.probe_a * p.g_b * u * v / d_b;
        // Level repulsion of the eliminated mode against both radiation modes.
        omega_prime[k] = omega - p.g_a * p.g_a * u * u / d_a - p.g_b * p.g_b * v * v / d_b;
        g_lambda[k] = -p.g * p.g_b * v / d_b;
        drive_p[k] = p.probe_a * u - p.drive_b * p.g_b * v / d_b;
    }
    // Cross coupling: −(1/2) Σ_{λ≠μ} [g_b² v_λ v_μ/(ω_b − Ω_μ) + g_a² u_λ u_μ/(ϖ_a − Ω_μ)].
    let mut q = 0.0;
    for (k, (_, u_l, v_l, _)) in modes.iter().enumerate() {
        let (_, u_m, v_m, omega_m) = modes[1 - k];
        let d_a = p.varpi_a - omega_m;
        let d_b = p.omega_b - omega_m;
        q += -0.5 * (p.g_b * p.g_b * v_l * v_m / d_b + p.g_a * p.g_a * u_l * u_m / d_a);
    }

    Ok(EffectiveCoeffs {
        varpi_a_prime: p.varpi_a + varpi_shift,
        omega_b_prime: p.omega_b + omega_b_shift,
        j,
        omega_prime_plus: omega_prime[0],
        omega_prime_minus: omega_prime[1],
        q,
        g_plus: g_lambda[0],
        g_minus: g_lambda[1],
        drive_a,
        drive_b_prime: p.drive_b + drive_b_shift,
        drive_p_plus: drive_p[0],
        drive_p_minus: drive_p[1],
    })
}

/// Closed-form large-Ω asymptotics of [`effective_coeffs_exact`]: leading
/// order plus the first detuning corrections, in terms of Δ, Δ_a, Δ_b.
///
/// Returns the coefficients and a warning when the expansion parameter
/// max(|Δ|,|Δ_a|,|Δ_b|)/Ω exceeds 0.3.
pub fn effective_coeffs_approx(p: &MicroscopicParams) -> Result<(EffectiveCoeffs, Option<String>)> {
    if p.rabi <= 0.0 {
        return Err(Error::InvalidParam(
            "approximate coefficients need rabi > 0".into(),
        ));
    }
    let bg = bogoliubov(p.varpi_spin_a, p.omega_spin_b, p.rabi)?;
    let om = p.rabi;
    let d = p.delta();
    let da = p.delta_a();
    let db = p.delta_b();
    let dcap_a = da - 0.5 * d;
    let dcap_b = db + 0.5 * d;
    let sqrt2 = 2f64.sqrt();

    let ga2 = p.g_a * p.g_a;
    let gb2 = p.g_b * p.g_b;

    let coeffs = EffectiveCoeffs {
        varpi_a_prime: p.varpi_a - ga2 * (da - d) / (om * om),
        omega_b_prime: p.omega_b - gb2 * (db + d) / (om * om),
        j: (p.g_a * p.g_b / om)
            * (1.0 + (dcap_a * dcap_a + dcap_b * dcap_b - 0.5 * d * d) / (2.0 * om * om)),
        omega_prime_plus: bg.omega_plus
            + (ga2 / (2.0 * om)) * (1.0 + (da - d) / om)
            + (gb2 / (2.0 * om)) * (1.0 + (db + d) / om),
        omega_prime_minus: bg.omega_minus
            - (ga2 / (2.0 * om)) * (1.0 - (da - d) / om)
            - (gb2 / (2.0 * om)) * (1.0 - (db + d) / om),
        q: (gb2 * dcap_b - ga2 * dcap_a) / (2.0 * om * om),
        g_plus: (p.g * p.g_b / (sqrt2 * om)) * (1.0 + (db + 0.75 * d) / om),
        g_minus: -(p.g * p.g_b / (sqrt2 * om)) * (1.0 - (db + 0.75 * d) / om),
        drive_a: -p.probe_a * p.g_a * (da - d) / (om * om),
        drive_b_prime: p.drive_b
            - (p.probe_a * p.g_b / om) * (1.0 + (dcap_b * dcap_b - 0.25 * d * d) / (om * om)),
        drive_p_plus: (p.probe_a / sqrt2) * (1.0 - 0.25 * d / om)
            + (p.drive_b * p.g_b / (sqrt2 * om)) * (1.0 + (db + 0.75 * d) / om),
        drive_p_minus: -(p.probe_a / sqrt2) * (1.0 + 0.25 * d / om)
            - (p.drive_b * p.g_b / (sqrt2 * om)) * (1.0 - (db + 0.75 * d) / om),
    };

    let ratio = p.detuning_ratio();
    let warning = (ratio > 0.3).then(|| {
        format!("detuning/rabi ratio {ratio:.3} exceeds 0.3; large-drive expansion is unreliable")
    });
    Ok((coeffs, warning))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TWO_PI;
    use proptest::prelude::*;

    #[test]
    fn bogoliubov_symmetric_splitting() {
        // ϖ_A = ω_B: u_± = 1/√2, η = 2Ω, Ω_± = ω_B ± Ω.
        let w = 3.0 * TWO_PI;
        let rabi = 1.7 * TWO_PI;
        let bg = bogoliubov(w, w, rabi).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert!((bg.u_plus - s).abs() < 1e-14);
        assert!((bg.v_plus - s).abs() < 1e-14);
        assert!((bg.eta - 2.0 * rabi).abs() < 1e-12);
        assert!((bg.omega_plus - (w + rabi)).abs() < 1e-12);
        assert!((bg.omega_minus - (w - rabi)).abs() < 1e-12);
    }

    #[test]
    fn bogoliubov_decoupling_limit() {
        // Ω → 0⁺ with ϖ_A > ω_B: u_+ → 1, v_+ → 0.
        let bg = bogoliubov(5.0, 1.0, 1e-9).unwrap();
        assert!((bg.u_plus - 1.0).abs() < 1e-9);
        assert!(bg.v_plus.abs() < 1e-9);
    }

    #[test]
    fn bogoliubov_rejects_degenerate() {
        assert!(bogoliubov(2.0, 2.0, 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bogoliubov_normalized(
            wa in -10.0..10.0f64,
            wb in -10.0..10.0f64,
            rabi in 0.01..10.0f64,
        ) {
            let bg = bogoliubov(wa, wb, rabi).unwrap();
            prop_assert!((bg.u_plus * bg.u_plus + bg.v_plus * bg.v_plus - 1.0).abs() < 1e-12);
            prop_assert!((bg.u_minus + bg.v_plus).abs() < 1e-14);
            prop_assert!((bg.v_minus - bg.u_plus).abs() < 1e-14);
            prop_assert!(bg.eta >= 2.0 * rabi - 1e-12);
        }
    }

    fn generic_params(rabi: f64) -> MicroscopicParams {
        MicroscopicParams::from_detunings(
            rabi,
            0.08 * rabi,
            0.05 * rabi,
            -0.03 * rabi,
            0.0,
            0.02 * rabi,
            0.015 * rabi,
            0.004 * rabi,
            0.01 * rabi,
            0.006 * rabi,
            0.0,
        )
    }

    #[test]
    fn exact_uncoupled_limit() {
        let mut p = generic_params(TWO_PI * 50.0);
        p.g_a = 0.0;
        p.g_b = 0.0;
        let c = effective_coeffs_exact(&p).unwrap();
        assert_eq!(c.j, 0.0);
        assert_eq!(c.varpi_a_prime, p.varpi_a);
        assert_eq!(c.omega_b_prime, p.omega_b);
        assert_eq!(c.g_plus, 0.0);
        assert_eq!(c.g_minus, 0.0);
    }

    #[test]
    fn exact_no_probe_limit() {
        let mut p = generic_params(TWO_PI * 50.0);
        p.probe_a = 0.0;
        let c = effective_coeffs_exact(&p).unwrap();
        assert_eq!(c.drive_a, 0.0);
        assert_eq!(c.drive_b_prime, p.drive_b);
    }

    #[test]
    fn approx_gb_zero_kills_qubit_coupling() {
        let mut p = generic_params(TWO_PI * 50.0);
        p.g_b = 0.0;
        let (c, _) = effective_coeffs_approx(&p).unwrap();
        assert_eq!(c.g_plus, 0.0);
        assert_eq!(c.g_minus, 0.0);
    }

    #[test]
    fn exact_j_at_symmetric_point_matches_enumeration_oracle() {
        // ϖ_A = ω_B = 0 with ϖ_a = ω_b midway (all detunings zero):
        // independent two-term enumeration gives J = g_a·g_b/Ω.
        let rabi = 50.0 * TWO_PI;
        let g_a = 5.0 * TWO_PI;
        let g_b = 2.0 * TWO_PI;
        let p = MicroscopicParams {
            rabi,
            g_a,
            g_b,
            g: 0.0,
            probe_a: 0.0,
            drive_b: 0.0,
            varpi_a: 0.0,
            varpi_spin_a: 0.0,
            omega_b: 0.0,
            omega_spin_b: 0.0,
            omega_0: 0.0,
        };

        // Oracle: raw two-term sum with no shared code.
        let eta = (0.0f64 + 4.0 * rabi * rabi).sqrt();
        let omegas = [0.5 * eta, -0.5 * eta];
        let us = [(0.5f64).sqrt(), -(0.5f64).sqrt()];
        let vs = [(0.5f64).sqrt(), (0.5f64).sqrt()];
        let mut j_oracle = 0.0;
        for k in 0..2 {
            j_oracle += -0.5
                * g_a
                * g_b
                * us[k]
                * vs[k]
                * (1.0 / (0.0 - omegas[k]) + 1.0 / (0.0 - omegas[k]));
        }
        assert!((j_oracle - g_a * g_b / rabi).abs() < 1e-12);

        let c = effective_coeffs_exact(&p).unwrap();
        assert!(
            (c.j - j_oracle).abs() < 1e-12,
            "J = {} vs oracle {}",
            c.j,
            j_oracle
        );
    }

    #[test]
    fn exact_rejects_resonant_denominator() {
        // Put ϖ_a exactly on Ω_+.
        let rabi = 10.0 * TWO_PI;
        let p = MicroscopicParams {
            rabi,
            g_a: 0.1,
            g_b: 0.1,
            g: 0.0,
            probe_a: 0.0,
            drive_b: 0.0,
            varpi_a: rabi, // Ω_+ = Ω for degenerate spin-wave frequencies at 0
            varpi_spin_a: 0.0,
            omega_b: 0.0,
            omega_spin_b: 0.0,
            omega_0: 0.0,
        };
        match effective_coeffs_exact(&p) {
            Err(Error::ResonantDenominator {
                lambda, omega_name, ..
            }) => {
                assert_eq!(lambda, '+');
                assert_eq!(omega_name, "varpi_a");
            }
            other => panic!("expected resonant-denominator error, got {other:?}"),
        }
    }

    #[test]
    fn approx_leading_order_j() {
        // Δ = Δ_a = Δ_b = 0 → J = g_a g_b / Ω exactly, both routes.
        let rabi = 40.0 * TWO_PI;
        let p = MicroscopicParams::from_detunings(
            rabi,
            0.0,
            0.0,
            0.0,
            0.0,
            0.05 * rabi,
            0.03 * rabi,
            0.0,
            0.0,
            0.0,
            0.0,
        );
        let exact = effective_coeffs_exact(&p).unwrap();
        let (approx, warn) = effective_coeffs_approx(&p).unwrap();
        assert!(warn.is_none());
        let expected = p.g_a * p.g_b / rabi;
        assert!((exact.j - expected).abs() < 1e-12);
        assert!((approx.j - expected).abs() < 1e-12);
    }

    #[test]
    fn approx_converges_to_exact_per_field() {
        // Scaling Ω ×10 twice with detunings and couplings fixed must shrink
        // every per-field relative error; this pins the asymptotics of each
        // closed form against the λ-sums.
        let base = generic_params(TWO_PI * 20.0);
        let mut prev_max = f64::INFINITY;
        let mut prev_fields: Option<Vec<(&'static str, f64)>> = None;
        for scale in [1.0, 10.0, 100.0] {
            let mut p = base;
            p.rabi = base.rabi * scale;
            let exact = effective_coeffs_exact(&p).unwrap();
            let (approx, _) = effective_coeffs_approx(&p).unwrap();
            let errs = exact.rel_errors(&approx);
            let max = errs.iter().fold(0.0f64, |a, (_, e)| a.max(*e));
            assert!(
                max < prev_max,
                "max rel error failed to decrease: {max:.3e} vs {prev_max:.3e} at scale {scale}"
            );
            if let Some(prev) = prev_fields {
                for ((name, e_new), (_, e_old)) in errs.iter().zip(prev.iter()) {
                    assert!(
                        e_new <= e_old || *e_new < 1e-12,
                        "field {name}: error grew from {e_old:.3e} to {e_new:.3e}"
                    );
                }
            }
            prev_max = max;
            prev_fields = Some(errs);
        }
        // At Ω = 2000·2π the detunings sit at ~1e-1 relative to the base Ω,
        // i.e. ~1e-3 of the scaled Ω; first-order-correct fields leave
        // residuals at the square of that.
        assert!(prev_max < 5e-5, "final max rel error {prev_max:.3e}");
    }

    #[test]
    fn approx_warns_on_large_detunings() {
        let rabi = 10.0 * TWO_PI;
        let p = MicroscopicParams::from_detunings(
            rabi,
            0.5 * rabi,
            0.2 * rabi,
            0.1 * rabi,
            0.0,
            0.05 * rabi,
            0.03 * rabi,
            0.0,
            0.0,
            0.0,
            0.0,
        );
        let (_, warn) = effective_coeffs_approx(&p).unwrap();
        assert!(warn.is_some());
    }
}
