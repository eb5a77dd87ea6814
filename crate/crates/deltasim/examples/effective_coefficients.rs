//! Coefficient pipeline: Bogoliubov normal modes of the driven quasi-spin
//! waves, the exact λ-sum coefficients of the effective Hamiltonian, and
//! their large-drive closed forms, with the convergence between the two
//! routes as the drive grows.
//!
//! Run with `cargo run --release --example effective_coefficients`.

use deltasim::models::{
    bogoliubov, effective_coeffs_approx, effective_coeffs_exact, MicroscopicParams,
};
use deltasim::TWO_PI;

fn main() {
    let rabi = 110.0 * TWO_PI;
    let p = MicroscopicParams::from_detunings(
        rabi,
        2.0 * TWO_PI,  // drive detuning from the A-B transition
        3.0 * TWO_PI,  // optical detuning
        1.0 * TWO_PI,  // microwave detuning
        0.0,           // frame anchor
        11.0 * TWO_PI, // g_a
        11.0 * TWO_PI, // g_b
        0.5 * TWO_PI,  // qubit-cavity g
        1.2 * TWO_PI,  // probe on the A mode
        0.4 * TWO_PI,  // microwave drive
        0.0,
    );

    let bg = bogoliubov(p.varpi_spin_a, p.omega_spin_b, p.rabi).unwrap();
    println!(
        "normal modes: Omega_+/2pi = {:+.4} MHz, Omega_-/2pi = {:+.4} MHz",
        bg.omega_plus / TWO_PI,
        bg.omega_minus / TWO_PI
    );
    println!(
        "mixing:       u_+ = {:.6}, v_+ = {:.6} (u+^2 + v+^2 = {:.12})",
        bg.u_plus,
        bg.v_plus,
        bg.u_plus.powi(2) + bg.v_plus.powi(2)
    );
    println!("three-photon resonance: {}", p.three_photon_resonant(1e-9));
    println!();

    let exact = effective_coeffs_exact(&p).unwrap();
    let (approx, warning) = effective_coeffs_approx(&p).unwrap();
    if let Some(w) = warning {
        println!("note: {w}");
    }
    println!(
        "{:<20} {:>14} {:>14} {:>10}",
        "coefficient", "exact (MHz)", "approx (MHz)", "rel err"
    );
    for ((name, e), ((_, a), (_, err))) in exact
        .fields()
        .iter()
        .zip(approx.fields().iter().zip(exact.rel_errors(&approx)))
    {
        println!(
            "{:<20} {:>14.6} {:>14.6} {:>10.2e}",
            name,
            e / TWO_PI,
            a / TWO_PI,
            err
        );
    }

    println!("\nconvergence as the drive grows (detunings fixed):");
    for scale in [1.0, 3.0, 10.0, 30.0, 100.0] {
        let mut q = p;
        q.rabi = rabi * scale;
        let exact = effective_coeffs_exact(&q).unwrap();
        let (approx, _) = effective_coeffs_approx(&q).unwrap();
        println!(
            "  rabi/2pi = {:>8.1} MHz: J/2pi = {:>10.6} MHz, max rel err = {:.3e}",
            q.rabi / TWO_PI,
            exact.j / TWO_PI,
            exact.max_rel_error(&approx)
        );
    }
}
