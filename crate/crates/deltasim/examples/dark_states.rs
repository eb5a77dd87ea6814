//! Dark states and polariton branches of both models: amplitudes, the
//! Hamiltonian nullity residual, and the single-excitation spectrum against
//! the closed-form branch energies.
//!
//! Run with `cargo run --release --example dark_states`.

use deltasim::hilbert::HilbertSpace;
use deltasim::models::{
    build_single_hamiltonian, build_two_hamiltonian, dark_state_double, dark_state_single,
    polariton_modes, single_excitation_energies, SingleEnsembleParams, TwoEnsembleParams,
};
use deltasim::TWO_PI;

fn main() {
    let j = TWO_PI; // J/2pi = 1 MHz
    println!("single ensemble (a, b, atom), delta = delta_b = 0, drives off:");
    println!(
        "{:>8} {:>12} {:>12} {:>14} {:>24}",
        "g/J", "||H|DS>||", "K/2pi", "spectrum/2pi", "dark coefficients"
    );
    for ratio in [0.1, 0.5, 1.0, 2.0, 10.0] {
        let g = ratio * j;
        let space = HilbertSpace::single_ensemble(3, 3).unwrap();
        let p = SingleEnsembleParams {
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
        };
        let h = build_single_hamiltonian(&p, &space).unwrap();
        let ds = dark_state_single(g, j, &space).unwrap();
        let resid = (h.matrix() * ds.amplitudes()).norm();
        let modes = polariton_modes(g, j).unwrap();
        let eigs = single_excitation_energies(&h).unwrap();
        println!(
            "{:>8.2} {:>12.3e} {:>12.4} [{:>7.3} {:>6.3} {:>6.3}] q_D = ({:+.3}, {:+.3}, {:+.3})",
            ratio,
            resid,
            modes.k / TWO_PI,
            eigs[0] / TWO_PI,
            eigs[1] / TWO_PI,
            eigs[2] / TWO_PI,
            modes.dark[0],
            modes.dark[1],
            modes.dark[2],
        );
    }

    println!("\ntwo ensembles (a1, b, a2, atom), symmetric couplings:");
    println!(
        "{:>8} {:>12} {:>16} {:>30}",
        "g/J", "||H|DS>||", "sqrt(g^2+2J^2)/2pi", "|DS> amplitudes"
    );
    for ratio in [0.1, 1.0, 10.0] {
        let g = ratio * j;
        let space = HilbertSpace::two_ensemble(2, 2, 2).unwrap();
        let p = TwoEnsembleParams {
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
        };
        let h = build_two_hamiltonian(&p, &space).unwrap();
        let ds = dark_state_double(g, j, &space).unwrap();
        let resid = (h.matrix() * ds.amplitudes()).norm();
        let norm = (g * g + 2.0 * j * j).sqrt();
        // Amplitudes on |100g>, |000e>, |001g>.
        let amp_opt = -g / (2f64.sqrt() * norm);
        let amp_atom = -2f64.sqrt() * j / norm;
        println!(
            "{:>8.2} {:>12.3e} {:>18.4} a1/a2: {:+.4}  atom: {:+.4}",
            ratio,
            resid,
            norm / TWO_PI,
            amp_opt,
            amp_atom,
        );
    }
    println!("\n(g >> J leans on the optical pair, g << J on the bare atomic excitation)");
}
