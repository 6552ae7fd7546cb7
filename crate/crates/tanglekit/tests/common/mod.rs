//! Shared helpers for the integration suites.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use tanglekit::PureState;

/// Haar-random single-qubit unitary, parametrized by three angles.
pub fn random_unitary_2x2(rng: &mut ChaCha12Rng) -> [[Complex64; 2]; 2] {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
    let alpha: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let beta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let (c, s) = (theta.cos(), theta.sin());
    let ea = Complex64::new(0.0, alpha).exp();
    let eb = Complex64::new(0.0, beta).exp();
    [
        [ea * c, eb * s],
        [-eb.conj() * s, ea.conj() * c],
    ]
}

/// Applies an independent random unitary to every qubit.
pub fn random_local_rotation(state: &PureState, rng: &mut ChaCha12Rng) -> PureState {
    let mut out = state.clone();
    for q in 1..=state.n_qubits() {
        let u = random_unitary_2x2(rng);
        out = out.apply_single_qubit_unitary(q, &u).unwrap();
    }
    out
}
