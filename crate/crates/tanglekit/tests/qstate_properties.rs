//! Property tests for state construction, marginals, and file round trips.

use num_complex::Complex64;
use proptest::prelude::*;
use tanglekit::{make_state, read_state_file, write_state_file, PureState};

fn arb_state(max_qubits: usize) -> impl Strategy<Value = PureState> {
    (1..=max_qubits)
        .prop_flat_map(|n| {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << n)
                .prop_filter_map("zero vector", move |pairs| {
                    let coeffs: Vec<Complex64> =
                        pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
                    let norm: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();
                    if norm < 1e-6 {
                        return None;
                    }
                    Some(make_state(coeffs, n).unwrap().0)
                })
        })
}

proptest! {
    #[test]
    fn make_state_always_normalizes(state in arb_state(5)) {
        prop_assert!((state.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn marginals_are_valid_density_matrices(state in arb_state(5), seed in 0u64..1000) {
        // pick a nonempty keep set from the seed
        let n = state.n_qubits();
        let keep: Vec<usize> = (1..=n).filter(|q| (seed >> (q - 1)) & 1 == 1).collect();
        let keep = if keep.is_empty() { vec![1] } else { keep };
        let rho = state.marginal(&keep).unwrap();

        let tr = rho.trace();
        prop_assert!((tr.re - 1.0).abs() < 1e-12 && tr.im.abs() < 1e-12);
        // construction already enforces Hermiticity; verify PSD
        let eigs = rho.eigenvalues().unwrap();
        for lam in eigs {
            prop_assert!(lam >= -1e-10, "eigenvalue {lam}");
        }
    }

    #[test]
    fn single_qubit_marginal_det_is_a_tangle(state in arb_state(5), focus_raw in 0usize..5) {
        let focus = focus_raw % state.n_qubits() + 1;
        let rho = state.marginal(&[focus]).unwrap();
        let m = rho.elements();
        let det = m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr();
        prop_assert!((m[(0, 0)].re + m[(1, 1)].re - 1.0).abs() < 1e-12);
        prop_assert!(4.0 * det >= -1e-10 && 4.0 * det <= 1.0 + 1e-10);
    }

    #[test]
    fn state_files_round_trip_exactly(state in arb_state(4)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.json");
        write_state_file(&state, &path, None).unwrap();
        let back = read_state_file(&path).unwrap();
        prop_assert_eq!(state.amplitudes(), back.amplitudes());
        prop_assert_eq!(state.n_qubits(), back.n_qubits());
    }
}
