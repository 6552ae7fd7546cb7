//! Cross-route and invariance properties of the tangle invariants on
//! Haar-random states. The acceptance suite reruns the route-agreement checks
//! at full sample counts; these are the faster development-scale versions
//! plus the properties not repeated there.

mod common;

use common::random_local_rotation;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use tanglekit::invariants::{
    concurrence, n4_from_invariants, n8_from_invariants, one_tangle, one_tangle_from_invariants,
    pair_invariants, flip_spectrum, three_tangle_pure, verify_n4_relation,
};
use tanglekit::{derive_seed, haar_random};

fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn invariant_routes_match_spectral_routes() {
    for n in [3usize, 4, 5] {
        for i in 0..100u64 {
            let state = haar_random(n, derive_seed(1000 + n as u64, i)).unwrap();
            for j in 2..=n {
                let rho = state.marginal(&[1, j]).unwrap();
                let inv = pair_invariants(&rho).unwrap();
                let n4 = n4_from_invariants(&state, 1, j).unwrap();
                let n8 = n8_from_invariants(&state, 1, j).unwrap();
                assert!(close_rel(n4, inv.n4, 1e-9), "n4: {n4} vs {} (n={n}, j={j})", inv.n4);
                assert!(close_rel(n8, inv.n8, 1e-9), "n8: {n8} vs {} (n={n}, j={j})", inv.n8);
            }
        }
    }
}

#[test]
fn one_tangle_routes_agree() {
    for n in [2usize, 3, 4, 5] {
        for i in 0..100u64 {
            let state = haar_random(n, derive_seed(2000 + n as u64, i)).unwrap();
            for focus in 1..=n {
                let det_route = one_tangle(&state, focus).unwrap();
                let inv_route = one_tangle_from_invariants(&state, focus).unwrap();
                assert!(
                    (det_route - inv_route).abs() <= 1e-9,
                    "n={n} focus={focus}: {det_route} vs {inv_route}"
                );
            }
        }
    }
}

#[test]
fn newton_coefficients_match_spectrum() {
    for i in 0..200u64 {
        let state = haar_random(4, derive_seed(3000, i)).unwrap();
        let rho = state.marginal(&[1, 2]).unwrap();
        let inv = pair_invariants(&rho).unwrap();
        let spec = flip_spectrum(&rho).unwrap();
        let es = spec.elementary_symmetric();
        for (got, want) in [(inv.n4, es[0]), (inv.n8, es[1]), (inv.n12, es[2]), (inv.n16, es[3])] {
            assert!(close_rel(got, want, 1e-9), "{got} vs {want}");
        }
        // spectrum sums to n4
        assert!((spec.sum() - inv.n4).abs() < 1e-10);
    }
}

#[test]
fn n4_relation_residual_is_roundoff() {
    let mut saw_positive_c = false;
    let mut saw_negative_c = false;
    for i in 0..300u64 {
        let state = haar_random(4, derive_seed(4000, i)).unwrap();
        for j in 2..=4 {
            let rho = state.marginal(&[1, j]).unwrap();
            let residual = verify_n4_relation(&rho).unwrap();
            assert!(residual <= 1e-8, "residual {residual}");
            let c = pair_invariants(&rho).unwrap().c_value;
            saw_positive_c |= c > 0.0;
            saw_negative_c |= c < 0.0;
        }
    }
    assert!(saw_positive_c && saw_negative_c, "sample must exercise both chi branches");
}

#[test]
fn tangles_are_local_unitary_invariant() {
    let mut rng = ChaCha12Rng::seed_from_u64(55);
    for i in 0..20u64 {
        let state = haar_random(4, derive_seed(5000, i)).unwrap();
        let rotated = random_local_rotation(&state, &mut rng);
        let t1 = one_tangle(&state, 1).unwrap();
        let t1r = one_tangle(&rotated, 1).unwrap();
        assert!((t1 - t1r).abs() <= 1e-9, "one-tangle moved by {}", (t1 - t1r).abs());
        for j in 2..=4 {
            let a = pair_invariants(&state.marginal(&[1, j]).unwrap()).unwrap();
            let b = pair_invariants(&rotated.marginal(&[1, j]).unwrap()).unwrap();
            assert!((a.n4 - b.n4).abs() <= 1e-9);
            assert!((a.n8 - b.n8).abs() <= 1e-9);
            assert!((a.n12 - b.n12).abs() <= 1e-9);
            assert!((a.n16 - b.n16).abs() <= 1e-9);
            assert!((a.two_tangle - b.two_tangle).abs() <= 1e-9);
        }
    }

    let mut rng = ChaCha12Rng::seed_from_u64(56);
    for i in 0..20u64 {
        let state = haar_random(3, derive_seed(5100, i)).unwrap();
        let rotated = random_local_rotation(&state, &mut rng);
        let a = three_tangle_pure(&state, 1, 2, 3).unwrap();
        let b = three_tangle_pure(&rotated, 1, 2, 3).unwrap();
        assert!((a - b).abs() <= 1e-9);
    }
}

#[test]
fn three_tangle_is_permutation_invariant() {
    for i in 0..50u64 {
        let state = haar_random(3, derive_seed(6000, i)).unwrap();
        let reference = three_tangle_pure(&state, 1, 2, 3).unwrap();
        for (f, j, k) in [(1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)] {
            let v = three_tangle_pure(&state, f, j, k).unwrap();
            assert!((v - reference).abs() <= 1e-9, "({f},{j},{k}): {v} vs {reference}");
        }
    }
}

#[test]
fn concurrence_is_relabeling_covariant() {
    for i in 0..50u64 {
        let state = haar_random(4, derive_seed(7000, i)).unwrap();
        for j in 2..=4 {
            let direct = concurrence(&state.marginal(&[1, j]).unwrap()).unwrap().two_tangle;
            // relabel so the pair sits at positions (1, 2)
            let mut order = vec![1, j];
            order.extend((2..=4).filter(|&q| q != j));
            let permuted = state.permute_qubits(&order).unwrap();
            let relabeled = concurrence(&permuted.marginal(&[1, 2]).unwrap()).unwrap().two_tangle;
            assert!((direct - relabeled).abs() <= 1e-12);
        }
    }
}

#[test]
fn tangle_ranges_hold_on_samples() {
    for i in 0..100u64 {
        let state = haar_random(4, derive_seed(8000, i)).unwrap();
        let t1 = one_tangle(&state, 1).unwrap();
        assert!((0.0..=1.0).contains(&t1));
        for j in 2..=4 {
            let inv = pair_invariants(&state.marginal(&[1, j]).unwrap()).unwrap();
            assert!((0.0..=1.0).contains(&inv.two_tangle));
            assert!(inv.f16 >= 0.0);
            assert!(inv.n4 >= 0.0 && inv.n8 >= 0.0 && inv.n12 >= 0.0 && inv.n16 >= 0.0);
        }
    }
    for i in 0..100u64 {
        let state = haar_random(3, derive_seed(8100, i)).unwrap();
        let t3 = three_tangle_pure(&state, 1, 2, 3).unwrap();
        assert!((0.0..=1.0).contains(&t3));
    }
}

#[test]
fn marginal_spectra_obey_schmidt_complementarity() {
    for i in 0..30u64 {
        let state = haar_random(5, derive_seed(9000, i)).unwrap();
        let keep = [1usize, 3];
        let complement = [2usize, 4, 5];
        let mut a = state.marginal(&keep).unwrap().eigenvalues().unwrap();
        let mut b = state.marginal(&complement).unwrap().eigenvalues().unwrap();
        a.sort_by(|x, y| y.partial_cmp(x).unwrap());
        b.sort_by(|x, y| y.partial_cmp(x).unwrap());
        for k in 0..a.len().min(b.len()) {
            assert!((a[k] - b[k]).abs() <= 1e-10);
        }
        for &x in b.iter().skip(a.len()) {
            assert!(x.abs() <= 1e-10);
        }
    }
}
