use nalgebra::DMatrix;
use num_complex::Complex64;
use tanglekit::convexroof::{three_tangle_mixed, ConvexRoofConfig};
use tanglekit::invariants::three_tangle_pure;
use tanglekit::{derive_seed, haar_random};

// tangle quartic coefficients along the pencil e1 + z e2
fn pencil_quartic(e1: &[Complex64], e2: &[Complex64]) -> [Complex64; 5] {
    let t_forms = |v: &[Complex64]| -> [Complex64; 3] {
        let d = |i: usize, j: usize| v[j] * v[6 + i] - v[4 + j] * v[2 + i];
        [d(0, 0) * 2.0, d(0, 1) + d(1, 0), d(1, 1) * 2.0]
    };
    let qx = t_forms(e1);
    let qy = t_forms(e2);
    let sum: Vec<Complex64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
    let qs = t_forms(&sum);
    let bxy: Vec<Complex64> = (0..3).map(|k| (qs[k] - qx[k] - qy[k]) * 0.5).collect();
    // T_k(z) = qx[k] + 2 z bxy[k] + z^2 qy[k]; q(z) = T1^2 - T0 T2
    let t = |k: usize| (qx[k], bxy[k] * 2.0, qy[k]);
    let (a0, a1, a2) = t(1);
    let (b0, b1, b2) = t(0);
    let (c0, c1, c2) = t(2);
    [
        a0 * a0 - b0 * c0,
        2.0 * a0 * a1 - b0 * c1 - b1 * c0,
        a1 * a1 + 2.0 * a0 * a2 - b0 * c2 - b1 * c1 - b2 * c0,
        2.0 * a1 * a2 - b1 * c2 - b2 * c1,
        a2 * a2 - b2 * c2,
    ]
}

fn durand_kerner(c: &[Complex64; 5]) -> Vec<Complex64> {
    let n = 4;
    let lead = c[4];
    let a: Vec<Complex64> = (0..=4).map(|k| c[k] / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for k in (0..n).rev() {
            acc = acc * z + a[k];
        }
        acc
    };
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
        .collect();
    for _ in 0..500 {
        let old = roots.clone();
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= old[i] - old[j];
                }
            }
            roots[i] = old[i] - eval(old[i]) / denom;
        }
    }
    roots
}

fn main() {
    let state = haar_random(4, derive_seed(21_000, 1)).unwrap();
    let rho = state.marginal(&[1, 2, 3]).unwrap();
    let eig = rho.eigen().unwrap();
    let e1: Vec<Complex64> = (0..8).map(|k| eig.vectors[(k, 0)]).collect();
    let e2: Vec<Complex64> = (0..8).map(|k| eig.vectors[(k, 1)]).collect();
    let quartic = pencil_quartic(&e1, &e2);
    let roots = durand_kerner(&quartic);
    println!("roots: {roots:?}");
    // zero states: psi_i = (e1 + z_i e2)/sqrt(1+|z_i|^2): Bloch vectors in the e1/e2 qubit picture
    // state (alpha, beta) = (1, z)/sqrt(1+|z|^2): bloch = (2 Re(conj(a) b), 2 Im(conj a b), |a|^2-|b|^2)
    let blochs: Vec<[f64; 3]> = roots
        .iter()
        .map(|z| {
            let n2 = 1.0 + z.norm_sqr();
            [2.0 * z.re / n2, 2.0 * z.im / n2, (1.0 - z.norm_sqr()) / n2]
        })
        .collect();
    // verify the roots are zero-tangle states
    for (i, z) in roots.iter().enumerate() {
        let mut amps: Vec<Complex64> = e1.iter().zip(&e2).map(|(a, b)| a + z * b).collect();
        let norm: f64 = amps.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|v| *v /= norm);
        let (st, _) = tanglekit::make_state(amps, 3).unwrap();
        println!("root {i}: tangle = {:.3e}, bloch = {:?}", three_tangle_pure(&st, 1, 2, 3).unwrap(), blochs[i]);
    }
    // rho in eigenbasis is diag(mu1, mu2): bloch target (0, 0, mu1 - mu2)
    let target = [0.0, 0.0, eig.values[0] - eig.values[1]];
    println!("target bloch: {target:?}");
    // least squares check: can nonneg weights on the 4 points hit the target?
    // solve via grid over barycentric... quick: try all 4 triples with exact 3x3 solve
    for drop in 0..4 {
        let idx: Vec<usize> = (0..4).filter(|&i| i != drop).collect();
        let m = nalgebra::Matrix3::from_fn(|r, c| blochs[idx[c]][r] - blochs[idx[2]][r]);
        // solve p0 (b0-b2) + p1 (b1-b2) = t - b2 in least squares over first two coords... use full 3x3 with weights summing to 1
        let a = nalgebra::Matrix3::from_fn(|r, c| if r < 3 { blochs[idx[c]][r] } else { 1.0 });
        let _ = m;
        let rhs = nalgebra::Vector3::new(target[0], target[1], target[2]);
        if let Some(inv) = a.try_inverse() {
            let w = inv * rhs;
            let sum: f64 = w.iter().sum();
            println!("triple {idx:?}: weights {w:?} (sum {sum:.4})");
        }
    }
    // heavy optimizer run with polish
    for seed in [7u64, 8] {
        let cfg = ConvexRoofConfig { restarts: 96, max_iterations: 40_000, seed, ..Default::default() };
        let res = three_tangle_mixed(&rho, &cfg).unwrap();
        println!("heavy seed={seed}: {:.6e}", res.value);
    }
}
