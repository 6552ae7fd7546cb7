//! N-qubit pure states, density-matrix marginals, basis-index arithmetic,
//! state families, and state file I/O.
//!
//! Basis convention: qubit 1 is the most significant bit of the basis index,
//! `b = sum_m i_m * 2^(N-m)`. All identities computed by this crate are
//! convention independent; the convention only fixes how amplitude vectors
//! are laid out in memory and on disk.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Largest register size the dense representation supports.
pub const MAX_QUBITS: usize = 12;

/// Norm deviation beyond which a state file is rejected instead of renormalized.
pub const FILE_NORM_TOLERANCE: f64 = 1e-6;

/// Pure state of an N-qubit register: complex amplitudes over the 2^N
/// computational basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Bit of qubit `m` (1-based) in basis index `b` for an `n`-qubit register.
#[inline]
pub fn qubit_bit(b: usize, m: usize, n: usize) -> u8 {
    ((b >> (n - m)) & 1) as u8
}

/// Basis index of the register whose per-qubit bits are given in order
/// (qubit 1 first).
pub fn basis_index(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

impl PureState {
    /// Builds a normalized state from raw coefficients. Returns the state and
    /// the norm of the input vector.
    pub fn new(coeffs: Vec<Complex64>, n: usize) -> Result<(Self, f64)> {
        if n < 1 || n > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange { n, min: 1, max: MAX_QUBITS });
        }
        let dim = 1usize << n;
        if coeffs.len() != dim {
            return Err(Error::LengthMismatch { expected: dim, actual: coeffs.len() });
        }
        let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 {
            return Err(Error::ZeroVector);
        }
        let amplitudes = coeffs.into_iter().map(|z| z / norm).collect();
        Ok((Self { n_qubits: n, amplitudes }, norm))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amplitudes[basis]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Reduced density matrix over `keep` (original positions, kept in the
    /// given order; the first kept qubit becomes the most significant bit).
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        if keep.is_empty() {
            return Err(Error::EmptySelection);
        }
        for (i, &q) in keep.iter().enumerate() {
            if q < 1 || q > n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            if keep[..i].contains(&q) {
                return Err(Error::DuplicateQubit { qubit: q });
            }
        }
        let traced: Vec<usize> = (1..=n).filter(|q| !keep.contains(q)).collect();
        let kd = 1usize << keep.len();
        let td = 1usize << traced.len();
        let mut elements = DMatrix::<Complex64>::zeros(kd, kd);

        // basis index assembled from the kept-part row/col index and the
        // traced-part summation index
        let compose = |kept_idx: usize, traced_idx: usize| -> usize {
            let mut b = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                let bit = (kept_idx >> (keep.len() - 1 - pos)) & 1;
                b |= bit << (n - q);
            }
            for (pos, &q) in traced.iter().enumerate() {
                let bit = (traced_idx >> (traced.len() - 1 - pos)) & 1;
                b |= bit << (n - q);
            }
            b
        };

        for row in 0..kd {
            for col in 0..kd {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..td {
                    acc += self.amplitudes[compose(row, t)] * self.amplitudes[compose(col, t)].conj();
                }
                elements[(row, col)] = acc;
            }
        }
        DensityMatrix::new(elements, keep.to_vec())
    }

    /// Relabels qubits: `order[k]` is the original position placed at new
    /// position `k+1`. `order` must be a permutation of `1..=N`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<PureState> {
        let n = self.n_qubits;
        if order.len() != n {
            return Err(Error::LengthMismatch { expected: n, actual: order.len() });
        }
        let mut seen = vec![false; n + 1];
        for &q in order {
            if q < 1 || q > n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            if seen[q] {
                return Err(Error::DuplicateQubit { qubit: q });
            }
            seen[q] = true;
        }
        let dim = 1usize << n;
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for b in 0..dim {
            let mut bp = 0usize;
            for (k, &q) in order.iter().enumerate() {
                bp |= (qubit_bit(b, q, n) as usize) << (n - 1 - k);
            }
            out[bp] = self.amplitudes[b];
        }
        Ok(PureState { n_qubits: n, amplitudes: out })
    }

    /// Applies a single-qubit unitary to `qubit` (1-based).
    pub fn apply_single_qubit_unitary(&self, qubit: usize, u: &[[Complex64; 2]; 2]) -> Result<PureState> {
        let n = self.n_qubits;
        if qubit < 1 || qubit > n {
            return Err(Error::QubitOutOfRange { qubit, n });
        }
        let shift = n - qubit;
        let mask = 1usize << shift;
        let mut out = self.amplitudes.clone();
        for b in 0..out.len() {
            if b & mask == 0 {
                let a0 = self.amplitudes[b];
                let a1 = self.amplitudes[b | mask];
                out[b] = u[0][0] * a0 + u[0][1] * a1;
                out[b | mask] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
        Ok(PureState { n_qubits: n, amplitudes: out })
    }
}

/// Builds a normalized state from raw coefficients; returns the state and the
/// input norm.
pub fn make_state(coeffs: Vec<Complex64>, n: usize) -> Result<(PureState, f64)> {
    PureState::new(coeffs, n)
}

/// Density matrix of a subset of qubits: Hermitian, PSD, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    elements: DMatrix<Complex64>,
    qubit_labels: Vec<usize>,
}

/// Elementwise tolerance for the Hermiticity and trace checks at construction.
pub const DENSITY_TOLERANCE: f64 = 1e-12;

/// Most negative eigenvalue tolerated before an input is considered invalid
/// rather than merely rounded.
pub const PSD_HARD_ERROR: f64 = 1e-8;

impl DensityMatrix {
    /// Validates Hermiticity, dimension, and unit trace. Positivity is checked
    /// where it is consumed (eigendecompositions clamp small negatives and
    /// error below `-PSD_HARD_ERROR`).
    pub fn new(elements: DMatrix<Complex64>, qubit_labels: Vec<usize>) -> Result<Self> {
        let n_qubits = qubit_labels.len();
        let dim = 1usize << n_qubits;
        if elements.nrows() != dim || elements.ncols() != dim {
            return Err(Error::WrongDimension { expected: dim, actual: elements.nrows() });
        }
        let dev = linalg::hermiticity_deviation(&elements);
        if dev > DENSITY_TOLERANCE {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr: Complex64 = elements.diagonal().iter().sum();
        if (tr.re - 1.0).abs() > DENSITY_TOLERANCE || tr.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::TraceNotOne { trace: (tr.re, tr.im) });
        }
        Ok(Self { n_qubits, elements, qubit_labels })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    pub fn qubit_labels(&self) -> &[usize] {
        &self.qubit_labels
    }

    pub fn trace(&self) -> Complex64 {
        self.elements.diagonal().iter().sum()
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(linalg::hermitian_eigen(&self.elements)?.values)
    }

    /// Full eigendecomposition.
    pub fn eigen(&self) -> Result<linalg::HermitianEigen> {
        linalg::hermitian_eigen(&self.elements)
    }
}

/// Multi-index over the traced-out qubit positions of a pair analysis.
///
/// The value packs the bits of the retained positions in ascending position
/// order, lowest position in the least significant bit, which makes the value
/// a bijection onto `0..2^len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndex {
    bits: Vec<u8>,
    value: usize,
}

impl MultiIndex {
    /// Multi-index from its packed value; `len` is the number of positions.
    pub fn from_value(value: usize, len: usize) -> Self {
        let bits = (0..len).map(|k| ((value >> k) & 1) as u8).collect();
        Self { bits, value }
    }

    /// Multi-index from an ordered bit list (ascending position order).
    pub fn from_bits(bits: Vec<u8>) -> Self {
        let value = bits.iter().enumerate().fold(0usize, |acc, (k, &b)| acc | ((b as usize) << k));
        Self { bits, value }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn value(&self) -> usize {
        self.value
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Counter-based seed derivation for reproducible parallel sampling
/// (SplitMix64 finalizer over master seed plus counter).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Haar-random pure state: i.i.d. standard complex Gaussian vector,
/// normalized. Identical seeds give bitwise identical states.
pub fn haar_random(n: usize, seed: u64) -> Result<PureState> {
    if n < 1 || n > MAX_QUBITS {
        return Err(Error::QubitCountOutOfRange { n, min: 1, max: MAX_QUBITS });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let dim = 1usize << n;
    let mut coeffs = Vec::with_capacity(dim);
    for _ in 0..dim {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        coeffs.push(Complex64::new(re, im));
    }
    let (state, _) = PureState::new(coeffs, n)?;
    Ok(state)
}

/// Named state families used by the CLI and the verification suites.
#[derive(Clone, Debug, PartialEq)]
pub enum StateFamily {
    /// `(|0..0> + |1..1>)/sqrt(2)`
    Ghz { n: usize },
    /// Equal superposition of all single-excitation basis states.
    W { n: usize },
    /// Computational-basis product state; `bits` empty means all zeros.
    Product { n: usize, bits: Vec<u8> },
    /// Bell pair `(|00>+|11>)/sqrt(2)` on `pair`, all other qubits `|0>`.
    BellTimesRest { n: usize, pair: (usize, usize) },
    /// `cos(theta)|GHZ_3> + sin(theta)|W_3>`, renormalized; the one-parameter
    /// family used by parameter sweeps.
    GhzW { theta: f64 },
    /// Haar-random state.
    Haar { n: usize, seed: u64 },
    /// State loaded from a JSON state file.
    File { path: String },
}

/// Instantiates a named family as a normalized pure state.
pub fn named_state(family: &StateFamily) -> Result<PureState> {
    match family {
        StateFamily::Ghz { n } => {
            if *n < 2 {
                return Err(Error::InvalidFamily(format!("ghz requires n >= 2, got {n}")));
            }
            let dim = 1usize << n;
            let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
            coeffs[0] = Complex64::new(1.0, 0.0);
            coeffs[dim - 1] = Complex64::new(1.0, 0.0);
            Ok(PureState::new(coeffs, *n)?.0)
        }
        StateFamily::W { n } => {
            if *n < 1 {
                return Err(Error::InvalidFamily("w requires n >= 1".into()));
            }
            if *n > MAX_QUBITS {
                return Err(Error::QubitCountOutOfRange { n: *n, min: 1, max: MAX_QUBITS });
            }
            let dim = 1usize << n;
            let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
            for m in 0..*n {
                coeffs[1 << m] = Complex64::new(1.0, 0.0);
            }
            Ok(PureState::new(coeffs, *n)?.0)
        }
        StateFamily::Product { n, bits } => {
            if *n < 1 || *n > MAX_QUBITS {
                return Err(Error::QubitCountOutOfRange { n: *n, min: 1, max: MAX_QUBITS });
            }
            let bits = if bits.is_empty() { vec![0u8; *n] } else { bits.clone() };
            if bits.len() != *n {
                return Err(Error::InvalidFamily(format!(
                    "product bit string has length {}, expected {n}",
                    bits.len()
                )));
            }
            if bits.iter().any(|&b| b > 1) {
                return Err(Error::InvalidFamily("product bits must be 0 or 1".into()));
            }
            let dim = 1usize << n;
            let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
            coeffs[basis_index(&bits)] = Complex64::new(1.0, 0.0);
            Ok(PureState::new(coeffs, *n)?.0)
        }
        StateFamily::BellTimesRest { n, pair } => {
            let (p, q) = *pair;
            if *n < 2 {
                return Err(Error::InvalidFamily("bell requires n >= 2".into()));
            }
            if p < 1 || p > *n {
                return Err(Error::QubitOutOfRange { qubit: p, n: *n });
            }
            if q < 1 || q > *n {
                return Err(Error::QubitOutOfRange { qubit: q, n: *n });
            }
            if p == q {
                return Err(Error::DuplicateQubit { qubit: p });
            }
            let dim = 1usize << n;
            let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
            let both = (1usize << (n - p)) | (1usize << (n - q));
            coeffs[0] = Complex64::new(1.0, 0.0);
            coeffs[both] = Complex64::new(1.0, 0.0);
            Ok(PureState::new(coeffs, *n)?.0)
        }
        StateFamily::GhzW { theta } => {
            let ghz = named_state(&StateFamily::Ghz { n: 3 })?;
            let w = named_state(&StateFamily::W { n: 3 })?;
            let (c, s) = (theta.cos(), theta.sin());
            let coeffs: Vec<Complex64> = ghz
                .amplitudes()
                .iter()
                .zip(w.amplitudes().iter())
                .map(|(g, ww)| g * c + ww * s)
                .collect();
            Ok(PureState::new(coeffs, 3)?.0)
        }
        StateFamily::Haar { n, seed } => haar_random(*n, *seed),
        StateFamily::File { path } => read_state_file(path),
    }
}

#[derive(Serialize, Deserialize)]
struct StateFileJson {
    n_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<BTreeMap<String, String>>,
}

/// Reads a state file, rejecting malformed schemas and states whose norm
/// deviates from 1 by more than `FILE_NORM_TOLERANCE` (no silent
/// renormalization of bad data).
pub fn read_state_file<P: AsRef<Path>>(path: P) -> Result<PureState> {
    let text = std::fs::read_to_string(path)?;
    let parsed: StateFileJson = serde_json::from_str(&text)?;
    let n = parsed.n_qubits;
    if n < 1 || n > MAX_QUBITS {
        return Err(Error::Schema(format!("n_qubits = {n} outside 1..={MAX_QUBITS}")));
    }
    let dim = 1usize << n;
    if parsed.amplitudes.len() != dim {
        return Err(Error::Schema(format!(
            "{} amplitudes for n_qubits = {n}, expected {dim}",
            parsed.amplitudes.len()
        )));
    }
    let coeffs: Vec<Complex64> = parsed
        .amplitudes
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    let norm = coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > FILE_NORM_TOLERANCE {
        return Err(Error::NormalizationRejected { norm });
    }
    // amplitudes are stored verbatim so a round trip is bitwise exact
    Ok(PureState { n_qubits: n, amplitudes: coeffs })
}

/// Writes a state file with optional metadata.
pub fn write_state_file<P: AsRef<Path>>(
    state: &PureState,
    path: P,
    meta: Option<BTreeMap<String, String>>,
) -> Result<()> {
    let json = StateFileJson {
        n_qubits: state.n_qubits(),
        amplitudes: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        meta,
    };
    let text = serde_json::to_string_pretty(&json)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads the metadata map of a state file, if present.
pub fn read_state_meta<P: AsRef<Path>>(path: P) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let parsed: StateFileJson = serde_json::from_str(&text)?;
    Ok(parsed.meta.unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn make_state_basis_state() {
        let mut v = vec![c(0.0, 0.0); 8];
        v[0] = c(1.0, 0.0);
        let (s, norm) = make_state(v, 3).unwrap();
        assert_eq!(norm, 1.0);
        assert_eq!(s.amplitude(0), c(1.0, 0.0));
    }

    #[test]
    fn make_state_normalizes_ghz_like_input() {
        let mut v = vec![c(0.0, 0.0); 8];
        v[0] = c(1.0, 0.0);
        v[7] = c(1.0, 0.0);
        let (s, norm) = make_state(v, 3).unwrap();
        assert!((norm - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((s.amplitude(0).re - SQRT_HALF).abs() < 1e-15);
        assert!((s.amplitude(7).re - SQRT_HALF).abs() < 1e-15);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn make_state_rejects_length_mismatch_and_zero() {
        assert!(matches!(
            make_state(vec![c(1.0, 0.0), c(1.0, 0.0)], 2),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(make_state(vec![c(0.0, 0.0); 4], 2), Err(Error::ZeroVector)));
    }

    #[test]
    fn marginal_ghz3_pair_is_half_mixture() {
        let ghz = named_state(&StateFamily::Ghz { n: 3 }).unwrap();
        let rho = ghz.marginal(&[1, 2]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i, j) == (0, 0) || (i, j) == (3, 3) { 0.5 } else { 0.0 };
                assert!((rho.elements()[(i, j)] - c(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn marginal_product_state_single_qubit() {
        let zero = named_state(&StateFamily::Product { n: 3, bits: vec![] }).unwrap();
        let rho = zero.marginal(&[1]).unwrap();
        assert!((rho.elements()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((rho.elements()[(1, 1)]).norm() < 1e-15);
    }

    #[test]
    fn marginal_w3_single_qubit() {
        let w = named_state(&StateFamily::W { n: 3 }).unwrap();
        let rho = w.marginal(&[1]).unwrap();
        assert!((rho.elements()[(0, 0)].re - 2.0 / 3.0).abs() < 1e-14);
        assert!((rho.elements()[(1, 1)].re - 1.0 / 3.0).abs() < 1e-14);
        assert!(rho.elements()[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn marginal_rejects_bad_keep_sets() {
        let w = named_state(&StateFamily::W { n: 3 }).unwrap();
        assert!(matches!(w.marginal(&[]), Err(Error::EmptySelection)));
        assert!(matches!(w.marginal(&[1, 1]), Err(Error::DuplicateQubit { .. })));
        assert!(matches!(w.marginal(&[4]), Err(Error::QubitOutOfRange { .. })));
    }

    #[test]
    fn haar_is_deterministic_and_normalized() {
        let a = haar_random(3, 42).unwrap();
        let b = haar_random(3, 42).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        assert!((a.norm() - 1.0).abs() < 1e-12);
        let d = haar_random(3, 43).unwrap();
        assert_ne!(a.amplitudes(), d.amplitudes());
    }

    #[test]
    fn haar_rejects_out_of_range() {
        assert!(haar_random(0, 1).is_err());
        assert!(haar_random(13, 1).is_err());
    }

    #[test]
    fn haar_marginal_probabilities_are_uniform() {
        // sampling oracle: mean |a_b|^2 over many draws approaches 1/8
        let samples = 10_000usize;
        let mut mean = vec![0.0f64; 8];
        for i in 0..samples {
            let s = haar_random(3, derive_seed(7, i as u64)).unwrap();
            for (b, z) in s.amplitudes().iter().enumerate() {
                mean[b] += z.norm_sqr();
            }
        }
        for b in 0..8 {
            assert!((mean[b] / samples as f64 - 0.125).abs() < 0.01, "basis {b}");
        }
    }

    #[test]
    fn named_states_match_definitions() {
        let ghz = named_state(&StateFamily::Ghz { n: 3 }).unwrap();
        assert!((ghz.amplitude(0).re - SQRT_HALF).abs() < 1e-15);
        assert!((ghz.amplitude(7).re - SQRT_HALF).abs() < 1e-15);

        let w = named_state(&StateFamily::W { n: 3 }).unwrap();
        let third = 1.0 / 3.0f64.sqrt();
        for b in [1usize, 2, 4] {
            assert!((w.amplitude(b).re - third).abs() < 1e-15);
        }

        let p = named_state(&StateFamily::Product { n: 4, bits: vec![] }).unwrap();
        assert_eq!(p.amplitude(0), c(1.0, 0.0));

        let bell = named_state(&StateFamily::BellTimesRest { n: 3, pair: (1, 2) }).unwrap();
        assert!((bell.amplitude(0b000).re - SQRT_HALF).abs() < 1e-15);
        assert!((bell.amplitude(0b110).re - SQRT_HALF).abs() < 1e-15);

        let endpoint = named_state(&StateFamily::GhzW { theta: 0.0 }).unwrap();
        for (a, b) in endpoint.amplitudes().iter().zip(ghz.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn named_state_rejects_bad_parameters() {
        assert!(named_state(&StateFamily::Ghz { n: 1 }).is_err());
        assert!(named_state(&StateFamily::Product { n: 2, bits: vec![0, 1, 1] }).is_err());
        assert!(named_state(&StateFamily::BellTimesRest { n: 3, pair: (2, 2) }).is_err());
    }

    #[test]
    fn state_file_round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ghz3.json");
        let ghz = named_state(&StateFamily::Ghz { n: 3 }).unwrap();
        write_state_file(&ghz, &path, None).unwrap();
        let back = read_state_file(&path).unwrap();
        assert_eq!(ghz.amplitudes(), back.amplitudes());
    }

    #[test]
    fn state_file_rejects_bad_length_and_norm() {
        let dir = tempfile::tempdir().unwrap();
        let short = dir.path().join("short.json");
        std::fs::write(
            &short,
            r#"{"n_qubits":3,"amplitudes":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#,
        )
        .unwrap();
        assert!(matches!(read_state_file(&short), Err(Error::Schema(_))));

        let unnorm = dir.path().join("unnorm.json");
        std::fs::write(
            &unnorm,
            r#"{"n_qubits":1,"amplitudes":[[0.5,0],[0,0]]}"#,
        )
        .unwrap();
        assert!(matches!(read_state_file(&unnorm), Err(Error::NormalizationRejected { .. })));

        let garbage = dir.path().join("garbage.json");
        std::fs::write(&garbage, "{not json").unwrap();
        assert!(matches!(read_state_file(&garbage), Err(Error::Json(_))));
    }

    #[test]
    fn multi_index_round_trip_is_bijective() {
        for len in 0..=10usize {
            for v in 0..(1usize << len) {
                let idx = MultiIndex::from_value(v, len);
                assert_eq!(idx.value(), v);
                assert_eq!(MultiIndex::from_bits(idx.bits().to_vec()).value(), v);
            }
        }
    }

    #[test]
    fn permute_qubits_moves_bits() {
        // |011> with qubit 1 most significant: bits (0,1,1)
        let (s, _) = make_state(
            {
                let mut v = vec![c(0.0, 0.0); 8];
                v[0b011] = c(1.0, 0.0);
                v
            },
            3,
        )
        .unwrap();
        // new order (3,1,2): new bits = (old q3, old q1, old q2) = (1,0,1)
        let p = s.permute_qubits(&[3, 1, 2]).unwrap();
        assert_eq!(p.amplitude(0b101), c(1.0, 0.0));
    }

    #[test]
    fn derive_seed_spreads_indices() {
        let a = derive_seed(42, 0);
        let b = derive_seed(42, 1);
        assert_ne!(a, b);
        assert_eq!(a, derive_seed(42, 0));
    }
}
