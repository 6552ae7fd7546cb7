//! Two-qubit spin-flip invariants, tangles, and their expansions in pure-state
//! amplitude invariants.
//!
//! Two independent computation routes are kept side by side on purpose:
//!
//! * the spectral route works on a two-qubit density matrix: characteristic
//!   polynomial coefficients `n4, n8, n12, n16` of `rho * rho~` via Newton's
//!   identities on the traces of matrix powers, and the concurrence from the
//!   spectrum itself;
//! * the amplitude route works on the N-qubit pure state the marginal came
//!   from: determinant-form invariants `D_{1jIJ}` and their symmetrized sums,
//!   which rebuild `n4`, `n8`, and the one-tangle without ever forming a
//!   density matrix.
//!
//! Agreement of the two routes is part of the verification suite.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::qstate::{DensityMatrix, MultiIndex, PureState};

/// Eigenvalues of `rho * rho~` for a two-qubit state, sorted descending and
/// clamped at zero.
#[derive(Clone, Copy, Debug)]
pub struct SpinFlipSpectrum {
    pub lambdas: [f64; 4],
}

impl SpinFlipSpectrum {
    pub fn sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    /// Elementary symmetric polynomials `(e1, e2, e3, e4)` of the eigenvalues.
    pub fn elementary_symmetric(&self) -> [f64; 4] {
        let [a, b, c, d] = self.lambdas;
        [
            a + b + c + d,
            a * b + a * c + a * d + b * c + b * d + c * d,
            a * b * c + a * b * d + a * c * d + b * c * d,
            a * b * c * d,
        ]
    }
}

/// Spin-flip phase pattern of `sigma_y (x) sigma_y` in the computational
/// basis: entry `(x, y)` of `rho~` is `phase(x) phase(y) conj(rho[flip x, flip y])`.
const FLIP_PHASE: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

/// Wootters spin flip `rho~ = (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)`
/// of a two-qubit density matrix.
pub fn spin_flip(rho: &DensityMatrix) -> Result<DMatrix<Complex64>> {
    let m = rho.elements();
    if m.nrows() != 4 {
        return Err(Error::WrongDimension { expected: 4, actual: m.nrows() });
    }
    let mut out = DMatrix::<Complex64>::zeros(4, 4);
    for x in 0..4 {
        for y in 0..4 {
            out[(x, y)] = m[(3 - x, 3 - y)].conj() * (FLIP_PHASE[x] * FLIP_PHASE[y]);
        }
    }
    Ok(out)
}

/// The matrix `sigma_y (x) sigma_y` itself.
fn flip_matrix() -> DMatrix<Complex64> {
    let mut s = DMatrix::<Complex64>::zeros(4, 4);
    for y in 0..4 {
        s[(3 - y, y)] = Complex64::new(FLIP_PHASE[y], 0.0);
    }
    s
}

/// Spectrum of `rho * rho~`, computed as squared singular values of the
/// complex symmetric factor `Z = sqrt(rho)^T (sigma_y (x) sigma_y) sqrt(rho)`.
///
/// `Z† Z` is exactly the Hermitian matrix `sqrt(rho) rho~ sqrt(rho)` similar
/// to `rho rho~`; taking singular values of the factor keeps the square roots
/// of near-zero eigenvalues at full absolute accuracy, which the spin-flip
/// eigenvalue differences in the concurrence need.
pub fn flip_spectrum(rho: &DensityMatrix) -> Result<SpinFlipSpectrum> {
    if rho.dim() != 4 {
        return Err(Error::WrongDimension { expected: 4, actual: rho.dim() });
    }
    let sigma = flip_singular_values(rho)?;
    Ok(SpinFlipSpectrum {
        lambdas: [
            sigma[0] * sigma[0],
            sigma[1] * sigma[1],
            sigma[2] * sigma[2],
            sigma[3] * sigma[3],
        ],
    })
}

fn flip_singular_values(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let root = linalg::sqrtm_psd(rho.elements(), crate::qstate::PSD_HARD_ERROR)?;
    let z = root.transpose() * flip_matrix() * &root;
    linalg::singular_values(&z)
}

/// Wootters concurrence of a two-qubit density matrix: `C` and the two-tangle
/// `max(0, C)`.
#[derive(Clone, Copy, Debug)]
pub struct Concurrence {
    pub c_value: f64,
    pub two_tangle: f64,
}

pub fn concurrence(rho: &DensityMatrix) -> Result<Concurrence> {
    if rho.dim() != 4 {
        return Err(Error::WrongDimension { expected: 4, actual: rho.dim() });
    }
    let sigma = flip_singular_values(rho)?;
    let c_value = sigma[0] - sigma[1] - sigma[2] - sigma[3];
    Ok(Concurrence { c_value, two_tangle: c_value.clamp(0.0, 1.0).max(0.0) })
}

/// Characteristic-polynomial coefficients of `rho rho~` plus the derived
/// concurrence quantities for one two-qubit marginal.
#[derive(Clone, Copy, Debug)]
pub struct PairInvariants {
    pub n4: f64,
    pub n8: f64,
    pub n12: f64,
    pub n16: f64,
    pub c_value: f64,
    pub two_tangle: f64,
    pub f16: f64,
    pub chi_plus: f64,
    pub chi_minus: f64,
}

impl PairInvariants {
    /// The chi branch selected by the sign of `C` (`C = 0` uses the plus
    /// branch; both branches coincide there).
    pub fn active_chi(&self) -> f64 {
        if self.c_value >= 0.0 {
            self.chi_plus
        } else {
            self.chi_minus
        }
    }
}

/// Computes `n4, n8, n12, n16` from Newton's identities on the power sums
/// `tr((rho rho~)^k)`, `k = 1..4`, together with the spectral concurrence and
/// the `f16`, `chi` quantities.
pub fn pair_invariants(rho: &DensityMatrix) -> Result<PairInvariants> {
    let flipped = spin_flip(rho)?;
    let m = rho.elements() * flipped;
    let m2 = &m * &m;
    let p1 = trace_re(&m);
    let p2 = trace_re(&m2);
    let p3 = trace_re(&(&m2 * &m));
    let p4 = trace_re(&(&m2 * &m2));

    let e1 = p1;
    let e2 = (e1 * p1 - p2) / 2.0;
    let e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
    let e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0;

    let n4 = e1.max(0.0);
    let n8 = e2.max(0.0);
    let n12 = e3.max(0.0);
    let n16 = e4.max(0.0);

    let conc = concurrence(rho)?;
    let c2 = conc.c_value * conc.c_value;
    let f16 = (n16.sqrt() * c2 * (n4 - c2) + n12 * c2).max(0.0);
    let chi_plus = 8.0 * (n16.sqrt() + f16.sqrt());
    let chi_minus = 8.0 * n16.sqrt() - 8.0 * f16.sqrt() + 2.0 * n4 * c2 - c2 * c2;

    Ok(PairInvariants {
        n4,
        n8,
        n12,
        n16,
        c_value: conc.c_value,
        two_tangle: conc.two_tangle,
        f16,
        chi_plus,
        chi_minus,
    })
}

fn trace_re(m: &DMatrix<Complex64>) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Residual of the identity `n4 - tau^2 = sqrt(4 n8 + chi)` with the chi
/// branch picked by the sign of `C`. An algebraic identity in the spin-flip
/// eigenvalues; the residual is pure roundoff.
pub fn verify_n4_relation(rho: &DensityMatrix) -> Result<f64> {
    let inv = pair_invariants(rho)?;
    let tau2 = inv.two_tangle * inv.two_tangle;
    let radicand = (4.0 * inv.n8 + inv.active_chi()).max(0.0);
    Ok((inv.n4 - tau2 - radicand.sqrt()).abs())
}

/// One-tangle `4 det(rho_focus)`: entanglement of the focus qubit with the
/// rest of the register.
pub fn one_tangle(state: &PureState, focus: usize) -> Result<f64> {
    let rho = state.marginal(&[focus])?;
    let m = rho.elements();
    let det = m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr();
    Ok((4.0 * det).clamp(0.0, 1.0))
}

/// Index arithmetic for a (focus, partner) pair analysis: maps
/// `(focus bit, partner bit, rest multi-index)` to basis indices.
///
/// The rest multi-index packs the retained positions in ascending order,
/// lowest position in the least significant bit.
pub struct PairIndexer {
    n: usize,
    focus_shift: usize,
    partner_shift: usize,
    rest_shifts: Vec<usize>,
    below_partner: usize,
}

impl PairIndexer {
    pub fn new(n: usize, focus: usize, partner: usize) -> Result<Self> {
        if focus < 1 || focus > n {
            return Err(Error::QubitOutOfRange { qubit: focus, n });
        }
        if partner < 1 || partner > n {
            return Err(Error::QubitOutOfRange { qubit: partner, n });
        }
        if focus == partner {
            return Err(Error::DuplicateQubit { qubit: focus });
        }
        let retained: Vec<usize> = (1..=n).filter(|&q| q != focus && q != partner).collect();
        let below_partner = retained.iter().filter(|&&q| q < partner).count();
        Ok(Self {
            n,
            focus_shift: n - focus,
            partner_shift: n - partner,
            rest_shifts: retained.iter().map(|&q| n - q).collect(),
            below_partner,
        })
    }

    pub fn rest_len(&self) -> usize {
        self.rest_shifts.len()
    }

    pub fn rest_dim(&self) -> usize {
        1usize << self.rest_shifts.len()
    }

    /// Bit mask selecting the retained positions that come before the partner
    /// position (used to group index pairs without double counting).
    pub fn below_partner_mask(&self) -> usize {
        (1usize << self.below_partner) - 1
    }

    #[inline]
    pub fn basis(&self, focus_bit: u8, partner_bit: u8, rest: usize) -> usize {
        let mut b = ((focus_bit as usize) << self.focus_shift)
            | ((partner_bit as usize) << self.partner_shift);
        for (k, &shift) in self.rest_shifts.iter().enumerate() {
            b |= ((rest >> k) & 1) << shift;
        }
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Determinant-form amplitude invariant for a (focus, partner) pair and two
/// rest multi-indices.
#[derive(Clone, Debug)]
pub struct DInvariant {
    pub focus: usize,
    pub partner: usize,
    pub i_index: MultiIndex,
    pub j_index: MultiIndex,
    pub value: Complex64,
}

impl DInvariant {
    pub fn evaluate(
        state: &PureState,
        focus: usize,
        partner: usize,
        i_index: MultiIndex,
        j_index: MultiIndex,
    ) -> Result<Self> {
        let idx = PairIndexer::new(state.n_qubits(), focus, partner)?;
        if i_index.len() != idx.rest_len() || j_index.len() != idx.rest_len() {
            return Err(Error::LengthMismatch {
                expected: idx.rest_len(),
                actual: i_index.len().max(j_index.len()),
            });
        }
        let value = d_value(state, &idx, i_index.value(), j_index.value());
        Ok(Self { focus, partner, i_index, j_index, value })
    }
}

#[inline]
fn d_value(state: &PureState, idx: &PairIndexer, i: usize, j: usize) -> Complex64 {
    // D(I,J) = a[0,0,I] a[1,1,J] - a[1,0,J] a[0,1,I]
    state.amplitude(idx.basis(0, 0, i)) * state.amplitude(idx.basis(1, 1, j))
        - state.amplitude(idx.basis(1, 0, j)) * state.amplitude(idx.basis(0, 1, i))
}

/// Minor of the one-tangle expansion: pairs the focus-0 amplitude with rest
/// index `I` at partner bit 0 and rest index `J` at partner bit 1.
#[inline]
fn g_value(state: &PureState, idx: &PairIndexer, i: usize, j: usize) -> Complex64 {
    // G(I,J) = a[0,0,I] a[1,1,J] - a[0,1,J] a[1,0,I]
    state.amplitude(idx.basis(0, 0, i)) * state.amplitude(idx.basis(1, 1, j))
        - state.amplitude(idx.basis(0, 1, j)) * state.amplitude(idx.basis(1, 0, i))
}

/// The invariant `D_{1jIJ}` as a bare complex value.
pub fn d_invariant(
    state: &PureState,
    focus: usize,
    partner: usize,
    i_index: &MultiIndex,
    j_index: &MultiIndex,
) -> Result<Complex64> {
    Ok(DInvariant::evaluate(state, focus, partner, i_index.clone(), j_index.clone())?.value)
}

/// Symmetrized invariant matrix `T[I][J] = D(I,J) + D(J,I)` of a pair
/// analysis. Its squared singular values are the spin-flip eigenvalues of the
/// pair marginal, which makes it the bridge between the amplitude and the
/// spectral routes.
pub fn tau_matrix(state: &PureState, focus: usize, partner: usize) -> Result<DMatrix<Complex64>> {
    let idx = PairIndexer::new(state.n_qubits(), focus, partner)?;
    let dim = idx.rest_dim();
    let mut t = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let val = d_value(state, &idx, i, j) + d_value(state, &idx, j, i);
            t[(i, j)] = val;
            t[(j, i)] = val;
        }
    }
    Ok(t)
}

/// `n4` of the pair marginal rebuilt from amplitude invariants:
/// the squared Frobenius norm of the T matrix
/// (`sum_{I<J} 2 |T_IJ|^2 + sum_I |T_II|^2`).
pub fn n4_from_invariants(state: &PureState, focus: usize, partner: usize) -> Result<f64> {
    let t = tau_matrix(state, focus, partner)?;
    Ok(t.iter().map(|z| z.norm_sqr()).sum())
}

/// `n8` of the pair marginal rebuilt from amplitude invariants: the sum of
/// squared moduli of the 2x2 minors of the T matrix over row pairs `I < K`
/// and column pairs `J < L`.
pub fn n8_from_invariants(state: &PureState, focus: usize, partner: usize) -> Result<f64> {
    let t = tau_matrix(state, focus, partner)?;
    let dim = t.nrows();
    let mut acc = 0.0;
    for i in 0..dim {
        for k in i + 1..dim {
            for j in 0..dim {
                for l in j + 1..dim {
                    acc += (t[(i, j)] * t[(k, l)] - t[(i, l)] * t[(k, j)]).norm_sqr();
                }
            }
        }
    }
    Ok(acc)
}

/// One-tangle rebuilt from amplitude invariants.
///
/// Every unordered pair of rest indices of the focus complement contributes
/// one squared minor; pairs are grouped by the lowest position at which the
/// two indices differ, which assigns each to exactly one partner qubit `j`:
/// the diagonal terms are the `|D_II|^2` of the pair analysis, the
/// off-diagonal terms are the one-tangle minors with rest indices agreeing
/// below `j`.
pub fn one_tangle_from_invariants(state: &PureState, focus: usize) -> Result<f64> {
    let n = state.n_qubits();
    if focus < 1 || focus > n {
        return Err(Error::QubitOutOfRange { qubit: focus, n });
    }
    if n < 2 {
        return Err(Error::QubitCountOutOfRange { n, min: 2, max: crate::qstate::MAX_QUBITS });
    }
    let mut acc = 0.0;
    for partner in 1..=n {
        if partner == focus {
            continue;
        }
        let idx = PairIndexer::new(n, focus, partner)?;
        let dim = idx.rest_dim();
        let mask = idx.below_partner_mask();
        for i in 0..dim {
            for j in 0..dim {
                if (i & mask) != (j & mask) {
                    continue;
                }
                let v = if i == j {
                    d_value(state, &idx, i, i)
                } else {
                    g_value(state, &idx, i, j)
                };
                acc += v.norm_sqr();
            }
        }
    }
    Ok((4.0 * acc).clamp(0.0, 1.0))
}

/// Three-tangle of a three-qubit pure state:
/// `4 |(D_01 + D_10)^2 - 4 D_00 D_11| = 4 |det T|` for the 2x2 T matrix of
/// any of the three pair analyses. Permutation invariant.
pub fn three_tangle_pure(state: &PureState, focus: usize, j: usize, k: usize) -> Result<f64> {
    if state.n_qubits() != 3 {
        return Err(Error::QubitCountOutOfRange { n: state.n_qubits(), min: 3, max: 3 });
    }
    let mut roles = [focus, j, k];
    roles.sort_unstable();
    if roles != [1, 2, 3] {
        return Err(Error::InvalidConfig(format!(
            "(focus, j, k) = ({focus}, {j}, {k}) must be a permutation of (1, 2, 3)"
        )));
    }
    let t = tau_matrix(state, focus, j)?;
    let det = t[(0, 0)] * t[(1, 1)] - t[(0, 1)] * t[(1, 0)];
    Ok((4.0 * det.norm()).clamp(0.0, 1.0))
}
