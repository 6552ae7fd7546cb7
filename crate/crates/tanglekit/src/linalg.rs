//! Small dense complex linear algebra: cyclic Jacobi eigensolver for Hermitian
//! matrices, one-sided Jacobi SVD, PSD square roots, and unitary exponentials.
//!
//! Everything here targets the tiny matrices this crate works with (dimension
//! 2..16). Jacobi iteration is foolproof at these sizes and gives eigenvalues
//! accurate to machine epsilon times the matrix scale.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum number of full Jacobi sweeps before giving up.
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix: `a = vectors * diag(values) * vectors†`.
///
/// Eigenvalues are sorted in descending order; `vectors` holds the matching
/// eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

fn off_diagonal_norm(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += m[(p, q)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Jacobi rotation parameters (c real, s complex) that zero the (p,q) element
/// of the Hermitian 2x2 block [[app, apq], [conj(apq), aqq]].
fn rotation(app: f64, aqq: f64, apq: Complex64) -> (f64, Complex64) {
    let abs = apq.norm();
    let phase = apq / abs;
    let tau = (aqq - app) / (2.0 * abs);
    // smaller root of t^2 + 2*tau*t - 1 = 0
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, phase * (t * c))
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input is not checked for Hermiticity beyond using only the upper
/// triangle together with the real diagonal; callers validate their inputs.
pub fn hermitian_eigen(a: &DMatrix<Complex64>) -> Result<HermitianEigen> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::WrongDimension { expected: n, actual: a.ncols() });
    }
    let mut m = a.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let stop = 1e-15 * scale * n as f64;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= stop {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let (c, s) = rotation(m[(p, p)].re, m[(q, q)].re, apq);
                // m <- R† m R with R[p,p]=R[q,q]=c, R[p,q]=s, R[q,p]=-conj(s)
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c - mkq * s.conj();
                    m[(k, q)] = mkp * s + mkq * c;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c - mqk * s;
                    m[(q, k)] = mpk * s.conj() + mqk * c;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * s.conj();
                    v[(k, q)] = vkp * s + vkq * c;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > stop {
        return Err(Error::EigensolverNoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let values: Vec<f64> = (0..n).map(|k| m[(k, k)].re).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap().then(i.cmp(&j)));
    let sorted_values: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let mut sorted_vectors = DMatrix::<Complex64>::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        sorted_vectors.set_column(col, &v.column(k));
    }
    Ok(HermitianEigen { values: sorted_values, vectors: sorted_vectors })
}

/// Singular values of a square complex matrix by one-sided Jacobi, sorted
/// descending.
///
/// Column rotations orthogonalize pairs of columns; at convergence the
/// singular values are the column norms. Unlike an eigendecomposition of
/// `a† a`, this keeps absolute accuracy near machine epsilon for singular
/// values close to zero.
pub fn singular_values(a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::WrongDimension { expected: n, actual: a.ncols() });
    }
    let mut m = a.clone();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    app += m[(k, p)].norm_sqr();
                    aqq += m[(k, q)].norm_sqr();
                    apq += m[(k, p)].conj() * m[(k, q)];
                }
                let abs = apq.norm();
                if abs <= 1e-15 * (app * aqq).sqrt() || abs <= 1e-300 {
                    continue;
                }
                rotated = true;
                let phase = apq / abs;
                let tau = (aqq - app) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // fold the phase into column q; unit column scalings do not
                // change singular values
                for k in 0..n {
                    let x = m[(k, p)];
                    let y = m[(k, q)] * phase.conj();
                    m[(k, p)] = x * c - y * s;
                    m[(k, q)] = x * s + y * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::EigensolverNoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut sigma: Vec<f64> = (0..n)
        .map(|q| (0..n).map(|k| m[(k, q)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(sigma)
}

/// Hermitian PSD square root via eigendecomposition.
///
/// Eigenvalues in `[-neg_error, 0)` are clamped to zero; anything below
/// `-neg_error` signals an invalid input and errors out.
pub fn sqrtm_psd(a: &DMatrix<Complex64>, neg_error: f64) -> Result<DMatrix<Complex64>> {
    let eig = hermitian_eigen(a)?;
    if let Some(&bad) = eig.values.iter().find(|&&x| x < -neg_error) {
        return Err(Error::NotPositiveSemidefinite { eigenvalue: bad });
    }
    let n = a.nrows();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let lam = eig.values[k].max(0.0).sqrt();
        if lam == 0.0 {
            continue;
        }
        let col = eig.vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * lam;
            }
        }
    }
    Ok(out)
}

/// Unitary `exp(i h)` for Hermitian `h`, via eigendecomposition.
pub fn exp_i_hermitian(h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = hermitian_eigen(h)?;
    let n = h.nrows();
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        let phase = Complex64::new(0.0, eig.values[k]).exp();
        let col = eig.vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * phase;
            }
        }
    }
    Ok(out)
}

/// Largest elementwise deviation from Hermitian symmetry.
pub fn hermiticity_deviation(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    dev
}
