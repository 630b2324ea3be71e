//! Dense linear algebra helpers shared by the space and operator analyzers.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

pub fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

/// `(m + mᵀ) / 2`.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Relative Frobenius asymmetry `‖m − mᵀ‖ / ‖m‖`, zero for the zero matrix.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m - m.transpose()).norm() / norm
}

/// Index of the largest-magnitude entry; the first one wins on ties.
pub fn argmax_abs(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    best
}

/// Symmetric eigendecomposition with deterministic output: eigenvalues
/// nondecreasing, ties broken by the position of each eigenvector's dominant
/// coordinate, and each eigenvector signed so that its dominant coordinate is
/// positive.
pub fn sym_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut pairs: Vec<(f64, usize, Vec<f64>)> = (0..n)
        .map(|j| {
            let mut v: Vec<f64> = eig.eigenvectors.column(j).iter().copied().collect();
            let pos = argmax_abs(&v);
            if v[pos] < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            (eig.eigenvalues[j], pos, v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let values = DVector::from_iterator(n, pairs.iter().map(|p| p.0));
    let vectors = DMatrix::from_fn(n, n, |i, j| pairs[j].2[i]);
    (values, vectors)
}

/// Lower Cholesky factor `L` with `m = L Lᵀ`, or [`Error::NotSpd`].
pub fn cholesky_factor(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::NotSpd(format!("{}x{} is not square", m.nrows(), m.ncols())));
    }
    if asymmetry(m) > 1e-12 {
        return Err(Error::NotSpd("matrix is not symmetric".into()));
    }
    m.clone()
        .cholesky()
        .map(|c| c.l())
        .ok_or_else(|| Error::NotSpd("Cholesky factorization failed".into()))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Checks that `m` is symmetric positive definite: Cholesky succeeds and the
/// smallest eigenvalue is strictly positive.
pub fn require_spd(m: &DMatrix<f64>) -> Result<()> {
    cholesky_factor(m)?;
    let lo = min_eigenvalue(m);
    if lo > 0.0 {
        Ok(())
    } else {
        Err(Error::NotSpd(format!("smallest eigenvalue {lo:e}")))
    }
}

/// Generalized symmetric-definite eigenproblem `a x = μ b x`.
///
/// Solved by reduction: `b = L Lᵀ`, `C = L⁻¹ a L⁻ᵀ`, `C = W Λ Wᵀ`,
/// `X = L⁻ᵀ W`. Returns `μ` nondecreasing and `X` with `Xᵀ b X = I`,
/// `Xᵀ a X = Λ`.
pub fn generalized_eigen(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: b.nrows(),
            got: a.nrows(),
        });
    }
    let l = cholesky_factor(b)?;
    let singular = || Error::NotSpd("singular Cholesky factor".into());
    let y = l.solve_lower_triangular(a).ok_or_else(singular)?;
    let c = l.solve_lower_triangular(&y.transpose()).ok_or_else(singular)?;
    let (values, w) = sym_eigen(&symmetrize(&c));
    let x = l.transpose().solve_upper_triangular(&w).ok_or_else(singular)?;
    Ok((values, x))
}

/// Extreme generalized eigenvalues of `a x = μ b x`.
pub fn generalized_extremes(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(f64, f64)> {
    let (values, _) = generalized_eigen(a, b)?;
    Ok((values[0], values[values.len() - 1]))
}
