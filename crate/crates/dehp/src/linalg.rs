//! Dense complex linear algebra on top of nalgebra: eigensolves, singular
//! values, least squares, and a few small helpers used throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{DehpError, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// `c64(re, im)` shorthand.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Frobenius norm. nalgebra's `norm` already sums `|z|^2` over all entries.
#[inline]
pub fn fro_norm(m: &CMat) -> f64 {
    m.norm()
}

/// ‖M − M†‖ in the Frobenius norm.
pub fn hermiticity_error(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Eigendecomposition of a Hermitian matrix. Returns eigenvalues in
/// ascending order with matching columns of the eigenvector matrix.
///
/// Fails if the input deviates from Hermiticity by more than `tol`
/// relative to its norm.
pub fn hermitian_eigen(m: &CMat, tol: f64) -> Result<(Vec<f64>, CMat)> {
    let scale = m.norm().max(1.0);
    let dev = hermiticity_error(m);
    if dev > tol * scale {
        return Err(DehpError::NotHermitian(dev));
    }
    let se = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let n = m.nrows();
    let mut vecs = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(i));
    }
    Ok((vals, vecs))
}

/// Eigenvalues of a general complex square matrix, sorted by descending
/// modulus (ties broken by descending real part, then imaginary part).
pub fn complex_eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 0)
        .ok_or_else(|| DehpError::ShapeMismatch("Schur iteration did not converge".into()))?;
    let vals = schur
        .eigenvalues()
        .ok_or_else(|| DehpError::ShapeMismatch("Schur produced no eigenvalues".into()))?;
    let mut out: Vec<C64> = vals.iter().copied().collect();
    out.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    Ok(out)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank: number of singular values above `rel_tol` times the
/// largest one.
pub fn rank_with_tol(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > rel_tol * top).count(),
        _ => 0,
    }
}

/// Minimal-norm least-squares solution of `a x = b`.
///
/// Solves the normal equations through a Hermitian eigendecomposition of
/// a†a, truncating the near-null gauge directions. The systems handled here
/// are small (d²χ² × dχ²) and well scaled, so squaring the condition number
/// is harmless, and the Hermitian path is the numerically solid complex
/// factorization available without a LAPACK binding.
pub fn lstsq(a: &CMat, b: &CVec) -> Result<CVec> {
    if a.nrows() != b.len() {
        return Err(DehpError::ShapeMismatch(format!(
            "lstsq: {} rows vs rhs of length {}",
            a.nrows(),
            b.len()
        )));
    }
    let ata = a.adjoint() * a;
    let atb = a.adjoint() * b;
    let (vals, vecs) = hermitian_eigen(&ata, 1e-10)?;
    let vmax = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cutoff = vmax * 1e-12;
    let mut x = CVec::zeros(a.ncols());
    for (i, &lam) in vals.iter().enumerate() {
        if lam > cutoff {
            let v = vecs.column(i);
            let coeff = v.dotc(&atb) / c64(lam, 0.0);
            x += v * coeff;
        }
    }
    Ok(x)
}

/// Kronecker product (row-major pairing: `(i1 i2), (j1 j2)` with the first
/// factor slowest).
#[inline]
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// `|⟨u, v⟩| / (‖u‖ ‖v‖)`.
pub fn collinearity(u: &CVec, v: &CVec) -> Result<f64> {
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(DehpError::ZeroInput("collinearity of a zero vector".into()));
    }
    Ok(u.dotc(v).norm() / (nu * nv))
}

/// True if every entry is finite.
pub fn all_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
