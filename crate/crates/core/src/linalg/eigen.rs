//! Symmetric eigensolvers: dense via nalgebra, and shift-invert Lanczos
//! over a sparse Cholesky factor for the low end of large spectra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::CscMatrix;

use crate::error::{Error, Result};
use crate::operators::NumericMatrix;

/// Largest dimension handled by the dense solver.
pub const DENSE_CAP: usize = 4000;

/// Ascending eigenvalues with matching eigenvector columns.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Ascending spectrum of a symmetric matrix by dense factorization.
pub fn dense_spectrum(m: &NumericMatrix) -> Result<Vec<f64>> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("spectrum of a non-square matrix".into()));
    }
    if m.rows() > DENSE_CAP {
        return Err(Error::InvalidArgument(format!(
            "dimension {} exceeds the dense cap {DENSE_CAP}; use the extremal solver",
            m.rows()
        )));
    }
    Ok(sym_eigen(&m.to_dense()).0)
}

/// The `count` smallest eigenvalues of a positive semidefinite matrix,
/// dense below the cap and shift-invert Lanczos above it.
pub fn smallest_eigenvalues(m: &NumericMatrix, count: usize) -> Result<Vec<f64>> {
    if m.rows() <= DENSE_CAP {
        let mut s = dense_spectrum(m)?;
        s.truncate(count);
        return Ok(s);
    }
    shift_invert_lanczos(m, count)
}

/// Shift-invert Lanczos with full reorthogonalization: runs Lanczos on
/// `(A + δI)^{-1}` and maps the top Ritz values back.
pub fn shift_invert_lanczos(m: &NumericMatrix, count: usize) -> Result<Vec<f64>> {
    let n = m.rows();
    if n == 0 || count == 0 {
        return Ok(Vec::new());
    }
    let count = count.min(n);
    let delta = 1e-10 * m.inf_norm().max(1.0);
    let mut shifted = m.0.clone();
    let coo = nalgebra_sparse::CooMatrix::try_from_triplets(n, n, (0..n).collect(), (0..n).collect(), vec![delta; n])
        .map_err(|e| Error::Internal(e.to_string()))?;
    shifted = &shifted + &nalgebra_sparse::CsrMatrix::from(&coo);
    let csc = CscMatrix::from(&shifted);
    let chol = CscCholesky::factor(&csc).map_err(|e| Error::NoConvergence(format!("sparse Cholesky failed: {e}")))?;
    let apply = |v: &DVector<f64>| -> DVector<f64> {
        let b = DMatrix::from_column_slice(n, 1, v.as_slice());
        chol.solve(&b).column(0).into_owned()
    };
    let mut steps = (2 * count + 40).min(n);
    loop {
        let (mu, converged) = lanczos(&apply, n, steps, count);
        if converged || steps == n {
            let mut out: Vec<f64> = mu.iter().map(|&u| 1.0 / u - delta).collect();
            out.sort_by(f64::total_cmp);
            out.truncate(count);
            return Ok(out);
        }
        if steps >= 2000 {
            return Err(Error::NoConvergence(format!("{steps} Lanczos steps")));
        }
        steps = (steps * 2).min(n);
    }
}

/// Largest `count` Ritz values of a symmetric operator after `steps`
/// Lanczos steps, and whether their residual bounds are small.
fn lanczos(apply: &dyn Fn(&DVector<f64>) -> DVector<f64>, n: usize, steps: usize, count: usize) -> (Vec<f64>, bool) {
    let mut q = DVector::from_fn(n, |i, _| 1.0 + ((i * 7919) % 101) as f64 / 101.0);
    q /= q.norm();
    let mut basis: Vec<DVector<f64>> = vec![q];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    for j in 0..steps {
        let mut w = apply(&basis[j]);
        let a = basis[j].dot(&w);
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let bnorm = w.norm();
        if j + 1 == steps || bnorm < 1e-14 * a.abs().max(1.0) {
            beta.push(bnorm);
            break;
        }
        beta.push(bnorm);
        basis.push(w / bnorm);
    }
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    let (vals, vecs) = sym_eigen(&t);
    let last = *beta.last().unwrap_or(&0.0);
    let mut converged = true;
    let mut out = Vec::new();
    for i in (0..k).rev().take(count) {
        let resid = (last * vecs[(k - 1, i)]).abs();
        if resid > 1e-10 * vals[i].abs().max(1e-300) && k < n {
            converged = false;
        }
        out.push(vals[i]);
    }
    let full = out.len() == count.min(k);
    (out, converged && full)
}
