//! Exact reduced Betti numbers, Euler characteristics, boundary tests and
//! numeric harmonic representatives.

use nalgebra::DVector;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::complex::{Chain, CliqueComplex};
use crate::error::{Error, Result};
use crate::linalg::eigen::sym_eigen;
use crate::linalg::exact::{self, IntVec};
use crate::operators::laplacian;

/// Rows of `d^k` at `λ = 1`, one per `(k+1)`-simplex.
pub fn coboundary_rows(k: &CliqueComplex, dim: isize) -> Result<Vec<IntVec>> {
    k.ensure_built(dim + 1)?;
    let mut rows = Vec::with_capacity(k.count(dim + 1));
    for t in k.simplices(dim + 1) {
        let mut row: Vec<(usize, i64)> = (0..t.len())
            .map(|p| {
                let f = t.facet(p);
                let col = k.index_of(&f).expect("faces are enumerated");
                (col, if p % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        row.sort_unstable_by_key(|e| e.0);
        rows.push(exact::int_vec(row));
    }
    Ok(rows)
}

/// Rank of `d^k` over the rationals.
pub fn coboundary_rank(k: &CliqueComplex, dim: isize) -> Result<usize> {
    if dim < -1 || k.count(dim) == 0 {
        return Ok(0);
    }
    exact::rank(&coboundary_rows(k, dim)?)
}

/// Reduced Betti numbers with the chain dimensions and coboundary ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    /// First dimension listed (always −1).
    pub start: isize,
    pub betti: Vec<usize>,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
}

impl BettiTable {
    pub fn get(&self, k: isize) -> usize {
        usize::try_from(k - self.start).ok().and_then(|i| self.betti.get(i)).copied().unwrap_or(0)
    }

    /// Unreduced numbers: `β_0` gains one for a nonempty complex, `β_{−1}` is dropped.
    pub fn unreduced(&self) -> Vec<usize> {
        let mut b = self.betti[1..].to_vec();
        if self.dims.get(1).copied().unwrap_or(0) > 0 {
            b[0] += 1;
        }
        b
    }

    /// `(k, β_k)` for every nonzero entry.
    pub fn nonzero(&self) -> Vec<(isize, usize)> {
        (0..self.betti.len())
            .filter(|&i| self.betti[i] != 0)
            .map(|i| (i as isize + self.start, self.betti[i]))
            .collect()
    }
}

/// Reduced `β_k = dim C^k − rank d^k − rank d^{k−1}`.
pub fn betti(k: &CliqueComplex, dim: isize) -> Result<usize> {
    k.ensure_built(dim + 1)?;
    let n = k.count(dim);
    let r = coboundary_rank(k, dim)? + coboundary_rank(k, dim - 1)?;
    n.checked_sub(r).ok_or_else(|| Error::Internal("negative Betti number".into()))
}

/// All reduced Betti numbers of a complex built through its top dimension.
pub fn betti_table(k: &CliqueComplex) -> Result<BettiTable> {
    if !k.is_complete() {
        return Err(Error::Truncated(k.max_dim()));
    }
    let top = k.top_dim().max(0);
    let ranks: Vec<usize> = (-1..=top).map(|d| coboundary_rank(k, d)).collect::<Result<_>>()?;
    let dims: Vec<usize> = (-1..=top).map(|d| k.count(d)).collect();
    let betti = (0..dims.len()).map(|i| dims[i] - ranks[i] - if i > 0 { ranks[i - 1] } else { 0 }).collect();
    Ok(BettiTable { start: -1, betti, dims, ranks })
}

/// Euler characteristic in its unreduced and reduced forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Euler {
    pub unreduced: i64,
    pub reduced: i64,
}

pub fn euler_characteristic(k: &CliqueComplex) -> Result<Euler> {
    if !k.is_complete() {
        return Err(Error::Truncated(k.max_dim()));
    }
    let unreduced: i64 = (0..=k.max_dim()).map(|d| (1 - 2 * (d.rem_euclid(2) as i64)) * k.count(d) as i64).sum();
    Ok(Euler { unreduced, reduced: unreduced - 1 })
}

/// Orthonormal basis of the numeric near-kernel of `Δ^k(λ)`.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    pub k: isize,
    pub lambda: f64,
    pub tol: f64,
    pub vectors: Vec<DVector<f64>>,
}

impl HarmonicBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Eigenvectors of `Δ^k(λ)` with eigenvalue below `tol` (default
/// `1e-8·‖Δ‖_∞`). Fails if any eigenvalue sits within a factor 10 of the
/// tolerance or if the count differs from `β_k`.
pub fn harmonic_basis(k: &CliqueComplex, dim: isize, lambda: f64, tol: Option<f64>) -> Result<HarmonicBasis> {
    let lap = laplacian(k, dim)?.evaluate(lambda)?;
    let tol = tol.unwrap_or(1e-8 * lap.inf_norm().max(1.0));
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("kernel tolerance must be positive".into()));
    }
    let (vals, vecs) = sym_eigen(&lap.to_dense());
    if vals.iter().any(|&v| v > tol / 10.0 && v < tol * 10.0) {
        return Err(Error::GapAmbiguity { tol });
    }
    let vectors: Vec<DVector<f64>> =
        (0..vals.len()).filter(|&i| vals[i] < tol).map(|i| vecs.column(i).into_owned()).collect();
    let expected = betti(k, dim)?;
    if vectors.len() != expected {
        return Err(Error::HarmonicCount { found: vectors.len(), expected });
    }
    Ok(HarmonicBasis { k: dim, lambda, tol, vectors })
}

/// Outcome of a boundary test: a rational preimage when the cycle bounds.
#[derive(Clone, Debug)]
pub struct BoundaryCheck {
    pub is_boundary: bool,
    pub witness: Option<Vec<BigRational>>,
}

/// Whether the integer `k`-cycle `c` lies in the image of `∂^{k+1}`.
pub fn cycle_is_boundary(k: &CliqueComplex, c: &Chain<i64>) -> Result<BoundaryCheck> {
    let dim = c.dim;
    if c.coeffs.len() != k.count(dim) {
        return Err(Error::DimensionMismatch("chain length differs from chain space".into()));
    }
    let v = exact::from_dense(&c.coeffs);
    if dim >= 0 {
        let lower = coboundary_rows(k, dim - 1)?;
        let del = exact::transpose(&lower, k.count(dim - 1));
        if !exact::mul_vec(&del, &v).is_empty() {
            return Err(Error::NotACycle);
        }
    }
    let upper = coboundary_rows(k, dim)?;
    let del = exact::transpose(&upper, k.count(dim));
    let rhs: Vec<BigInt> = c.coeffs.iter().map(|&x| BigInt::from(x)).collect();
    let witness = exact::solve(&del, k.count(dim + 1), &rhs)?;
    Ok(BoundaryCheck { is_boundary: witness.is_some(), witness })
}
