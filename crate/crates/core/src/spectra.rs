//! Numeric Laplacian spectra, λ-sweeps with decay-exponent fits, and the
//! up/down pairing check.

use std::io::Write;

use rayon::prelude::*;

use crate::complex::CliqueComplex;
use crate::error::{Error, Result};
use crate::homology::betti;
use crate::linalg::eigen::{dense_spectrum, smallest_eigenvalues, DENSE_CAP};
use crate::operators::{laplacian, laplacian_parts};

/// Default λ grid for sweeps.
pub const DEFAULT_GRID: [f64; 5] = [0.3, 0.25, 0.2, 0.15, 0.1];

/// Eigenvalues below this are treated as exact zeros in a sweep.
pub const KERNEL_FLOOR: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub k: isize,
    pub lambda: f64,
    /// Ascending; the full spectrum in dense mode, the low end otherwise.
    pub eigenvalues: Vec<f64>,
    pub lambda_min: f64,
    pub zero_multiplicity: usize,
}

fn zero_cut(norm: f64) -> f64 {
    1e-11 * norm.max(1.0)
}

/// Full spectrum of `Δ^k(λ)` (dense cap applies).
pub fn spectrum(k: &CliqueComplex, dim: isize, lambda: f64) -> Result<SpectrumReport> {
    let lap = laplacian(k, dim)?.evaluate(lambda)?;
    let eigenvalues = dense_spectrum(&lap)?;
    Ok(report(dim, lambda, eigenvalues, lap.inf_norm()))
}

/// The `count` smallest eigenvalues of `Δ^k(λ)`, iterative above the dense cap.
pub fn spectrum_low(k: &CliqueComplex, dim: isize, lambda: f64, count: usize) -> Result<SpectrumReport> {
    let lap = laplacian(k, dim)?.evaluate(lambda)?;
    let eigenvalues = smallest_eigenvalues(&lap, count)?;
    Ok(report(dim, lambda, eigenvalues, lap.inf_norm()))
}

fn report(k: isize, lambda: f64, eigenvalues: Vec<f64>, norm: f64) -> SpectrumReport {
    let cut = zero_cut(norm);
    let zero_multiplicity = eigenvalues.iter().filter(|v| v.abs() < cut).count();
    let lambda_min = eigenvalues.first().copied().unwrap_or(f64::INFINITY);
    SpectrumReport { k, lambda, eigenvalues, lambda_min, zero_multiplicity }
}

/// Smallest eigenvalue of `Δ^k(λ)`; exactly 0 whenever `β_k ≥ 1`.
pub fn lambda_min(k: &CliqueComplex, dim: isize, lambda: f64) -> Result<f64> {
    if betti(k, dim)? > 0 {
        return Ok(0.0);
    }
    if k.count(dim) == 0 {
        return Ok(f64::INFINITY);
    }
    let s = spectrum_low(k, dim, lambda, 1)?;
    Ok(s.lambda_min.max(0.0))
}

/// Decay class of an eigenvalue branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DecayClass {
    /// Branch is `λ^e` with even `e`.
    Exponent(u32),
    /// Branch is numerically zero on the whole grid.
    Kernel,
}

impl DecayClass {
    /// Whether the branch decays at least like `λ^e` (kernel counts as infinite).
    pub fn at_least(self, e: u32) -> bool {
        match self {
            DecayClass::Kernel => true,
            DecayClass::Exponent(x) => x >= e,
        }
    }
}

impl std::fmt::Display for DecayClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecayClass::Kernel => write!(f, "kernel"),
            DecayClass::Exponent(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub values: Vec<f64>,
    /// Least-squares slope of `log eigenvalue` against `log λ`; `None` for kernel branches.
    pub slope: Option<f64>,
    /// Whether the largest-λ point was dropped from the fit.
    pub dropped_first: bool,
}

impl Branch {
    pub fn is_kernel(&self) -> bool {
        self.slope.is_none()
    }
}

/// Eigenvalue branches across a λ grid, matched by sorted index.
#[derive(Clone, Debug)]
pub struct BranchTable {
    pub k: isize,
    pub grid: Vec<f64>,
    pub branches: Vec<Branch>,
}

impl BranchTable {
    pub fn kernel_count(&self) -> usize {
        self.branches.iter().filter(|b| b.is_kernel()).count()
    }

    /// Nearest even exponent of each branch; fails if any slope is farther
    /// than `tol` from an even integer.
    pub fn classify(&self, tol: f64) -> Result<Vec<DecayClass>> {
        self.branches
            .iter()
            .enumerate()
            .map(|(i, b)| match b.slope {
                None => Ok(DecayClass::Kernel),
                Some(s) => {
                    let e = (s / 2.0).round() * 2.0;
                    if (s - e).abs() <= tol && e >= 0.0 {
                        Ok(DecayClass::Exponent(e as u32))
                    } else {
                        Err(Error::NonEvenSlope { branch: i, slope: s })
                    }
                }
            })
            .collect()
    }

    /// Number of branches with each slope within `tol` of `target`.
    pub fn count_near(&self, target: f64, tol: f64) -> usize {
        self.branches.iter().filter(|b| b.slope.is_some_and(|s| (s - target).abs() <= tol)).count()
    }

    /// One row per branch: id, eigenvalue at each λ, slope, class.
    pub fn write_csv<W: Write>(&self, w: W, tol: f64) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["branch_id".to_string()];
        header.extend(self.grid.iter().map(|l| format!("lambda_{l}")));
        header.extend(["slope".to_string(), "class".to_string()]);
        out.write_record(&header)?;
        for (i, b) in self.branches.iter().enumerate() {
            let class = match self.classify_one(i, tol) {
                Ok(c) => c.to_string(),
                Err(_) => "non-even".to_string(),
            };
            let mut rec = vec![i.to_string()];
            rec.extend(b.values.iter().map(|v| format!("{v:.10e}")));
            rec.push(b.slope.map_or("inf".to_string(), |s| format!("{s:.6}")));
            rec.push(class);
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    fn classify_one(&self, i: usize, tol: f64) -> Result<DecayClass> {
        let t = BranchTable { k: self.k, grid: self.grid.clone(), branches: vec![self.branches[i].clone()] };
        t.classify(tol).map(|v| v[0])
    }
}

fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Fits `log v = s·log λ + c`; drops the largest-λ point when its residual
/// exceeds the sum of the others and there are at least four points left.
fn fit_slope(grid: &[f64], values: &[f64]) -> (f64, bool) {
    let x: Vec<f64> = grid.iter().map(|l| l.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    let (s, c) = least_squares(&x, &y);
    let resid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| (b - (s * a + c)).abs()).collect();
    let top = (0..grid.len()).max_by(|&a, &b| grid[a].total_cmp(&grid[b])).expect("nonempty grid");
    let others: f64 = (0..grid.len()).filter(|&i| i != top).map(|i| resid[i]).sum();
    if grid.len() > 4 && resid[top] > others && resid[top] > 1e-6 {
        let keep: Vec<usize> = (0..grid.len()).filter(|&i| i != top).collect();
        let xs: Vec<f64> = keep.iter().map(|&i| x[i]).collect();
        let ys: Vec<f64> = keep.iter().map(|&i| y[i]).collect();
        (least_squares(&xs, &ys).0, true)
    } else {
        (s, false)
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 4 {
        return Err(Error::InvalidArgument("a sweep needs at least 4 grid points".into()));
    }
    if grid.iter().any(|&l| !(l > 0.0 && l <= 0.5)) {
        return Err(Error::InvalidArgument("sweep grid points must lie in (0, 0.5]".into()));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    if g.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("sweep grid points must be distinct".into()));
    }
    Ok(())
}

fn crosses(near: &[bool]) -> bool {
    (1..near.len().saturating_sub(1))
        .any(|j| near[j] && near[..j].iter().any(|&x| !x) && near[j + 1..].iter().any(|&x| !x))
}

/// Spectra of `Δ^k` over the grid, branch slopes by log-log least squares.
/// Adjacent branches that touch at an interior grid point and separate on
/// both sides of it are reported as a possible crossing. Branches that
/// merge toward either end of the grid keep their order and are accepted.
pub fn sweep(k: &CliqueComplex, dim: isize, grid: &[f64]) -> Result<BranchTable> {
    validate_grid(grid)?;
    let lap = laplacian(k, dim)?;
    if lap.rows() > DENSE_CAP {
        return Err(Error::InvalidArgument(format!("sweep needs dim C^{dim} <= {DENSE_CAP}")));
    }
    let spectra: Vec<Vec<f64>> = grid.par_iter().map(|&l| dense_spectrum(&lap.evaluate(l)?)).collect::<Result<_>>()?;
    let n = lap.rows();
    let values: Vec<Vec<f64>> = (0..n).map(|i| spectra.iter().map(|s| s[i]).collect()).collect();
    let kernel: Vec<bool> = values.iter().map(|v| v.iter().all(|x| x.abs() < KERNEL_FLOOR)).collect();
    for i in 0..n.saturating_sub(1) {
        if kernel[i] || kernel[i + 1] {
            continue;
        }
        let near: Vec<bool> = (0..grid.len())
            .map(|j| {
                let (a, b) = (values[i][j], values[i + 1][j]);
                (b - a).abs() <= 1e-7 * b.abs().max(a.abs())
            })
            .collect();
        if crosses(&near) {
            return Err(Error::BranchAmbiguity(format!("branches {i} and {} nearly cross", i + 1)));
        }
    }
    let branches = values
        .into_iter()
        .zip(kernel)
        .map(|(v, is_kernel)| {
            if is_kernel {
                Branch { values: v, slope: None, dropped_first: false }
            } else {
                let (s, dropped) = fit_slope(grid, &v);
                Branch { values: v, slope: Some(s), dropped_first: dropped }
            }
        })
        .collect();
    Ok(BranchTable { k: dim, grid: grid.to_vec(), branches })
}

/// Pairing of positive spectra between `Δ↑` at level `k` and `Δ↓` at `k+1`.
#[derive(Clone, Debug)]
pub struct PairingLevel {
    pub k: isize,
    pub up_positive: usize,
    pub down_positive: usize,
    pub max_rel_mismatch: f64,
}

impl PairingLevel {
    pub fn paired(&self, rel_tol: f64) -> bool {
        self.up_positive == self.down_positive && self.max_rel_mismatch <= rel_tol
    }
}

#[derive(Clone, Debug)]
pub struct PairingReport {
    pub lambda: f64,
    pub levels: Vec<PairingLevel>,
}

impl PairingReport {
    pub fn max_mismatch(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| if l.up_positive == l.down_positive { l.max_rel_mismatch } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }

    pub fn all_paired(&self, rel_tol: f64) -> bool {
        self.levels.iter().all(|l| l.paired(rel_tol))
    }
}

fn positive(values: Vec<f64>, norm: f64) -> Vec<f64> {
    let cut = 1e-10 * norm.max(1.0);
    values.into_iter().filter(|&v| v > cut).collect()
}

/// Compares the positive spectra of `Δ↑^k` and `Δ↓^{k+1}` at every level,
/// starting from the empty simplex.
pub fn pairing_check(k: &CliqueComplex, lambda: f64) -> Result<PairingReport> {
    if !k.is_complete() {
        return Err(Error::Truncated(k.max_dim()));
    }
    let top = k.top_dim();
    let mut levels = Vec::new();
    for dim in -1..top {
        let up = laplacian_parts(k, dim)?.up.evaluate(lambda)?;
        let down = laplacian_parts(k, dim + 1)?.down.evaluate(lambda)?;
        let a = positive(dense_spectrum(&up)?, up.inf_norm());
        let b = positive(dense_spectrum(&down)?, down.inf_norm());
        let max_rel_mismatch = a.iter().zip(&b).map(|(x, y)| (x - y).abs() / x.abs().max(y.abs())).fold(0.0, f64::max);
        levels.push(PairingLevel { k: dim, up_positive: a.len(), down_positive: b.len(), max_rel_mismatch });
    }
    Ok(PairingReport { lambda, levels })
}
