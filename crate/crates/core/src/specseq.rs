//! Spectral sequence of the vertex-weight filtration, computed exactly,
//! and its comparison with numeric eigenvalue decay.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::complex::CliqueComplex;
use crate::error::{Error, Result};
use crate::homology::{betti, coboundary_rows};
use crate::linalg::exact::{self, IntVec};
use crate::spectra::{sweep, BranchTable};

/// Dimension of one page cell with its optional representatives.
type Cell = (usize, Option<Vec<IntVec>>);

/// Coordinate filtration `U_l^k` = span of `k`-simplices with exponent `≥ l`.
pub struct Filtration<'a> {
    complex: &'a CliqueComplex,
    /// Exponents of the `k`-simplices, indexed by `k + 1`.
    exponents: Vec<Vec<u32>>,
    /// Rows of `d^k` at `λ = 1`, indexed by `k + 1`.
    rows: Vec<Vec<IntVec>>,
}

pub fn filtration(k: &CliqueComplex) -> Result<Filtration<'_>> {
    if !k.is_complete() {
        return Err(Error::Truncated(k.max_dim()));
    }
    let top = k.top_dim();
    let exponents: Vec<Vec<u32>> =
        (-1..=top).map(|d| k.simplices(d).iter().map(|s| k.simplex_exponent(s)).collect()).collect();
    let rows: Vec<Vec<IntVec>> = (-1..=top).map(|d| coboundary_rows(k, d)).collect::<Result<_>>()?;
    let f = Filtration { complex: k, exponents, rows };
    f.check()?;
    Ok(f)
}

impl<'a> Filtration<'a> {
    pub fn complex(&self) -> &'a CliqueComplex {
        self.complex
    }

    pub fn top_dim(&self) -> isize {
        self.exponents.len() as isize - 2
    }

    fn slot(&self, k: isize) -> Option<usize> {
        usize::try_from(k + 1).ok().filter(|&i| i < self.exponents.len())
    }

    fn exps(&self, k: isize) -> &[u32] {
        self.slot(k).map_or(&[], |i| &self.exponents[i])
    }

    fn rows(&self, k: isize) -> &[IntVec] {
        self.slot(k).map_or(&[], |i| &self.rows[i])
    }

    /// Largest exponent of a `k`-simplex.
    pub fn max_level(&self, k: isize) -> Option<u32> {
        self.exps(k).iter().copied().max()
    }

    /// Largest exponent of any simplex.
    pub fn max_exponent(&self) -> u32 {
        self.exponents.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Indices of the `k`-simplices spanning `U_l^k`.
    pub fn level(&self, k: isize, l: i64) -> Vec<usize> {
        self.exps(k).iter().enumerate().filter(|(_, &e)| e as i64 >= l).map(|(i, _)| i).collect()
    }

    fn check(&self) -> Result<()> {
        for k in -1..self.top_dim() {
            let (lo, hi) = (self.exps(k), self.exps(k + 1));
            for (r, row) in self.rows(k).iter().enumerate() {
                if let Some((c, _)) = row.iter().find(|(c, _)| lo[*c] > hi[r]) {
                    return Err(Error::Filtration(format!(
                        "coboundary of a level-{} {k}-simplex (index {c}) leaves its level",
                        lo[*c]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Basis of `Z_{j,l}^k = U_l^k ∩ (d^k)^{-1}(U_{l+j}^{k+1})`.
    pub fn z_space(&self, k: isize, j: i64, l: i64) -> Result<Vec<IntVec>> {
        let cols = self.level(k, l);
        if cols.is_empty() {
            return Ok(Vec::new());
        }
        let mut local = vec![usize::MAX; self.exps(k).len()];
        for (i, &c) in cols.iter().enumerate() {
            local[c] = i;
        }
        let hi = self.exps(k + 1);
        let sub: Vec<IntVec> = self
            .rows(k)
            .iter()
            .enumerate()
            .filter(|(r, _)| (hi[*r] as i64) < l + j)
            .map(|(_, row)| {
                row.iter().filter(|(c, _)| local[*c] != usize::MAX).map(|(c, v)| (local[*c], v.clone())).collect()
            })
            .filter(|row: &IntVec| !row.is_empty())
            .collect();
        let ker = exact::kernel(&sub, cols.len())?;
        Ok(ker.into_iter().map(|v| v.into_iter().map(|(i, x)| (cols[i], x)).collect()).collect())
    }

    /// Spanning set of `B_{j,l}^k = U_l^k ∩ d^{k-1}(U_{l-j}^{k-1})`.
    pub fn b_space(&self, k: isize, j: i64, l: i64) -> Result<Vec<IntVec>> {
        if k <= -1 {
            return Ok(Vec::new());
        }
        let pre = self.z_space(k - 1, j, l - j)?;
        let rows = self.rows(k - 1);
        Ok(pre.iter().map(|x| exact::mul_vec(rows, x)).filter(|v| !v.is_empty()).collect())
    }

    fn cell(&self, k: isize, j: i64, l: i64, with_basis: bool) -> Result<(usize, Option<Vec<IntVec>>)> {
        let z = self.z_space(k, j, l)?;
        if z.is_empty() {
            return Ok((0, with_basis.then(Vec::new)));
        }
        let mut quot = self.b_space(k, j - 1, l)?;
        quot.extend(self.z_space(k, j - 1, l + 1)?);
        let rq = exact::rank(&quot)?;
        let mut all = z.clone();
        all.extend(quot.iter().cloned());
        if exact::rank(&all)? != z.len() {
            return Err(Error::Internal(format!("quotient not contained in Z at (j={j}, k={k}, l={l})")));
        }
        let dim = z.len() - rq;
        let basis = if with_basis {
            let mut reps = Vec::new();
            let mut span = quot;
            let mut r = rq;
            for v in z {
                if reps.len() == dim {
                    break;
                }
                span.push(v.clone());
                let r2 = exact::rank(&span)?;
                if r2 > r {
                    reps.push(v);
                    r = r2;
                } else {
                    span.pop();
                }
            }
            Some(reps)
        } else {
            None
        };
        Ok((dim, basis))
    }

    fn cells(&self) -> Vec<(isize, u32)> {
        (-1..=self.top_dim())
            .flat_map(|k| (0..=self.max_level(k).unwrap_or(0)).map(move |l| (k, l)))
            .filter(|&(k, _)| !self.exps(k).is_empty())
            .collect()
    }

    /// Dimensions `dim e_{j,l}^k` for every `(k, l)`.
    pub fn page(&self, j: usize) -> Result<Page> {
        self.page_impl(j, false)
    }

    /// Page dimensions together with integer representatives of each cell.
    pub fn page_with_bases(&self, j: usize) -> Result<Page> {
        self.page_impl(j, true)
    }

    fn page_impl(&self, j: usize, with_basis: bool) -> Result<Page> {
        let results: Vec<((isize, u32), Cell)> = self
            .cells()
            .into_par_iter()
            .map(|(k, l)| Ok(((k, l), self.cell(k, j as i64, l as i64, with_basis)?)))
            .collect::<Result<_>>()?;
        let mut dims = BTreeMap::new();
        let mut bases = with_basis.then(BTreeMap::new);
        for (key, (d, b)) in results {
            dims.insert(key, d);
            if let (Some(map), Some(b)) = (bases.as_mut(), b) {
                map.insert(key, b);
            }
        }
        Ok(Page { j, dims, bases })
    }

    /// `dim e_j^k = Σ_l dim e_{j,l}^k` for `j = 0, 1, …` until two consecutive
    /// pages agree on `β_k`.
    pub fn stabilized_dims(&self, k: isize) -> Result<Stabilization> {
        let beta = betti(self.complex, k)?;
        let j_max = self.max_exponent() as usize + 2;
        let levels = self.max_level(k).map_or(0, |t| t as i64 + 1);
        let dims: Vec<usize> = (0..=j_max as i64 + 1)
            .map(|j| (0..levels).map(|l| self.cell(k, j, l, false).map(|c| c.0)).sum::<Result<usize>>())
            .collect::<Result<_>>()?;
        let page = (1..dims.len()).rev().take_while(|&j| dims[j] == beta).last();
        match page {
            Some(page) if page < dims.len() - 1 => Ok(Stabilization { k, dims, beta, page }),
            _ => Err(Error::NoStabilization(j_max + 1)),
        }
    }
}

/// One page of the spectral sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub j: usize,
    /// `(k, l) -> dim e_{j,l}^k`.
    pub dims: BTreeMap<(isize, u32), usize>,
    pub bases: Option<BTreeMap<(isize, u32), Vec<IntVec>>>,
}

impl Page {
    pub fn get(&self, k: isize, l: u32) -> usize {
        self.dims.get(&(k, l)).copied().unwrap_or(0)
    }

    pub fn total(&self, k: isize) -> usize {
        self.dims.iter().filter(|((kk, _), _)| *kk == k).map(|(_, d)| d).sum()
    }

    pub fn nonzero(&self) -> Vec<((isize, u32), usize)> {
        self.dims.iter().filter(|(_, &d)| d > 0).map(|(&key, &d)| (key, d)).collect()
    }

    pub fn same_dims(&self, other: &Page) -> bool {
        self.nonzero() == other.nonzero()
    }

    pub fn write_csv<W: Write>(&self, w: W, header: bool) -> Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        if header {
            out.write_record(["j", "k", "l", "dim"])?;
        }
        for (&(k, l), d) in &self.dims {
            out.write_record([self.j.to_string(), k.to_string(), l.to_string(), d.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

impl fmt::Display for Page {
    /// Rows by `k` (top first), columns by `l`; blank cells are absent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<isize> = self.dims.keys().map(|k| k.0).collect();
        let (kmin, kmax) = (ks.iter().copied().min().unwrap_or(-1), ks.iter().copied().max().unwrap_or(-1));
        let lmax = self.dims.keys().map(|k| k.1).max().unwrap_or(0);
        writeln!(f, "page {}", self.j)?;
        for k in (kmin..=kmax).rev() {
            write!(f, "{k:>4} |")?;
            for l in 0..=lmax {
                match self.dims.get(&(k, l)) {
                    Some(d) => write!(f, "{d:>5}")?,
                    None => write!(f, "{:>5}", ".")?,
                }
            }
            writeln!(f)?;
        }
        write!(f, "     +")?;
        for _ in 0..=lmax {
            write!(f, "-----")?;
        }
        writeln!(f)?;
        write!(f, "  l   ")?;
        for l in 0..=lmax {
            write!(f, "{l:>5}")?;
        }
        writeln!(f)
    }
}

/// Page totals `dim e_j^k` and the first page from which they equal `β_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub k: isize,
    /// `dims[j] = dim e_j^k` starting at `j = 0`.
    pub dims: Vec<usize>,
    pub beta: usize,
    pub page: usize,
}

/// Algebraic page totals against numeric branch counts.
#[derive(Clone, Debug)]
pub struct FormanReport {
    pub k: isize,
    /// `(j, dim e_j^k, #branches with decay exponent ≥ 2j)`.
    pub rows: Vec<(usize, usize, usize)>,
    pub table: BranchTable,
}

impl FormanReport {
    pub fn agrees(&self) -> bool {
        self.rows.iter().all(|r| r.1 == r.2)
    }
}

impl fmt::Display for FormanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}", self.k)?;
        writeln!(f, "{:>4} {:>10} {:>10}", "j", "algebraic", "numeric")?;
        for (j, a, n) in &self.rows {
            let mark = if a == n { "" } else { "  mismatch" };
            writeln!(f, "{j:>4} {a:>10} {n:>10}{mark}")?;
        }
        Ok(())
    }
}

/// Slope tolerance used when classifying branches for the comparison.
pub const FORMAN_SLOPE_TOL: f64 = 0.5;

/// Compares `dim e_j^k` with the number of eigenvalue branches of `Δ^k(λ)`
/// decaying at least like `λ^{2j}`, for `j = 1 ..` stabilization.
pub fn forman_compare(k: &CliqueComplex, dim: isize, grid: &[f64]) -> Result<FormanReport> {
    let f = filtration(k)?;
    let stab = f.stabilized_dims(dim)?;
    let table = sweep(k, dim, grid)?;
    let classes = table.classify(FORMAN_SLOPE_TOL)?;
    let rows = (1..stab.dims.len())
        .map(|j| {
            let n = classes.iter().filter(|c| c.at_least(2 * j as u32)).count();
            (j, stab.dims[j], n)
        })
        .collect();
    Ok(FormanReport { k: dim, rows, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, octahedron, WeightedGraph};

    fn cone_on_square() -> WeightedGraph {
        let mut g = cycle_graph(4, "q").unwrap();
        g.add_vertex("c", 1).unwrap();
        for v in ["q0", "q1", "q2", "q3"] {
            g.add_edge("c", v).unwrap();
        }
        g
    }

    #[test]
    fn trivial_filtration() {
        let k = CliqueComplex::full(&octahedron(2).unwrap()).unwrap();
        let f = filtration(&k).unwrap();
        assert!(f.level(1, 1).is_empty());
        let s = f.stabilized_dims(1).unwrap();
        assert_eq!((s.beta, s.page), (1, 1));
    }

    #[test]
    fn page_zero_counts_levels() {
        let k = CliqueComplex::full(&cone_on_square()).unwrap();
        let f = filtration(&k).unwrap();
        let p = f.page(0).unwrap();
        for d in -1..=2 {
            for l in 0..=2u32 {
                let n = k.simplices(d).iter().filter(|s| k.simplex_exponent(s) == l).count();
                assert_eq!(p.get(d, l), n);
            }
        }
    }

    #[test]
    fn cone_kills_loop_on_page_two() {
        let k = CliqueComplex::full(&cone_on_square()).unwrap();
        let f = filtration(&k).unwrap();
        let s = f.stabilized_dims(1).unwrap();
        assert_eq!(s.dims[1], 1);
        assert_eq!(s.beta, 0);
        assert_eq!(s.page, 2);
    }

    #[test]
    fn bases_match_dims() {
        let k = CliqueComplex::full(&cone_on_square()).unwrap();
        let p = filtration(&k).unwrap().page_with_bases(1).unwrap();
        for (key, b) in p.bases.as_ref().unwrap() {
            assert_eq!(b.len(), p.dims[key]);
        }
        let mut buf = Vec::new();
        p.write_csv(&mut buf, true).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("j,k,l,dim\n"));
    }

    #[test]
    fn forman_on_uniform_triangle() {
        let k = CliqueComplex::full(&complete_graph(3)).unwrap();
        let r = forman_compare(&k, 1, &crate::spectra::DEFAULT_GRID).unwrap();
        assert!(r.agrees(), "{r}");
    }
}
