//! Weighted coboundary, boundary and Laplacian operators as sparse matrices
//! whose entries are polynomials in λ, plus numeric evaluation and the
//! embedded sparse-access Laplacian on vertex bitstrings.

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::DMatrix;
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::complex::{CliqueComplex, Simplex};
use crate::error::{Error, Result};

/// Exact rational scalar used for symbolic coefficients.
pub type Q = Ratio<i64>;

/// A polynomial in λ with rational coefficients, keyed by exponent.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(BTreeMap<u32, Q>);

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The monomial `q·λ^e`.
    pub fn monomial(q: Q, e: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(q, e);
        p
    }

    pub fn add_term(&mut self, q: Q, e: u32) {
        if q.is_zero() {
            return;
        }
        let c = self.0.entry(e).or_insert_with(Q::zero);
        *c += q;
        if c.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (&e, &q) in &other.0 {
            self.add_term(q, e);
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&e, &q) in &self.0 {
            for (&f, &r) in &other.0 {
                out.add_term(q * r, e + f);
            }
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(&e, &q)| (e, -q)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `(coefficient, exponent)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Q, u32)> + '_ {
        self.0.iter().map(|(&e, &q)| (q, e))
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.terms().map(|(q, e)| q.to_f64().expect("finite") * lambda.powi(e as i32)).sum()
    }

    pub fn eval_exact(&self, lambda: Q) -> Q {
        self.terms().fold(Q::zero(), |acc, (q, e)| acc + q * pow_q(lambda, e))
    }
}

fn pow_q(x: Q, e: u32) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

/// Sparse matrix of λ-polynomials, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Poly>>,
}

impl MonomialMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn add_term(&mut self, r: usize, c: usize, q: Q, e: u32) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        let row = &mut self.data[r];
        let p = row.entry(c).or_default();
        p.add_term(q, e);
        if p.is_zero() {
            row.remove(&c);
        }
    }

    fn add_poly(&mut self, r: usize, c: usize, p: &Poly) {
        let row = &mut self.data[r];
        let slot = row.entry(c).or_default();
        slot.add_assign(p);
        if slot.is_zero() {
            row.remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Poly {
        self.data[r].get(&c).cloned().unwrap_or_default()
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Poly> {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(&c, p)| (r, c, p)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, p) in self.entries() {
            t.data[c].insert(r, p.clone());
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let mut out = self.clone();
        for (r, c, p) in other.entries() {
            out.add_poly(r, c, p);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
            for (&k, a) in row {
                for (&c, b) in &other.data[k] {
                    acc.entry(c).or_default().add_assign(&a.mul(b));
                }
            }
            acc.retain(|_, p| !p.is_zero());
            out.data[r] = acc;
        }
        Ok(out)
    }

    /// Numeric value at `λ ∈ (0, 1]`.
    pub fn evaluate(&self, lambda: f64) -> Result<NumericMatrix> {
        check_lambda(lambda)?;
        let mut coo = CooMatrix::new(self.rows, self.cols);
        for (r, c, p) in self.entries() {
            let v = p.eval(lambda);
            if v != 0.0 {
                coo.push(r, c, v);
            }
        }
        Ok(NumericMatrix(CsrMatrix::from(&coo)))
    }

    /// Exact value at a rational `λ ∈ (0, 1]`, as sparse rows.
    pub fn evaluate_exact(&self, lambda: Q) -> Result<Vec<Vec<(usize, Q)>>> {
        if lambda <= Q::zero() || lambda > Q::one() {
            return Err(Error::LambdaOutOfRange(lambda.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().map(|(&c, p)| (c, p.eval_exact(lambda))).filter(|(_, q)| !q.is_zero()).collect())
            .collect())
    }

    /// Integer matrix at `λ = 1`; fails on non-integer coefficients.
    pub fn at_unit_integer(&self) -> Result<Vec<Vec<(usize, i64)>>> {
        let rows = self.evaluate_exact(Q::one())?;
        rows.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|(c, q)| {
                        if q.is_integer() {
                            Ok((c, q.to_integer()))
                        } else {
                            Err(Error::InvalidArgument("non-integer coefficient".into()))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// MatrixMarket-style coordinate dump, one line per monomial:
    /// `row col coeff_num coeff_den exponent` with 1-based indices.
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> Result<()> {
        let terms: Vec<(usize, usize, Q, u32)> =
            self.entries().flat_map(|(r, c, p)| p.terms().map(move |(q, e)| (r, c, q, e))).collect();
        writeln!(w, "%%MatrixMarket matrix coordinate lambda-monomial general")?;
        writeln!(w, "% row col coeff_num coeff_den exponent")?;
        writeln!(w, "{} {} {}", self.rows, self.cols, terms.len())?;
        for (r, c, q, e) in terms {
            writeln!(w, "{} {} {} {} {}", r + 1, c + 1, q.numer(), q.denom(), e)?;
        }
        Ok(())
    }
}

pub fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda))
    }
}

/// A real matrix in compressed sparse row form.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMatrix(pub CsrMatrix<f64>);

impl NumericMatrix {
    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows(), self.cols());
        for (r, c, v) in self.0.triplet_iter() {
            m[(r, c)] += *v;
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols(), "vector length");
        self.0.row_iter().map(|row| row.col_indices().iter().zip(row.values()).map(|(&c, v)| v * x[c]).sum()).collect()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.0.get_entry(r, c).map_or(0.0, |e| e.into_value())
    }

    /// Largest absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.0.row_iter().map(|row| row.values().iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }
}

/// Free-function form of [`MonomialMatrix::evaluate`].
pub fn evaluate(m: &MonomialMatrix, lambda: f64) -> Result<NumericMatrix> {
    m.evaluate(lambda)
}

/// Matrix of `d^k : C^k → C^{k+1}`; entry `(σ∪{v}, σ)` is `(−1)^p λ^{e_v}`
/// where `p` is the insertion position of `v`.
pub fn coboundary(k: &CliqueComplex, dim: isize) -> Result<MonomialMatrix> {
    if dim < -2 {
        return Err(Error::InvalidArgument(format!("no coboundary in dimension {dim}")));
    }
    k.ensure_built(dim + 1)?;
    let mut m = MonomialMatrix::zeros(k.count(dim + 1), k.count(dim));
    for (col, s) in k.simplices(dim).iter().enumerate() {
        for v in k.up_vertices(s) {
            let (t, p) = s.insert(v).expect("up vertex lies outside the simplex");
            let row = k.index_of(&t).ok_or_else(|| Error::Internal("coface not enumerated".into()))?;
            let sign = if p % 2 == 0 { 1 } else { -1 };
            m.add_term(row, col, Q::from_integer(sign), k.exponent(v));
        }
    }
    Ok(m)
}

/// Matrix of `∂^k : C^k → C^{k−1}`, the transpose of `d^{k−1}`.
pub fn boundary(k: &CliqueComplex, dim: isize) -> Result<MonomialMatrix> {
    Ok(coboundary(k, dim - 1)?.transpose())
}

/// The down and up parts of a Laplacian.
#[derive(Clone, Debug)]
pub struct LaplacianParts {
    /// `d^{k−1} ∂^k`
    pub down: MonomialMatrix,
    /// `∂^{k+1} d^k`
    pub up: MonomialMatrix,
}

impl LaplacianParts {
    pub fn total(&self) -> MonomialMatrix {
        self.down.add(&self.up).expect("same shape")
    }
}

pub fn laplacian_parts(k: &CliqueComplex, dim: isize) -> Result<LaplacianParts> {
    let lower = coboundary(k, dim - 1)?;
    let upper = coboundary(k, dim)?;
    Ok(LaplacianParts { down: lower.mul(&lower.transpose())?, up: upper.transpose().mul(&upper)? })
}

/// `Δ^k = d^{k−1}∂^k + ∂^{k+1}d^k`.
pub fn laplacian(k: &CliqueComplex, dim: isize) -> Result<MonomialMatrix> {
    Ok(laplacian_parts(k, dim)?.total())
}

/// Entry `⟨σ|Δ^k|τ⟩` from the local case analysis, without assembly.
///
/// The diagonal is `Σ_{u∈up(σ)} w(u)² + Σ_{v∈σ} w(v)²`. Off the diagonal,
/// lower-adjacent pairs that are not upper adjacent give
/// `±w(v_σ)w(v_τ)`, with `+` when dropping `v_σ` and `v_τ` induce the same
/// orientation on the common face; all other pairs give 0.
pub fn laplacian_entry(k: &CliqueComplex, dim: isize, s: &Simplex, t: &Simplex) -> Result<Poly> {
    for x in [s, t] {
        if x.dim() != dim || k.index_of(x).is_none() {
            return Err(Error::SimplexNotFound(k.simplex_labels(x).iter().map(|l| l.to_string()).collect()));
        }
    }
    Ok(entry_formula(k, s, t))
}

fn entry_formula(k: &CliqueComplex, s: &Simplex, t: &Simplex) -> Poly {
    let one = Q::one();
    if s == t {
        let mut p = Poly::zero();
        for u in k.up_vertices(s) {
            p.add_term(one, 2 * k.exponent(u));
        }
        for &v in s.iter() {
            p.add_term(one, 2 * k.exponent(v));
        }
        return p;
    }
    let only_s: Vec<usize> = (0..s.len()).filter(|&i| t.binary_search(&s[i]).is_err()).collect();
    let only_t: Vec<usize> = (0..t.len()).filter(|&i| s.binary_search(&t[i]).is_err()).collect();
    if only_s.len() != 1 || only_t.len() != 1 {
        return Poly::zero();
    }
    let (ps, pt) = (only_s[0], only_t[0]);
    let (vs, vt) = (s[ps], t[pt]);
    if k.adjacent(vs, vt) {
        return Poly::zero();
    }
    let sign = if (ps + pt) % 2 == 0 { 1 } else { -1 };
    Poly::monomial(Q::from_integer(sign), k.exponent(vs) + k.exponent(vt))
}

/// `⟨x|Δ̃^k|y⟩` for vertex-indicator bitstrings (in the complex's vertex
/// order): the Laplacian entry when both are `(k+1)`-cliques, the penalty
/// `a` on the diagonal of non-cliques, and 0 otherwise.
pub fn embedded_entry(k: &CliqueComplex, dim: isize, x: &[bool], y: &[bool], a: f64, lambda: f64) -> Result<f64> {
    let n = k.vertex_count();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "bitstrings of length {} and {} over {n} vertices",
            x.len(),
            y.len()
        )));
    }
    check_lambda(lambda)?;
    let support = |b: &[bool]| -> Vec<u32> { (0..n as u32).filter(|&i| b[i as usize]).collect() };
    let (sx, sy) = (support(x), support(y));
    let is_simplex = |s: &[u32]| s.len() as isize == dim + 1 && k.is_clique(s);
    match (is_simplex(&sx), is_simplex(&sy)) {
        (true, true) => Ok(entry_formula(k, &Simplex::new(sx), &Simplex::new(sy)).eval(lambda)),
        (false, _) | (_, false) if x == y => Ok(a),
        _ => Ok(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::clique_complex;
    use crate::graph::{bowtie, complete_graph, octahedron};

    #[test]
    fn augmentation_column() {
        let k = clique_complex(&complete_graph(2), 1).unwrap();
        let d = coboundary(&k, -1).unwrap();
        assert_eq!((d.rows(), d.cols()), (2, 1));
        assert_eq!(d.get(0, 0), Poly::monomial(Q::one(), 0));
        assert_eq!(d.get(1, 0), Poly::monomial(Q::one(), 0));
    }

    #[test]
    fn bowtie_top_coboundary_is_empty() {
        let k = clique_complex(&bowtie(), 2).unwrap();
        let d = coboundary(&k, 1).unwrap();
        assert_eq!((d.rows(), d.cols()), (0, 8));
    }

    #[test]
    fn chain_complex_law() {
        let k = clique_complex(&octahedron(3).unwrap(), 3).unwrap();
        for dim in -1..=1 {
            let a = coboundary(&k, dim).unwrap();
            let b = coboundary(&k, dim + 1).unwrap();
            assert!(b.mul(&a).unwrap().is_zero());
        }
    }

    #[test]
    fn triangle_laplacian_is_three() {
        let k = clique_complex(&complete_graph(3), 2).unwrap();
        let l = laplacian(&k, 1).unwrap().evaluate(1.0).unwrap().to_dense();
        assert_eq!(l, DMatrix::identity(3, 3) * 3.0);
    }

    #[test]
    fn weighted_evaluation() {
        let mut m = MonomialMatrix::zeros(1, 1);
        m.add_term(0, 0, Q::new(3, 1), 2);
        assert!((m.evaluate(0.5).unwrap().get(0, 0) - 0.75).abs() < 1e-15);
        assert_eq!(m.evaluate(1.0).unwrap().get(0, 0), 3.0);
        assert!(m.evaluate(0.0).is_err());
        assert!(m.evaluate(1.5).is_err());
    }

    #[test]
    fn entry_cases() {
        let k = clique_complex(&complete_graph(3), 2).unwrap();
        let ab = k.simplex(&["v0", "v1"]).unwrap();
        let bc = k.simplex(&["v1", "v2"]).unwrap();
        assert!(laplacian_entry(&k, 1, &ab, &bc).unwrap().is_zero());
        let path =
            crate::graph::WeightedGraph::from_parts(&["a", "b", "c", "d"], 0, &[("a", "b"), ("b", "c"), ("c", "d")])
                .unwrap();
        let p = clique_complex(&path, 2).unwrap();
        let e1 = p.simplex(&["a", "b"]).unwrap();
        let e3 = p.simplex(&["c", "d"]).unwrap();
        assert!(laplacian_entry(&p, 1, &e1, &e3).unwrap().is_zero());
    }

    #[test]
    fn matrix_market_dump() {
        let k = clique_complex(&complete_graph(2), 1).unwrap();
        let mut buf = Vec::new();
        coboundary(&k, 0).unwrap().write_matrix_market(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let body: Vec<&str> = text.lines().skip(2).collect();
        assert_eq!(body, vec!["1 2 2", "1 1 -1 1 0", "1 2 1 1 0"]);
    }
}
