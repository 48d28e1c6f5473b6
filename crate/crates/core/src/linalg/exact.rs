//! Exact rank, kernel and linear solves for sparse integer matrices.
//!
//! Elimination is fraction-free: a row is cleared at a column by
//! `b·r − a·p` with `a`, `b` divided by their gcd, and every row is kept
//! primitive (content 1). Work starts in `i64` with checked arithmetic and
//! restarts in `BigInt` on overflow.

use std::collections::HashMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sparse integer vector: `(index, value)` pairs, strictly increasing index,
/// no zero values.
pub type IntVec = Vec<(usize, BigInt)>;

/// Default limit on stored nonzeros during elimination.
pub const DEFAULT_FILL_CAP: usize = 50_000_000;

pub trait ExactInt: Clone + PartialEq + Debug + Zero + One + Integer + Signed {
    fn mul_checked(&self, o: &Self) -> Option<Self>;
    fn sub_checked(&self, o: &Self) -> Option<Self>;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl ExactInt for i64 {
    fn mul_checked(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub_checked(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64().filter(|v| *v != i64::MIN)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn mul_checked(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub_checked(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Row<T> = Vec<(usize, T)>;

#[derive(Debug)]
enum Fail {
    Overflow,
    Fill,
}

/// Row echelon form with one pivot row per pivot column.
struct Echelon<T> {
    rows: Vec<Row<T>>,
    pivots: HashMap<usize, usize>,
    fill: usize,
    cap: usize,
}

fn entry<T>(r: &Row<T>, c: usize) -> Option<&T> {
    r.binary_search_by_key(&c, |e| e.0).ok().map(|i| &r[i].1)
}

/// `b'·r − a'·p` where `a = r[c]`, `b = p[c]`, clearing column `c`.
fn eliminate<T: ExactInt>(r: &Row<T>, p: &Row<T>, c: usize) -> std::result::Result<Row<T>, Fail> {
    let a = entry(r, c).expect("entry present");
    let b = entry(p, c).expect("pivot present");
    let g = a.gcd(b);
    let (a, b) = (a.div_floor(&g), b.div_floor(&g));
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let (col, val) = match (r.get(i), p.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                let v = b.mul_checked(&x.1).ok_or(Fail::Overflow)?;
                let w = a.mul_checked(&y.1).ok_or(Fail::Overflow)?;
                (x.0, v.sub_checked(&w).ok_or(Fail::Overflow)?)
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                (x.0, b.mul_checked(&x.1).ok_or(Fail::Overflow)?)
            }
            (Some(x), None) => {
                i += 1;
                (x.0, b.mul_checked(&x.1).ok_or(Fail::Overflow)?)
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, T::zero().sub_checked(&a.mul_checked(&y.1).ok_or(Fail::Overflow)?).ok_or(Fail::Overflow)?)
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    normalize(&mut out);
    Ok(out)
}

fn normalize<T: ExactInt>(r: &mut Row<T>) {
    let mut g = T::zero();
    for (_, v) in r.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    for (_, v) in r.iter_mut() {
        *v = v.div_floor(&g);
    }
}

impl<T: ExactInt> Echelon<T> {
    fn new(cap: usize) -> Self {
        Self { rows: Vec::new(), pivots: HashMap::new(), fill: 0, cap }
    }

    fn reduce(&self, mut r: Row<T>) -> std::result::Result<Row<T>, Fail> {
        while let Some(&(c, _)) = r.first() {
            match self.pivots.get(&c) {
                Some(&i) => r = eliminate(&r, &self.rows[i], c)?,
                None => break,
            }
        }
        Ok(r)
    }

    fn push(&mut self, r: Row<T>) -> std::result::Result<bool, Fail> {
        let r = self.reduce(r)?;
        match r.first() {
            None => Ok(false),
            Some(&(c, _)) => {
                self.fill += r.len();
                if self.fill > self.cap {
                    return Err(Fail::Fill);
                }
                self.pivots.insert(c, self.rows.len());
                self.rows.push(r);
                Ok(true)
            }
        }
    }

    /// Clears every pivot column in all other rows.
    fn reduce_fully(&mut self) -> std::result::Result<(), Fail> {
        let mut cols: Vec<usize> = self.pivots.keys().copied().collect();
        cols.sort_unstable_by(|a, b| b.cmp(a));
        for c in cols {
            let i = self.pivots[&c];
            for j in 0..self.rows.len() {
                if j != i && entry(&self.rows[j], c).is_some() {
                    let new = eliminate(&self.rows[j], &self.rows[i], c)?;
                    self.fill = self.fill.saturating_sub(self.rows[j].len()) + new.len();
                    if self.fill > self.cap {
                        return Err(Fail::Fill);
                    }
                    self.rows[j] = new;
                }
            }
        }
        Ok(())
    }
}

fn convert<T: ExactInt>(rows: &[IntVec]) -> Option<Vec<Row<T>>> {
    rows.iter().map(|r| r.iter().map(|(c, v)| T::from_big(v).map(|x| (*c, x))).collect()).collect()
}

fn sparse_first(rows: &[IntVec]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| (rows[i].len(), rows[i].first().map_or(0, |e| e.0)));
    order
}

fn echelon<T: ExactInt>(rows: &[IntVec], cap: usize, reduced: bool) -> std::result::Result<Option<Echelon<T>>, Fail> {
    let Some(conv) = convert::<T>(rows) else { return Ok(None) };
    let mut e = Echelon::new(cap);
    let order = sparse_first(rows);
    let mut conv: Vec<Option<Row<T>>> = conv.into_iter().map(Some).collect();
    for i in order {
        e.push(conv[i].take().expect("each row once"))?;
    }
    if reduced {
        e.reduce_fully()?;
    }
    Ok(Some(e))
}

/// Runs `f` on the echelon form, first over `i64`, then over `BigInt`.
fn with_echelon<R>(
    rows: &[IntVec],
    cap: usize,
    reduced: bool,
    fsmall: impl Fn(&Echelon<i64>) -> R,
    fbig: impl Fn(&Echelon<BigInt>) -> R,
) -> Result<R> {
    match echelon::<i64>(rows, cap, reduced) {
        Ok(Some(e)) => return Ok(fsmall(&e)),
        Ok(None) | Err(Fail::Overflow) => {}
        Err(Fail::Fill) => return Err(Error::ExactOverflow(cap)),
    }
    match echelon::<BigInt>(rows, cap, reduced) {
        Ok(Some(e)) => Ok(fbig(&e)),
        Ok(None) | Err(Fail::Overflow) => unreachable!("BigInt never overflows"),
        Err(Fail::Fill) => Err(Error::ExactOverflow(cap)),
    }
}

/// Sparse integer vector from `i64` pairs, dropping zeros.
pub fn int_vec<I: IntoIterator<Item = (usize, i64)>>(it: I) -> IntVec {
    let mut v: IntVec = it.into_iter().filter(|e| e.1 != 0).map(|(c, x)| (c, BigInt::from(x))).collect();
    v.sort_by_key(|e| e.0);
    v
}

pub fn from_i64_rows(rows: &[Vec<(usize, i64)>]) -> Vec<IntVec> {
    rows.iter().map(|r| int_vec(r.iter().copied())).collect()
}

/// Dense coefficients to a sparse vector.
pub fn from_dense(v: &[i64]) -> IntVec {
    int_vec(v.iter().copied().enumerate())
}

/// Rank over the rationals of the matrix with the given rows.
pub fn rank(rows: &[IntVec]) -> Result<usize> {
    rank_with_cap(rows, DEFAULT_FILL_CAP)
}

pub fn rank_with_cap(rows: &[IntVec], cap: usize) -> Result<usize> {
    with_echelon(rows, cap, false, |e| e.rows.len(), |e| e.rows.len())
}

fn kernel_from<T: ExactInt>(e: &Echelon<T>, ncols: usize) -> Vec<IntVec> {
    let mut by_col: HashMap<usize, Vec<(usize, BigInt, BigInt)>> = HashMap::new();
    for r in &e.rows {
        let (c, p) = (r[0].0, r[0].1.to_big());
        for (f, v) in &r[1..] {
            by_col.entry(*f).or_default().push((c, p.clone(), v.to_big()));
        }
    }
    let mut out = Vec::new();
    for f in (0..ncols).filter(|f| !e.pivots.contains_key(f)) {
        let deps = by_col.remove(&f).unwrap_or_default();
        let l = deps.iter().fold(BigInt::one(), |acc, (_, p, _)| acc.lcm(p));
        let mut v: IntVec = deps.into_iter().map(|(c, p, x)| (c, -(&l / &p) * x)).collect();
        v.push((f, l));
        v.sort_by_key(|e| e.0);
        normalize(&mut v);
        out.push(v);
    }
    out
}

/// Basis of `{x : A x = 0}` as primitive integer vectors, one per free column.
pub fn kernel(rows: &[IntVec], ncols: usize) -> Result<Vec<IntVec>> {
    if let Some(bad) = rows.iter().flatten().find(|e| e.0 >= ncols) {
        return Err(Error::DimensionMismatch(format!("column {} out of {ncols}", bad.0)));
    }
    with_echelon(rows, DEFAULT_FILL_CAP, true, |e| kernel_from(e, ncols), |e| kernel_from(e, ncols))
}

fn solve_from<T: ExactInt>(e: &Echelon<T>, n: usize) -> Option<Vec<BigRational>> {
    let mut x = vec![BigRational::zero(); n];
    for r in &e.rows {
        let (c, p) = (r[0].0, r[0].1.to_big());
        if c == n {
            return None;
        }
        if let Some(rhs) = entry(r, n) {
            x[c] = BigRational::new(rhs.to_big(), p);
        }
    }
    Some(x)
}

/// A rational solution of `A x = b`, or `None` when `b` is not in the
/// column space. Free variables are set to zero.
pub fn solve(rows: &[IntVec], ncols: usize, rhs: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
    if rhs.len() != rows.len() {
        return Err(Error::DimensionMismatch("right-hand side length".into()));
    }
    let aug: Vec<IntVec> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            if !b.is_zero() {
                r.push((ncols, b.clone()));
            }
            r
        })
        .collect();
    with_echelon(&aug, DEFAULT_FILL_CAP, true, |e| solve_from(e, ncols), |e| solve_from(e, ncols))
}

/// Transpose of a sparse row matrix with `ncols` columns.
pub fn transpose(rows: &[IntVec], ncols: usize) -> Vec<IntVec> {
    let mut out: Vec<IntVec> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row {
            out[*c].push((r, v.clone()));
        }
    }
    out
}

/// `A x` for a sparse row matrix and sparse vector.
pub fn mul_vec(rows: &[IntVec], x: &IntVec) -> IntVec {
    let dense: HashMap<usize, &BigInt> = x.iter().map(|(i, v)| (*i, v)).collect();
    rows.iter()
        .enumerate()
        .filter_map(|(r, row)| {
            let s: BigInt = row.iter().filter_map(|(c, v)| dense.get(c).map(|w| v * *w)).sum();
            (!s.is_zero()).then_some((r, s))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &[&[i64]]) -> Vec<IntVec> {
        m.iter().map(|r| from_dense(r)).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&rows(&[&[1, 2], &[2, 4]])).unwrap(), 1);
        assert_eq!(rank(&rows(&[&[1, 2], &[3, 4]])).unwrap(), 2);
        assert_eq!(rank(&rows(&[&[0, 0]])).unwrap(), 0);
        assert_eq!(rank(&[]).unwrap(), 0);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = rows(&[&[1, 1, 0, 2], &[0, 3, 3, 1], &[1, 4, 3, 3]]);
        let k = kernel(&a, 4).unwrap();
        assert_eq!(k.len(), 4 - rank(&a).unwrap());
        for v in &k {
            assert!(mul_vec(&a, v).is_empty());
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = rows(&[&[2, 0], &[0, 3], &[2, 3]]);
        let b: Vec<BigInt> = [4, 6, 10].iter().map(|&v| BigInt::from(v)).collect();
        let x = solve(&a, 2, &b).unwrap().unwrap();
        assert_eq!(x, vec![BigRational::from_integer(2.into()), BigRational::from_integer(2.into())]);
        let b: Vec<BigInt> = [4, 6, 11].iter().map(|&v| BigInt::from(v)).collect();
        assert!(solve(&a, 2, &b).unwrap().is_none());
    }

    #[test]
    fn overflow_falls_back() {
        let big = 3_000_000_000i64;
        let a = rows(&[&[big, 1, 0], &[1, big, 1], &[0, 1, big]]);
        assert_eq!(rank(&a).unwrap(), 3);
        assert_eq!(kernel(&a, 3).unwrap().len(), 0);
    }

    #[test]
    fn fill_cap_is_reported() {
        let a = rows(&[&[1, 1, 1], &[1, 2, 3]]);
        assert!(matches!(rank_with_cap(&a, 2), Err(Error::ExactOverflow(2))));
    }
}
