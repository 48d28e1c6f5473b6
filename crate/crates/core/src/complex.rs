//! Clique and independence complexes with oriented simplex enumeration,
//! chain-space indexing and the reduced (−1)-dimensional cell.

use std::collections::{BTreeSet, HashMap};
use std::ops::{Deref, Neg};

use fixedbitset::FixedBitSet;
use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::graph::{complement, WeightedGraph};

/// Default limit on the total number of enumerated simplices.
pub const DEFAULT_CAP: usize = 2_000_000;

/// Vertex indices (into the complex's sorted label list), strictly ascending.
/// The empty simplex has dimension −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Self(vertices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    /// Inserts `v`, returning the new simplex and the insertion position.
    pub fn insert(&self, v: u32) -> Option<(Simplex, usize)> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(p) => {
                let mut out = self.0.clone();
                out.insert(p, v);
                Some((Simplex(out), p))
            }
        }
    }

    /// Facet obtained by dropping position `p`.
    pub fn facet(&self, p: usize) -> Simplex {
        let mut out = self.0.clone();
        out.remove(p);
        Simplex(out)
    }
}

impl Deref for Simplex {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

/// A chain in `C^dim` given by coefficients in the complex's simplex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain<T> {
    pub dim: isize,
    pub coeffs: Vec<T>,
}

impl<T: Clone + Zero> Chain<T> {
    pub fn zeros(dim: isize, len: usize) -> Self {
        Self { dim, coeffs: vec![T::zero(); len] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }
}

impl Chain<i64> {
    pub fn to_f64(&self) -> Chain<f64> {
        Chain { dim: self.dim, coeffs: self.coeffs.iter().map(|&c| c as f64).collect() }
    }
}

/// Enumerated clique complex of a vertex-weighted graph.
#[derive(Clone, Debug)]
pub struct CliqueComplex {
    source: WeightedGraph,
    labels: Vec<String>,
    exponents: Vec<u32>,
    label_index: HashMap<String, u32>,
    nbrs: Vec<FixedBitSet>,
    max_dim: isize,
    complete: bool,
    cells: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl CliqueComplex {
    /// All cliques with at most `max_dim + 1` vertices.
    pub fn new(g: &WeightedGraph, max_dim: usize) -> Result<Self> {
        Self::build(g, Some(max_dim), DEFAULT_CAP)
    }

    /// All cliques of the graph, through the top dimension.
    pub fn full(g: &WeightedGraph) -> Result<Self> {
        Self::build(g, None, DEFAULT_CAP)
    }

    /// Enumerates by ordered depth-first extension, which yields every
    /// dimension in lexicographic order.
    pub fn build(g: &WeightedGraph, max_dim: Option<usize>, cap: usize) -> Result<Self> {
        let labels: Vec<String> = g.sorted_vertices().into_iter().map(str::to_string).collect();
        let n = labels.len();
        let label_index: HashMap<String, u32> = labels.iter().enumerate().map(|(i, l)| (l.clone(), i as u32)).collect();
        let exponents = labels.iter().map(|l| g.exponent(l).expect("vertex")).collect();
        let mut nbrs = vec![FixedBitSet::with_capacity(n); n];
        for (a, b) in g.edges() {
            let (i, j) = (label_index[&a] as usize, label_index[&b] as usize);
            nbrs[i].insert(j);
            nbrs[j].insert(i);
        }
        let limit = max_dim.map(|d| d + 1);
        let mut st =
            Enumeration { nbrs: &nbrs, cells: vec![vec![Simplex::empty()]], total: 1, cap, limit, truncated: false };
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        st.extend(&mut Vec::new(), &all)?;
        let Enumeration { mut cells, truncated, .. } = st;
        let max_dim = match max_dim {
            Some(d) => d as isize,
            None => cells.len() as isize - 2,
        };
        while (cells.len() as isize) < max_dim + 2 {
            cells.push(Vec::new());
        }
        let index = cells.iter().map(|c| c.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        Ok(Self {
            source: g.clone(),
            labels,
            exponents,
            label_index,
            nbrs,
            max_dim,
            complete: !truncated,
            cells,
            index,
        })
    }

    pub fn source(&self) -> &WeightedGraph {
        &self.source
    }

    /// Largest enumerated dimension.
    pub fn max_dim(&self) -> isize {
        self.max_dim
    }

    /// Whether no clique exceeds the enumerated dimension.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Highest dimension that actually has simplices (−1 for an empty graph).
    pub fn top_dim(&self) -> isize {
        (0..self.cells.len()).rev().find(|&i| !self.cells[i].is_empty()).unwrap_or(0) as isize - 1
    }

    /// Fails unless dimension `k` is known exactly.
    pub fn ensure_built(&self, k: isize) -> Result<()> {
        if k <= self.max_dim || self.complete {
            Ok(())
        } else {
            Err(Error::NotBuilt { needed: k, built: self.max_dim })
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex(&self, label: &str) -> Option<u32> {
        self.label_index.get(label).copied()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.exponents[v as usize]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        self.nbrs[u as usize].contains(v as usize)
    }

    /// Number of `k`-simplices (zero beyond the enumerated range).
    pub fn count(&self, k: isize) -> usize {
        usize::try_from(k + 1).ok().and_then(|i| self.cells.get(i)).map_or(0, Vec::len)
    }

    /// Simplex counts for dimensions −1 ..= max_dim.
    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, k: isize) -> &[Simplex] {
        usize::try_from(k + 1).ok().and_then(|i| self.cells.get(i)).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.len()).and_then(|m| m.get(s).copied())
    }

    /// Simplex whose vertices carry the given labels.
    pub fn simplex(&self, labels: &[&str]) -> Result<Simplex> {
        let mut v = Vec::with_capacity(labels.len());
        for l in labels {
            v.push(self.vertex(l).ok_or_else(|| Error::UnknownVertex(l.to_string()))?);
        }
        Ok(Simplex::new(v))
    }

    pub fn simplex_labels(&self, s: &Simplex) -> Vec<&str> {
        s.iter().map(|&v| self.label(v)).collect()
    }

    /// Sum of vertex exponents: the simplex has weight `λ^e`.
    pub fn simplex_exponent(&self, s: &Simplex) -> u32 {
        s.iter().map(|&v| self.exponent(v)).sum()
    }

    /// Vertices outside `s` adjacent to every vertex of `s`.
    pub fn up_vertices(&self, s: &Simplex) -> Vec<u32> {
        let mut acc = FixedBitSet::with_capacity(self.labels.len());
        acc.insert_range(..);
        for &v in s.iter() {
            acc.intersect_with(&self.nbrs[v as usize]);
        }
        acc.ones().map(|i| i as u32).collect()
    }

    /// Whether the vertex set is a clique of the underlying graph.
    pub fn is_clique(&self, vs: &[u32]) -> bool {
        vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| a != b && self.adjacent(a, b)))
    }

    /// Oriented 1-chain of a closed vertex path `p0 → p1 → … → p0`.
    pub fn loop_chain(&self, path: &[&str]) -> Result<Chain<i64>> {
        let mut c = Chain::zeros(1, self.count(1));
        for i in 0..path.len() {
            let (a, b) = (path[i], path[(i + 1) % path.len()]);
            let s = self.simplex(&[a, b])?;
            let idx = self.index_of(&s).ok_or_else(|| Error::SimplexNotFound(vec![a.into(), b.into()]))?;
            let sign = if self.vertex(a) < self.vertex(b) { 1 } else { -1 };
            c.coeffs[idx] += sign;
        }
        Ok(c)
    }

    /// Locates the simplex spanned by the concatenated label lists and
    /// returns its index with the sign of the sorting permutation.
    pub fn oriented_index(&self, labels: &[&str]) -> Result<(usize, i64)> {
        let mut vs = Vec::with_capacity(labels.len());
        for l in labels {
            vs.push(self.vertex(l).ok_or_else(|| Error::UnknownVertex(l.to_string()))?);
        }
        let sign = permutation_sign(&vs);
        if sign == 0 {
            return Err(Error::DimensionMismatch("repeated vertex in simplex".into()));
        }
        let s = Simplex::new(vs);
        let idx =
            self.index_of(&s).ok_or_else(|| Error::SimplexNotFound(labels.iter().map(|l| l.to_string()).collect()))?;
        Ok((idx, sign))
    }
}

struct Enumeration<'a> {
    nbrs: &'a [FixedBitSet],
    cells: Vec<Vec<Simplex>>,
    total: usize,
    cap: usize,
    limit: Option<usize>,
    truncated: bool,
}

impl Enumeration<'_> {
    fn extend(&mut self, prefix: &mut Vec<u32>, cand: &FixedBitSet) -> Result<()> {
        for v in cand.ones() {
            prefix.push(v as u32);
            let size = prefix.len();
            if self.cells.len() <= size {
                self.cells.push(Vec::new());
            }
            self.cells[size].push(Simplex(prefix.clone()));
            self.total += 1;
            if self.total > self.cap {
                return Err(Error::CapExceeded { cap: self.cap, dim: size as isize - 1 });
            }
            let mut next = cand.clone();
            next.intersect_with(&self.nbrs[v]);
            next.remove_range(..v + 1);
            if !next.is_clear() {
                if self.limit == Some(size) {
                    self.truncated = true;
                } else {
                    self.extend(prefix, &next)?;
                }
            }
            prefix.pop();
        }
        Ok(())
    }
}

/// Sign of the permutation sorting `v` (0 if an entry repeats).
pub fn permutation_sign<T: Ord>(v: &[T]) -> i64 {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            match v[i].cmp(&v[j]) {
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

pub fn clique_complex(g: &WeightedGraph, max_dim: usize) -> Result<CliqueComplex> {
    CliqueComplex::new(g, max_dim)
}

/// Complex of independent sets: the clique complex of the complement.
pub fn independence_complex(g: &WeightedGraph, max_dim: usize) -> Result<CliqueComplex> {
    CliqueComplex::new(&complement(g), max_dim)
}

/// Tensor embedding `C^i(K) ⊗ C^j(L) → C^{i+j+1}(K∗L)`.
///
/// `join` must be the clique complex of the join graph in which the vertices
/// of `k` and `l` appear with the given label prefixes. `|σ⟩⊗|τ⟩` maps to
/// the simplex `σ ∪ τ`, signed by the parity of the shuffle of `[σ τ]`.
pub fn kunneth_embed<T>(
    k: &CliqueComplex,
    l: &CliqueComplex,
    join: &CliqueComplex,
    prefixes: [&str; 2],
    psi: &Chain<T>,
    phi: &Chain<T>,
) -> Result<Chain<T>>
where
    T: Num + Clone + Neg<Output = T>,
{
    if psi.coeffs.len() != k.count(psi.dim) || phi.coeffs.len() != l.count(phi.dim) {
        return Err(Error::DimensionMismatch("chain length differs from chain space".into()));
    }
    let dim = psi.dim + phi.dim + 1;
    join.ensure_built(dim)?;
    let mut out: Chain<T> = Chain::zeros(dim, join.count(dim));
    let lift = |c: &CliqueComplex, s: &Simplex, p: &str| -> Vec<String> {
        s.iter().map(|&v| format!("{p}{}", c.label(v))).collect()
    };
    for (i, a) in psi.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let left = lift(k, &k.simplices(psi.dim)[i], prefixes[0]);
        for (j, b) in phi.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let mut all = left.clone();
            all.extend(lift(l, &l.simplices(phi.dim)[j], prefixes[1]));
            let refs: Vec<&str> = all.iter().map(String::as_str).collect();
            let (idx, sign) = join.oriented_index(&refs)?;
            let term = a.clone() * b.clone();
            let term = if sign < 0 { -term } else { term };
            out.coeffs[idx] = out.coeffs[idx].clone() + term;
        }
    }
    Ok(out)
}

/// A simplicial complex given by an explicit, downward-closed face set.
/// Faces are sorted label lists; the empty face is included.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FaceSet {
    faces: BTreeSet<Vec<String>>,
}

impl FaceSet {
    /// Downward closure of the given faces.
    pub fn from_faces<I, F, S>(faces: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Self::default();
        out.faces.insert(Vec::new());
        for f in faces {
            let mut f: Vec<String> = f.into_iter().map(Into::into).collect();
            f.sort();
            f.dedup();
            out.insert_closed(f);
        }
        out
    }

    fn insert_closed(&mut self, f: Vec<String>) {
        if self.faces.contains(&f) {
            return;
        }
        for i in 0..f.len() {
            let mut g = f.clone();
            g.remove(i);
            self.insert_closed(g);
        }
        self.faces.insert(f);
    }

    pub fn from_clique_complex(k: &CliqueComplex) -> Self {
        let faces = (-1..=k.max_dim())
            .flat_map(|d| k.simplices(d).iter())
            .map(|s| k.simplex_labels(s).into_iter().map(str::to_string).collect())
            .collect();
        Self { faces }
    }

    pub fn faces(&self) -> &BTreeSet<Vec<String>> {
        &self.faces
    }

    pub fn contains(&self, face: &[&str]) -> bool {
        let mut f: Vec<String> = face.iter().map(|s| s.to_string()).collect();
        f.sort();
        self.faces.contains(&f)
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn count(&self, k: isize) -> usize {
        self.faces.iter().filter(|f| f.len() as isize - 1 == k).count()
    }

    /// Faces not contained in any larger face.
    pub fn maximal_faces(&self) -> Vec<Vec<String>> {
        self.faces
            .iter()
            .filter(|f| !self.faces.iter().any(|g| g.len() == f.len() + 1 && f.iter().all(|v| g.contains(v))))
            .cloned()
            .collect()
    }

    pub fn one_skeleton(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new();
        for f in self.faces.iter().filter(|f| f.len() == 1) {
            g.add_vertex(&f[0], 0).expect("fresh");
        }
        for f in self.faces.iter().filter(|f| f.len() == 2) {
            g.add_edge(&f[0], &f[1]).expect("fresh");
        }
        g
    }

    /// Whether the face set is the clique complex of its own 1-skeleton.
    pub fn is_flag(&self) -> Result<bool> {
        let k = CliqueComplex::full(&self.one_skeleton())?;
        Ok(Self::from_clique_complex(&k) == *self)
    }
}
