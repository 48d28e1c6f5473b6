//! Gadgets that fill in the cycle of an integer state inside the qubit graph.
//!
//! A gadget starts from a sphere `K` together with a relation `R` whose
//! induced vertex map `f` folds `K` onto the cycle `J` of the state. `K` is
//! thickened, its inner layer is coned off by a center vertex, the outer
//! layer is identified with `J` through `f`, and the result is glued onto
//! the qubit graph. Inner and center vertices carry exponent 1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::complex::{Chain, CliqueComplex, FaceSet};
use crate::error::{Error, Result};
use crate::graph::{cycle_graph, qubit_graph, thicken, GraphDoc, WeightedGraph};
use crate::homology::coboundary_rows;
use crate::linalg::exact;

/// Namespace of gadget vertices when none is given.
pub const DEFAULT_NAMESPACE: &str = "g";

/// Integer amplitudes over computational basis states, unnormalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerState {
    m: usize,
    amplitudes: BTreeMap<String, i64>,
}

impl IntegerState {
    /// State from `(bitstring, amplitude)` pairs. Zero amplitudes are dropped;
    /// repeated bitstrings add up.
    pub fn new<I, S>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, i64)>,
        S: AsRef<str>,
    {
        let mut amplitudes: BTreeMap<String, i64> = BTreeMap::new();
        let mut m = None;
        for (z, a) in terms {
            let z = z.as_ref();
            if z.is_empty() || !z.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::InvalidState(format!("`{z}` is not a bitstring")));
            }
            match m {
                None => m = Some(z.len()),
                Some(len) if len != z.len() => {
                    return Err(Error::InvalidState("bitstrings have different lengths".into()))
                }
                _ => {}
            }
            let e = amplitudes.entry(z.to_string()).or_insert(0);
            *e = e.checked_add(a).ok_or_else(|| Error::InvalidState("amplitude overflow".into()))?;
        }
        amplitudes.retain(|_, a| *a != 0);
        let m = m.ok_or_else(|| Error::InvalidState("no terms".into()))?;
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("all amplitudes vanish".into()));
        }
        Ok(Self { m, amplitudes })
    }

    pub fn basis(z: &str) -> Result<Self> {
        Self::new([(z, 1)])
    }

    /// Parses `"1011:1,1000:-1"` or ket notation such as `"|0>-|1>"`,
    /// `"-5|011>+4|100>+3|101>"`.
    pub fn parse(text: &str) -> Result<Self> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if text.contains('|') {
            return Self::parse_kets(&text);
        }
        let mut terms = Vec::new();
        for part in text.split(',').filter(|p| !p.is_empty()) {
            let (z, a) = part.split_once(':').unwrap_or((part, "1"));
            let a: i64 = a.parse().map_err(|_| Error::Parse(format!("bad amplitude in `{part}`")))?;
            terms.push((z.to_string(), a));
        }
        Self::new(terms)
    }

    fn parse_kets(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("cannot read `{text}` as a sum of kets"));
        let mut terms = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let bar = rest.find('|').ok_or_else(bad)?;
            let close = rest.find('>').ok_or_else(bad)?;
            if close < bar {
                return Err(bad());
            }
            let coeff = &rest[..bar];
            let a: i64 = match coeff {
                "" | "+" => 1,
                "-" => -1,
                c => c.trim_start_matches('+').parse().map_err(|_| bad())?,
            };
            terms.push((rest[bar + 1..close].to_string(), a));
            rest = &rest[close + 1..];
        }
        Self::new(terms)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn amplitudes(&self) -> &BTreeMap<String, i64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, z: &str) -> i64 {
        self.amplitudes.get(z).copied().unwrap_or(0)
    }

    pub fn is_basis(&self) -> bool {
        self.amplitudes.len() == 1
    }

    /// `Σ a_z²`, the squared normalization.
    pub fn norm_sq(&self) -> i64 {
        self.amplitudes.values().map(|a| a * a).sum()
    }

    /// Number of basis-cycle copies used to build `K`: `Σ |a_z|`.
    pub fn copies(&self) -> usize {
        self.amplitudes.values().map(|a| a.unsigned_abs() as usize).sum()
    }

    pub fn gcd(&self) -> i64 {
        self.amplitudes.values().fold(0i64, |g, a| g.gcd(a))
    }

    /// Amplitudes divided by their gcd.
    pub fn reduced(&self) -> Self {
        let g = self.gcd().max(1);
        Self { m: self.m, amplitudes: self.amplitudes.iter().map(|(z, a)| (z.clone(), a / g)).collect() }
    }

    pub fn is_reduced(&self) -> bool {
        self.gcd() == 1
    }

    /// Normalized amplitude vector indexed by the bitstring read as binary
    /// (qubit 0 most significant).
    pub fn to_vector(&self) -> Vec<f64> {
        let norm = (self.norm_sq() as f64).sqrt();
        let mut v = vec![0.0; 1 << self.m];
        for (z, a) in &self.amplitudes {
            v[usize::from_str_radix(z, 2).expect("validated")] = *a as f64 / norm;
        }
        v
    }
}

impl fmt::Display for IntegerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.amplitudes.iter().map(|(z, a)| format!("{z}:{a}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A vertex relation read as a map from sources to targets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relation {
    map: BTreeMap<String, String>,
}

impl Relation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity<I, S>(vertices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            map: vertices
                .into_iter()
                .map(|v| {
                    let v = v.into();
                    (v.clone(), v)
                })
                .collect(),
        }
    }

    /// Relation from ordered pairs; fails when a source has two targets.
    pub fn from_pairs<I, S, T>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut r = Self::new();
        for (s, t) in pairs {
            r.insert(s, t)?;
        }
        Ok(r)
    }

    pub fn insert(&mut self, source: impl Into<String>, target: impl Into<String>) -> Result<()> {
        let (s, t) = (source.into(), target.into());
        match self.map.get(&s) {
            Some(old) if *old != t => Err(Error::NonFunctional(s)),
            Some(_) => Ok(()),
            None => {
                self.map.insert(s, t);
                Ok(())
            }
        }
    }

    pub fn apply(&self, v: &str) -> Option<&str> {
        self.map.get(v).map(String::as_str)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn targets(&self) -> BTreeSet<&str> {
        self.map.values().map(String::as_str).collect()
    }

    /// Every target vertex must be hit.
    pub fn check_surjective<'a, I: IntoIterator<Item = &'a str>>(&self, targets: I) -> Result<()> {
        let hit = self.targets();
        match targets.into_iter().find(|t| !hit.contains(t)) {
            Some(t) => Err(Error::NotSurjective(t.to_string())),
            None => Ok(()),
        }
    }

    /// Every vertex of `k` must have an image.
    pub fn check_total(&self, k: &WeightedGraph) -> Result<()> {
        match k.sorted_vertices().into_iter().find(|v| !self.map.contains_key(*v)) {
            Some(v) => Err(Error::InvalidArgument(format!("relation gives no image for `{v}`"))),
            None => Ok(()),
        }
    }

    fn image(&self, v: &str) -> Result<&str> {
        self.apply(v).ok_or_else(|| Error::InvalidArgument(format!("relation gives no image for `{v}`")))
    }
}

/// Image `{f(σ) : σ ∈ K}` of a face set under the vertex map of `r`.
/// Faces whose vertices collide drop in dimension. The image must again be
/// a clique complex.
pub fn apply_f(k: &FaceSet, r: &Relation) -> Result<FaceSet> {
    let mut faces = Vec::with_capacity(k.len());
    for f in k.faces() {
        let img: Vec<String> = f.iter().map(|v| r.image(v).map(str::to_string)).collect::<Result<_>>()?;
        faces.push(img);
    }
    let out = FaceSet::from_faces(faces);
    if !out.is_flag()? {
        return Err(Error::Glue("image of K is not a clique complex".into()));
    }
    Ok(out)
}

/// Labels of the square loop `x, c3, c2, c4` of qubit `i` in state `bit`.
pub fn qubit_loop(i: usize, bit: char) -> [String; 4] {
    let c = if bit == '0' { 'a' } else { 'b' };
    [format!("q{i}.x"), format!("q{i}.{c}3"), format!("q{i}.{c}2"), format!("q{i}.{c}4")]
}

/// The `(2m−1)`-cycle of a computational basis state: the join of one
/// square loop per qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCycle {
    pub z: String,
    pub loops: Vec<[String; 4]>,
}

pub fn basis_cycle(m: usize, z: &str) -> Result<BasisCycle> {
    if z.len() != m || m == 0 || !z.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::InvalidState(format!("`{z}` is not a bitstring of length {m}")));
    }
    Ok(BasisCycle { z: z.to_string(), loops: z.chars().enumerate().map(|(i, b)| qubit_loop(i, b)).collect() })
}

impl BasisCycle {
    pub fn m(&self) -> usize {
        self.loops.len()
    }

    pub fn vertices(&self) -> Vec<&str> {
        self.loops.iter().flatten().map(String::as_str).collect()
    }

    /// Top simplices as ordered label lists whose order gives the orientation.
    pub fn oriented_top(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = vec![Vec::new()];
        for lp in &self.loops {
            let mut next = Vec::with_capacity(out.len() * 4);
            for prefix in &out {
                for i in 0..4 {
                    let mut s = prefix.clone();
                    s.push(lp[i].clone());
                    s.push(lp[(i + 1) % 4].clone());
                    next.push(s);
                }
            }
            out = next;
        }
        out
    }

    pub fn faces(&self) -> FaceSet {
        FaceSet::from_faces(self.oriented_top())
    }

    pub fn graph(&self) -> Result<WeightedGraph> {
        qubit_graph(self.m())?.induced(&self.vertices())
    }

    /// The cycle as an integer chain of any complex containing its simplices.
    pub fn chain(&self, k: &CliqueComplex) -> Result<Chain<i64>> {
        let dim = 2 * self.m() as isize - 1;
        k.ensure_built(dim)?;
        let mut c = Chain::zeros(dim, k.count(dim));
        for s in self.oriented_top() {
            let refs: Vec<&str> = s.iter().map(String::as_str).collect();
            let (idx, sign) = k.oriented_index(&refs)?;
            c.coeffs[idx] += sign;
        }
        Ok(c)
    }
}

/// `Σ a_z |z⟩` as an integer chain of `k`.
pub fn state_chain(state: &IntegerState, k: &CliqueComplex) -> Result<Chain<i64>> {
    let dim = 2 * state.m() as isize - 1;
    k.ensure_built(dim)?;
    let mut out = Chain::zeros(dim, k.count(dim));
    for (z, a) in state.amplitudes() {
        let c = basis_cycle(state.m(), z)?.chain(k)?;
        for (o, v) in out.coeffs.iter_mut().zip(&c.coeffs) {
            *o += a * v;
        }
    }
    Ok(out)
}

/// Union of the basis cycles in the support of `state`.
pub fn state_faces(state: &IntegerState) -> Result<FaceSet> {
    let mut all = Vec::new();
    for z in state.amplitudes().keys() {
        all.extend(basis_cycle(state.m(), z)?.oriented_top());
    }
    Ok(FaceSet::from_faces(all))
}

/// A sphere `K` with the relation folding it onto the cycle of a state.
#[derive(Clone, Debug)]
pub struct CycleModel {
    pub k: WeightedGraph,
    pub relation: Relation,
}

/// Supplies `(K, R)` for a state. The standard source covers one and two
/// qubits; larger constructions plug in here.
pub trait CycleSource {
    fn build(&self, state: &IntegerState) -> Result<CycleModel>;
}

/// Built-in constructions for `m ∈ {1, 2}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardCycles;

impl CycleSource for StandardCycles {
    fn build(&self, state: &IntegerState) -> Result<CycleModel> {
        build_k(state)
    }
}

/// One basis-cycle copy inside `K`.
#[derive(Clone, Debug)]
struct Copy {
    z: String,
    sign: i64,
}

struct Draft {
    model: CycleModel,
    /// Per copy: a top simplex of `K` away from the cut, as labels.
    probes: Vec<Vec<String>>,
}

fn copy_plan(state: &IntegerState) -> Vec<Copy> {
    state
        .amplitudes()
        .iter()
        .flat_map(|(z, a)| (0..a.unsigned_abs()).map(move |_| Copy { z: z.clone(), sign: a.signum() }))
        .collect()
}

/// Renames repeated labels: the `t`-th reuse of `v` becomes `v_t`.
#[derive(Default)]
struct CopyNames(BTreeMap<String, usize>);

impl CopyNames {
    fn fresh(&mut self, v: &str, r: &mut Relation) -> Result<String> {
        let n = self.0.entry(v.to_string()).or_insert(0);
        let label = if *n == 0 { v.to_string() } else { format!("{v}_{n}") };
        *n += 1;
        r.insert(label.clone(), v)?;
        Ok(label)
    }
}

fn add_vertex_once(g: &mut WeightedGraph, v: &str) -> Result<()> {
    if !g.has_vertex(v) {
        g.add_vertex(v, 0)?;
    }
    Ok(())
}

fn link(g: &mut WeightedGraph, a: &str, b: &str) -> Result<()> {
    add_vertex_once(g, a)?;
    add_vertex_once(g, b)?;
    g.ensure_edge(a, b)?;
    Ok(())
}

/// Copies of the single-qubit loops cut open at `x` and chained into one
/// long cycle through the dummies `x1, x2, …`.
fn one_qubit_draft(copies: &[Copy], flips: &[bool]) -> Result<Draft> {
    let n = copies.len();
    let mut g = WeightedGraph::new();
    let mut r = Relation::new();
    let mut names = CopyNames::default();
    let x = "q0.x".to_string();
    r.insert(x.clone(), x.clone())?;
    let joints: Vec<String> = (0..n).map(|i| if i == 0 { x.clone() } else { format!("x{i}") }).collect();
    for j in &joints[1..] {
        r.insert(j.clone(), x.clone())?;
    }
    let mut probes = Vec::new();
    for (i, c) in copies.iter().enumerate() {
        let lp = qubit_loop(0, c.z.chars().next().expect("m = 1"));
        let c3 = names.fresh(&lp[1], &mut r)?;
        let c2 = names.fresh(&lp[2], &mut r)?;
        let c4 = names.fresh(&lp[3], &mut r)?;
        let mut path = [c3.clone(), c2.clone(), c4];
        if flips[i] {
            path.reverse();
        }
        let (start, end) = (&joints[i], &joints[(i + 1) % n]);
        link(&mut g, start, &path[0])?;
        link(&mut g, &path[0], &path[1])?;
        link(&mut g, &path[1], &path[2])?;
        link(&mut g, &path[2], end)?;
        probes.push(vec![c3, c2]);
    }
    Ok(Draft { model: CycleModel { k: g, relation: r }, probes })
}

/// Roof and ceiling dummies of the cut: copy `i` owns the square
/// `roof[i], ceil[i], ceil[i+1], roof[i+1]`.
fn cut_dummies(n: usize) -> (Vec<String>, Vec<String>) {
    let x = |i: usize| format!("x{i}");
    let roof = (0..n)
        .map(|i| match i {
            0 => x(1),
            1 => x(2),
            _ => x(2 * i + 2),
        })
        .collect();
    let ceil = (0..n)
        .map(|i| match i {
            0 => x(4),
            1 => x(3),
            _ => x(2 * i + 1),
        })
        .collect();
    (roof, ceil)
}

/// Copies of two-qubit cycles with the edge `[x x']` cut open by a dummy
/// square, glued along a cyclic ladder of dummies; from four copies on the
/// roof and ceiling of the ladder are closed by two apex dummies.
fn two_qubit_draft(copies: &[Copy], flips: &[bool]) -> Result<Draft> {
    let n = copies.len();
    let mut g = WeightedGraph::new();
    let mut r = Relation::new();
    let mut names = CopyNames::default();
    let (x, xp) = ("q0.x".to_string(), "q1.x".to_string());
    r.insert(x.clone(), x.clone())?;
    r.insert(xp.clone(), xp.clone())?;
    let (roof, ceil) = cut_dummies(n);
    for d in roof.iter().chain(&ceil) {
        r.insert(d.clone(), x.clone())?;
        link(&mut g, d, &x)?;
        link(&mut g, d, &xp)?;
    }
    let mut probes = Vec::new();
    for (i, c) in copies.iter().enumerate() {
        let bits: Vec<char> = c.z.chars().collect();
        let (l0, l1) = (qubit_loop(0, bits[0]), qubit_loop(1, bits[1]));
        let mut a = vec![x.clone()];
        let mut b = vec![xp.clone()];
        for v in &l0[1..] {
            a.push(names.fresh(v, &mut r)?);
        }
        for v in &l1[1..] {
            b.push(names.fresh(v, &mut r)?);
        }
        for k in 0..4 {
            link(&mut g, &a[k], &a[(k + 1) % 4])?;
            link(&mut g, &b[k], &b[(k + 1) % 4])?;
        }
        for u in &a {
            for v in &b {
                if !(u == &x && v == &xp) {
                    link(&mut g, u, v)?;
                }
            }
        }
        // link square of [x x']: c3 - c3' - c4 - c4'
        let square = [(&a[1], &b[1]), (&b[1], &a[3]), (&a[3], &b[3]), (&b[3], &a[1])];
        let dummies = [&roof[i], &ceil[i], &ceil[(i + 1) % n], &roof[(i + 1) % n]];
        for k in 0..4 {
            let e = if flips[i] { square[(4 - k) % 4] } else { square[k] };
            link(&mut g, dummies[k], e.0)?;
            link(&mut g, dummies[k], e.1)?;
            link(&mut g, dummies[k], dummies[(k + 1) % 4])?;
        }
        probes.push(vec![a[1].clone(), a[2].clone(), b[1].clone(), b[2].clone()]);
    }
    if n >= 4 {
        for (apex, ring) in [(format!("x{}", 2 * n + 1), &roof), (format!("x{}", 2 * n + 2), &ceil)] {
            r.insert(apex.clone(), x.clone())?;
            link(&mut g, &apex, &x)?;
            link(&mut g, &apex, &xp)?;
            for v in ring {
                link(&mut g, &apex, v)?;
            }
        }
    }
    Ok(Draft { model: CycleModel { k: g, relation: r }, probes })
}

/// Basis states are their own spheres; superpositions of one or two
/// qubits are assembled from cut copies of basis cycles and
/// orientation-aligned so that `f` maps the fundamental class of `K` to
/// `±Σ a_z |z⟩`.
pub fn build_k(state: &IntegerState) -> Result<CycleModel> {
    let state = state.reduced();
    let m = state.m();
    if m > 2 {
        return Err(Error::ExtensionPoint(format!("{m}-qubit state {state}")));
    }
    if state.is_basis() {
        let z = state.amplitudes().keys().next().expect("nonempty");
        let bc = basis_cycle(m, z)?;
        let k = bc.graph()?;
        let relation = Relation::identity(bc.vertices());
        return Ok(CycleModel { k, relation });
    }
    let copies = copy_plan(&state);
    let draft = |flips: &[bool]| if m == 1 { one_qubit_draft(&copies, flips) } else { two_qubit_draft(&copies, flips) };
    let target = CliqueComplex::full(&qubit_graph(m)?)?;
    let mut flips = vec![false; copies.len()];
    let first = draft(&flips)?;
    let signs = copy_signs(&first, &target, &copies)?;
    for i in 0..copies.len() {
        flips[i] = signs[i] * copies[i].sign != signs[0] * copies[0].sign;
    }
    let model = if flips.iter().any(|&f| f) { draft(&flips)?.model } else { first.model };
    check_model(&state, &model)?;
    Ok(model)
}

fn fundamental_class(k: &CliqueComplex, top: isize) -> Result<Vec<i64>> {
    let rows = coboundary_rows(k, top - 1)?;
    let del = exact::transpose(&rows, k.count(top - 1));
    let ker = exact::kernel(&del, k.count(top))?;
    if ker.len() != 1 {
        return Err(Error::Orientation(format!("K carries {} independent top cycles", ker.len())));
    }
    let mut out = vec![0i64; k.count(top)];
    for (i, v) in &ker[0] {
        out[*i] = v.to_i64().ok_or_else(|| Error::Orientation("fundamental class is not unimodular".into()))?;
    }
    Ok(out)
}

/// `f_*` of the fundamental class of `K` as a chain of `target`.
fn pushforward(
    model: &CycleModel,
    target: &CliqueComplex,
    top: isize,
) -> Result<(CliqueComplex, Vec<i64>, Chain<i64>)> {
    let k = CliqueComplex::full(&model.k)?;
    if k.top_dim() != top {
        return Err(Error::Orientation(format!("K has dimension {} instead of {top}", k.top_dim())));
    }
    let fund = fundamental_class(&k, top)?;
    let mut out = Chain::zeros(top, target.count(top));
    for (s, &c) in k.simplices(top).iter().zip(&fund) {
        let img: Vec<&str> = k.simplex_labels(s).into_iter().map(|v| model.relation.image(v)).collect::<Result<_>>()?;
        let distinct: BTreeSet<&str> = img.iter().copied().collect();
        if distinct.len() < img.len() {
            continue;
        }
        let (idx, sign) = target.oriented_index(&img)?;
        out.coeffs[idx] += sign * c;
    }
    Ok((k, fund, out))
}

fn copy_signs(d: &Draft, target: &CliqueComplex, copies: &[Copy]) -> Result<Vec<i64>> {
    let top = 2 * copies[0].z.len() as isize - 1;
    let (k, fund, _) = pushforward(&d.model, target, top)?;
    copies
        .iter()
        .zip(&d.probes)
        .map(|(c, probe)| {
            let refs: Vec<&str> = probe.iter().map(String::as_str).collect();
            let (idx, s) = k.oriented_index(&refs)?;
            let img: Vec<&str> = refs.iter().map(|v| d.model.relation.image(v)).collect::<Result<_>>()?;
            let (tidx, ts) = target.oriented_index(&img)?;
            let basis = basis_cycle(c.z.len(), &c.z)?.chain(target)?;
            Ok(fund[idx] * s * ts * basis.coeffs[tidx])
        })
        .collect()
}

/// Checks a `(K, R)` pair against a state: `R` is total on `K` and onto the
/// cycle, `f(K)` is the cycle's simplex set, and the fundamental class of
/// `K` maps to `±Σ a_z |z⟩`.
pub fn check_model(state: &IntegerState, model: &CycleModel) -> Result<()> {
    let state = state.reduced();
    let m = state.m();
    let j_faces = state_faces(&state)?;
    let j0: Vec<&str> = j_faces.faces().iter().filter(|f| f.len() == 1).map(|f| f[0].as_str()).collect();
    model.relation.check_total(&model.k)?;
    model.relation.check_surjective(j0)?;
    let k = CliqueComplex::full(&model.k)?;
    let image = apply_f(&FaceSet::from_clique_complex(&k), &model.relation)?;
    if image != j_faces {
        return Err(Error::Glue("f(K) differs from the simplex set of the cycle".into()));
    }
    let target = CliqueComplex::full(&qubit_graph(m)?)?;
    let top = 2 * m as isize - 1;
    let (_, _, pushed) = pushforward(model, &target, top)?;
    let phi = state_chain(&state, &target)?;
    let neg: Vec<i64> = phi.coeffs.iter().map(|v| -v).collect();
    if pushed.coeffs != phi.coeffs && pushed.coeffs != neg {
        return Err(Error::Orientation(format!("f_*[K] is not ±({state})")));
    }
    Ok(())
}

/// The pieces added to a base graph by one gadget.
#[derive(Clone, Debug)]
pub struct GadgetBlueprint {
    pub namespace: String,
    pub m: usize,
    /// Qubits of the base that the boundary lives on, in qubit order of the state.
    pub support: Vec<usize>,
    pub state: Option<IntegerState>,
    pub model: CycleModel,
    pub center: String,
    /// Inner-layer and center vertices, all with exponent 1.
    pub vertices: Vec<String>,
    /// Gadget–gadget and gadget–boundary edges.
    pub edges: Vec<(String, String)>,
    /// Boundary vertices `J⁰`, identified with base vertices.
    pub boundary: Vec<String>,
    /// Images of outer-layer edges; these must already exist in the base.
    pub boundary_edges: Vec<(String, String)>,
}

pub fn inner_label(namespace: &str, v: &str) -> String {
    format!("{namespace}.{v}")
}

/// Gadget for `state` from the standard cycle constructions.
pub fn gadget(state: &IntegerState) -> Result<GadgetBlueprint> {
    gadget_in(state, DEFAULT_NAMESPACE)
}

pub fn gadget_in(state: &IntegerState, namespace: &str) -> Result<GadgetBlueprint> {
    gadget_with(&StandardCycles, state, namespace)
}

/// Gadget for `state` using any source of `(K, R)`; the pair is checked first.
pub fn gadget_with(source: &dyn CycleSource, state: &IntegerState, namespace: &str) -> Result<GadgetBlueprint> {
    let model = source.build(state)?;
    check_model(state, &model)?;
    let mut bp = gadget_from_parts(&model, state.m(), namespace)?;
    bp.state = Some(state.reduced());
    Ok(bp)
}

/// Thickens `K`, cones off the inner layer and folds the outer layer by `f`.
pub fn gadget_from_parts(model: &CycleModel, m: usize, namespace: &str) -> Result<GadgetBlueprint> {
    model.relation.check_total(&model.k)?;
    let thick = thicken(&model.k, None)?;
    let center = inner_label(namespace, "v0");
    if model.k.has_vertex("v0") {
        return Err(Error::LabelCollision(center));
    }
    let side = |l: &str| -> Result<(bool, String)> {
        let (v, layer) = l.rsplit_once('@').ok_or_else(|| Error::Internal(format!("layer label `{l}`")))?;
        Ok(if layer == "0" { (false, model.relation.image(v)?.to_string()) } else { (true, inner_label(namespace, v)) })
    };
    let vertices: Vec<String> = model
        .k
        .sorted_vertices()
        .into_iter()
        .map(|v| inner_label(namespace, v))
        .chain(std::iter::once(center.clone()))
        .collect();
    let mut edges = BTreeSet::new();
    let mut boundary_edges = BTreeSet::new();
    for (a, b) in thick.edges() {
        let ((ia, a), (ib, b)) = (side(&a)?, side(&b)?);
        if a == b {
            continue;
        }
        let e = if a < b { (a, b) } else { (b, a) };
        if ia || ib {
            edges.insert(e);
        } else {
            boundary_edges.insert(e);
        }
    }
    for v in model.k.sorted_vertices() {
        let w = inner_label(namespace, v);
        edges.insert(if w < center { (w, center.clone()) } else { (center.clone(), w) });
    }
    let boundary = model.relation.targets().into_iter().map(str::to_string).collect();
    Ok(GadgetBlueprint {
        namespace: namespace.to_string(),
        m,
        support: (0..m).collect(),
        state: None,
        model: model.clone(),
        center,
        vertices,
        edges: edges.into_iter().collect(),
        boundary,
        boundary_edges: boundary_edges.into_iter().collect(),
    })
}

impl GadgetBlueprint {
    /// Gadget vertices together with the boundary they attach to.
    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let mut g = WeightedGraph::new();
        for v in &self.boundary {
            g.add_vertex(v, 0)?;
        }
        for v in &self.vertices {
            g.add_vertex(v, 1)?;
        }
        for (a, b) in self.edges.iter().chain(&self.boundary_edges) {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Graph document with a `gadget` metadata block.
    pub fn to_doc(&self) -> Result<GraphDoc> {
        let mut doc = self.to_graph()?.to_doc();
        doc.meta = Some(json!({
            "gadget": {
                "namespace": self.namespace,
                "state": self.state.as_ref().map(|s| s.to_string()),
                "m": self.m,
                "support": self.support,
                "J0": self.boundary,
                "center": self.center,
            }
        }));
        Ok(doc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc()?)?)
    }
}

/// Identifies the gadget boundary with base vertices and adds the gadget.
/// No edge between base vertices is created.
pub fn glue(base: &WeightedGraph, b: &GadgetBlueprint) -> Result<WeightedGraph> {
    for v in &b.boundary {
        match base.exponent(v) {
            None => return Err(Error::Glue(format!("boundary vertex `{v}` is missing from the base"))),
            Some(0) => {}
            Some(e) => return Err(Error::Glue(format!("boundary vertex `{v}` has exponent {e}, expected 0"))),
        }
    }
    if let Some((a, c)) = b.boundary_edges.iter().find(|(a, c)| !base.has_edge(a, c)) {
        return Err(Error::Glue(format!("gadget needs base edge `{a}`-`{c}`")));
    }
    let mut g = base.clone();
    for v in &b.vertices {
        if g.has_vertex(v) {
            return Err(Error::LabelCollision(v.clone()));
        }
        g.add_vertex(v, 1)?;
    }
    for (a, c) in &b.edges {
        g.add_edge(a, c)?;
    }
    Ok(g)
}

/// `qubit_graph(m)` with the gadget of `state` glued in.
pub fn gadget_graph(state: &IntegerState) -> Result<WeightedGraph> {
    glue(&qubit_graph(state.m())?, &gadget(state)?)
}

/// A 6-cycle filled in by the gadget pipeline with the identity relation.
pub fn hexagon() -> Result<WeightedGraph> {
    let base = cycle_graph(6, "h")?;
    let model = CycleModel { relation: Relation::identity(base.sorted_vertices()), k: base.clone() };
    glue(&base, &gadget_from_parts(&model, 1, DEFAULT_NAMESPACE)?)
}

/// A named projector state of the 4-local clock construction.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub term: &'static str,
    pub state: IntegerState,
}

const CATALOG: [(&str, &str, &str); 13] = [
    ("PropPrime", "H_prop'", "1011:1,1000:-1"),
    ("CNOT1", "H_prop(CNOT)", "0110:1,0101:-1"),
    ("CNOT2", "H_prop(CNOT)", "0010:1,0001:-1"),
    ("Pyth1", "H_prop(U_Pyth)", "011:-5,100:4,101:3"),
    ("Pyth2", "H_prop(U_Pyth)", "010:-5,100:3,101:-4"),
    ("CNOT3", "H_prop(CNOT)", "1101:1,1010:-1"),
    ("CNOT4", "H_prop(CNOT)", "1011:1,1100:-1"),
    ("Hclock1", "H_clock(1)", "00:1"),
    ("Hclock2", "H_clock(2)", "11:1"),
    ("HinHout", "H_in, H_out", "011:1"),
    ("Hclock3", "H_clock(3), H_clock(4), H_clock(5), H_clock(6)", "1100:1"),
    ("Hclock4", "H_clock(4)", "0111:1"),
    ("Hclock5", "H_clock(5)", "0001:1"),
];

pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG
        .iter()
        .map(|&(name, term, s)| CatalogEntry { name, term, state: IntegerState::parse(s).expect("catalog data") })
        .collect()
}

/// Case-insensitive lookup by name; `Hin` and `Hout` alias `HinHout`.
pub fn lookup(name: &str) -> Option<IntegerState> {
    let key = match name.to_ascii_lowercase().as_str() {
        "hin" | "hout" => "hinhout".to_string(),
        other => other.to_string(),
    };
    catalog().into_iter().find(|e| e.name.to_ascii_lowercase() == key).map(|e| e.state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{betti, betti_table};

    #[test]
    fn state_parsing() {
        let a = IntegerState::parse("|0>-|1>").unwrap();
        let b = IntegerState::parse("0:1,1:-1").unwrap();
        assert_eq!(a, b);
        let p = IntegerState::parse("-5|011>+4|100>+3|101>").unwrap();
        assert_eq!(p.amplitude("011"), -5);
        assert_eq!(p.norm_sq(), 50);
        assert!(IntegerState::parse("0:1,11:1").is_err());
        assert!(IntegerState::parse("0:1,0:-1").is_err());
        assert_eq!(IntegerState::parse("0:2,1:4").unwrap().reduced(), IntegerState::parse("0:1,1:2").unwrap());
    }

    #[test]
    fn relation_rules() {
        assert!(matches!(Relation::from_pairs([("a", "b"), ("a", "c")]), Err(Error::NonFunctional(_))));
        let r = Relation::from_pairs([("a", "b"), ("c", "b")]).unwrap();
        assert!(r.check_surjective(["b"]).is_ok());
        assert!(matches!(r.check_surjective(["b", "d"]), Err(Error::NotSurjective(_))));
    }

    #[test]
    fn worked_quotient() {
        let k = FaceSet::from_faces(vec![
            vec!["x0", "x1", "x2", "x3"],
            vec!["x0'", "x1'", "x2'", "x3"],
            vec!["x2", "x3", "x4", "x5"],
            vec!["x0", "x1'", "x2'", "x3"],
            vec!["x0'", "x1'", "x1", "x2'", "x2", "x3", "x4", "x5"],
        ]);
        let mut r = Relation::identity((0..=5).map(|i| format!("x{i}")));
        for i in 0..=2 {
            r.insert(format!("x{i}'"), format!("x{i}")).unwrap();
        }
        let img = apply_f(&k, &r).unwrap();
        let top: Vec<String> = (0..=5).map(|i| format!("x{i}")).collect();
        assert_eq!(img.maximal_faces(), vec![top]);
    }

    #[test]
    fn basis_cycles() {
        let c = basis_cycle(1, "0").unwrap();
        assert_eq!(c.loops[0], ["q0.x", "q0.a3", "q0.a2", "q0.a4"]);
        let c = basis_cycle(2, "00").unwrap();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.faces().count(3), 16);
        assert!(basis_cycle(2, "0").is_err());
    }

    #[test]
    fn basis_chain_is_a_cycle() {
        let q = CliqueComplex::full(&qubit_graph(2).unwrap()).unwrap();
        let c = basis_cycle(2, "01").unwrap().chain(&q).unwrap();
        assert!(!crate::homology::cycle_is_boundary(&q, &c).unwrap().is_boundary);
    }

    #[test]
    fn one_qubit_models() {
        let z = build_k(&IntegerState::basis("0").unwrap()).unwrap();
        assert_eq!(z.k.vertex_count(), 4);
        let minus = build_k(&IntegerState::parse("|0>-|1>").unwrap()).unwrap();
        assert_eq!(minus.k.vertex_count(), 8);
        assert_eq!(minus.relation.apply("x1"), Some("q0.x"));
        let k = CliqueComplex::full(&minus.k).unwrap();
        assert_eq!(betti_table(&k).unwrap().nonzero(), vec![(1, 1)]);
        build_k(&IntegerState::parse("|0>+2|1>").unwrap()).unwrap();
    }

    #[test]
    fn two_qubit_models_are_spheres() {
        for s in ["|00>-|11>", "|00>+|11>", "|00>+2|11>", "|00>+3|11>", "|01>-|10>"] {
            let model = build_k(&IntegerState::parse(s).unwrap()).unwrap();
            let k = CliqueComplex::full(&model.k).unwrap();
            assert_eq!(betti_table(&k).unwrap().nonzero(), vec![(3, 1)], "{s}");
        }
        assert!(matches!(build_k(&IntegerState::basis("011").unwrap()), Err(Error::ExtensionPoint(_))));
    }

    #[test]
    fn zero_gadget_glues() {
        let bp = gadget(&IntegerState::basis("0").unwrap()).unwrap();
        assert_eq!(bp.vertices.len(), 5);
        let g = glue(&qubit_graph(1).unwrap(), &bp).unwrap();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(betti(&CliqueComplex::full(&g).unwrap(), 1).unwrap(), 1);
        let doc = bp.to_doc().unwrap();
        assert_eq!(doc.meta.unwrap()["gadget"]["m"], 1);
    }

    #[test]
    fn glued_gadgets_kill_one_class() {
        for s in ["|0>", "|1>", "|0>-|1>", "|0>+2|1>", "|00>", "|11>", "|00>-|11>", "|00>+2|11>"] {
            let st = IntegerState::parse(s).unwrap();
            let k = CliqueComplex::full(&gadget_graph(&st).unwrap()).unwrap();
            let m = st.m() as isize;
            assert_eq!(betti_table(&k).unwrap().nonzero(), vec![(2 * m - 1, (1 << m) - 1)], "{s}");
            let phi = state_chain(&st, &k).unwrap();
            assert!(crate::homology::cycle_is_boundary(&k, &phi).unwrap().is_boundary, "{s}");
        }
    }

    #[test]
    fn glue_rejects_missing_boundary() {
        let bp = gadget(&IntegerState::basis("1").unwrap()).unwrap();
        let base = cycle_graph(4, "z").unwrap();
        assert!(matches!(glue(&base, &bp), Err(Error::Glue(_))));
    }

    #[test]
    fn hexagon_fixture() {
        let g = hexagon().unwrap();
        assert_eq!(g.vertex_count(), 13);
        let k = CliqueComplex::full(&g).unwrap();
        assert_eq!(k.counts(), vec![1, 13, 30, 18]);
        assert!(betti_table(&k).unwrap().nonzero().is_empty());
    }

    #[test]
    fn catalog_data() {
        let c = catalog();
        assert_eq!(c.len(), 13);
        assert!(c.iter().all(|e| e.state.is_reduced()));
        assert_eq!(lookup("Hclock1").unwrap(), IntegerState::basis("00").unwrap());
        assert_eq!(lookup("Pyth1").unwrap().amplitude("100"), 4);
        assert_eq!(lookup("hout").unwrap().m(), 3);
    }
}
