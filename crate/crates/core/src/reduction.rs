//! Local Hamiltonians of integer-state projectors, their reduction to a
//! weighted clique complex, the `(λ, E)` schedule and a desk-scale decision
//! procedure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::CliqueComplex;
use crate::error::{Error, Result};
use crate::gadgets::{gadget_in, glue, GadgetBlueprint, IntegerState};
use crate::graph::{qubit_graph, GraphDoc, WeightedGraph};
use crate::homology::betti;
use crate::operators::coboundary;
use crate::spectra::spectrum_low;

/// Default schedule constant.
pub const DEFAULT_C: f64 = 0.1;

/// One projector `|φ⟩⟨φ|` acting on the qubits in `support`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub support: Vec<usize>,
    pub state: IntegerState,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hamiltonian {
    pub n: usize,
    pub terms: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianDoc {
    n: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    support: Vec<usize>,
    amps: BTreeMap<String, Value>,
}

impl Hamiltonian {
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("a Hamiltonian needs at least one qubit".into()));
        }
        for (i, t) in terms.iter().enumerate() {
            if let Some(q) = t.support.iter().find(|&&q| q >= n) {
                return Err(Error::InvalidArgument(format!("term {i} acts on qubit {q} of {n}")));
            }
            if t.support.iter().collect::<BTreeSet<_>>().len() != t.support.len() {
                return Err(Error::InvalidArgument(format!("term {i} repeats a qubit")));
            }
            if t.support.len() != t.state.m() {
                return Err(Error::InvalidArgument(format!(
                    "term {i} has {} support qubits for a {}-qubit state",
                    t.support.len(),
                    t.state.m()
                )));
            }
        }
        Ok(Self { n, terms })
    }

    /// Reads `{"n":..,"terms":[{"support":[..],"amps":{"01":1,..}},..]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: HamiltonianDoc = serde_json::from_str(text)?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (i, t) in doc.terms.into_iter().enumerate() {
            let mut amps = Vec::with_capacity(t.amps.len());
            for (z, a) in t.amps {
                let a = a.as_i64().ok_or_else(|| {
                    Error::InvalidState(format!("term {i}: amplitude {a} of |{z}> is not an integer"))
                })?;
                amps.push((z, a));
            }
            terms.push(Term { support: t.support, state: IntegerState::new(amps)? });
        }
        Self::new(doc.n, terms)
    }

    pub fn to_json(&self) -> String {
        let doc = HamiltonianDoc {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| TermDoc {
                    support: t.support.clone(),
                    amps: t.state.amplitudes().iter().map(|(z, a)| (z.clone(), json!(a))).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("hamiltonian serializes")
    }

    /// Number of terms.
    pub fn t(&self) -> usize {
        self.terms.len()
    }

    /// Largest term locality.
    pub fn locality(&self) -> usize {
        self.terms.iter().map(|t| t.support.len()).max().unwrap_or(0)
    }

    /// Dense matrix `Σ |φ_i⟩⟨φ_i|` with normalized states, on `2^n` amplitudes
    /// (qubit 0 most significant).
    pub fn matrix(&self) -> nalgebra::DMatrix<f64> {
        let mut h = nalgebra::DMatrix::zeros(1 << self.n, 1 << self.n);
        for t in &self.terms {
            h += projector_on_rest(&t.state.to_vector(), &t.support, self.n);
        }
        h
    }
}

/// `|φ⟩⟨φ| ⊗ I` on the qubits outside `support`.
fn projector_on_rest(local: &[f64], support: &[usize], n: usize) -> nalgebra::DMatrix<f64> {
    let dim = 1usize << n;
    let sub = |x: usize| support.iter().fold(0, |acc, &q| (acc << 1) | ((x >> (n - 1 - q)) & 1));
    let mask: usize = support.iter().map(|&q| 1usize << (n - 1 - q)).sum();
    nalgebra::DMatrix::from_fn(
        dim,
        dim,
        |r, c| {
            if r & !mask == c & !mask {
                local[sub(r)] * local[sub(c)]
            } else {
                0.0
            }
        },
    )
}

/// Moves the boundary of a gadget built on qubits `0..m` onto `support`.
pub fn place(bp: &GadgetBlueprint, support: &[usize]) -> Result<GadgetBlueprint> {
    if support.len() != bp.m {
        return Err(Error::InvalidArgument(format!("{} support qubits for an {}-qubit gadget", support.len(), bp.m)));
    }
    let own: BTreeSet<&str> = bp.vertices.iter().map(String::as_str).collect();
    let map = |v: &str| -> String {
        if own.contains(v) {
            return v.to_string();
        }
        if let Some((head, rest)) = v.split_once('.') {
            if let Some(j) = head.strip_prefix('q').and_then(|j| j.parse::<usize>().ok()) {
                if j < bp.m {
                    return format!("q{}.{rest}", support[j]);
                }
            }
        }
        v.to_string()
    };
    let mut out = bp.clone();
    out.boundary = bp.boundary.iter().map(|v| map(v)).collect();
    out.edges = bp.edges.iter().map(|(a, b)| ordered(map(a), map(b))).collect();
    out.boundary_edges = bp.boundary_edges.iter().map(|(a, b)| ordered(map(a), map(b))).collect();
    out.support = support.to_vec();
    Ok(out)
}

fn ordered(a: String, b: String) -> (String, String) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Joins the gadget with the qubits outside its support: every gadget
/// vertex gains an edge to every vertex of those qubit copies.
pub fn pad(bp: &GadgetBlueprint, n: usize) -> Result<GadgetBlueprint> {
    if n < bp.m || bp.support.iter().any(|&q| q >= n) {
        return Err(Error::InvalidArgument(format!("cannot pad a gadget on qubits {:?} to {n} qubits", bp.support)));
    }
    let base = qubit_graph(n)?;
    let outside: Vec<&str> = base
        .sorted_vertices()
        .into_iter()
        .filter(|v| {
            let q = v.split_once('.').and_then(|(h, _)| h.strip_prefix('q')).and_then(|q| q.parse::<usize>().ok());
            q.is_some_and(|q| !bp.support.contains(&q))
        })
        .collect();
    let mut out = bp.clone();
    for g in &bp.vertices {
        for v in &outside {
            out.edges.push(ordered(g.clone(), v.to_string()));
        }
    }
    out.edges.sort();
    Ok(out)
}

/// The reduced graph `Ĝ_n` and the gadgets that were glued into it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub n: usize,
    /// Degree of the cohomology that carries the answer: `2n − 1`.
    pub k: isize,
    pub graph: WeightedGraph,
    pub gadgets: Vec<GadgetBlueprint>,
}

/// Builds `qubit_graph(n)` with one padded gadget per term, namespaced
/// `t{i}`. Gadgets are built in parallel and merged in term order.
pub fn reduce(h: &Hamiltonian) -> Result<Reduction> {
    let gadgets: Vec<GadgetBlueprint> = h
        .terms
        .par_iter()
        .enumerate()
        .map(|(i, t)| pad(&place(&gadget_in(&t.state, &format!("t{i}"))?, &t.support)?, h.n))
        .collect::<Result<_>>()?;
    let mut graph = qubit_graph(h.n)?;
    for g in &gadgets {
        graph = glue(&graph, g)?;
    }
    Ok(Reduction { n: h.n, k: 2 * h.n as isize - 1, graph, gadgets })
}

/// `qubit_graph(n)` with the padded gadget of `state` on the first `m` qubits.
pub fn padded_gadget_graph(state: &IntegerState, n: usize) -> Result<WeightedGraph> {
    let bp = pad(&gadget_in(state, "t0")?, n)?;
    glue(&qubit_graph(n)?, &bp)
}

impl Reduction {
    /// The base together with gadget `i` alone.
    pub fn single_gadget_graph(&self, i: usize) -> Result<WeightedGraph> {
        let g = self.gadgets.get(i).ok_or_else(|| Error::InvalidArgument(format!("no gadget {i}")))?;
        glue(&qubit_graph(self.n)?, g)
    }

    /// For every `k`-simplex of `complex`: 0 when it lies in the qubit
    /// graph, `i + 1` when it uses vertices of gadget `i`. Fails if a
    /// simplex mixes two gadgets.
    pub fn chain_owners(&self, complex: &CliqueComplex, dim: isize) -> Result<Vec<usize>> {
        let mut owner_of: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, g) in self.gadgets.iter().enumerate() {
            for v in &g.vertices {
                owner_of.insert(v, i + 1);
            }
        }
        complex
            .simplices(dim)
            .iter()
            .map(|s| {
                let owners: BTreeSet<usize> =
                    complex.simplex_labels(s).iter().filter_map(|v| owner_of.get(v).copied()).collect();
                match owners.len() {
                    0 => Ok(0),
                    1 => Ok(*owners.iter().next().expect("one owner")),
                    _ => Err(Error::Internal(format!("simplex {:?} spans several gadgets", complex.simplex_labels(s)))),
                }
            })
            .collect()
    }

    pub fn to_doc(&self, schedule: Option<&Schedule>) -> GraphDoc {
        let mut doc = self.graph.to_doc();
        let namespaces: Vec<&str> = self.gadgets.iter().map(|g| g.namespace.as_str()).collect();
        doc.meta = Some(json!({
            "reduction": {
                "n": self.n,
                "k": self.k,
                "lambda": schedule.map(|s| s.lambda),
                "E": schedule.map(|s| s.e),
                "namespaces": namespaces,
                "states": self.gadgets.iter().map(|g| g.state.as_ref().map(|s| s.to_string())).collect::<Vec<_>>(),
                "supports": self.gadgets.iter().map(|g| g.support.clone()).collect::<Vec<_>>(),
            }
        }));
        doc
    }
}

/// Up-Laplacian energy of one chain on the full complex and on each
/// single-gadget complex.
#[derive(Clone, Debug)]
pub struct Additivity {
    pub full: f64,
    pub parts: Vec<f64>,
}

impl Additivity {
    pub fn discrepancy(&self) -> f64 {
        (self.full - self.parts.iter().sum::<f64>()).abs()
    }
}

fn up_energy(k: &CliqueComplex, dim: isize, lambda: f64, psi: &[f64]) -> Result<f64> {
    let d = coboundary(k, dim)?.evaluate(lambda)?;
    Ok(d.mul_vec(psi).iter().map(|v| v * v).sum())
}

/// Compares `⟨ψ|Δ↑|ψ⟩` on `Ĝ_n` with the sum over gadgets of the energy
/// of the restriction of `ψ` to the base plus that gadget.
pub fn up_laplacian_additivity(r: &Reduction, lambda: f64, psi: &[f64]) -> Result<Additivity> {
    let full_k = CliqueComplex::full(&r.graph)?;
    if psi.len() != full_k.count(r.k) {
        return Err(Error::DimensionMismatch(format!(
            "chain of length {} for {} simplices",
            psi.len(),
            full_k.count(r.k)
        )));
    }
    let full = up_energy(&full_k, r.k, lambda, psi)?;
    let parts = (0..r.gadgets.len())
        .map(|i| {
            let sub = CliqueComplex::full(&r.single_gadget_graph(i)?)?;
            let local: Vec<f64> = sub
                .simplices(r.k)
                .iter()
                .map(|s| {
                    let labels = sub.simplex_labels(s);
                    let idx = full_k.index_of(&full_k.simplex(&labels)?).expect("subcomplex simplex");
                    Ok(psi[idx])
                })
                .collect::<Result<_>>()?;
            up_energy(&sub, r.k, lambda, &local)
        })
        .collect::<Result<_>>()?;
    Ok(Additivity { full, parts })
}

/// The pair `(λ, E)` with `λ = c·g/t` and `E = c·λ^{4m+2}·g/t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Schedule {
    pub g: f64,
    pub c: f64,
    pub t: usize,
    pub m: usize,
    pub lambda: f64,
    pub e: f64,
}

pub fn schedule(g: f64, t: usize, m: usize, c: f64) -> Result<Schedule> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::InvalidArgument(format!("promise gap must be positive, got {g}")));
    }
    if t == 0 || m == 0 {
        return Err(Error::InvalidArgument("schedule needs at least one term of positive locality".into()));
    }
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidArgument(format!("constant c must lie in (0, 1], got {c}")));
    }
    let lambda = c * g / t as f64;
    if lambda >= 1.0 {
        return Err(Error::InvalidArgument(format!("scheduled λ = {lambda} is not below 1")));
    }
    let e = c * lambda.powi(4 * m as i32 + 2) * g / t as f64;
    Ok(Schedule { g, c, t, m, lambda, e })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "YES",
            Verdict::No => "NO",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// A verdict with its evidence: the exact Betti number and, when it
/// vanishes, the smallest Laplacian eigenvalue at the scheduled λ.
#[derive(Clone, Debug, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub k: isize,
    pub betti: usize,
    pub lambda_min: Option<f64>,
    pub schedule: Schedule,
    pub vertices: usize,
    pub chain_dim: usize,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict      {}", self.verdict)?;
        writeln!(f, "k            {}", self.k)?;
        writeln!(f, "vertices     {}", self.vertices)?;
        writeln!(f, "dim C^k      {}", self.chain_dim)?;
        writeln!(f, "betti_k      {}", self.betti)?;
        writeln!(f, "lambda       {}", sig10(self.schedule.lambda))?;
        writeln!(f, "E            {}", sig10(self.schedule.e))?;
        match self.lambda_min {
            Some(v) => writeln!(f, "lambda_min   {}", sig10(v)),
            None => writeln!(f, "lambda_min   0 (exact)"),
        }
    }
}

/// Rounds to 10 significant digits; scientific notation outside `[1e-4, 1e10)`.
pub fn sig10(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let r: f64 = format!("{v:.9e}").parse().expect("float round trip");
    if (1e-4..1e10).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// YES when `β_{2n−1}(Ĝ_n) ≥ 1` (exact). Otherwise NO when the smallest
/// eigenvalue of `Δ^{2n−1}(λ)` at the scheduled λ is at least `E`, and
/// INCONCLUSIVE when it falls below.
pub fn decide(h: &Hamiltonian, g: f64, c: f64) -> Result<Decision> {
    let sched = schedule(g, h.t(), h.locality().max(1), c)?;
    let r = reduce(h)?;
    decide_reduced(&r, sched)
}

pub fn decide_reduced(r: &Reduction, sched: Schedule) -> Result<Decision> {
    let k = CliqueComplex::full(&r.graph)?;
    let b = betti(&k, r.k)?;
    let chain_dim = k.count(r.k);
    let (verdict, lambda_min) = if b > 0 {
        (Verdict::Yes, None)
    } else {
        let low = spectrum_low(&k, r.k, sched.lambda, 1)?.lambda_min.max(0.0);
        (if low >= sched.e { Verdict::No } else { Verdict::Inconclusive }, Some(low))
    };
    Ok(Decision { verdict, k: r.k, betti: b, lambda_min, schedule: sched, vertices: r.graph.vertex_count(), chain_dim })
}
