//! Vertex-weighted graphs and the graph-level constructions: complement,
//! joins, generalized octahedra, the bowtie qubit graph and thickening.
//!
//! A vertex with weight exponent `e` carries weight `λ^e`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected simple graph whose vertices carry nonnegative λ-exponents.
#[derive(Clone, Debug, Default)]
pub struct WeightedGraph {
    labels: Vec<String>,
    exponents: Vec<u32>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_map() == other.vertex_map() && self.edges() == other.edges()
    }
}

impl Eq for WeightedGraph {}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with the given vertices (all exponent `w`) and edges.
    pub fn from_parts(vertices: &[&str], w: u32, edges: &[(&str, &str)]) -> Result<Self> {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v, w)?;
        }
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, id: &str, exponent: u32) -> Result<()> {
        if self.index.contains_key(id) {
            return Err(Error::DuplicateVertex(id.to_string()));
        }
        self.index.insert(id.to_string(), self.labels.len());
        self.labels.push(id.to_string());
        self.exponents.push(exponent);
        self.adj.push(BTreeSet::new());
        Ok(())
    }

    /// Adds an edge, rejecting duplicates and self-loops.
    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<()> {
        if !self.ensure_edge(a, b)? {
            return Err(Error::DuplicateEdge(a.to_string(), b.to_string()));
        }
        Ok(())
    }

    /// Adds an edge if absent; returns whether it was new.
    pub fn ensure_edge(&mut self, a: &str, b: &str) -> Result<bool> {
        let i = self.require(a)?;
        let j = self.require(b)?;
        if i == j {
            return Err(Error::SelfLoop(a.to_string()));
        }
        let fresh = self.adj[i].insert(j);
        self.adj[j].insert(i);
        Ok(fresh)
    }

    pub fn set_exponent(&mut self, id: &str, exponent: u32) -> Result<()> {
        let i = self.require(id)?;
        self.exponents[i] = exponent;
        Ok(())
    }

    fn require(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Vertex labels in insertion order.
    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(String::as_str)
    }

    /// Vertex labels in lexicographic order.
    pub fn sorted_vertices(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.vertices().collect();
        v.sort_unstable();
        v
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn exponent(&self, id: &str) -> Option<u32> {
        self.index.get(id).map(|&i| self.exponents[i])
    }

    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.adj[i].contains(&j),
            _ => false,
        }
    }

    pub fn neighbors(&self, id: &str) -> Vec<&str> {
        match self.index.get(id) {
            Some(&i) => self.adj[i].iter().map(|&j| self.labels[j].as_str()).collect(),
            None => Vec::new(),
        }
    }

    pub fn degree(&self, id: &str) -> usize {
        self.index.get(id).map_or(0, |&i| self.adj[i].len())
    }

    /// Edges as lexicographically sorted label pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, nb) in self.adj.iter().enumerate() {
            for &j in nb {
                let (a, b) = (&self.labels[i], &self.labels[j]);
                if a < b {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out.sort();
        out
    }

    /// Label to exponent, sorted by label.
    pub fn vertex_map(&self) -> BTreeMap<&str, u32> {
        self.labels.iter().map(String::as_str).zip(self.exponents.iter().copied()).collect()
    }

    /// Copy with every label prefixed.
    pub fn prefixed(&self, prefix: &str) -> Self {
        self.relabeled(|v| format!("{prefix}{v}"))
    }

    /// Copy with labels rewritten by `f` (which must stay injective).
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Self {
        let labels: Vec<String> = self.labels.iter().map(|l| f(l)).collect();
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Self { labels, exponents: self.exponents.clone(), index, adj: self.adj.clone() }
    }

    /// Copy with every exponent set to `e`.
    pub fn with_uniform_exponent(&self, e: u32) -> Self {
        let mut g = self.clone();
        g.exponents.iter_mut().for_each(|x| *x = e);
        g
    }

    /// Subgraph induced on `keep`.
    pub fn induced(&self, keep: &[&str]) -> Result<Self> {
        let mut g = Self::new();
        for v in keep {
            let e = self.exponent(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
            g.add_vertex(v, e)?;
        }
        for (a, b) in self.edges() {
            if g.has_vertex(&a) && g.has_vertex(&b) {
                g.add_edge(&a, &b)?;
            }
        }
        Ok(g)
    }

    /// Adds all vertices and edges of `other`; shared labels must agree on exponent.
    pub fn merge(&mut self, other: &WeightedGraph) -> Result<()> {
        for (v, e) in other.vertex_map() {
            match self.exponent(v) {
                Some(f) if f != e => return Err(Error::LabelCollision(v.to_string())),
                Some(_) => {}
                None => self.add_vertex(v, e)?,
            }
        }
        for (a, b) in other.edges() {
            self.ensure_edge(&a, &b)?;
        }
        Ok(())
    }

    pub fn to_doc(&self) -> GraphDoc {
        let mut vertices: Vec<VertexDoc> =
            self.vertex_map().into_iter().map(|(id, w)| VertexDoc { id: id.to_string(), w: i64::from(w) }).collect();
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        let edges = self.edges().into_iter().map(|(a, b)| [a, b]).collect();
        GraphDoc { vertices, edges, meta: None }
    }

    /// Canonical JSON: vertices and edges sorted lexicographically.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("graph serializes")
    }

    pub fn from_doc(doc: &GraphDoc) -> Result<Self> {
        let mut g = Self::new();
        for v in &doc.vertices {
            let w = u32::try_from(v.w)
                .map_err(|_| Error::Parse(format!("vertex `{}` has invalid weight exponent {}", v.id, v.w)))?;
            g.add_vertex(&v.id, w)?;
        }
        for [a, b] in &doc.edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }
}

/// Serialized form of a graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    pub w: i64,
}

/// Parses the graph JSON schema `{"vertices":[{"id","w"}],"edges":[[a,b]]}`.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    WeightedGraph::from_doc(&doc)
}

/// A total order on a graph's vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrder(Vec<String>);

impl VertexOrder {
    pub fn new(order: Vec<String>) -> Self {
        Self(order)
    }

    pub fn lexicographic(g: &WeightedGraph) -> Self {
        Self(g.sorted_vertices().into_iter().map(str::to_string).collect())
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    fn validate(&self, g: &WeightedGraph) -> Result<HashMap<&str, usize>> {
        let pos: HashMap<&str, usize> = self.0.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        if pos.len() != self.0.len() || pos.len() != g.vertex_count() || g.vertices().any(|v| !pos.contains_key(v)) {
            return Err(Error::OrderMismatch);
        }
        Ok(pos)
    }
}

pub fn complement(g: &WeightedGraph) -> WeightedGraph {
    let mut h = WeightedGraph::new();
    for (v, e) in g.vertices().zip(g.exponents.iter()) {
        h.add_vertex(v, *e).expect("labels are unique");
    }
    let n = g.vertex_count();
    for i in 0..n {
        for j in i + 1..n {
            if !g.adj[i].contains(&j) {
                h.add_edge(&g.labels[i], &g.labels[j]).expect("fresh edge");
            }
        }
    }
    h
}

/// Join of two graphs with disjoint labels: union plus every cross edge.
pub fn join(g: &WeightedGraph, h: &WeightedGraph) -> Result<WeightedGraph> {
    if let Some(v) = h.vertices().find(|v| g.has_vertex(v)) {
        return Err(Error::LabelCollision(v.to_string()));
    }
    let mut out = g.clone();
    out.merge(h)?;
    for a in g.vertices() {
        for b in h.vertices() {
            out.add_edge(a, b)?;
        }
    }
    Ok(out)
}

/// Join of several graphs, factor `i` namespaced with the prefix `q{i}.`.
pub fn join_namespaced(factors: &[&WeightedGraph]) -> WeightedGraph {
    factors.iter().enumerate().fold(WeightedGraph::new(), |acc, (i, f)| {
        join(&acc, &f.prefixed(&format!("q{i}."))).expect("namespaced labels are disjoint")
    })
}

/// Two isolated vertices `a` and `b`.
pub fn two_points() -> WeightedGraph {
    WeightedGraph::from_parts(&["a", "b"], 0, &[]).expect("valid")
}

/// The generalized octahedron: `n`-fold join of two points.
pub fn octahedron(n: usize) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("octahedron needs n >= 1".into()));
    }
    let p = two_points();
    Ok(join_namespaced(&vec![&p; n]))
}

/// The single-qubit graph: two square loops sharing the vertex `x`.
pub fn bowtie() -> WeightedGraph {
    WeightedGraph::from_parts(
        &["x", "a2", "a3", "a4", "b2", "b3", "b4"],
        0,
        &[("x", "a3"), ("a3", "a2"), ("a2", "a4"), ("a4", "x"), ("x", "b3"), ("b3", "b2"), ("b2", "b4"), ("b4", "x")],
    )
    .expect("valid")
}

/// `n`-fold namespaced join of bowties; qubit `i` uses the prefix `q{i}.`.
pub fn qubit_graph(n: usize) -> Result<WeightedGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("qubit graph needs n >= 1".into()));
    }
    let b = bowtie();
    Ok(join_namespaced(&vec![&b; n]))
}

/// Label of the copy of `v` in layer `layer` of a thickening.
pub fn layer_label(v: &str, layer: u8) -> String {
    format!("{v}@{layer}")
}

/// Thickening of `g`: two layer copies joined by vertical edges and by
/// diagonals `(u,0)-(v,1)` for every edge with `u < v` in `order`.
/// Layer exponents are copied from `g`.
pub fn thicken(g: &WeightedGraph, order: Option<&VertexOrder>) -> Result<WeightedGraph> {
    let lex;
    let order = match order {
        Some(o) => o,
        None => {
            lex = VertexOrder::lexicographic(g);
            &lex
        }
    };
    let pos = order.validate(g)?;
    let mut out = WeightedGraph::new();
    for layer in 0..2 {
        for v in order.as_slice() {
            out.add_vertex(&layer_label(v, layer), g.exponent(v).expect("validated"))?;
        }
    }
    for v in order.as_slice() {
        out.add_edge(&layer_label(v, 0), &layer_label(v, 1))?;
    }
    for (a, b) in g.edges() {
        let (u, v) = if pos[a.as_str()] < pos[b.as_str()] { (a, b) } else { (b, a) };
        for layer in 0..2 {
            out.add_edge(&layer_label(&u, layer), &layer_label(&v, layer))?;
        }
        out.add_edge(&layer_label(&u, 0), &layer_label(&v, 1))?;
    }
    Ok(out)
}

/// Cycle graph on `n >= 3` vertices labelled `{prefix}0 .. {prefix}{n-1}`.
pub fn cycle_graph(n: usize, prefix: &str) -> Result<WeightedGraph> {
    if n < 3 {
        return Err(Error::InvalidArgument("a cycle needs at least 3 vertices".into()));
    }
    let labels: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let mut g = WeightedGraph::new();
    for l in &labels {
        g.add_vertex(l, 0)?;
    }
    for i in 0..n {
        g.add_edge(&labels[i], &labels[(i + 1) % n])?;
    }
    Ok(g)
}

/// Complete graph on `n` vertices labelled `v0 .. v{n-1}`.
pub fn complete_graph(n: usize) -> WeightedGraph {
    let mut g = WeightedGraph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{i}"), 0).expect("fresh");
    }
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(&format!("v{i}"), &format!("v{j}")).expect("fresh");
        }
    }
    g
}
