#![allow(dead_code)]

use homology_lab::graph::WeightedGraph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph on `v0..v{n-1}` with exponents drawn from `0..=max_exp`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64, max_exp: u32) -> WeightedGraph {
    let mut g = WeightedGraph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{i}"), rng.gen_range(0..=max_exp)).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(&format!("v{i}"), &format!("v{j}")).unwrap();
            }
        }
    }
    g
}

pub fn oracle() -> Value {
    serde_json::from_str(include_str!("../data/oracle.json")).expect("oracle.json parses")
}

/// Nonzero reduced Betti numbers as `(dim, value)` pairs from an oracle object.
pub fn oracle_betti(v: &Value) -> Vec<(isize, usize)> {
    let mut out: Vec<(isize, usize)> =
        v.as_object().unwrap().iter().map(|(k, b)| (k.parse().unwrap(), b.as_u64().unwrap() as usize)).collect();
    out.sort();
    out
}
