//! Building and checking gadgets for integer states.

use homology_lab::complex::CliqueComplex;
use homology_lab::gadgets::{build_k, catalog, gadget, glue, state_chain, IntegerState};
use homology_lab::graph::qubit_graph;
use homology_lab::homology::{betti_table, cycle_is_boundary};

fn main() -> homology_lab::Result<()> {
    for text in ["|0>", "|0>-|1>", "|0>+2|1>", "|00>-|11>", "|00>+2|11>"] {
        let state = IntegerState::parse(text)?;
        let model = build_k(&state)?;
        let bp = gadget(&state)?;
        let g = glue(&qubit_graph(state.m())?, &bp)?;
        let k = CliqueComplex::full(&g)?;
        let bounds = cycle_is_boundary(&k, &state_chain(&state, &k)?)?.is_boundary;
        println!(
            "{text:<12} K: {:>2} vertices  gadget: {:>2} vertices  glued betti {:?}  state bounds: {bounds}",
            model.k.vertex_count(),
            bp.vertices.len(),
            betti_table(&k)?.nonzero(),
        );
    }

    // The blueprint serializes with its boundary and state as metadata.
    let doc = gadget(&IntegerState::parse("|0>-|1>")?)?.to_doc()?;
    println!("{}", serde_json::to_string(&doc.meta)?);

    println!("catalog:");
    for e in catalog() {
        println!("  {:<9} {:<20} {}", e.name, e.state.to_string(), e.term);
    }
    Ok(())
}
