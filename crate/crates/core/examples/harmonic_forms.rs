//! Harmonic representatives and boundary witnesses.

use homology_lab::complex::{kunneth_embed, CliqueComplex};
use homology_lab::graph::{bowtie, join_namespaced, WeightedGraph};
use homology_lab::homology::{cycle_is_boundary, harmonic_basis};

fn main() -> homology_lab::Result<()> {
    let b = CliqueComplex::full(&bowtie())?;
    let h = harmonic_basis(&b, 1, 0.5, None)?;
    println!("bowtie: {} harmonic 1-forms at lambda 0.5", h.dim());
    for v in &h.vectors {
        let rounded: Vec<String> = v.iter().map(|x| format!("{x:+.3}")).collect();
        println!("  [{}]", rounded.join(" "));
    }

    let left = b.loop_chain(&["x", "a3", "a2", "a4"])?;
    println!("left loop bounds: {}", cycle_is_boundary(&b, &left)?.is_boundary);

    let mut filled: WeightedGraph = bowtie();
    filled.add_edge("a3", "a4")?;
    filled.add_edge("x", "a2")?;
    let f = CliqueComplex::full(&filled)?;
    let check = cycle_is_boundary(&f, &f.loop_chain(&["x", "a3", "a2", "a4"])?)?;
    let witness: Vec<String> = check.witness.unwrap_or_default().iter().map(ToString::to_string).collect();
    println!("after filling: bounds {}, witness [{}]", check.is_boundary, witness.join(", "));

    // Loop products live in the join.
    let j = CliqueComplex::full(&join_namespaced(&[&bowtie(), &bowtie()]))?;
    let right = b.loop_chain(&["x", "b3", "b2", "b4"])?;
    let prod = kunneth_embed(&b, &b, &j, ["q0.", "q1."], &left, &right)?;
    println!(
        "left x right: {} tetrahedra, still a non-boundary: {}",
        prod.support().len(),
        !cycle_is_boundary(&j, &prod)?.is_boundary
    );
    Ok(())
}
