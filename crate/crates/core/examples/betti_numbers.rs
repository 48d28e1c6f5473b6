//! Reduced Betti numbers of the standard fixtures.
//!
//! Run with `cargo run --release --example betti_numbers`.

use homology_lab::complex::CliqueComplex;
use homology_lab::graph::{bowtie, octahedron, qubit_graph, thicken};
use homology_lab::homology::{betti_table, euler_characteristic};

fn main() -> homology_lab::Result<()> {
    let b = CliqueComplex::full(&bowtie())?;
    println!("bowtie: simplex counts {:?}", b.counts());
    println!("bowtie: nonzero reduced betti {:?}", betti_table(&b)?.nonzero());

    for n in 1..=5 {
        let k = CliqueComplex::full(&octahedron(n)?)?;
        let e = euler_characteristic(&k)?;
        println!("octahedron({n}): {:?}, euler {}", betti_table(&k)?.nonzero(), e.unreduced);
    }

    // Joins multiply homology: two bowties give 2 x 2 classes in degree 3.
    let q = CliqueComplex::full(&qubit_graph(2)?)?;
    println!("qubit_graph(2): dim C^3 = {}, betti {:?}", q.count(3), betti_table(&q)?.nonzero());

    let t = CliqueComplex::full(&thicken(&bowtie(), None)?)?;
    println!("thickened bowtie: {} vertices, betti {:?}", t.vertex_count(), betti_table(&t)?.nonzero());
    Ok(())
}
