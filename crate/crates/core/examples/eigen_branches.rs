//! Eigenvalue branches of a gadget Laplacian over a λ grid.
//!
//! The single-qubit `|0⟩` gadget has one harmonic class, one branch
//! decaying like `λ^6`, a bulk of `λ^2` branches and the rest bounded below.

use homology_lab::complex::CliqueComplex;
use homology_lab::gadgets::{gadget_graph, IntegerState};
use homology_lab::spectra::{sweep, DEFAULT_GRID};

fn main() -> homology_lab::Result<()> {
    let g = gadget_graph(&IntegerState::basis("0")?)?;
    let k = CliqueComplex::full(&g)?;
    let table = sweep(&k, 1, &DEFAULT_GRID)?;
    let classes = table.classify(0.5)?;
    println!("{} branches at k = 1", classes.len());
    for (b, c) in table.branches.iter().zip(&classes) {
        let slope = b.slope.map_or("-".to_string(), |s| format!("{s:.3}"));
        println!("  class {c:>6}  slope {slope:>7}  at 0.1: {:.3e}", b.values.last().copied().unwrap_or(0.0));
    }
    println!(
        "kernel {}, slope 6: {}, slope 2: {}",
        table.kernel_count(),
        table.count_near(6.0, 0.5),
        table.count_near(2.0, 0.5)
    );
    table.write_csv(std::io::stdout().lock(), 0.5)
}
