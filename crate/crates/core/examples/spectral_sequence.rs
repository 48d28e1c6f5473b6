//! The weight spectral sequence of the filled hexagon, page by page,
//! next to the numeric branch counts.

use homology_lab::complex::CliqueComplex;
use homology_lab::gadgets::hexagon;
use homology_lab::specseq::{filtration, forman_compare};
use homology_lab::spectra::DEFAULT_GRID;

fn main() -> homology_lab::Result<()> {
    let k = CliqueComplex::full(&hexagon()?)?;
    let f = filtration(&k)?;
    for j in 0..=4 {
        print!("{}", f.page(j)?);
    }
    let st = f.stabilized_dims(1)?;
    println!("k = 1 totals {:?}, stable from page {}", st.dims, st.page);
    let report = forman_compare(&k, 1, &DEFAULT_GRID)?;
    print!("{report}");
    println!("agree: {}", report.agrees());
    Ok(())
}
