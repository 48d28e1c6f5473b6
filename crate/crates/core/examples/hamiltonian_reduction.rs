//! From a local Hamiltonian to a weighted clique complex and a verdict.

use homology_lab::complex::CliqueComplex;
use homology_lab::reduction::{decide, reduce, schedule, sig10, up_laplacian_additivity, Hamiltonian, DEFAULT_C};

const SATISFIABLE: &str =
    r#"{"n":2,"terms":[{"support":[0],"amps":{"0":1}},{"support":[0,1],"amps":{"00":1,"11":-1}}]}"#;
const FRUSTRATED: &str = r#"{"n":1,"terms":[{"support":[0],"amps":{"0":1}},{"support":[0],"amps":{"1":1}}]}"#;

fn main() -> homology_lab::Result<()> {
    for text in [SATISFIABLE, FRUSTRATED] {
        let h = Hamiltonian::parse(text)?;
        let sched = schedule(1.0, h.t(), h.locality(), DEFAULT_C)?;
        let r = reduce(&h)?;
        println!(
            "n = {}, t = {}: {} vertices, lambda = {}, E = {}",
            h.n,
            h.t(),
            r.graph.vertex_count(),
            sig10(sched.lambda),
            sig10(sched.e)
        );
        print!("{}", decide(&h, 1.0, DEFAULT_C)?);

        let k = CliqueComplex::full(&r.graph)?;
        let psi: Vec<f64> = (0..k.count(r.k)).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        let a = up_laplacian_additivity(&r, 0.2, &psi)?;
        println!("up-Laplacian energy {:.6} vs per-gadget sum {:.6}\n", a.full, a.parts.iter().sum::<f64>());
    }
    Ok(())
}
