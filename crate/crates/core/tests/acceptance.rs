//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use homology_lab::complex::{CliqueComplex, Simplex};
use homology_lab::gadgets::{basis_cycle, gadget_graph, hexagon, state_chain, IntegerState};
use homology_lab::graph::{bowtie, complete_graph, join_namespaced, octahedron, qubit_graph, thicken};
use homology_lab::homology::{betti_table, coboundary_rows, cycle_is_boundary, harmonic_basis};
use homology_lab::operators::{embedded_entry, laplacian, laplacian_entry};
use homology_lab::reduction::{
    decide, padded_gadget_graph, reduce, schedule, up_laplacian_additivity, Hamiltonian, Verdict,
};
use homology_lab::specseq::{filtration, forman_compare};
use homology_lab::spectra::{pairing_check, sweep, DEFAULT_GRID};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn full(g: &homology_lab::graph::WeightedGraph) -> Result<CliqueComplex, String> {
    ok(CliqueComplex::full(g))
}

fn nonzero_betti(k: &CliqueComplex) -> Result<Vec<(isize, usize)>, String> {
    Ok(ok(betti_table(k))?.nonzero())
}

fn state(s: &str) -> IntegerState {
    IntegerState::parse(s).expect("valid state")
}

const GADGET_STATES: [&str; 8] = ["|0>", "|1>", "|0>-|1>", "|0>+2|1>", "|00>", "|11>", "|00>-|11>", "|00>+2|11>"];

fn bowtie_counts() -> Outcome {
    let k = full(&bowtie())?;
    let counts = k.counts();
    ensure!(counts.get(1) == Some(&7) && counts.get(2) == Some(&8), "counts {counts:?}");
    ensure!(k.count(2) == 0, "{} triangles", k.count(2));
    let b = nonzero_betti(&k)?;
    ensure!(b == vec![(1, 2)], "betti {b:?}");
    Ok("7 vertices, 8 edges, 0 triangles, b1 = 2".into())
}

fn octahedra() -> Outcome {
    for n in 1..=6 {
        let k = full(&ok(octahedron(n))?)?;
        let top = n as isize - 1;
        ensure!(k.count(top) == 1 << n, "n={n}: {} top simplices", k.count(top));
        let b = nonzero_betti(&k)?;
        ensure!(b == vec![(top, 1)], "n={n}: betti {b:?}");
    }
    Ok("n = 1..6 are spheres with 2^n facets".into())
}

fn kunneth() -> Outcome {
    let oracle = common::oracle();
    let q2 = full(&ok(qubit_graph(2))?)?;
    let b3 = ok(betti_table(&q2))?.get(3);
    ensure!(b3 == 4 && q2.count(3) == 64, "b3 = {b3}, dim C3 = {}", q2.count(3));
    ensure!(b3 as u64 == oracle["qubit2"]["betti"]["3"].as_u64().unwrap(), "oracle disagrees");
    let mut rng = common::rng(3);
    for trial in 0..5 {
        let (na, nb) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
        let a = common::random_graph(&mut rng, na, 0.5, 0);
        let b = common::random_graph(&mut rng, nb, 0.5, 0);
        let (ka, kb) = (full(&a)?, full(&b)?);
        let (ta, tb) = (ok(betti_table(&ka))?, ok(betti_table(&kb))?);
        let kj = full(&join_namespaced(&[&a, &b]))?;
        let tj = ok(betti_table(&kj))?;
        for k in -1..=kj.top_dim() + 1 {
            let expect: usize = (-1..=k).map(|i| ta.get(i) * tb.get(k - 1 - i)).sum();
            ensure!(tj.get(k) == expect, "join {trial}: b{k} = {} but product gives {expect}", tj.get(k));
        }
    }
    Ok("b3(qubit2) = 4, dim C3 = 64, 5 random joins".into())
}

fn thickening() -> Outcome {
    let mut graphs = vec![ok(octahedron(2))?, ok(octahedron(3))?, bowtie()];
    let mut rng = common::rng(4);
    for _ in 0..20 {
        let n = rng.gen_range(1..=8);
        graphs.push(common::random_graph(&mut rng, n, 0.45, 0));
    }
    for (i, g) in graphs.iter().enumerate() {
        let before = nonzero_betti(&full(g)?)?;
        let after = nonzero_betti(&full(&ok(thicken(g, None))?)?)?;
        ensure!(before == after, "graph {i}: {before:?} vs {after:?}");
    }
    Ok(format!("{} graphs keep their Betti numbers", graphs.len()))
}

fn entry_formula() -> Outcome {
    let mut rng = common::rng(5);
    let mut entries = 0usize;
    for trial in 0..20 {
        let n = rng.gen_range(1..=9);
        let g = common::random_graph(&mut rng, n, 0.5, 3);
        let k = full(&g)?;
        for dim in -1..=k.top_dim() {
            let lap = ok(laplacian(&k, dim))?;
            let simplices = k.simplices(dim);
            for (i, s) in simplices.iter().enumerate() {
                for (j, t) in simplices.iter().enumerate() {
                    let local = ok(laplacian_entry(&k, dim, s, t))?;
                    ensure!(local == lap.get(i, j), "graph {trial}, k={dim}, entry ({i},{j})");
                    entries += 1;
                }
            }
        }
    }
    Ok(format!("{entries} entries match exactly"))
}

fn pairing() -> Outcome {
    let mut cases = vec![("bowtie", bowtie()), ("K3", complete_graph(3)), ("hexagon", ok(hexagon())?)];
    for s in ["|0>", "|1>", "|0>-|1>", "|0>+2|1>"] {
        cases.push((s, ok(gadget_graph(&state(s)))?));
    }
    let mut worst = 0.0f64;
    for (name, g) in &cases {
        let k = full(g)?;
        for lambda in [1.0, 0.3, 0.1] {
            let r = ok(pairing_check(&k, lambda))?;
            ensure!(r.all_paired(1e-8), "{name} at {lambda}: mismatch {:e}", r.max_mismatch());
            worst = worst.max(r.max_mismatch());
        }
    }
    Ok(format!("{} complexes, worst relative mismatch {worst:.1e}", cases.len()))
}

fn gadget_homology() -> Outcome {
    let oracle = common::oracle();
    for s in GADGET_STATES {
        let st = state(s);
        let k = full(&ok(gadget_graph(&st))?)?;
        let b = nonzero_betti(&k)?;
        let m = st.m() as isize;
        let expect = vec![(2 * m - 1, (1usize << m) - 1)];
        ensure!(b == expect, "{s}: betti {b:?}");
        ensure!(b == common::oracle_betti(&oracle["gadgets"][s]["betti"]), "{s}: oracle disagrees");
    }
    Ok("8 states give b_{2m-1} = 2^m - 1 only".into())
}

fn boundary_of(k: &CliqueComplex, dim: isize, w: &[BigRational]) -> Result<Vec<BigRational>, String> {
    let rows = ok(coboundary_rows(k, dim))?;
    let mut out = vec![BigRational::zero(); k.count(dim)];
    for (r, x) in rows.iter().zip(w) {
        for (c, v) in r {
            out[*c] += x * BigRational::from_integer(v.clone());
        }
    }
    Ok(out)
}

fn filled_cycles() -> Outcome {
    let mut others = 0;
    for s in GADGET_STATES {
        let st = state(s);
        let k = full(&ok(gadget_graph(&st))?)?;
        let phi = ok(state_chain(&st, &k))?;
        let check = ok(cycle_is_boundary(&k, &phi))?;
        let w = check.witness.ok_or(format!("{s}: no witness"))?;
        let back = boundary_of(&k, phi.dim, &w)?;
        let target: Vec<BigRational> = phi.coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        ensure!(back == target, "{s}: witness boundary differs from the state chain");
        if st.is_basis() {
            let m = st.m();
            for z in 0..1usize << m {
                let bits = format!("{z:0m$b}");
                if st.amplitude(&bits) != 0 {
                    continue;
                }
                let c = ok(ok(basis_cycle(m, &bits))?.chain(&k))?;
                ensure!(!ok(cycle_is_boundary(&k, &c))?.is_boundary, "{s}: |{bits}> bounds");
                others += 1;
            }
        }
    }
    Ok(format!("8 witnesses verified, {others} other basis cycles stay open"))
}

fn hexagon_pages() -> Outcome {
    let k = full(&ok(hexagon())?)?;
    let f = ok(filtration(&k))?;
    let expected: [&[((isize, u32), usize)]; 3] = [
        &[
            ((-1, 0), 1),
            ((0, 0), 6),
            ((0, 1), 7),
            ((1, 0), 6),
            ((1, 1), 12),
            ((1, 2), 12),
            ((2, 1), 6),
            ((2, 2), 6),
            ((2, 3), 6),
        ],
        &[((0, 1), 1), ((1, 0), 1), ((1, 2), 6), ((2, 3), 6)],
        &[((1, 0), 1), ((2, 3), 1)],
    ];
    let pages: Vec<_> = (0..5).map(|j| ok(f.page(j))).collect::<Result<_, _>>()?;
    for (j, exp) in expected.iter().enumerate() {
        ensure!(pages[j].nonzero() == exp.to_vec(), "page {j}: {:?}", pages[j].nonzero());
    }
    ensure!(pages[3].same_dims(&pages[2]), "page 3 differs from page 2");
    ensure!(pages[4].nonzero().is_empty(), "page 4: {:?}", pages[4].nonzero());
    Ok("pages 0, 1, 2 match; page 3 = page 2; page 4 empty".into())
}

fn forman() -> Outcome {
    let cases = [
        ("hexagon", ok(hexagon())?),
        ("|0>", ok(gadget_graph(&state("|0>")))?),
        ("|0>-|1>", ok(gadget_graph(&state("|0>-|1>")))?),
    ];
    let mut summary = Vec::new();
    for (name, g) in &cases {
        let k = full(g)?;
        for dim in -1..=k.top_dim() {
            let r = ok(forman_compare(&k, dim, &DEFAULT_GRID))?;
            ensure!(r.agrees(), "{name}, k={dim}:\n{r}");
        }
        summary.push(*name);
    }
    Ok(format!("all degrees agree on {}", summary.join(", ")))
}

fn scaling() -> Outcome {
    let oracle = common::oracle();
    let g = ok(gadget_graph(&state("|0>")))?;
    let k = full(&g)?;
    let center = k.vertex("g.v0").ok_or("no center vertex")?;
    let bulk = k.simplices(1).iter().filter(|s| s.contains(&center)).count();
    let t = ok(sweep(&k, 1, &DEFAULT_GRID))?;
    let six = t.count_near(6.0, 0.5);
    let two = t.count_near(2.0, 0.5);
    ensure!(six == 1, "{six} branches near 6");
    ensure!(two == bulk, "{two} branches near 2, {bulk} bulk edges");
    let rest: Vec<f64> =
        t.branches.iter().filter_map(|b| b.slope).filter(|s| (s - 6.0).abs() > 0.5 && (s - 2.0).abs() > 0.5).collect();
    let worst = rest.iter().fold(0.0f64, |a, s| a.max(s.abs()));
    ensure!(worst <= 0.3, "remaining slope {worst}");
    let classes = &oracle["gadget0_classes_k1"];
    ensure!(
        classes["6"] == 1 && classes["2"] == bulk as u64 && classes["0"] == rest.len() as u64,
        "oracle classes {classes}"
    );
    Ok(format!("1 at 6, {two} at 2, {} near 0 (max |slope| {worst:.3})", rest.len()))
}

fn harmonic_angle() -> Outcome {
    let st = state("|0>-|1>");
    let k = full(&ok(gadget_graph(&st))?)?;
    let mut u = vec![0.0; k.count(1)];
    for z in ["0", "1"] {
        let c = ok(ok(basis_cycle(1, z))?.chain(&k))?;
        for (a, b) in u.iter_mut().zip(&c.coeffs) {
            *a += *b as f64;
        }
    }
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let angle = |lambda: f64| -> Result<f64, String> {
        let h = ok(harmonic_basis(&k, 1, lambda, None))?;
        ensure!(h.dim() == 1, "kernel of dimension {}", h.dim());
        let dot: f64 = h.vectors[0].iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() / norm;
        Ok(dot.abs().min(1.0).acos())
    };
    let (a1, a2) = (angle(0.1)?, angle(0.2)?);
    let ratio = a1 / a2;
    ensure!((1.0 / 2.6..=1.0 / 1.4).contains(&ratio), "angles {a1:e}, {a2:e}, ratio {ratio}");
    Ok(format!("angle(0.1) = {a1:.4e}, angle(0.2) = {a2:.4e}, ratio {ratio:.4}"))
}

fn padded_kernels() -> Outcome {
    let oracle = common::oracle();
    let mut parts = Vec::new();
    for (m, n) in [(1usize, 1usize), (1, 2), (2, 2)] {
        let g = ok(padded_gadget_graph(&state(&format!("|{}>", "0".repeat(m))), n))?;
        let b = ok(betti_table(&full(&g)?))?.get(2 * n as isize - 1);
        let expect = ((1usize << m) - 1) << (n - m);
        ensure!(b == expect, "(m,n) = ({m},{n}): kernel {b}, expected {expect}");
        ensure!(oracle["padded_kernel"][format!("{m},{n}")] == b as u64, "oracle disagrees at ({m},{n})");
        parts.push(format!("({m},{n}) -> {b}"));
    }
    Ok(parts.join(", "))
}

fn end_to_end() -> Outcome {
    let oracle = common::oracle();
    let yes = Hamiltonian::parse(r#"{"n":1,"terms":[{"support":[0],"amps":{"0":1}}]}"#).map_err(|e| e.to_string())?;
    let d = ok(decide(&yes, 1.0, 0.1))?;
    ensure!(d.verdict == Verdict::Yes && d.betti > 0 && d.lambda_min.is_none(), "single projector: {d}");
    let no = Hamiltonian::parse(r#"{"n":1,"terms":[{"support":[0],"amps":{"0":1}},{"support":[0],"amps":{"1":1}}]}"#)
        .map_err(|e| e.to_string())?;
    let d = ok(decide(&no, 1.0, 0.1))?;
    let sched = ok(schedule(1.0, 2, 1, 0.1))?;
    ensure!(
        (sched.lambda - 0.05).abs() < 1e-15 && (sched.e - 0.05 * 0.05f64.powi(6)).abs() < 1e-24,
        "schedule {sched:?}"
    );
    ensure!(d.schedule == sched, "decision used {:?}", d.schedule);
    let low = d.lambda_min.ok_or("no eigenvalue for the NO instance")?;
    ensure!(d.verdict == Verdict::No && low >= sched.e, "{d}");
    let expect = oracle["reduce"]["two_term_lambda_min"].as_f64().unwrap();
    ensure!((low - expect).abs() <= 1e-6 * expect, "lambda_min {low:e} vs oracle {expect:e}");
    let r = ok(reduce(&no))?;
    let k = full(&r.graph)?;
    let mut rng = common::rng(14);
    let mut worst = 0.0f64;
    for lambda in [0.05, 0.3, 1.0] {
        let psi: Vec<f64> = (0..k.count(r.k)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = ok(up_laplacian_additivity(&r, lambda, &psi))?;
        worst = worst.max(a.discrepancy());
    }
    ensure!(worst <= 1e-10, "additivity discrepancy {worst:e}");
    Ok(format!("YES exact; NO with lambda_min {low:.4e} >= E {:.4e}; additivity {worst:.1e}", sched.e))
}

fn embedded() -> Outcome {
    let k = full(&bowtie())?;
    let n = k.vertex_count();
    let a = 10.0;
    let mut rng = common::rng(15);
    let (mut clique_pairs, mut penalties) = (0, 0);
    let random_bits = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<bool> { (0..n).map(|_| rng.gen_bool(0.4)).collect() };
    let simplex_bits = |s: &Simplex| -> Vec<bool> { (0..n as u32).map(|v| s.contains(&v)).collect() };
    for trial in 0..200 {
        let dim: isize = rng.gen_range(-1..=1);
        let lambda = rng.gen_range(0.05..=1.0);
        let simplices = k.simplices(dim);
        let x = if rng.gen_bool(0.6) {
            simplex_bits(&simplices[rng.gen_range(0..simplices.len())])
        } else {
            random_bits(&mut rng)
        };
        let y = match rng.gen_range(0..3) {
            0 => x.clone(),
            1 => simplex_bits(&simplices[rng.gen_range(0..simplices.len())]),
            _ => random_bits(&mut rng),
        };
        let got = ok(embedded_entry(&k, dim, &x, &y, a, lambda))?;
        let find = |b: &[bool]| -> Option<usize> {
            let s = Simplex::new((0..n as u32).filter(|&v| b[v as usize]).collect());
            (s.dim() == dim).then(|| k.index_of(&s)).flatten()
        };
        let expect = match (find(&x), find(&y)) {
            (Some(i), Some(j)) => {
                clique_pairs += 1;
                ok(ok(laplacian(&k, dim))?.evaluate(lambda))?.get(i, j)
            }
            _ if x == y => {
                penalties += 1;
                a
            }
            _ => 0.0,
        };
        ensure!((got - expect).abs() <= 1e-12 * expect.abs().max(1.0), "pair {trial}: {got} vs {expect}");
    }
    Ok(format!("200 pairs: {clique_pairs} clique pairs, {penalties} penalty diagonals"))
}

fn main() {
    let criteria: [Criterion; 15] = [
        ("bowtie", bowtie_counts),
        ("octahedra", octahedra),
        ("kunneth", kunneth),
        ("thickening", thickening),
        ("entry formula", entry_formula),
        ("pairing", pairing),
        ("gadget homology", gadget_homology),
        ("filled cycles bound", filled_cycles),
        ("hexagon pages", hexagon_pages),
        ("forman comparison", forman),
        ("scaling exponents", scaling),
        ("harmonic angle", harmonic_angle),
        ("padded kernels", padded_kernels),
        ("end to end", end_to_end),
        ("embedded operator", embedded),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
