//! Command-line front end.
//!
//! Every command renders into a buffer that goes to `--out` or stdout.
//! Exit codes: 0 success, 1 usage, 2 computation error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::complex::{CliqueComplex, DEFAULT_CAP};
use crate::error::Error;
use crate::gadgets::{self, IntegerState};
use crate::graph::{self, parse_graph, WeightedGraph};
use crate::homology::{betti, betti_table, cycle_is_boundary, euler_characteristic};
use crate::operators::laplacian;
use crate::reduction::{self, decide_reduced, schedule, sig10, Hamiltonian, DEFAULT_C};
use crate::specseq::{filtration, forman_compare, FORMAN_SLOPE_TOL};
use crate::spectra::{self, DEFAULT_GRID};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "HOMOLOGY_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "homology-lab", version, about = "Weighted clique complexes, Laplacians and homology gadgets")]
pub struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit a fixture graph as JSON (`list` shows the names).
    Fixtures(FixturesArgs),
    /// Reduced Betti numbers and Euler characteristic.
    Betti(BettiArgs),
    /// Laplacian spectrum at one λ or branch slopes over a grid.
    Spectrum(SpectrumArgs),
    /// Pages of the weight spectral sequence.
    Specseq(SpecseqArgs),
    /// Reduce a Hamiltonian to a weighted graph.
    Reduce(ReduceArgs),
    /// Decide a Hamiltonian through its reduction.
    Decide(DecideArgs),
    /// Build, glue and check the gadget of an integer state.
    VerifyGadget(VerifyArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct ComplexArgs {
    /// Graph JSON file, `-` for stdin.
    pub graph: PathBuf,
    /// Build cliques only up to this dimension.
    #[arg(long)]
    pub max_dim: Option<usize>,
    /// Maximum number of simplices to enumerate.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct FixturesArgs {
    /// bowtie, hexagon, octahedron N, qubit N, cycle N, complete N,
    /// gadget STATE, blueprint STATE, catalog, list
    pub name: String,
    pub arg: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BettiArgs {
    #[command(flatten)]
    pub complex: ComplexArgs,
    /// Degree, or `all`.
    #[arg(long, default_value = "all")]
    pub k: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub complex: ComplexArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub k: isize,
    #[arg(long, conflicts_with = "grid")]
    pub lambda: Option<f64>,
    /// Comma-separated λ values, or `default`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Only the lowest eigenvalues (iterative above the dense cap).
    #[arg(long)]
    pub count: Option<usize>,
    /// Slope tolerance for branch classes.
    #[arg(long, default_value_t = FORMAN_SLOPE_TOL)]
    pub tol: f64,
    /// Write `Δ^k` as a λ-monomial coordinate file.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SpecseqArgs {
    #[command(flatten)]
    pub complex: ComplexArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<isize>,
    /// Last page to print (default: the latest stabilization page).
    #[arg(long)]
    pub j_max: Option<usize>,
    /// Compare page totals with eigenvalue branches (needs --k).
    #[arg(long)]
    pub forman: bool,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// Hamiltonian JSON file, `-` for stdin.
    pub hamiltonian: PathBuf,
    #[arg(long, default_value_t = DEFAULT_C)]
    pub c: f64,
    /// Promise gap.
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    /// Also decide the reduced instance.
    #[arg(long)]
    pub decide: bool,
}

#[derive(Args, Debug)]
pub struct DecideArgs {
    pub hamiltonian: PathBuf,
    #[arg(long, default_value_t = DEFAULT_C)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// State such as `|00>-|11>`, `0:1,1:-1`, or a catalog name.
    pub state: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

impl From<std::fmt::Error> for Failure {
    fn from(e: std::fmt::Error) -> Self {
        Failure::Compute(Error::Internal(e.to_string()))
    }
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Compute(e) => write!(f, "error: {e}"),
        }
    }
}

type Out = std::result::Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("{f}");
        return f.code();
    }
    match execute(&cli.command).and_then(|text| emit(cli.out.as_deref(), &text)) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("{f}");
            f.code()
        }
    }
}

fn configure_threads() -> std::result::Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
    // A second initialization in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).and_then(|_| so.flush()).map_err(|e| Failure::Compute(e.into()))
        }
    }
}

pub fn execute(cmd: &Command) -> Out {
    match cmd {
        Command::Fixtures(a) => fixtures(a),
        Command::Betti(a) => cmd_betti(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Specseq(a) => cmd_specseq(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Decide(a) => cmd_decide(a),
        Command::VerifyGadget(a) => cmd_verify(a),
    }
}

fn read_input(path: &Path) -> std::result::Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_complex(a: &ComplexArgs) -> std::result::Result<(WeightedGraph, CliqueComplex), Failure> {
    let g = parse_graph(&read_input(&a.graph)?)?;
    let k = CliqueComplex::build(&g, a.max_dim, a.cap)?;
    Ok((g, k))
}

fn parse_lambda(l: f64) -> std::result::Result<f64, Failure> {
    if l > 0.0 && l <= 1.0 {
        Ok(l)
    } else {
        Err(usage(format!("--lambda must lie in (0, 1], got {l}")))
    }
}

fn parse_grid(text: Option<&str>) -> std::result::Result<Vec<f64>, Failure> {
    match text {
        None | Some("default") => Ok(DEFAULT_GRID.to_vec()),
        Some(s) => s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| usage(format!("bad grid value `{t}`"))).and_then(parse_lambda))
            .collect(),
    }
}

fn parse_state(s: &str) -> std::result::Result<IntegerState, Failure> {
    IntegerState::parse(s)
        .or_else(|e| gadgets::lookup(s).ok_or(e))
        .map_err(|e| usage(format!("`{s}` is neither a state nor a catalog name ({e})")))
}

fn size_arg(name: &str, arg: Option<&str>) -> std::result::Result<usize, Failure> {
    arg.ok_or_else(|| usage(format!("fixture `{name}` needs a size")))?
        .parse()
        .map_err(|_| usage(format!("fixture `{name}` needs a numeric size")))
}

const FIXTURES: &str =
    "bowtie\nhexagon\noctahedron N\nqubit N\ncycle N\ncomplete N\ngadget STATE\nblueprint STATE\ncatalog\n";

fn fixtures(a: &FixturesArgs) -> Out {
    let arg = a.arg.as_deref();
    let g = match a.name.as_str() {
        "list" => return Ok(FIXTURES.to_string()),
        "catalog" => return catalog_text(a.format),
        "bowtie" => graph::bowtie(),
        "hexagon" => gadgets::hexagon()?,
        "octahedron" => graph::octahedron(size_arg("octahedron", arg)?)?,
        "qubit" => graph::qubit_graph(size_arg("qubit", arg)?)?,
        "cycle" => graph::cycle_graph(size_arg("cycle", arg)?, "c")?,
        "complete" => graph::complete_graph(size_arg("complete", arg)?),
        "gadget" => {
            let s = parse_state(arg.ok_or_else(|| usage("fixture `gadget` needs a state"))?)?;
            gadgets::gadget_graph(&s)?
        }
        "blueprint" => {
            let s = parse_state(arg.ok_or_else(|| usage("fixture `blueprint` needs a state"))?)?;
            return Ok(gadgets::gadget(&s)?.to_json()? + "\n");
        }
        other => return Err(usage(format!("unknown fixture `{other}`; try `fixtures list`"))),
    };
    Ok(g.to_json() + "\n")
}

fn catalog_text(format: Format) -> std::result::Result<String, Failure> {
    let entries = gadgets::catalog();
    let mut s = String::new();
    match format {
        Format::Json => {
            let v: Vec<_> =
                entries.iter().map(|e| json!({"name": e.name, "term": e.term, "state": e.state.to_string()})).collect();
            s = serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n";
        }
        Format::Csv => {
            writeln!(s, "name,state")?;
            for e in &entries {
                writeln!(s, "{},\"{}\"", e.name, e.state)?;
            }
        }
        Format::Text => {
            for e in &entries {
                writeln!(s, "{:<10} {:<22} {}", e.name, e.state.to_string(), e.term)?;
            }
        }
    }
    Ok(s)
}

fn cmd_betti(a: &BettiArgs) -> Out {
    let (_, k) = load_complex(&a.complex)?;
    let rows: Vec<(isize, usize)> = if a.k == "all" {
        let t = betti_table(&k)?;
        (0..t.betti.len()).map(|i| (i as isize + t.start, t.betti[i])).collect()
    } else {
        let d: isize = a.k.parse().map_err(|_| usage(format!("--k must be an integer or `all`, got `{}`", a.k)))?;
        vec![(d, betti(&k, d)?)]
    };
    let euler = if k.is_complete() { Some(euler_characteristic(&k)?) } else { None };
    let mut s = String::new();
    match a.format {
        Format::Csv => {
            writeln!(s, "k,betti")?;
            for (d, b) in &rows {
                writeln!(s, "{d},{b}")?;
            }
        }
        Format::Json => {
            let betti: Vec<_> = rows.iter().map(|(d, b)| json!({"k": d, "betti": b})).collect();
            let v = json!({
                "betti": betti,
                "euler": euler.map(|e| e.unreduced),
                "reduced_euler": euler.map(|e| e.reduced),
            });
            s = serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n";
        }
        Format::Text => {
            writeln!(s, "{:>4} {:>8}", "k", "betti")?;
            for (d, b) in &rows {
                writeln!(s, "{d:>4} {b:>8}")?;
            }
            if let Some(e) = euler {
                writeln!(s, "euler {}  reduced {}", e.unreduced, e.reduced)?;
            }
        }
    }
    Ok(s)
}

fn cmd_spectrum(a: &SpectrumArgs) -> Out {
    if a.lambda.is_none() && a.grid.is_none() {
        return Err(usage("spectrum needs --lambda or --grid"));
    }
    let (_, k) = load_complex(&a.complex)?;
    if let Some(path) = &a.dump {
        let file = std::fs::File::create(path).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        laplacian(&k, a.k)?.write_matrix_market(std::io::BufWriter::new(file))?;
    }
    let mut s = String::new();
    if let Some(l) = a.lambda {
        let l = parse_lambda(l)?;
        let rep = match a.count {
            Some(c) => spectra::spectrum_low(&k, a.k, l, c)?,
            None => spectra::spectrum(&k, a.k, l)?,
        };
        match a.format {
            Format::Text => {
                let vals: Vec<String> = rep.eigenvalues.iter().map(|&v| sig10(v)).collect();
                writeln!(s, "{}", vals.join(" "))?;
            }
            Format::Csv => {
                writeln!(s, "index,eigenvalue")?;
                for (i, v) in rep.eigenvalues.iter().enumerate() {
                    writeln!(s, "{i},{v:.15e}")?;
                }
            }
            Format::Json => {
                let v = json!({
                    "k": rep.k, "lambda": rep.lambda, "eigenvalues": rep.eigenvalues,
                    "lambda_min": rep.lambda_min, "zero_multiplicity": rep.zero_multiplicity,
                });
                s = serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n";
            }
        }
        return Ok(s);
    }
    let grid = parse_grid(a.grid.as_deref())?;
    let table = spectra::sweep(&k, a.k, &grid)?;
    match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf, a.tol)?;
            s = String::from_utf8(buf).map_err(|e| Error::Internal(e.to_string()))?;
        }
        Format::Json | Format::Text => {
            let classes = table.classify(a.tol)?;
            if a.format == Format::Json {
                let rows: Vec<_> = table
                    .branches
                    .iter()
                    .zip(&classes)
                    .map(|(b, c)| json!({"values": b.values, "slope": b.slope, "class": c.to_string()}))
                    .collect();
                let v = json!({"k": table.k, "grid": table.grid, "branches": rows});
                s = serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n";
            } else {
                let mut counts = std::collections::BTreeMap::new();
                for c in &classes {
                    *counts.entry(*c).or_insert(0usize) += 1;
                }
                writeln!(s, "k = {}, {} branches over grid {:?}", table.k, classes.len(), table.grid)?;
                for (c, n) in counts {
                    writeln!(s, "{c:>10} {n:>6}")?;
                }
            }
        }
    }
    Ok(s)
}

fn cmd_specseq(a: &SpecseqArgs) -> Out {
    let (_, k) = load_complex(&a.complex)?;
    if a.forman {
        let dim = a.k.ok_or_else(|| usage("--forman needs --k"))?;
        let grid = parse_grid(a.grid.as_deref())?;
        let rep = forman_compare(&k, dim, &grid)?;
        let verdict = if rep.agrees() { "agree" } else { "differ" };
        return Ok(format!("{rep}counts {verdict}\n"));
    }
    let f = filtration(&k)?;
    let ks: Vec<isize> = match a.k {
        Some(d) => vec![d],
        None => (0..=f.top_dim()).collect(),
    };
    let stabs: Vec<_> = ks.iter().map(|&d| (d, f.stabilized_dims(d))).collect();
    let settled = stabs.iter().map(|(_, st)| st.as_ref().map(|st| st.page)).collect::<std::result::Result<Vec<_>, _>>();
    let j_max = a.j_max.unwrap_or_else(|| match settled {
        Ok(pages) => pages.into_iter().max().unwrap_or(1),
        Err(_) => f.max_exponent() as usize + 3,
    });
    let mut s = String::new();
    let mut csv_out = Vec::new();
    for j in 0..=j_max {
        let mut page = f.page(j)?;
        if let Some(d) = a.k {
            page.dims.retain(|key, _| key.0 == d);
        }
        match a.format {
            Format::Csv => page.write_csv(&mut csv_out, j == 0)?,
            _ => writeln!(s, "{page}")?,
        }
    }
    if a.format == Format::Csv {
        return String::from_utf8(csv_out).map_err(|e| Error::Internal(e.to_string()).into());
    }
    for (d, st) in stabs {
        match st {
            Ok(st) => {
                let dims: Vec<String> = st.dims.iter().map(usize::to_string).collect();
                writeln!(s, "k = {d}: totals {} ; beta = {} ; stable from page {}", dims.join(" "), st.beta, st.page)?
            }
            Err(e) => writeln!(s, "k = {d}: {e}")?,
        }
    }
    Ok(s)
}

fn load_hamiltonian(p: &Path) -> std::result::Result<Hamiltonian, Failure> {
    Hamiltonian::parse(&read_input(p)?).map_err(Failure::from)
}

fn check_constants(g: f64, c: f64) -> std::result::Result<(), Failure> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(usage(format!("--g must be positive, got {g}")));
    }
    if !(c > 0.0 && c <= 1.0) {
        return Err(usage(format!("--c must lie in (0, 1], got {c}")));
    }
    Ok(())
}

fn cmd_reduce(a: &ReduceArgs) -> Out {
    check_constants(a.g, a.c)?;
    let h = load_hamiltonian(&a.hamiltonian)?;
    let sched = schedule(a.g, h.t(), h.locality().max(1), a.c)?;
    let r = reduction::reduce(&h)?;
    eprintln!(
        "reduced {} terms on {} qubits: {} vertices, k = {}, lambda = {}, E = {}",
        h.t(),
        h.n,
        r.graph.vertex_count(),
        r.k,
        sig10(sched.lambda),
        sig10(sched.e)
    );
    if a.decide {
        eprint!("{}", decide_reduced(&r, sched)?);
    }
    Ok(serde_json::to_string_pretty(&r.to_doc(Some(&sched))).map_err(Error::from)? + "\n")
}

fn cmd_decide(a: &DecideArgs) -> Out {
    check_constants(a.g, a.c)?;
    let h = load_hamiltonian(&a.hamiltonian)?;
    let d = reduction::decide(&h, a.g, a.c)?;
    Ok(match a.format {
        Format::Json => serde_json::to_string_pretty(&d).map_err(Error::from)? + "\n",
        Format::Csv => format!(
            "verdict,k,betti,lambda,E,lambda_min\n{},{},{},{:e},{:e},{}\n",
            d.verdict,
            d.k,
            d.betti,
            d.schedule.lambda,
            d.schedule.e,
            d.lambda_min.map_or("0".to_string(), |v| format!("{v:e}"))
        ),
        Format::Text => d.to_string(),
    })
}

fn cmd_verify(a: &VerifyArgs) -> Out {
    let state = parse_state(&a.state)?;
    let m = state.m();
    let bp = gadgets::gadget(&state)?;
    let g = gadgets::glue(&graph::qubit_graph(m)?, &bp)?;
    let k = CliqueComplex::full(&g)?;
    let table = betti_table(&k)?;
    let top = 2 * m as isize - 1;
    let expected = (1usize << m) - 1;
    let found = table.get(top);
    let others_vanish = table.nonzero().iter().all(|&(d, _)| d == top);
    let bounds = cycle_is_boundary(&k, &gadgets::state_chain(&state, &k)?)?.is_boundary;
    let pass = found == expected && others_vanish && bounds;
    let mut s = String::new();
    match a.format {
        Format::Json => {
            let v = json!({
                "state": state.to_string(), "m": m, "vertices": g.vertex_count(),
                "gadget_vertices": bp.vertices.len(), "k": top, "betti": found, "expected": expected,
                "other_betti_vanish": others_vanish, "state_cycle_bounds": bounds, "pass": pass,
            });
            s = serde_json::to_string_pretty(&v).map_err(Error::from)? + "\n";
        }
        _ => {
            writeln!(s, "state       {state}")?;
            writeln!(s, "qubits      {m}")?;
            writeln!(s, "vertices    {} ({} in the gadget)", g.vertex_count(), bp.vertices.len())?;
            writeln!(s, "beta_{top} = {found} (expected {expected})")?;
            writeln!(s, "other reduced Betti numbers vanish: {}", if others_vanish { "yes" } else { "no" })?;
            writeln!(s, "state cycle is a boundary: {}", if bounds { "yes" } else { "no" })?;
            writeln!(s, "{}", if pass { "PASS" } else { "FAIL" })?;
        }
    }
    if pass {
        Ok(s)
    } else {
        eprint!("{s}");
        Err(Failure::Compute(Error::Internal(format!("gadget check failed for {state}"))))
    }
}
