use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_homology-lab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("HOMOLOGY_LAB_THREADS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(format!("{name}.json"));
    let p = path.to_str().unwrap().to_string();
    let mut full = vec!["--out", &p, "fixtures"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    p
}

#[test]
fn betti_of_bowtie() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path(), "bowtie", &["bowtie"]);
    let o = run(&["betti", &g, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "k,betti\n-1,0\n0,0\n1,2\n");
}

#[test]
fn triangle_spectrum_is_three() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path(), "k3", &["complete", "3"]);
    let o = run(&["spectrum", &g, "--k", "1", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3 3 3");
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path(), "k3", &["complete", "3"]);
    assert_eq!(run(&["spectrum", &g, "--k", "1", "--lambda", "0"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", &g, "--k", "1", "--lambda", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let missing = run(&["betti", "/nonexistent/graph.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stderr(&missing).contains("/nonexistent/graph.json"));
    let o = Command::new(BIN).args(["betti", &g]).env("HOMOLOGY_LAB_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn computation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"vertices\":").unwrap();
    assert_eq!(run(&["betti", bad.to_str().unwrap()]).status.code(), Some(2));
    let cnot = run(&["verify-gadget", "CNOT1"]);
    assert_eq!(cnot.status.code(), Some(2));
    let ext = run(&["verify-gadget", "|000>+|111>"]);
    assert_eq!(ext.status.code(), Some(2));
    assert!(stderr(&ext).contains("extension point"));
}

#[test]
fn gadgets_verify() {
    for s in ["|0>", "|0>-|1>", "|00>", "Hclock1"] {
        let o = run(&["verify-gadget", s]);
        assert_eq!(o.status.code(), Some(0), "{s}: {}", stderr(&o));
        assert_eq!(stdout(&o).lines().last(), Some("PASS"), "{s}");
    }
}

#[test]
fn decide_answers_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let yes = dir.path().join("yes.json");
    let no = dir.path().join("no.json");
    std::fs::write(&yes, r#"{"n":1,"terms":[{"support":[0],"amps":{"0":1}}]}"#).unwrap();
    std::fs::write(&no, r#"{"n":1,"terms":[{"support":[0],"amps":{"0":1}},{"support":[0],"amps":{"1":1}}]}"#).unwrap();
    let o = run(&["decide", yes.to_str().unwrap(), "--g", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("verdict      YES"));
    let o = run(&["decide", no.to_str().unwrap(), "--g", "1", "--c", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("verdict      NO"), "{text}");
    assert!(text.contains("E            7.8125e-10"));
    let o = run(&["decide", no.to_str().unwrap(), "--g", "1", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["verdict"], "No");
}

#[test]
fn reduce_writes_namespaced_graph() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    std::fs::write(&h, r#"{"n":2,"terms":[{"support":[1],"amps":{"0":1,"1":-1}}]}"#).unwrap();
    let o = run(&["reduce", h.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let labels: Vec<&str> = doc["vertices"].as_array().unwrap().iter().map(|v| v["id"].as_str().unwrap()).collect();
    assert!(labels.iter().any(|l| l.starts_with("t0.")));
    assert_eq!(doc["meta"]["reduction"]["n"], 2);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path(), "hex", &["hexagon"]);
    let outputs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .flat_map(|t| {
            let g = g.clone();
            (0..2).map(move |_| {
                let o = Command::new(BIN)
                    .args(["specseq", &g, "--k", "1", "--format", "csv"])
                    .env("HOMOLOGY_LAB_THREADS", t)
                    .output()
                    .unwrap();
                assert_eq!(o.status.code(), Some(0));
                o.stdout
            })
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let a = run(&["fixtures", "gadget", "|00>-|11>"]);
    let b = run(&["fixtures", "gadget", "|00>-|11>"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_csv_has_one_row_per_branch() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path(), "g0", &["gadget", "|0>"]);
    let o = run(&["spectrum", &g, "--k", "1", "--grid", "default", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 24);
    assert_eq!(text.lines().filter(|l| l.ends_with(",6")).count(), 1);
}

#[test]
fn matrix_market_dump() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture(dir.path(), "k3", &["complete", "3"]);
    let dump = dir.path().join("lap.mtx");
    let o = run(&["spectrum", &g, "--k", "0", "--lambda", "1", "--dump", dump.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(dump).unwrap();
    assert!(text.lines().next().unwrap().starts_with('%'));
}
