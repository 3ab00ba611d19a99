use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const EXAMPLE6: &str = r#"{"product": {"p_s": ["0.1", "0.15", "0.2", "0.25", "0.1", "0.2"],
                        "p_d": ["0.1", "0.15", "0.2", "0.25", "0.1", "0.2"]}}"#;

fn cacd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cacd")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = cacd(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn build_example6(dir: &Path) -> String {
    let demand = dir.join("demand.json");
    fs::write(&demand, EXAMPLE6).unwrap();
    let out = dir.join("net");
    ok(&["build", "--demand", demand.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    out.to_str().unwrap().to_owned()
}

#[test]
fn build_writes_all_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example6(dir.path());
    let table = fs::read_to_string(Path::new(&out).join("code_table.csv")).unwrap();
    assert!(table.starts_with("i,p_i,F_i,Fbar_i,Fbar_i_binary,l_i,cw_i,x_i\n"));
    assert!(table.contains("4,0.25,0.7,0.575,0.1001001100,3,100,0.45\n"));
    let edges = fs::read_to_string(Path::new(&out).join("edges.csv")).unwrap();
    assert!(edges.starts_with("src,dst,type\n"));
    assert!(edges.lines().any(|l| l == "0,3,right"));
    let graph: serde_json::Value = serde_json::from_str(&fs::read_to_string(Path::new(&out).join("graph.json")).unwrap()).unwrap();
    assert_eq!(graph["nodes"].as_array().unwrap().len(), 6);
    assert_eq!(graph["nodes"][3]["cw"], "100");
    assert_eq!(graph["edges"].as_array().unwrap().len(), edges.lines().count() - 1);
}

#[test]
fn route_prints_trace() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example6(dir.path());
    let net = format!("{out}/graph.json");
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["route", "--net", &net, "--src", "5", "--dst", "3", "--mode", "fwd"])).unwrap();
    assert_eq!(v["trace"]["hops"], serde_json::json!([5, 2, 1, 3]));
    assert_eq!(v["trace"]["outcome"], "delivered");
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["route", "--net", &net, "--src", "3", "--dst", "5", "--mode", "bwd"])).unwrap();
    assert_eq!(v["trace"]["hops"], serde_json::json!([3, 1, 2, 5]));
}

#[test]
fn route_under_failures_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example6(dir.path());
    let net = format!("{out}/graph.json");
    let args = ["route", "--net", &net, "--src", "0", "--dst", "4", "--fail-prob", "0.3", "--seed", "9"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn tampered_graph_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example6(dir.path());
    let path = Path::new(&out).join("graph.json");
    let text = fs::read_to_string(&path).unwrap().replacen("\"cw\": \"100\"", "\"cw\": \"101\"", 1);
    fs::write(&path, text).unwrap();
    let res = cacd(&["route", "--net", path.to_str().unwrap(), "--src", "0", "--dst", "1"]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("codeword"));
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    let out = build_example6(dir.path());
    let net = format!("{out}/graph.json");
    assert!(!cacd(&["route", "--net", &net, "--src", "6", "--dst", "0"]).status.success());
    assert!(!cacd(&["experiment", "nope", "--out", out.as_str()]).status.success());
    let demand = dir.path().join("bad.json");
    fs::write(&demand, r#"{"product": {"p_s": ["0.5", "0.4"], "p_d": ["0.5", "0.5"]}}"#).unwrap();
    assert!(!cacd(&["build", "--demand", demand.to_str().unwrap(), "--out", out.as_str()]).status.success());
}

#[test]
fn experiment_writes_csvs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"n": 24, "trials": 2, "exponents": [0.5, 1.5]}"#).unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        ok(&["experiment", "epl", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--seed", "4"]);
        out
    };
    let (a, b) = (run("a"), run("b"));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["experiment"], "epl");
    assert_eq!(manifest["seed"], 4);
    for f in manifest["files"].as_array().unwrap() {
        let f = f.as_str().unwrap();
        assert_eq!(fs::read_to_string(a.join(f)).unwrap(), fs::read_to_string(b.join(f)).unwrap(), "{f} differs");
    }
    let trials = fs::read_to_string(a.join("epl_trials.csv")).unwrap();
    assert_eq!(trials.lines().count(), 1 + 2 * 2);
}
