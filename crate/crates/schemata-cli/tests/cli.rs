use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schemata")).args(args).current_dir(root()).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn tmp(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("schemata-cli-{}-{}", std::process::id(), name));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_exit_codes() {
    assert_eq!(run(&["verify", "fixtures/eqrefl_gen.fol"]).status.code(), Some(0));
    let text = std::fs::read_to_string(root().join("fixtures/eqrefl_gen.fol")).unwrap();
    let bad = tmp("bad.fol", &text.replace("2: A. x0 x0 = x0", "2: A. x0 x0 = x1"));
    let o = run(&["--json", "verify", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&o);
    assert_eq!(j["kind"], "LineMismatch");
    assert_eq!(j["location"]["line"], 6);
    let unknown = tmp("unknown.fol", "scheme a { axioms: mp ; concl: x0 = x0 ; proof: 1: x0 = x0 by EQrefl }");
    let o = run(&["--json", "verify", &unknown]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["kind"], "UnknownAxiom");
    assert_eq!(run(&["verify", "no/such/file.fol"]).status.code(), Some(2));
}

#[test]
fn decide_and_transform() {
    let o = run(&["decide", "( A. x0 x0 = x0 -> x0 = x0 )"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("true"));
    let o = run(&["--json", "decide", "-. A. x0 x0 = x1", "--dv", "x0 x1"]);
    let j = json(&o);
    assert_eq!(j["truth"], false);
    assert_eq!(j["per_size"][1], serde_json::json!([2, true]));
    let o = run(&["transform", "0", "1", "( A. x0 A. x1 x2 = x3 -> A. x1 A. x0 x2 = x3 )"]);
    assert_eq!(stdout(&o).trim(), "( A. x0 A. x0 x2 = x3 -> A. x1 A. x0 x2 = x3 )");
    assert_eq!(run(&["transform", "0", "1", "ALLcomm", "--dv", "x0 x1"]).status.code(), Some(1));
    let o = run(&["instantiate", "ALLcomm", "--sub", "f0 := x2 = x3"]);
    assert_eq!(stdout(&o).trim(), "( A. x0 A. x1 x2 = x3 -> A. x1 A. x0 x2 = x3 )");
    assert_eq!(run(&["decide", "spec"]).status.code(), Some(2));
}

#[test]
fn max_domain_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_schemata"))
        .args(["--json", "decide", "-. A. x0 x0 = x1", "--dv", "x0 x1"])
        .env("SCHEMATA_MAX_DOMAIN", "1")
        .output()
        .unwrap();
    let j = json(&o);
    assert_eq!(j["bounds"]["max_domain"], 1);
    assert_eq!(j["exact"], false);
}

#[test]
fn search_and_catalog() {
    let o = run(&["search-table", "--values", "2", "--validate", "mp,K,I", "--falsify", "minimp"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("none (exhaustive"));
    let o = run(&["--json", "axioms", "--system", "modK"]);
    assert_eq!(json(&o)["axioms"].as_array().unwrap().len(), 7);
    assert_eq!(run(&["axioms", "nosuch"]).status.code(), Some(2));
}

#[test]
fn certificates_and_microkernel() {
    assert_eq!(run(&["check-cert", "fixtures/certs.fol"]).status.code(), Some(0));
    assert_eq!(run(&["check-cert", "fixtures/supercerts.fol"]).status.code(), Some(0));
    assert_eq!(run(&["check-cert", "fixtures/certs.fol", "--only", "nosuch"]).status.code(), Some(2));
    let o = run(&["--json", "mm-verify", "fixtures/appendix_a.mm"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["incomplete"], serde_json::json!(["nn"]));
}

#[test]
fn suite_runs() {
    let o = run(&["suite"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count() >= 40);
    let o = run(&["--json", "suite", "--only", "indep-gen", "--bounds", "height=2"]);
    let j = json(&o);
    assert_eq!(j["results"][0]["status"], "pass");
    assert_eq!(j["results"][0]["bounds"], "height=2");
    assert_eq!(run(&["suite", "--bounds", "depth=2"]).status.code(), Some(2));
}
