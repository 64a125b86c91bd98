//! End-to-end runs of the binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matchforge")).current_dir(dir).args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn petersen(dir: &Path) {
    let o = run(dir, &["gen", "petersen", "-o", "p.txt"]);
    assert!(o.status.success());
}

#[test]
fn gen_writes_edges_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    petersen(dir.path());
    let text = std::fs::read_to_string(dir.path().join("p.txt")).unwrap();
    assert!(text.starts_with("10 15\n"));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.txt.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["flags"]["snark"], true);

    let o = run(dir.path(), &["gen", "k4"]);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("4 6"));
}

#[test]
fn eta_exact_petersen() {
    let dir = tempfile::tempdir().unwrap();
    petersen(dir.path());
    let o = run(dir.path(), &["eta", "exact", "p.txt"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["value"]["num"], "1");
    assert_eq!(v["value"]["den"], "3");
    assert_eq!(v["manifest"]["input_hashes"]["p.txt"].as_str().unwrap().len(), 64);

    let pinned = json(&run(dir.path(), &["eta", "exact", "p.txt", "--method", "pinned"]));
    assert_eq!(pinned["value"], v["value"]);
}

#[test]
fn bounds_verify_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    petersen(dir.path());
    let o = run(dir.path(), &["eta", "bounds", "p.txt"]);
    assert!(o.status.success());
    std::fs::write(dir.path().join("b.json"), &o.stdout).unwrap();
    let o = run(dir.path(), &["cert", "verify", "b.json", "p.txt"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["accepted"], true);

    // claim a better upper bound than the matching supports
    let mut v = json(&run(dir.path(), &["eta", "bounds", "p.txt"]));
    let cert = v["certificates"].as_array_mut().unwrap().iter_mut().find(|c| c["kind"] == "Lemma3Upper").unwrap();
    cert["bound"]["num"] = "1".into();
    cert["bound"]["den"] = "4".into();
    std::fs::write(dir.path().join("bad.json"), serde_json::to_vec(&v).unwrap()).unwrap();
    let o = run(dir.path(), &["cert", "verify", "bad.json", "p.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["accepted"], false);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["bogus"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["eta"]).status.code(), Some(2));
    let o = run(dir.path(), &["eta", "exact", "missing.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(json(&o)["error"].is_string());
    petersen(dir.path());
    let o = run(dir.path(), &["match", "p.txt", "--engine", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn mesh_quadrangulate() {
    let dir = tempfile::tempdir().unwrap();
    let off = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/icosahedron.off");
    let o = run(dir.path(), &["mesh", "quadrangulate", off.to_str().unwrap(), "-o", "q.obj"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["n_quads"], 10);
    let obj = std::fs::read_to_string(dir.path().join("q.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 10);
}

#[test]
fn seed_from_environment_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    petersen(dir.path());
    let o = Command::new(env!("CARGO_BIN_EXE_matchforge"))
        .current_dir(dir.path())
        .env("MATCHFORGE_SEED", "7")
        .args(["classify", "p.txt"])
        .output()
        .unwrap();
    assert_eq!(json(&o)["manifest"]["seed"], 7);
    let o = run(dir.path(), &["--seed", "9", "classify", "p.txt"]);
    assert_eq!(json(&o)["manifest"]["seed"], 9);
    let o = run(dir.path(), &["classify", "p.txt"]);
    assert_eq!(json(&o)["manifest"]["seed"], 0xC0FFEE);
}
