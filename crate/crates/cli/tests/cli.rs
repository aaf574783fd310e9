use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use diaghom::document::InputDocument;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn dh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dh")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_doc(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn connectivity_of_expar2() {
    let o = dh(&["connectivity", fixture("expar2.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("cocon = 2"), "{out}");
    assert!(out.contains("colim_2 = Z/3"), "{out}");
}

#[test]
fn colimit_of_expar1() {
    let o = dh(&["colim", fixture("expar1.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("order 2") && out.contains("abelianization: Z/2"), "{out}");
}

#[test]
fn hocolim_of_expar2() {
    let o = dh(&["hocolim", fixture("expar2.json").to_str().unwrap(), "--dim", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(0, 0, Z/3)"), "{}", stdout(&o));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["connectivity", fixture("expar2.json").to_str().unwrap(), "--format", "json"].map(String::from);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let (a, b) = (dh(&args), dh(&args));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["cocon"], 2);
    assert_eq!(v["cocon_exact"], true);
    assert_eq!(v["first_group"], "Z/3");
    assert_eq!(v["trail"][1]["resolution"], "left");
    assert!(!stdout(&a).contains("elapsed"));
}

#[test]
fn verify_runs_checks_and_tasks() {
    for name in ["expar1.json", "expar2.json", "contr.json", "pararrows.json", "sphere.json"] {
        let o = dh(&["verify", fixture(name).to_str().unwrap(), "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true), "{name}: {v}");
        assert!(!v["tasks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn abelian_commands() {
    let f = fixture("pararrows.json");
    let f = f.to_str().unwrap();
    assert!(stdout(&dh(&["flows", f])).contains("flows: Z/2"));
    assert!(stdout(&dh(&["homology", f, "--dim", "1"])).contains("coLim_1 = Z/2"));
    assert!(stdout(&dh(&["verify-main1", f])).contains("holds through level 3: true"));
    let moore = stdout(&dh(&["moore", f, "--max-dim", "2"]));
    assert!(moore.contains("pi_1 = Z/2"), "{moore}");
}

#[test]
fn group_homology_of_objects() {
    let out = stdout(&dh(&["group-homology", fixture("expar1.json").to_str().unwrap()]));
    assert!(out.contains("H_1 = Z/2, H_2 = 0, H_3 = Z/6"), "{out}");
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(dh(&["colim", "/nonexistent/doc.json"]).status.code(), Some(1));
    let bad = temp_doc("{\"graph\": {\"vertices\": [\"a\"], \"arrows\": []}, \"groups\": {}, \"homs\": {}, \"extra\": 1}");
    assert_eq!(dh(&["colim", bad.path().to_str().unwrap()]).status.code(), Some(1));
    let o = dh(&["connectivity", fixture("pararrows.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let undefined = temp_doc(
        r#"{"graph": {"vertices": ["a"], "arrows": [{"name": "f", "src": "a", "dst": "z"}]},
            "groups": {"a": {"kind": "trivial"}}, "homs": {"f": {"kind": "trivial"}}}"#,
    );
    let o = dh(&["colim", undefined.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`f`"));
}

#[test]
fn exceeded_bounds_exit_with_two() {
    let big = temp_doc(r#"{"graph": {"vertices": ["a"], "arrows": []}, "groups": {"a": {"kind": "symmetric", "degree": 7}}, "homs": {}}"#);
    assert_eq!(dh(&["group-homology", big.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unknown_colimits_exit_with_three() {
    let free = temp_doc(r#"{"graph": {"vertices": ["a"], "arrows": []}, "groups": {"a": {"kind": "free", "rank": 1}}, "homs": {}}"#);
    let path = free.path().to_str().unwrap();
    let o = dh(&["colim", path, "--max-cosets", "500"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("abelianization: Z"));
    assert_eq!(dh(&["connectivity", path, "--max-cosets", "500"]).status.code(), Some(3));
}

#[test]
fn documents_round_trip() {
    for name in ["expar1.json", "expar2.json", "contr.json", "pararrows.json", "sphere.json"] {
        let doc = InputDocument::parse(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        let again = InputDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(doc, again, "{name}");
        let f = temp_doc(&doc.to_json());
        let a = dh(&["colim", fixture(name).to_str().unwrap(), "--format", "json"]);
        let b = dh(&["colim", f.path().to_str().unwrap(), "--format", "json"]);
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}
