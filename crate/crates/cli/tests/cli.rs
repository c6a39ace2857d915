use std::process::{Command, Output};

use leadrel_core::classify3::Classification;
use leadrel_core::jvdk::Decompose2;
use leadrel_core::suites::SuiteReport;
use leadrel_core::RelationReport;

fn leadrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leadrel")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn relation_of_a_triangular_map() {
    let o = leadrel(&["relations", "--map", "x1+x2^2; x2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("principal, R = z1 - z2^2"), "{}", stdout(&o));
}

#[test]
fn identity_decomposes_to_empty_word() {
    let o = leadrel(&["decompose2", "--map", "x1; x2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let Decompose2::Tame(dec) = serde_json::from_slice(&o.stdout).unwrap() else {
        panic!("identity rejected");
    };
    assert!(dec.word.is_empty());
}

#[test]
fn classify_cusp() {
    let o = leadrel(&["classify3", "--rel", "x3^2+5*x2^3", "--weights", "1,2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tag T5"), "{}", stdout(&o));
}

#[test]
fn json_reparses() {
    let o = leadrel(&["relations", "--word", "E 1 x2^2; E 2 x1^3; E 3 x1*x2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: RelationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep.fbars.len(), 3);

    let o = leadrel(&["classify3", "--rel", "x3^2+5*x2^3", "--weights", "1,2,3", "--json"]);
    let c: Classification = serde_json::from_slice(&o.stdout).unwrap();
    assert!(c.normal_form.is_some());
}

#[test]
fn exit_codes() {
    // domain outcome
    assert_eq!(leadrel(&["decompose2", "--map", "x1^2; x2"]).status.code(), Some(1));
    assert_eq!(leadrel(&["classify3", "--rel", "x1^2*x3^2+x2^4"]).status.code(), Some(1));
    // usage
    assert_eq!(leadrel(&["relations", "--map", "x1+"]).status.code(), Some(2));
    assert_eq!(leadrel(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(leadrel(&["relations", "--map", "x1; x2", "--weights", "1,2,3"]).status.code(), Some(2));
    assert_eq!(leadrel(&["frobnicate"]).status.code(), Some(2));
    // io
    assert_eq!(leadrel(&["relations", "--map", "@/no/such/file"]).status.code(), Some(3));
}

#[test]
fn reads_inputs_from_files() {
    let dir = std::env::temp_dir().join(format!("leadrel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("word.txt");
    std::fs::write(&path, "# shear then swap\nE 1 x2^2\nT 1 2\n").unwrap();
    let arg = format!("@{}", path.display());
    let o = leadrel(&["compose", "--word", &arg]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x1^2 + x2\nx1\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "delta-identity", "--seed", "7", "--count", "5", "--json"];
    let (a, b) = (leadrel(&args), leadrel(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rep: SuiteReport = serde_json::from_slice(&a.stdout).unwrap();
    assert!(rep.passed());
}
