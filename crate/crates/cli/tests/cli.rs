use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use proptest::prelude::*;
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(rel: &str) -> PathBuf {
    root().join("fixtures").join(rel)
}

fn dolkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dolkit"))
        .args(args)
        .env_remove("DOLKIT_REPO")
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> JSONSchema {
    let path = root().join("schemas").join(format!("{name}.schema.json"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    JSONSchema::compile(&v).expect("schema compiles")
}

fn assert_valid(name: &str, instance: &Value) {
    let s = schema(name);
    if let Err(errors) = s.validate(instance) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} schema violations: {msgs:#?}");
    };
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn analyze_reports_validate() {
    for doc in ["cq/cq.dol", "alignment/space.dol", "hard/chain.dol"] {
        let o = dolkit(&["analyze", fixture(doc).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{doc}: {}", String::from_utf8_lossy(&o.stderr));
        assert_valid("analysis", &stdout_json(&o));
    }
}

#[test]
fn analyze_is_byte_deterministic() {
    let f = fixture("alignment/space.dol");
    let a = dolkit(&["analyze", f.to_str().unwrap()]).stdout;
    let b = dolkit(&["analyze", f.to_str().unwrap()]).stdout;
    assert_eq!(a, b);
}

#[test]
fn report_counts_match_the_theories() {
    let o = dolkit(&["analyze", fixture("cq/cq.dol").to_str().unwrap()]);
    let v = stdout_json(&o);
    let names: Vec<&str> = v["ontologies"].as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
    for expected in ["CQbase", "chrisFather", "doraChildChris", "chrisFemale", "amyOlderDora"] {
        assert!(names.contains(&expected), "{expected} missing from {names:?}");
    }
    assert_eq!(v["obligations"].as_array().unwrap().len(), 4);
    let base = v["ontologies"].as_array().unwrap().iter().find(|t| t["name"] == "CQbase").unwrap();
    let sentences = base["sentences"].as_array().unwrap();
    assert!(sentences.iter().all(|s| s["role"] == "Axiom"));
}

#[test]
fn empty_document_is_a_syntax_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("empty.dol");
    std::fs::write(&f, "").unwrap();
    let o = dolkit(&["analyze", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_valid("error", &v);
    assert_eq!(v["error"]["kind"], "SyntaxError");
}

#[test]
fn unmapped_iri_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("doc.dol");
    std::fs::write(&f, "logic SimpleDL\nontology A = <http://example.org/missing>\n").unwrap();
    std::fs::write(dir.path().join("repo.json"), "{}").unwrap();
    let o = dolkit(&["analyze", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_valid("error", &v);
    assert_eq!(v["error"]["kind"], "UnresolvedIri", "{v}");
}

#[test]
fn prove_family_document() {
    let o = dolkit(&["prove", fixture("cq/cq.dol").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_valid("attempts", &v);
    let attempts = v["attempts"].as_array().unwrap();
    assert_eq!(attempts.len(), 4);
    assert!(attempts.iter().all(|a| a["status"] == "THM"));
}

#[test]
fn prove_a_single_theorem() {
    let f = fixture("cq/cq.dol");
    let o = dolkit(&["prove", f.to_str().unwrap(), "--theorem", "chrisFather", "--timeout", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["attempts"].as_array().unwrap().len(), 1);
    assert_eq!(v["attempts"][0]["obligation"], "chrisFather");
}

#[test]
fn manual_selection_yields_csas_and_exit_2() {
    let f = fixture("cq/cq.dol");
    let o = dolkit(&["prove", f.to_str().unwrap(), "--theorem", "chrisFemale", "--axioms", "scenario_5", "--timeout", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let v = stdout_json(&o);
    assert_valid("attempts", &v);
    assert_eq!(v["attempts"][0]["raw_status"], "CSA");
    assert_eq!(v["attempts"][0]["status"], "CSAS");
}

#[test]
fn flag_conflicts_are_usage_errors() {
    let f = fixture("cq/cq.dol");
    let o = dolkit(&["prove", f.to_str().unwrap(), "--axioms", "a", "--sine", "1,1,0"]);
    assert_eq!(o.status.code(), Some(64));
    let o = dolkit(&["graph", f.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(o.status.code(), Some(64));
    let o = dolkit(&["logics", "--category", "Planet"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn combine_space() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("space.omn");
    let f = fixture("alignment/space.dol");
    let o = dolkit(&["combine", f.to_str().unwrap(), "--ontology", "Space", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("Class:"));
    let table = String::from_utf8(o.stderr).unwrap();
    let endurant = table.lines().find(|l| l.contains(":endurant")).expect("endurant row");
    assert!(endurant.contains(":IndependentContinuant") && endurant.contains(":Presential"), "{endurant}");
}

#[test]
fn combine_rejects_non_combinations() {
    let f = fixture("alignment/space.dol");
    let o = dolkit(&["combine", f.to_str().unwrap(), "--ontology", "NoSuchThing"]);
    assert_eq!(o.status.code(), Some(1));
    assert_valid("error", &stdout_json(&o));
    let f = fixture("cq/cq.dol");
    let o = dolkit(&["combine", f.to_str().unwrap(), "--ontology", "CQbase"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["error"]["kind"], "NotACombine");
}

#[test]
fn subsumption_only_alignment_generates_subclass_axioms() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.omn"), "Class: X\nClass: Y\n").unwrap();
    std::fs::write(dir.path().join("b.omn"), "Class: P\nClass: Q\n").unwrap();
    std::fs::write(dir.path().join("repo.json"), r#"{"http://ex.org/": "."}"#).unwrap();
    let doc = dir.path().join("doc.dol");
    std::fs::write(
        &doc,
        "logic SimpleDL\nalignment AB : <http://ex.org/a.omn> to <http://ex.org/b.omn> =\n  X < P, Y < Q\nontology C = combine AB\n",
    )
    .unwrap();
    let o = dolkit(&["combine", doc.to_str().unwrap(), "--ontology", "C"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.matches("SubClassOf").count(), 2, "{text}");
}

#[test]
fn graph_formats() {
    let f = fixture("alignment/space.dol");
    let dot = String::from_utf8(dolkit(&["graph", f.to_str().unwrap()]).stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"Space\""));
    assert_eq!(dot.matches("CombineInjection").count(), 3);
    let o = dolkit(&["graph", f.to_str().unwrap(), "--format", "json"]);
    assert_valid("graph", &stdout_json(&o));
}

#[test]
fn logics_listing() {
    let o = dolkit(&["logics"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("Logic ")).count(), 3);
    assert_eq!(text.lines().filter(|l| l.starts_with("Mapping ")).count(), 3);
}

#[test]
fn repo_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("cq.dol");
    std::fs::copy(fixture("cq/cq.dol"), &doc).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dolkit"))
        .args(["analyze", doc.to_str().unwrap()])
        .env("DOLKIT_REPO", fixture("cq"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

const CORPUS: [&str; 3] = ["cq/cq.dol", "alignment/space.dol", "hard/chain.dol"];

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// Arbitrary truncations of the fixtures either analyze (exit 0, valid
    /// report) or fail with exit 1 and a valid error object; proving follows
    /// the THM/non-THM exit contract.
    #[test]
    fn exit_code_contract(doc in 0..CORPUS.len(), cut in 0.0f64..=1.0, prove in any::<bool>()) {
        let source = fixture(CORPUS[doc]);
        let text = std::fs::read_to_string(&source).unwrap();
        let mut end = (text.len() as f64 * cut) as usize;
        while !text.is_char_boundary(end) {
            end -= 1;
        }
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("doc.dol");
        std::fs::write(&f, &text[..end]).unwrap();
        let repo = source.parent().unwrap().to_str().unwrap().to_string();
        let prove = prove && CORPUS[doc] == "cq/cq.dol";
        let args: Vec<&str> = if prove {
            vec!["--repo", &repo, "prove", f.to_str().unwrap(), "--timeout", "1"]
        } else {
            vec!["--repo", &repo, "analyze", f.to_str().unwrap()]
        };
        let o = dolkit(&args);
        let code = o.status.code().unwrap();
        let v = stdout_json(&o);
        match code {
            0 if prove => {
                assert_valid("attempts", &v);
                prop_assert!(v["attempts"].as_array().unwrap().iter().all(|a| a["status"] == "THM"));
            }
            0 => assert_valid("analysis", &v),
            2 => {
                prop_assert!(prove);
                assert_valid("attempts", &v);
                prop_assert!(v["attempts"].as_array().unwrap().iter().any(|a| a["status"] != "THM"));
            }
            1 => assert_valid("error", &v),
            other => prop_assert!(false, "unexpected exit code {}", other),
        }
    }
}
