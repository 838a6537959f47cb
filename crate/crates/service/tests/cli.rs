//! The `nl2domain` binary.

use std::path::Path;
use std::process::{Command, Output};

fn nl2domain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nl2domain")).args(args).env_remove("NL2DOMAIN_CONFIG").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn core_file(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core").join(rel).display().to_string()
}

const PROFILE: &str = "Max can go to different places such as restaurants and parks.
Max can engage in different activities including riding a horse.
Max can be aware of his surroundings.
Max can stand at the bus station.
Max would like to drink some juice.
";

#[test]
fn compile_writes_golden_sexpr_and_valid_pddl() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("table.txt");
    std::fs::write(&input, PROFILE).unwrap();
    let o = nl2domain(&["compile", input.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), std::fs::read_to_string(core_file("tests/golden/profile.scm")).unwrap());

    let out = dir.path().join("domain.pddl");
    let o = nl2domain(&["compile", input.to_str().unwrap(), "--target", "pddl", "-o", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(out).unwrap().starts_with("(define (domain"));
}

#[test]
fn compile_with_sidecar_parse() {
    let dir = tempfile::tempdir().unwrap();
    let conllu = core_file("tests/data/worked.conllu");
    let text: String = std::fs::read_to_string(&conllu)
        .unwrap()
        .lines()
        .filter_map(|l| l.strip_prefix("# text = "))
        .collect::<Vec<_>>()
        .join("\n");
    let input = dir.path().join("worked.txt");
    std::fs::write(&input, text).unwrap();
    let o = nl2domain(&["compile", input.to_str().unwrap(), "--conllu", &conllu]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("probabilistic 0.5"), "{}", stdout(&o));
}

#[test]
fn compile_fails_on_unparseable_sentence() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    std::fs::write(&input, "Max can go to the park.\nColorless green ideas sleep furiously.\n").unwrap();
    let o = nl2domain(&["compile", input.to_str().unwrap(), "--category", "affordance"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn missing_input_is_an_error() {
    let o = nl2domain(&["compile", "/no/such/file.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/no/such/file.txt"));
}

#[test]
fn eval_passes_on_bundled_corpus() {
    let o = nl2domain(&["eval"]);
    assert!(o.status.success(), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let o = nl2domain(&["eval", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn eval_below_threshold_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("gold.toml");
    // the gold state is deliberately one the sentence does not produce
    std::fs::write(
        &corpus,
        r#"
[[case]]
name = "wrong"
sentences = ["Max would like to drink some juice."]
states = [{ triple = "max/drink/water" }]
"#,
    )
    .unwrap();
    let o = nl2domain(&["eval", corpus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let o = nl2domain(&["eval", corpus.to_str().unwrap(), "--min-recall", "0", "--min-accuracy", "0"]);
    assert!(o.status.success());
}

#[test]
fn suggest_lists_fixture_capabilities() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("dog.txt");
    std::fs::write(&input, "Max is a dog.\n").unwrap();
    let o = nl2domain(&["suggest", input.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.contains("capability:max:bark")), "{text}");
    assert!(!text.contains("drive"));
    let o = nl2domain(&["suggest", input.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().any(|s| s["kind"] == "capability"));
}
