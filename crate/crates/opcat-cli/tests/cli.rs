use opcat::ocjson::{parse_category, serialize_operad, serialize_presheaf};
use opcat::operad::terminal_operad;
use opcat::sample::Sampler;
use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn opcat(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opcat"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn an_example_validates_cleanly() {
    let dir = tmp("example-validate");
    let wrote = opcat(&dir, &["example", "s", "--max", "2", "-o", "s2.json"]);
    assert_eq!(code(&wrote), 0, "{wrote:?}");
    let checked = opcat(&dir, &["validate", "s2.json"]);
    assert_eq!(code(&checked), 0, "{checked:?}");
    assert!(stdout(&checked).starts_with("validate: pass"));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tmp("bad-input");
    fs::write(dir.join("garbage.json"), "not json at all").unwrap();
    let garbage = opcat(&dir, &["validate", "garbage.json"]);
    assert_eq!(code(&garbage), 2);
    let missing = opcat(&dir, &["validate", "no-such-file.json"]);
    assert_eq!(code(&missing), 2);
    let unknown = opcat(&dir, &["example", "mystery", "-o", "x.json"]);
    assert_eq!(code(&unknown), 2);
}

#[test]
fn a_tight_cap_exits_with_three() {
    let dir = tmp("tight-cap");
    opcat(&dir, &["example", "s", "--max", "2", "-o", "s2.json"]);
    let capped = opcat(&dir, &["hopf-check", "s2.json", "--cap", "3"]);
    assert_eq!(code(&capped), 3, "{capped:?}");
}

#[test]
fn the_two_level_trees_fail_the_factorization_search() {
    let dir = tmp("hopf-fail");
    opcat(&dir, &["example", "omega2", "--max2", "2", "1", "-o", "om.json"]);
    let out = opcat(&dir, &["--json", "hopf-check", "om.json", "--omega", "all"]);
    assert_eq!(code(&out), 1, "{out:?}");
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["check"], "hopf-check");
    assert_eq!(report["pass"], false);
    let witnesses = report["witnesses"].as_array().unwrap();
    assert!(!witnesses.is_empty());
    assert_eq!(witnesses[0]["check"], "weak-terminal-factorization");
    assert!(report["stats"].as_object().unwrap().contains_key("budget-used"));
}

#[test]
fn fibrewise_trivial_families_pass_where_all_families_fail() {
    let dir = tmp("hopf-ft");
    opcat(&dir, &["example", "omega2", "--max2", "2", "1", "-o", "om.json"]);
    let out = opcat(&dir, &["hopf-check", "om.json", "--omega", "ft"]);
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tmp("determinism");
    opcat(&dir, &["example", "s", "--max", "2", "-o", "s2.json"]);
    for args in [
        vec!["--json", "validate", "s2.json"],
        vec!["--json", "info", "s2.json"],
        vec!["--json", "skew-check", "s2.json", "--samples", "5", "--seed", "7"],
        vec!["--json", "wedge-check", "s2.json", "--samples", "5", "--seed", "7"],
        vec!["--json", "reconstruct", "s2.json"],
    ] {
        let first = opcat(&dir, &args);
        let second = opcat(&dir, &args);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
    let first = opcat(&dir, &["example", "p", "--max", "3", "-o", "p3.json"]);
    let again = opcat(&dir, &["example", "p", "--max", "3", "-o", "p3b.json"]);
    assert_eq!(code(&first), 0);
    assert_eq!(code(&again), 0);
    assert_eq!(
        fs::read(dir.join("p3.json")).unwrap(),
        fs::read(dir.join("p3b.json")).unwrap()
    );
}

#[test]
fn reconstruction_agrees_with_the_file() {
    let dir = tmp("reconstruct");
    opcat(&dir, &["example", "s", "--max", "2", "-o", "s2.json"]);
    let out = opcat(&dir, &["reconstruct", "s2.json"]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert!(stdout(&out).contains("morphisms: 11"));
}

#[test]
fn left_normality_splits_the_examples() {
    let dir = tmp("left-normal");
    opcat(&dir, &["example", "s", "--max", "2", "-o", "s2.json"]);
    opcat(&dir, &["example", "discrete_zero", "--set", "2", "-o", "dz.json"]);
    let yes = opcat(&dir, &["left-normal", "s2.json"]);
    assert_eq!(code(&yes), 0);
    let no = opcat(&dir, &["--json", "left-normal", "dz.json"]);
    assert_eq!(code(&no), 1);
    let report: Value = serde_json::from_str(&stdout(&no)).unwrap();
    assert_eq!(report["pass"], false);
    assert!(!report["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn sampled_wedges_expose_the_left_unit_counterexample() {
    let dir = tmp("wedge");
    opcat(&dir, &["example", "discrete_zero", "--set", "2", "-o", "dz.json"]);
    let out = opcat(&dir, &["--json", "wedge-check", "dz.json", "--samples", "5"]);
    assert_eq!(code(&out), 1, "{out:?}");
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let witnesses = report["witnesses"].as_array().unwrap();
    assert!(witnesses.iter().any(|w| w["check"] == "wedge-lambda"));
    assert!(witnesses.iter().all(|w| w["check"] != "wedge-alpha"));
    assert!(witnesses.iter().all(|w| w["check"] != "wedge-rho"));
}

#[test]
fn skew_axioms_hold_on_sampled_collections() {
    let dir = tmp("skew");
    opcat(&dir, &["example", "p", "--max", "2", "-o", "p2.json"]);
    let out = opcat(&dir, &["skew-check", "p2.json", "--samples", "5", "--seed", "1"]);
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn operad_and_presheaf_files_check_out() {
    let dir = tmp("operad-presheaf");
    opcat(&dir, &["example", "p", "--max", "2", "-o", "p2.json"]);
    let text = fs::read_to_string(dir.join("p2.json")).unwrap();
    let oc = parse_category(&text).unwrap();
    let operad = terminal_operad(&oc);
    fs::write(dir.join("t.json"), serialize_operad(&oc, &operad)).unwrap();
    let ok = opcat(&dir, &["operad-check", "p2.json", "t.json"]);
    assert_eq!(code(&ok), 0, "{ok:?}");
    let mut sampler = Sampler::new(5, 2);
    let presheaf = sampler.presheaf(&oc, "q");
    fs::write(dir.join("q.json"), serialize_presheaf(&presheaf)).unwrap();
    let also = opcat(&dir, &["presheaf-check", "p2.json", "q.json"]);
    assert_eq!(code(&also), 0, "{also:?}");
}

#[test]
fn a_false_trivial_claim_in_a_file_is_an_input_error() {
    let dir = tmp("trivial-claim");
    opcat(&dir, &["example", "s", "--max", "1", "-o", "s1.json"]);
    let text = fs::read_to_string(dir.join("s1.json")).unwrap();
    let bent = text.replace("\"expected_trivial\": [\n    2\n  ]", "\"expected_trivial\": [\n    1\n  ]");
    assert_ne!(text, bent);
    fs::write(dir.join("bent.json"), bent).unwrap();
    let out = opcat(&dir, &["validate", "bent.json"]);
    assert_eq!(code(&out), 2, "{out:?}");
}
