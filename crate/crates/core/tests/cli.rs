use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn supcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supcomp")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_supcomp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn star_prints_textual_form() {
    let o = with_stdin(&["star", "-"], r#"["2","0","inf"]"#);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "[\"1/2\",\"0\",\"0\"]\n");
}

#[test]
fn star_and_decompose_accept_lists() {
    let o = supcomp(&["star", data("elements.json").to_str().unwrap()]);
    assert_eq!(stdout(&o), "[\"1/2\",\"0\",\"0\"]\n[\"-2\",\"1/3\",\"0\"]\n");
    let o = supcomp(&["--format", "json", "decompose", data("elements.json").to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[1]["finite"], serde_json::json!(["-1/2", "3", "0"]));
    assert_eq!(v[1]["infinite"], serde_json::json!(["0", "0", "inf"]));
}

#[test]
fn bound_on_two_event_cycle() {
    let o = supcomp(&["bound", data("two_event_cycle.json").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("lhs: 3/4·e"));
    assert!(out.contains("n = 200: 2/3·e"));
    assert!(out.contains("verdict: true"));
}

#[test]
fn bound_structured_output_mirrors_report() {
    let o = supcomp(&["--format", "structured", "bound", data("conditional.json").to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["lhs", "band", "rhs_samples", "rhs_limsup", "certificates", "verdict"] {
        assert!(v.get(key).is_some(), "missing {}", key);
    }
    assert_eq!(v["verdict"], true);
}

#[test]
fn corollary_flag() {
    let o = supcomp(&["bound", "--corollary", data("corollary.json").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("displayed form matches: true"));
    let o = supcomp(&["bound", "--corollary", data("two_event_cycle.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("weights_seq"));
}

#[test]
fn parse_errors_name_the_field_and_line() {
    let doc = "{\n  \"space\": {\"weights\": [\"1/2\", \"x\"]},\n  \"events_seq\": {\"prefix\": [], \"cycle\": [[0]]}\n}";
    let o = with_stdin(&["bound", "-"], doc);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("space.weights"), "{}", err);
    assert!(err.contains("line 2"), "{}", err);
}

#[test]
fn dimension_mismatch_is_reported() {
    let doc = r#"{"space": {"weights": ["1/2", "1/2"]}, "weights_seq": {"prefix": [], "cycle": [["1"]]},
        "events_seq": {"prefix": [], "cycle": [[0]]}, "checkpoints": [1]}"#;
    let o = with_stdin(&["bound", "-"], doc);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dimension mismatch"));
}

#[test]
fn borel_cantelli_subcommand() {
    let o = supcomp(&["borel-cantelli", "--p", "1/2", "--depth", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("fls ratio: 4/5"));
    assert!(out.contains("union value: 15/16"));
    let o = supcomp(&["borel-cantelli", "--p", "1", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_reports_counts() {
    let o = supcomp(&["check", "--lemma", "YY2-H", "--trials", "50", "--seed", "7"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let words: Vec<&str> = out.split_whitespace().collect();
    assert_eq!(words, ["YY2-H", "50/50", "pass"]);
    let o = supcomp(&["check", "--lemma", "YY2-q", "--trials", "5"]);
    assert!(stdout(&o).starts_with("YY2-q"));
}

#[test]
fn check_rejects_unknown_lemma_and_zero_trials() {
    let o = supcomp(&["check", "--lemma", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown lemma"));
    let o = supcomp(&["check", "--trials", "0"]);
    assert!(!o.status.success());
}

#[test]
fn check_output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_supcomp"))
            .args(["--format", "json", "check", "--lemma", "M5", "--trials", "40", "--seed", "11"])
            .env("SUPCOMP_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}
