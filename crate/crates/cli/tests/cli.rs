//! End-to-end tests of the binary: exact output bytes, exit codes, and
//! error-stream discipline.

use std::path::Path;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpqprov"))
        .args(args)
        .env_remove("RPQPROV_STATE_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn answers_produces_sorted_tsv_rows() {
    let out = run(&[
        "answers",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "tropical",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "a\tb\t2\na\tc\t4\n");
    assert!(stderr(&out).is_empty());
}

#[test]
fn answers_with_empty_result_exits_zero() {
    let out = run(&[
        "answers",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "t.t",
        "--semiring",
        "tropical",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "");
}

#[test]
fn answers_unbounded_rows_render_as_text() {
    let dir = std::env::temp_dir().join("rpqprov_cli_unbounded");
    std::fs::create_dir_all(&dir).unwrap();
    let graph = dir.join("loop.graph");
    std::fs::write(&graph, "a r 2 a\na s 3 b\n").unwrap();
    let out = run(&[
        "answers",
        "--graph",
        graph.to_str().unwrap(),
        "--query",
        "r*.s",
        "--semiring",
        "multiplicity",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "a\tb\tunbounded\n");
}

#[test]
fn reasons_rows_are_sorted_by_weight_then_word() {
    let out = run(&[
        "reasons",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "tropical",
        "--pair",
        "a:c",
        "--max-len",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "r\t4\nrs\t7\n");
}

#[test]
fn reasons_of_a_disconnected_pair_are_empty() {
    let out = run(&[
        "reasons",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "tropical",
        "--pair",
        "c:a",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "");
}

#[test]
fn compare_desk_pairs_are_incomparable() {
    let out = run(&[
        "compare",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "tropical",
        "--pair",
        "a:b",
        "--pair",
        "a:c",
        "--bound",
        "10",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "incomparable\tfails-stripe:4\tr\tfails-support\trs\t10\n"
    );
}

#[test]
fn compare_below_the_weights_is_unknown_exit_three() {
    let out = run(&[
        "compare",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "tropical",
        "--pair",
        "a:b",
        "--pair",
        "a:c",
        "--bound",
        "1",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).starts_with("unknown\t"));
}

#[test]
fn compare_equal_for_identical_pairs() {
    let out = run(&[
        "compare",
        "--graph",
        &fixture("d1_boolean.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "boolean",
        "--pair",
        "a:c",
        "--pair",
        "a:c",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "equal\tholds\t-\tholds\t-\t-\n");
}

#[test]
fn compare_without_bound_fails_for_tropical() {
    let out = run(&[
        "compare",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r",
        "--semiring",
        "tropical",
        "--pair",
        "a:b",
        "--pair",
        "a:c",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("weight bound"));
}

#[test]
fn compare_needs_exactly_two_pairs() {
    let out = run(&[
        "compare",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r",
        "--semiring",
        "tropical",
        "--pair",
        "a:b",
        "--bound",
        "3",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("exactly two"));
}

#[test]
fn bad_query_reports_position_on_stderr_and_exits_one() {
    let out = run(&[
        "answers",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.(s",
        "--semiring",
        "tropical",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "");
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("offset 4"));
}

#[test]
fn zero_weight_edges_report_their_line() {
    let dir = std::env::temp_dir().join("rpqprov_cli_zero");
    std::fs::create_dir_all(&dir).unwrap();
    let graph = dir.join("zero.graph");
    std::fs::write(&graph, "a r 1 b\nb r 0 c\n").unwrap();
    let out = run(&[
        "answers",
        "--graph",
        graph.to_str().unwrap(),
        "--query",
        "r",
        "--semiring",
        "multiplicity",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"));
    assert!(stderr(&out).contains("zero-weight"));
}

#[test]
fn unknown_objects_exit_one() {
    let out = run(&[
        "reasons",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r",
        "--semiring",
        "tropical",
        "--pair",
        "a:zz",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown object `zz`"));
}

#[test]
fn state_cap_failures_exit_two() {
    let out = run(&[
        "answers",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "tropical",
        "--state-cap",
        "1",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("state cap"));
}

#[test]
fn state_cap_env_variable_applies_and_flag_overrides() {
    let base = [
        "answers",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "tropical",
    ];
    let out = Command::new(env!("CARGO_BIN_EXE_rpqprov"))
        .args(base)
        .env("RPQPROV_STATE_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_rpqprov"))
        .args(base)
        .args(["--state-cap", "100000"])
        .env("RPQPROV_STATE_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn json_lines_format() {
    let out = run(&[
        "answers",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "multiplicity",
        "--format",
        "json-lines",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "{\"source\":\"a\",\"target\":\"b\",\"weight\":\"2\"}\n\
         {\"source\":\"a\",\"target\":\"c\",\"weight\":\"14\"}\n"
    );

    let out = run(&[
        "compare",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "tropical",
        "--pair",
        "a:b",
        "--pair",
        "a:c",
        "--bound",
        "10",
        "--format",
        "json-lines",
    ]);
    let text = stdout(&out);
    let parsed: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(parsed["relation"], "incomparable");
    assert_eq!(parsed["left_to_right"]["condition"], "stripe");
    assert_eq!(parsed["left_to_right"]["level"], 4);
    assert_eq!(parsed["right_to_left"]["witness"], "rs");
}

#[test]
fn sphere_rejects_unsupported_combinations() {
    let dir = std::env::temp_dir().join("rpqprov_cli_sphere");
    std::fs::create_dir_all(&dir).unwrap();
    let automaton = dir.join("t.aut");
    std::fs::write(
        &automaton,
        "semiring tropical\ninitial p0\nfinal p1\ntrans p0 r 2 p1\n",
    )
    .unwrap();
    let out = run(&[
        "sphere",
        "--automaton",
        automaton.to_str().unwrap(),
        "--k",
        "2",
        "--kind",
        "outer",
        "--out",
        "-",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unsupported sphere request"));

    // Semiring assertion flag.
    let out = run(&[
        "sphere",
        "--automaton",
        automaton.to_str().unwrap(),
        "--semiring",
        "fuzzy",
        "--k",
        "2",
        "--kind",
        "inner",
        "--out",
        "-",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("not fuzzy"));
}

#[test]
fn sphere_inner_writes_annotated_and_stripe_writes_classical() {
    let dir = std::env::temp_dir().join("rpqprov_cli_sphere_ok");
    std::fs::create_dir_all(&dir).unwrap();
    let automaton = dir.join("f.aut");
    std::fs::write(
        &automaton,
        "semiring fuzzy\ninitial p0\nfinal p1 p2\ntrans p0 r 4 p1\ntrans p0 s 5 p2\n",
    )
    .unwrap();
    let out = run(&[
        "sphere",
        "--automaton",
        automaton.to_str().unwrap(),
        "--k",
        "4",
        "--kind",
        "inner",
        "--out",
        "-",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "semiring fuzzy\ninitial p0\nfinal p1 p2\ntrans p0 r 4 p1\n"
    );

    let out = run(&[
        "sphere",
        "--automaton",
        automaton.to_str().unwrap(),
        "--k",
        "5",
        "--kind",
        "stripe",
        "--out",
        "-",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(
        text.starts_with("initial "),
        "classical format, got: {text}"
    );
    assert!(text.contains("trans") && text.contains('s'));
}

#[test]
fn oracle_check_reports_the_pointwise_relation() {
    let out = run(&[
        "oracle-check",
        "--graph",
        &fixture("d1.graph"),
        "--query",
        "r.s|r",
        "--semiring",
        "tropical",
        "--pair",
        "a:b",
        "--pair",
        "a:c",
        "--max-len",
        "6",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "incomparable\tfails\tr\tfails\trs\t6\n");
}
