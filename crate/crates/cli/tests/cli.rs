use std::process::{Command, Output};

use serde_json::Value;

fn paraosp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paraosp"))
        .args(args)
        .env_remove("PARAOSP_THREADS")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn char_matches_golden_file() {
    let out = paraosp(&["char", "--m", "1", "--n", "1", "--p", "1", "--degree", "4"]);
    assert_eq!(code(&out), 0);
    let golden = include_str!("fixtures/char_m1_n1_p1_d4.jsonl");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["level_totals"], serde_json::json!([1, 2, 2, 2, 2]));
}

#[test]
fn char_level_two_totals() {
    let out = paraosp(&["char", "--m", "1", "--n", "1", "--p", "2", "--degree", "2"]);
    assert_eq!(code(&out), 0);
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["level_totals"], serde_json::json!([1, 2, 4]));
}

#[test]
fn char_degree_zero_is_the_vacuum() {
    let out = paraosp(&["char", "--m", "2", "--n", "1", "--p", "3", "--degree", "0"]);
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["weight_vector"], serde_json::json!([-3, -3, 3]));
}

#[test]
fn verify_algebra_exit_codes() {
    assert_eq!(
        code(&paraosp(&["verify-algebra", "--m", "1", "--n", "1"])),
        0
    );
    let out = paraosp(&["verify-algebra", "--m", "2", "--n", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(records(&out)[0]["ok"], Value::Bool(true));
    assert_eq!(
        code(&paraosp(&["verify-algebra", "--m", "0", "--n", "0"])),
        2
    );
}

#[test]
fn verify_id2_selects_and_rejects() {
    let out = paraosp(&[
        "verify-id2",
        "--m",
        "1",
        "--n",
        "1",
        "--p",
        "2,3",
        "--levels",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    let last = records(&out).pop().unwrap();
    assert_eq!(last["chosen"], "mult:boson:cancel");

    let forced = paraosp(&[
        "verify-id2",
        "--m",
        "1",
        "--n",
        "1",
        "--p",
        "2,3",
        "--variant",
        "arg:boson:cancel",
    ]);
    assert_eq!(code(&forced), 1);

    assert_eq!(
        code(&paraosp(&["verify-id2", "--m", "1", "--n", "1", "--p", ""])),
        2
    );
    assert_eq!(
        code(&paraosp(&[
            "verify-id2",
            "--m",
            "1",
            "--n",
            "1",
            "--p",
            "2"
        ])),
        2
    );
    assert_eq!(code(&paraosp(&["verify-id2", "--m", "2", "--n", "0"])), 2);
}

#[test]
fn gram_verdicts_and_radical() {
    let out = paraosp(&["gram", "--m", "1", "--n", "1", "--p", "2", "--levels", "3"]);
    assert_eq!(code(&out), 0);
    let verdict = &records(&out).pop().unwrap()["verdict"];
    for key in ["rank_vs_character", "diagonal", "radical_cut"] {
        assert_eq!(verdict[key], "match", "{key}");
    }

    // At p = 1 the square of the first raising generator is null.
    let out = paraosp(&["gram", "--m", "1", "--n", "1", "--p", "1", "--levels", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        out.stdout,
        include_bytes!("fixtures/gram_m1_n1_p1_l2.jsonl")
    );
    let recs = records(&out);
    let null = recs
        .iter()
        .find(|r| r["content"] == serde_json::json!([2, 0]))
        .unwrap();
    assert_eq!(null["rank"], 0);
    assert_eq!(null["radical"], serde_json::json!(["(1)*c1+ c1+"]));
}

#[test]
fn gram_levels_zero_is_vacuum_only() {
    let out = paraosp(&["gram", "--m", "2", "--n", "1", "--p", "1", "--levels", "0"]);
    let recs = records(&out);
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0]["block_size"], 1);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "gram", "--m", "2", "--n", "1", "--p", "1", "--levels", "3", "--seed", "7",
    ];
    let a = paraosp(&args);
    let b = paraosp(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = paraosp(&seq);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed=7"));
}

#[test]
fn level_cap_is_a_usage_error() {
    assert_eq!(
        code(&paraosp(&[
            "gram", "--m", "1", "--n", "1", "--levels", "99"
        ])),
        2
    );
    assert_eq!(
        code(&paraosp(&[
            "char", "--m", "1", "--n", "1", "--degree", "99"
        ])),
        2
    );
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_paraosp"))
        .args(["dims", "--m", "1", "--n", "1", "--counts"])
        .env("PARAOSP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_paraosp"))
        .args(["dims", "--m", "1", "--n", "1", "--counts"])
        .env("PARAOSP_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn gk_table_records() {
    let out = paraosp(&[
        "gk-table", "--m", "1", "--n", "1", "--p", "2", "--levels", "0",
    ]);
    let recs = records(&out);
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0]["radicand_num"], 2);
    assert_eq!(recs[0]["radicand_den"], 1);
    assert_eq!(recs[0]["sign"], 1);
    assert_eq!(recs[0]["top_row"], serde_json::json!([0, 0]));
}

#[test]
fn matelems_match() {
    let out = paraosp(&[
        "matelems", "--m", "1", "--n", "1", "--p", "2", "--levels", "2",
    ]);
    assert_eq!(code(&out), 0);
    assert!(records(&out)
        .iter()
        .all(|r| r["matches"] == Value::Bool(true)));
}

#[test]
fn dims_round_trip_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("patterns.jsonl");
    let out = paraosp(&["dims", "--m", "2", "--n", "1", "--p", "2", "--levels", "3"]);
    let patterns: String = records(&out)
        .iter()
        .map(|r| format!("{}\n", r["pattern"]))
        .collect();
    std::fs::write(&path, &patterns).unwrap();
    let checked = paraosp(&[
        "dims",
        "--m",
        "2",
        "--n",
        "1",
        "--check",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&checked), 0);
    assert_eq!(records(&checked).len(), patterns.lines().count());

    std::fs::write(&path, "[[1,0],[2]]\n").unwrap();
    let bad = paraosp(&[
        "dims",
        "--m",
        "1",
        "--n",
        "1",
        "--check",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn dims_counts_agree_with_char() {
    let counts = paraosp(&[
        "dims", "--m", "2", "--n", "1", "--p", "2", "--levels", "4", "--counts",
    ]);
    let counts: Vec<Value> = records(&counts)
        .iter()
        .map(|r| r["count"].clone())
        .collect();
    let ch = paraosp(&["char", "--m", "2", "--n", "1", "--p", "2", "--degree", "4"]);
    let summary: Value = serde_json::from_slice(&ch.stderr).unwrap();
    assert_eq!(Value::Array(counts), summary["level_totals"]);
}

#[test]
fn dump_matrices_csv_has_header() {
    let out = paraosp(&["dump-matrices", "--m", "1", "--n", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "col,denominator,element,numerator,row,sqrt2_power"
    );
    let json = paraosp(&["dump-matrices", "--m", "1", "--n", "1"]);
    assert_eq!(text.lines().count(), records(&json).len() + 1);
}
