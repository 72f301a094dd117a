//! End-to-end checks of the `possi` binary: exact output fields, exit
//! codes, determinism, and the environment override.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn possi(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_possi"));
    cmd.args(args).env_remove("POSSI_QUAD_NODES");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

const HEADER: &str =
    "mode,lambda,operator,beta_exact,beta_approx,H_exact,H_approx,E_f,Var_T,P0,w,residual,warnings";

/// Split one CSV data row respecting quoted fields.
fn split_csv(row: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    let mut chars = row.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if in_quotes && chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

#[test]
fn solve_emits_reference_rate_in_csv() {
    let out = possi(
        &[
            "solve",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
            "--format",
            "csv",
        ],
        &[],
    );
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), HEADER);
    let row = split_csv(lines.next().unwrap());
    assert_eq!(row.len(), 13);
    assert_eq!(row[0], "solve");
    assert_eq!(row[1], "1");
    assert_eq!(row[2], "t1");
    assert_eq!(row[3], "", "no interior optimum here, so no exact rate");
    assert_eq!(row[4], "0.560975609756");
    assert_eq!(row[7], "1.5"); // E_f
    assert_eq!(row[8], "1.16666666667"); // Var_T = 7/6
    assert_eq!(row[9], "3"); // P0
    assert!(row[12].contains("exact solve unavailable"));
    assert!(row[12].contains("below zero"));
}

#[test]
fn fair_premium_solves_to_full_coverage() {
    let out = possi(
        &[
            "solve",
            "--input",
            fixture("fair_premium.json").to_str().unwrap(),
            "--format",
            "csv",
        ],
        &[],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let row = split_csv(text.lines().nth(1).unwrap());
    assert_eq!(row[3], "1"); // beta_exact
    assert_eq!(row[4], "1"); // beta_approx
    assert_eq!(row[12], "");
}

#[test]
fn negative_rate_carries_a_warning() {
    let out = possi(
        &[
            "solve",
            "--input",
            fixture("log_t2.json").to_str().unwrap(),
            "--format",
            "csv",
        ],
        &[],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let row = split_csv(text.lines().nth(1).unwrap());
    assert_eq!(row[4], "-8.60802251935");
    assert!(row[12].contains("rate outside (0,1]"));
}

#[test]
fn sweep_rows_are_ordered_and_survive_failed_points() {
    let out = possi(
        &[
            "sweep",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
            "--param",
            "lambda",
            "--from",
            "0",
            "--to",
            "1",
            "--steps",
            "5",
            "--format",
            "csv",
        ],
        &[],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<String>> = text.lines().skip(1).map(split_csv).collect();
    assert_eq!(rows.len(), 5);
    let lambdas: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(lambdas, ["0", "0.25", "0.5", "0.75", "1"]);
    // fair-premium endpoint is exact full coverage
    assert_eq!(rows[0][3], "1");
    assert_eq!(rows[0][4], "1");
    // interior points carry exact rates
    assert!(!rows[1][3].is_empty());
    assert!(!rows[2][3].is_empty());
    // the λ = 1 endpoint has no interior optimum yet still reports a row
    assert_eq!(rows[4][3], "");
    assert!(rows[4][12].contains("exact solve unavailable"));
}

#[test]
fn mixture_sweep_endpoints_match_pure_operators() {
    let sweep = possi(
        &[
            "sweep",
            "--input",
            fixture("mix_operator.json").to_str().unwrap(),
            "--param",
            "c",
            "--from",
            "0",
            "--to",
            "1",
            "--steps",
            "3",
            "--format",
            "csv",
        ],
        &[],
    );
    assert!(sweep.status.success());
    let text = stdout(&sweep);
    let rows: Vec<Vec<String>> = text.lines().skip(1).map(split_csv).collect();
    assert_eq!(rows.len(), 3);

    let compare = possi(
        &[
            "compare",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
            "--operators",
            "t1,t2",
            "--format",
            "csv",
        ],
        &[],
    );
    let ctext = stdout(&compare);
    let crows: Vec<Vec<String>> = ctext
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(split_csv)
        .collect();
    // c = 0 is all right operator (t2), c = 1 all left (t1)
    assert_eq!(rows[0][4], crows[1][4]);
    assert_eq!(rows[2][4], crows[0][4]);
}

#[test]
fn compare_reports_rates_and_predicted_gap() {
    let out = possi(
        &[
            "compare",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
            "--operators",
            "t1,t2,mix:0.5",
            "--format",
            "csv",
        ],
        &[],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    let rows: Vec<Vec<String>> = lines[1..=3].iter().map(|l| split_csv(l)).collect();
    assert_eq!(rows[0][2], "t1");
    assert_eq!(rows[0][4], "0.560975609756");
    assert_eq!(rows[1][2], "t2");
    assert_eq!(rows[1][4], "0.448979591837"); // 22/49
    assert_eq!(rows[2][2], "mix:0.5");
    assert_eq!(rows[2][4], "0.511312217195"); // harmonic combination
    assert_eq!(lines[4], "# predicted_gap_t1_t2,0.462962962963"); // 25/54
}

#[test]
fn compare_same_operator_gives_identical_rows_and_zero_gap() {
    let out = possi(
        &[
            "compare",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
            "--operators",
            "t1,t1",
            "--format",
            "csv",
        ],
        &[],
    );
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], rows[1]);
}

#[test]
fn json_output_has_typed_records() {
    let out = possi(
        &[
            "solve",
            "--input",
            fixture("trapezoid_crra.json").to_str().unwrap(),
            "--format",
            "json",
        ],
        &[],
    );
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rec = &doc["records"][0];
    assert_eq!(rec["mode"], "solve");
    assert_eq!(rec["operator"], "t2");
    assert!(rec["beta_approx"].is_f64() || rec["beta_approx"].is_number());
    assert!(rec["e_f"].as_f64().unwrap() > 0.0);
}

#[test]
fn schema_errors_exit_with_two() {
    let out = possi(
        &[
            "solve",
            "--input",
            fixture("bad_schema.json").to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("invalid problem file"), "stderr: {err}");

    let missing = possi(&["solve", "--input", "/nonexistent/p.json"], &[]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn csv_output_is_byte_stable_across_runs() {
    let input = fixture("log_t2.json");
    let args = [
        "sweep",
        "--input",
        input.to_str().unwrap(),
        "--param",
        "lambda",
        "--from",
        "0",
        "--to",
        "0.4",
        "--steps",
        "9",
        "--format",
        "csv",
    ];
    let first = possi(&args, &[]);
    let second = possi(&args, &[]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn quadrature_env_override_is_honored() {
    let ok = possi(
        &[
            "solve",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
            "--format",
            "csv",
        ],
        &[("POSSI_QUAD_NODES", "16")],
    );
    assert!(ok.status.success());
    // polynomial indicators are exact already at 16 nodes
    let text = stdout(&ok);
    let row = split_csv(text.lines().nth(1).unwrap());
    assert_eq!(row[4], "0.560975609756");

    let bad = possi(
        &[
            "solve",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
        ],
        &[("POSSI_QUAD_NODES", "1")],
    );
    assert_eq!(bad.status.code(), Some(2));
    let nonint = possi(
        &[
            "solve",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
        ],
        &[("POSSI_QUAD_NODES", "many")],
    );
    assert_eq!(nonint.status.code(), Some(2));
}

#[test]
fn sweep_over_mixture_weight_requires_mix_operator() {
    let out = possi(
        &[
            "sweep",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
            "--param",
            "c",
            "--from",
            "0",
            "--to",
            "1",
            "--steps",
            "3",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn positivity_note_switches_on_past_the_loading_threshold() {
    // E_f = 3/2 for this risk, so the guarantee needs λ > 2/3 strictly;
    // the grid hits 2/3 exactly and must stay silent there.
    let out = possi(
        &[
            "sweep",
            "--input",
            fixture("exponential_t1.json").to_str().unwrap(),
            "--param",
            "lambda",
            "--from",
            "0",
            "--to",
            "1",
            "--steps",
            "4",
            "--format",
            "csv",
        ],
        &[],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<String>> = text.lines().skip(1).map(split_csv).collect();
    let noted: Vec<bool> = rows
        .iter()
        .map(|r| r[12].contains("positivity guaranteed"))
        .collect();
    assert_eq!(noted, [false, false, false, true]);
}

#[test]
fn table_format_renders_header_and_rows() {
    let out = possi(
        &[
            "solve",
            "--input",
            fixture("fair_premium.json").to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("mode"));
    assert!(text.lines().count() >= 2);
}
