use std::path::PathBuf;

use qgame_cli::run;
use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn json_of(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout));
    (out.code, v)
}

#[test]
fn ghz_dist_even_parity() {
    let (code, v) = json_of(&[
        "qgame", "ghz-dist", "--n", "3", "--phases", "0,0,0", "--output", "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        v["distribution"],
        json!({"000": 0.25, "001": 0, "010": 0, "011": 0.25, "100": 0, "101": 0.25, "110": 0.25, "111": 0})
    );
}

#[test]
fn diagram_eval_bell_pair() {
    let (code, v) = json_of(&["qgame", "diagram-eval", "spider(0,2)", "--output", "json"]);
    assert_eq!(code, 0);
    assert_eq!(
        v["amplitudes"],
        json!({"00": [1, 0], "01": [0, 0], "10": [0, 0], "11": [1, 0]})
    );
    assert_eq!(v["output_dims"], json!([2, 2]));
}

#[test]
fn diagram_from_file() {
    let dir = std::env::temp_dir().join(format!("qgame-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.txt");
    std::fs::write(&path, "# a comment\nspider(1,2) ; (box(H) * id(1))\n").unwrap();
    let (code, v) = json_of(&[
        "qgame",
        "diagram-check",
        "--input",
        path.to_str().unwrap(),
        "--output",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        (v["inputs"].clone(), v["outputs"].clone()),
        (json!(1), json!(2))
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn ewl_state_reports_amplitudes() {
    let f = fixture("pd_ewl_3strat.json");
    let (code, v) = json_of(&[
        "qgame",
        "ewl-state",
        "-i",
        &f,
        "--profile",
        "I,H",
        "--output",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payoffs"], json!([0.5, 3]));
    assert_eq!(
        v["distribution"],
        json!({"00": 0, "01": 0.5, "10": 0, "11": 0.5})
    );
}

#[test]
fn nash_on_four_strategies() {
    let f = fixture("pd_ewl_4strat.json");
    let (_, v) = json_of(&["qgame", "ewl-nash", "-i", &f, "--output", "json"]);
    assert_eq!(v, json!({"equilibria": [["Z", "Z"]]}));
}

#[test]
fn table_output_is_text() {
    let out = run(["qgame", "mermin"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("0 of 64"));
}

#[test]
fn input_errors_exit_one() {
    let out = run([
        "qgame",
        "diagram-check",
        "spider(1,2) ; box(H)",
        "--output",
        "json",
    ]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "input");
    assert!(out.stderr.starts_with("error: "));

    let out = run(["qgame", "ewl-table", "--input", "/nonexistent/game.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.is_empty());

    let f = fixture("pd_ewl_3strat.json");
    assert_eq!(
        run(["qgame", "ewl-state", "-i", &f, "--profile", "I,Q"]).code,
        1
    );
    assert_eq!(run(["qgame", "bayes-payoff", "-i", &f]).code, 1);
    assert_eq!(
        run(["qgame", "ghz-dist", "--n", "3", "--phases", "0,0"]).code,
        1
    );
    assert_eq!(
        run(["qgame", "no-such-command", "--output", "json"]).code,
        1
    );
}

#[test]
fn limits_exit_two() {
    let f = fixture("mermin_ghz3.json");
    let (code, v) = json_of(&[
        "qgame",
        "bell-bound",
        "-i",
        &f,
        "--limit",
        "63",
        "--output",
        "json",
    ]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "limit");
    assert_eq!(
        run(["qgame", "bayes-payoff", "-i", &f, "--limit", "10"]).code,
        2
    );
    assert_eq!(run(["qgame", "diagram-eval", "spider(0,13)"]).code, 2);
}

#[test]
fn json_keys_sorted() {
    let f = fixture("chsh_common_interest.json");
    let out = run(["qgame", "bell-value", "-i", &f, "--output", "json"]);
    let keys: Vec<&str> = out
        .stdout
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(keys.contains(&"exceeds_classical_bound"));
}

#[test]
fn help_exits_zero() {
    let out = run(["qgame", "--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("ghz-dist"));
}
