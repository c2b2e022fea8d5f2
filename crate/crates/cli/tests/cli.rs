use std::io::Write;
use std::process::{Command, Output};

fn toricoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fan_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const P2: &str =
    "rank = 2\nrays = [[1, 0], [0, 1], [-1, -1]]\nmax_cones = [[0, 1], [1, 2], [2, 0]]\n";

#[test]
fn p2_trivial_table_with_all_routes() {
    let o = toricoh(&[
        "table",
        "--fan",
        "builtin:P2",
        "--divisor",
        "0,0,0",
        "--route",
        "all",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("route ALL"));
    let rows: Vec<&str> = out.lines().skip(2).collect();
    assert_eq!(
        rows,
        vec!["   0   1   0   0", "   1   0   1   0", "   2   0   0   1"]
    );
}

#[test]
fn table_json_has_exact_integers() {
    let o = toricoh(&[
        "table",
        "--fan",
        "builtin:F1",
        "--divisor",
        "1,0,0,0",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["i"], 1);
    assert_eq!(v["entries"][1][1], 2);
    assert_eq!(v["entries"][0][0], 2);
}

#[test]
fn single_cell_filter() {
    let o = toricoh(&[
        "table",
        "--fan",
        "builtin:F1",
        "--divisor",
        "1,0,0,0",
        "-k",
        "1",
        "-l",
        "1",
    ]);
    assert_eq!(stdout(&o), "h^1(Ω^1) = 2\n");
}

#[test]
fn vanishing_passes_for_the_fiber() {
    let o = toricoh(&["vanishing", "--fan", "builtin:F1", "--divisor", "1,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS (i = 1)"));
}

#[test]
fn classify_negative_divisor() {
    let o = toricoh(&["classify", "--fan", "builtin:P2", "--divisor", "-1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("cartier: yes"));
    assert!(out.contains("semiample: no"));
    assert!(out.contains("NOT_SEMIAMPLE"));
}

#[test]
fn non_semiample_table_is_a_validation_error() {
    let o = toricoh(&["table", "--fan", "builtin:P2", "--divisor", "-1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NOT_SEMIAMPLE"));
}

#[test]
fn usage_errors() {
    assert_eq!(toricoh(&["frobnicate"]).status.code(), Some(1));
    let o = toricoh(&["table", "--fan", "builtin:P2", "--divisor", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = toricoh(&["table", "--fan", "builtin:P9", "--divisor", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = toricoh(&["table", "--fan", "builtin:P2", "--divisor", "0,x,0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fan_files() {
    let good = fan_file(P2);
    let path = good.path().to_str().unwrap();
    let o = toricoh(&["validate", "--fan", path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid"));

    let dup = fan_file("rank = 2\nrays = [[1, 0], [1, 0]]\nmax_cones = [[0], [1]]\n");
    let o = toricoh(&["validate", "--fan", dup.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("PARSE_ERROR"));
    assert!(stderr(&o).contains("duplicate ray"));

    let nonprimitive = fan_file(
        "rank = 2\nrays = [[2, 4], [0, 1], [-1, -1]]\nmax_cones = [[0, 1], [1, 2], [2, 0]]\n",
    );
    let o = toricoh(&["validate", "--fan", nonprimitive.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NONPRIMITIVE_RAY"));

    let incomplete = fan_file("rank = 2\nrays = [[1, 0], [0, 1]]\nmax_cones = [[0, 1]]\n");
    let o = toricoh(&[
        "table",
        "--fan",
        incomplete.path().to_str().unwrap(),
        "--divisor",
        "0,0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NOT_COMPLETE"));

    let o = toricoh(&["validate", "--fan", "/nonexistent/fan.toml"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn every_builtin_validates_and_has_a_diagonal_table() {
    let list = stdout(&toricoh(&["example"]));
    let names: Vec<String> = list
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    assert_eq!(names.len(), 11);
    for name in &names {
        let source = format!("builtin:{name}");
        assert_eq!(
            toricoh(&["validate", "--fan", &source]).status.code(),
            Some(0)
        );
        let fan = stdout(&toricoh(&["example", name, "--format", "json"]));
        let v: serde_json::Value = serde_json::from_str(&fan).unwrap();
        let n = v["rays"].as_array().unwrap().len();
        let zeros = vec!["0"; n].join(",");
        let o = toricoh(&[
            "table",
            "--fan",
            &source,
            "--divisor",
            &zeros,
            "--format",
            "json",
        ]);
        let t: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        for (k, row) in t["entries"].as_array().unwrap().iter().enumerate() {
            for (l, x) in row.as_array().unwrap().iter().enumerate() {
                if k != l {
                    assert_eq!(x, 0, "{name} ({k},{l})");
                }
            }
        }
    }
}

#[test]
fn example_round_trips_through_a_file() {
    let text = stdout(&toricoh(&["example", "F2"]));
    let f = fan_file(&text);
    let path = f.path().to_str().unwrap();
    let a = toricoh(&["table", "--fan", path, "--divisor", "1,0,0,1"]);
    let b = toricoh(&["table", "--fan", "builtin:F2", "--divisor", "1,0,0,1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "cocycles",
        "--fan",
        "builtin:F1",
        "--divisor",
        "1,0,0,0",
        "-k",
        "1",
        "-l",
        "1",
    ];
    let a = toricoh(&args);
    let b = toricoh(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("2 generators"));
}

#[test]
fn cocycles_reject_wrong_degree() {
    let o = toricoh(&[
        "cocycles",
        "--fan",
        "builtin:P2",
        "--divisor",
        "1,0,0",
        "-k",
        "0",
        "-l",
        "0",
        "--f",
        "2,0,0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("DEGREE_MISMATCH"));
    let o = toricoh(&[
        "cocycles",
        "--fan",
        "builtin:P2",
        "--divisor",
        "1,0,0",
        "-k",
        "0",
        "-l",
        "0",
        "--f",
        "0,0,1",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 3);
}

#[test]
fn ishida_and_chow_of_p2() {
    let o = toricoh(&["ishida", "--fan", "builtin:P2", "-l", "1"]);
    assert_eq!(stdout(&o), "l = 1: terms [2, 3], cohomology [0, 1]\n");
    let o = toricoh(&["chow", "--fan", "builtin:P2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dims: Vec<i64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim"].as_i64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 1, 1]);
}
