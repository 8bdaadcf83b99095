use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxcurve"))
        .args(args)
        .env_remove("MAXCURVE_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn ggk_feasible_set_is_empty_and_present() {
    let out = run(&["feasible", "--q", "3", "--n", "3", "--family", "ggk"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"feasible\": []"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["theorem_tag"], "1.1");
}

#[test]
fn unramified_theorem_passes() {
    let v = json(&["theorem", "--id", "1.2", "--q", "2", "--n", "5"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"][0]["feasible"], serde_json::json!([11]));
}

#[test]
fn hermitian_count() {
    let v = json(&["count", "--family", "hermitian", "--Q", "3"]);
    assert_eq!(v["total"], 28);
    assert_eq!(v["maximal"], true);
}

#[test]
fn json_keys_keep_a_stable_order_and_output_is_deterministic() {
    let args = ["feasible", "--family", "xn", "--q", "3", "--n", "3", "--workers", "2"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    let pos = |k: &str| s.find(&format!("\"{k}\"")).unwrap();
    assert!(pos("Q") < pos("genus") && pos("genus") < pos("bounds") && pos("bounds") < pos("feasible"));
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["count", "--q", "6"],
        vec!["count", "--family", "xn", "--q", "2", "--n", "4"],
        vec!["count", "--Q", "8", "--q", "2", "--n", "2"],
        vec!["frobnicate"],
        vec!["theorem"],
        vec!["theorem", "--id", "9.9"],
        vec!["isigma", "--Q", "3", "--element", "not json"],
        vec!["isigma", "--Q", "2", "--element", r#"{"a":[1,0],"b":[0,0],"c":[0,0]}"#],
        vec!["count", "--budget", "0"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn diagnostics_are_distinct() {
    let msgs: Vec<String> = [
        vec!["count", "--q", "6"],
        vec!["count", "--family", "ggk", "--q", "3", "--n", "3", "--budget", "100"],
        vec!["frobnicate"],
    ]
    .iter()
    .map(|a| String::from_utf8(run(a).stderr).unwrap())
    .collect();
    assert!(msgs[0].contains("not a prime power"));
    assert!(msgs[1].starts_with("budget exceeded"));
    assert!(msgs[2].contains("unrecognized subcommand"));
}

#[test]
fn verification_failures_exit_2() {
    // forced: an overridden genus makes the Hermitian curve non-maximal
    let out = run(&["maximality", "--family", "hermitian", "--Q", "3", "--genus", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["maximal"], false);
    // forced: a quotient genus no subgroup of order 6 attains
    let out = run(&["quotient", "--Q", "8", "--d", "6", "--genus", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out).lines().count(), 1);
    // a theorem applied outside its hypotheses is a usage error, not a failed check
    let out = run(&["theorem", "--id", "1.2", "--q", "3", "--n", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn maximality_passes_for_families() {
    for args in [
        vec!["maximality", "--family", "ggk", "--q", "2", "--n", "3"],
        vec!["maximality", "--family", "xn", "--q", "3", "--n", "3"],
        vec!["maximality", "--family", "yrem", "--q", "2"],
    ] {
        assert_eq!(json(&args)["maximal"], true, "{args:?}");
    }
}

#[test]
fn budget_flag_overrides_environment() {
    let bin = env!("CARGO_BIN_EXE_maxcurve");
    let args = ["count", "--family", "ggk", "--q", "3", "--n", "3"];
    let env_only = Command::new(bin).args(args).env("MAXCURVE_BUDGET", "100").output().unwrap();
    assert_eq!(env_only.status.code(), Some(1));
    let both = Command::new(bin)
        .args(args)
        .args(["--budget", "1000000"])
        .env("MAXCURVE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(both.status.code(), Some(0));
}

#[test]
fn isigma_sweep_agrees_with_oracles() {
    let v = json(&["isigma", "--Q", "3"]);
    assert_eq!(v["elements"], 215);
    assert_eq!(v["mismatches"], 0);
    let row = &v["rows"][0];
    for key in ["i", "case_tag", "oracle_agreement"] {
        assert!(row.get(key).is_some(), "{key}");
    }
    let single = json(&["isigma", "--Q", "2", "--element", r#"{"a":[0,1],"b":[0,0],"c":[0,0]}"#]);
    assert_eq!(single["rows"][0]["i"], 3);
    assert_eq!(single["rows"][0]["case_tag"], "homology");
}

#[test]
fn isigma_matrix_outside_the_stabilizer() {
    let swap = "[[[0,0],[0,0],[1,0]],[[0,0],[1,0],[0,0]],[[1,0],[0,0],[0,0]]]";
    let v = json(&["isigma", "--Q", "3", "--matrix", swap]);
    assert_eq!(v["rows"][0]["class"], "rational");
    assert_eq!(v["rows"][0]["oracle_agreement"], true);
    let bad = "[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[1,0],[0,0],[1,0]]]";
    assert_eq!(run(&["isigma", "--Q", "3", "--matrix", bad]).status.code(), Some(1));
}

#[test]
fn quotient_by_central_subgroups() {
    for (d, g) in [(2u64, 12u64), (4, 4), (8, 0)] {
        let v = json(&["quotient", "--Q", "8", "--d", &d.to_string()]);
        assert_eq!(v["method"], "center");
        assert_eq!(v["profiles"][0]["genus"], g);
        assert_eq!(v["agreement"], true);
    }
}

#[test]
fn remark_profile_listed() {
    let out = run(&["profile", "--Q", "8", "--genus", "3", "--d", "6", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("n0,n1,n2,n3,n_q1,n_q2,u,v,deg_r\n"));
    assert!(text.lines().any(|l| l == "0,2,0,0,2,1,2,3,30"));
}

#[test]
fn csv_header_for_empty_sweeps() {
    let out = run(&["profile", "--Q", "8", "--genus", "20", "--d", "6", "--format", "csv"]);
    assert_eq!(stdout(&out), "n0,n1,n2,n3,n_q1,n_q2,u,v,deg_r\n");
}

#[test]
fn feasible_csv_has_one_row_per_degree() {
    let out = run(&["feasible", "--family", "xn", "--q", "3", "--n", "3", "--format", "csv"]);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "Q,q,n,family,genus,d,status,reason,deg_r");
    assert_eq!(rows.len(), 1 + 15);
    assert!(rows.contains(&"27,3,3,xn,24,12,feasible,,148"));
    assert!(rows.contains(&"27,3,3,xn,24,15,eliminated,profile,10"));
}

#[test]
fn table_output_is_aligned() {
    let out = run(&["theorem", "--id", "1.1", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2 + 6);
    let col = lines[0].find("expected").unwrap();
    assert!(lines[2..].iter().all(|l| l.len() > col));
}

#[test]
fn help_exits_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
