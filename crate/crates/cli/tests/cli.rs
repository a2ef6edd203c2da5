use std::process::{Command, Output};

fn unimod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unimod"))
        .args(args)
        .env_remove("UNIMOD_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn help_lists_subcommands() {
    let o = unimod(&["--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for cmd in ["table", "check", "theta", "wenum", "lp", "fib"] {
        assert!(text.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn table_has_twelve_rows() {
    let o = unimod(&["table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = text.lines().filter(|l| l.starts_with("| ") && l.chars().nth(2).unwrap().is_ascii_digit()).count();
    assert_eq!(rows, 12);
    assert!(text.contains("> config: {"));
}

#[test]
fn table_single_row_and_rejection() {
    let o = unimod(&["table", "--dmax", "8", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let data: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2);
    assert!(data[1].starts_with("8,4,0,0,0,"));
    assert_eq!(unimod(&["table", "--dmax", "10"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(unimod(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(unimod(&["theta", "--lattice", "a2"]).status.code(), Some(2));
    assert_eq!(unimod(&["wenum", "--code", "nope"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_unimod"))
        .args(["table"])
        .env("UNIMOD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hecke_and_deligne_and_dims() {
    let o = unimod(&["check", "hecke"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("3044 pairs, 0 failures"));
    let o = unimod(&["check", "deligne"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("p=17"));
    let o = unimod(&["check", "dims"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all k <= 400 agree"));
}

#[test]
fn leech_shells() {
    let o = unimod(&["theta", "--lattice", "leech", "--max-norm", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["counts"][2], 0);
    assert_eq!(v["result"]["counts"][4], 196560);
    assert_eq!(v["result"]["delta_coefficient"], "-65520/691");
}

#[test]
fn tiny_budget_exits_three() {
    let o = unimod(&["theta", "--lattice", "leech", "--max-norm", "4", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn wenum_golay() {
    let o = unimod(&["wenum", "--code", "golay24"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("| 8 | 759 |"));
    assert!(text.contains("Type II: true"));
}

#[test]
fn fib_csv_has_spectrum() {
    let o = unimod(&["fib", "--k", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# table: gap labels"));
    let spectrum = text.split("# table: spectrum\n").nth(1).unwrap();
    // header plus F_10 = 55 eigenvalues, then the verdict line
    assert_eq!(spectrum.lines().filter(|l| !l.starts_with('#')).count(), 56);
}

#[test]
fn json_is_deterministic() {
    let args = ["check", "simplex", "--count", "10", "--seed", "7", "--format", "json"];
    let a = unimod(&args);
    let b = unimod(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["config"]["count"], 10);
}

#[test]
fn every_format_for_every_cheap_command() {
    let cases: [&[&str]; 4] = [
        &["table", "--dmax", "24"],
        &["wenum", "--code", "hamming8"],
        &["theta", "--lattice", "e8", "--max-norm", "4"],
        &["fib", "--k", "8"],
    ];
    for args in cases {
        for fmt in ["md", "csv", "json"] {
            let mut full = args.to_vec();
            full.extend(["--format", fmt]);
            let o = unimod(&full);
            assert_eq!(o.status.code(), Some(0), "{full:?}");
            let text = stdout(&o);
            match fmt {
                "md" => assert!(text.starts_with("# unimod ") && text.contains("**PASS**")),
                "csv" => assert!(text.starts_with("# config: ") && text.contains("# PASS")),
                _ => assert_eq!(serde_json::from_str::<serde_json::Value>(&text).unwrap()["passed"], true),
            }
        }
    }
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("unimod-cli-test-{}.json", std::process::id()));
    let o = unimod(&["table", "--dmax", "16", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn small_lp_run() {
    let o = unimod(&["lp", "--dim", "8", "--degree", "10", "--n-sign", "200", "--n-pos", "200", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ratio = v["result"]["ratio_to_best_lattice"].as_f64().unwrap();
    assert!((1.0..1.1).contains(&ratio), "{ratio}");
    assert_eq!(v["result"]["best_lattice"], "e8");
}
