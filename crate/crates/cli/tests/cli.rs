use std::process::{Command, Output};

use sphsplit::report::strip_duration;

fn sphsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphsplit"))
        .args(args)
        .output()
        .expect("run sphsplit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(csv: &str, section: &str, quantity: &str, col: usize) -> String {
    csv.lines()
        .find(|l| l.starts_with(&format!("{section},{quantity},")))
        .unwrap_or_else(|| panic!("no row {section},{quantity}"))
        .split(',')
        .nth(col)
        .unwrap()
        .to_string()
}

#[test]
fn oracle_prints_closed_forms() {
    let o = sphsplit(&["oracle", "--t", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "means", "lambda_Z", 2), "5");
    assert_eq!(field(&text, "adjacency", "mu_ZV", 2), "3.6");
    assert!(text.contains("no closed form: mu_ZS"));
}

#[test]
fn negative_time_is_a_usage_error() {
    for cmd in ["simulate", "oracle", "gc", "intersect", "export"] {
        let o = sphsplit(&[cmd, "--t", "-1"]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("t must be ≥ 0"), "{cmd}");
    }
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(sphsplit(&["simulate"]).status.code(), Some(2));
    assert_eq!(sphsplit(&["simulate", "--t", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(sphsplit(&["capacity", "--t", "1", "--cap", "1.57,0,0.2"]).status.code(), Some(2));
    assert_eq!(sphsplit(&["capacity", "--t", "1", "--cap", "1,2"]).status.code(), Some(2));
    let o = sphsplit(&["oracle", "--t", "1", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot write"));
}

#[test]
fn exhausted_budget_exits_with_three() {
    let o = sphsplit(&["simulate", "--t", "4", "--reps", "50", "--max-rejection-iters", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn simulate_is_reproducible_and_thread_independent() {
    let args = ["simulate", "--t", "1", "--reps", "500", "--seed", "9"];
    let a = sphsplit(&[&args[..], &["--jobs", "1"]].concat());
    let b = sphsplit(&[&args[..], &["--jobs", "3"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(strip_duration(&stdout(&a)), strip_duration(&stdout(&b)));
    let c = sphsplit(&["simulate", "--t", "1", "--reps", "500", "--seed", "10"]);
    assert_ne!(strip_duration(&stdout(&a)), strip_duration(&stdout(&c)));
    let text = stdout(&a);
    assert!(text.contains("# seed = 9"));
    assert!(text.contains("# param reps = 500"));
    assert_eq!(field(&text, "means", "lambda_Z", 4), "5");
    let z: f64 = field(&text, "means", "lambda_Z", 5).parse().unwrap();
    assert!(z.abs() < 4.0);
}

#[test]
fn structured_output_is_toml() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gc.toml");
    let o = sphsplit(&[
        "gc",
        "--t",
        "2",
        "--reps",
        "300",
        "--format",
        "structured",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: toml::Table = std::fs::read_to_string(&path).unwrap().parse().unwrap();
    assert_eq!(v["manifest"]["command"].as_str(), Some("gc"));
    assert_eq!(v["manifest"]["schema"].as_integer(), Some(1));
    let rows = v["sections"][0]["rows"].as_array().unwrap();
    let lz = rows.iter().find(|r| r["quantity"].as_str() == Some("lambda_Z")).unwrap();
    assert_eq!(lz["oracle"].as_float(), Some(10.0));
}

#[test]
fn capacity_reports_the_two_cap_terms() {
    let o = sphsplit(&[
        "capacity",
        "--t",
        "1",
        "--reps",
        "2000",
        "--cap",
        "0.7853981633974483,0,0.2617993877991494",
        "--cap",
        "0.7853981633974483,1.5707963267948966,0.2617993877991494",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let sep: f64 = field(&text, "capacity", "tau_separating", 2).parse().unwrap();
    assert!((sep - 0.1128).abs() < 1e-3);
    let z: f64 = field(&text, "capacity", "avoid", 5).parse().unwrap();
    assert!(z.abs() < 4.0);
}

#[test]
fn intersect_reports_counts_and_the_equator_pair() {
    let o = sphsplit(&["intersect", "--t", "1", "--reps", "1000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(field(&text, "section", "equator_pair_present", 2), "1");
    assert_eq!(field(&text, "section", "upper_count", 4), "1");
    assert!(sphsplit(&["intersect", "--t", "1", "--normal", "0,0,1"]).status.code() == Some(2));
}

#[test]
fn export_writes_one_row_per_edge() {
    let o = sphsplit(&["export", "--t", "2", "--seed", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# sphsplit-geometry v1"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "edge,carrier,nx,ny,nz,ax,ay,az,bx,by,bz,left,right");
    let edges: usize = text
        .lines()
        .find_map(|l| l.split_whitespace().find_map(|w| w.strip_prefix("edges=")))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(rows.len() - 1, edges);
    let s = sphsplit(&["export", "--t", "2", "--seed", "5", "--model", "gc", "--format", "structured"]);
    let v: toml::Table = stdout(&s).parse().unwrap();
    assert!(!v["edges"].as_array().unwrap().is_empty());
}

#[test]
fn quick_selftest_runs() {
    let o = sphsplit(&[
        "selftest",
        "--reps",
        "200",
        "--capacity-reps",
        "2000",
        "--crofton-samples",
        "2000",
    ]);
    assert!(matches!(o.status.code(), Some(0) | Some(1)));
    let text = stdout(&o);
    for k in 1..=11 {
        assert!(text.contains(&format!("# criterion_{k:02}: ")), "criterion {k}");
    }
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().filter(|l| l.starts_with("criterion")).count(), 11);
}
