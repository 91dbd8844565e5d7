//! The installed binary: output, exit codes and environment overrides.

use std::process::{Command, Output};

fn catpaths(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_catpaths"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn meander_slice() {
    let o = catpaths(&["series", "--jumps=-1:1,1:1,q=1", "--N", "6", "--slice", "meanders"], &[]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1,1,2,4,8,17,35");
}

#[test]
fn exit_codes() {
    assert_eq!(catpaths(&["series", "--N", "x"], &[]).status.code(), Some(2));
    assert_eq!(catpaths(&["reproduce-paper", "--only", "42"], &[]).status.code(), Some(2));
    assert_eq!(catpaths(&["reproduce-paper", "--only", "1"], &[]).status.code(), Some(0));
    assert_eq!(catpaths(&["constants", "--jumps", "-1:4,1:1,q=2"], &[]).status.code(), Some(1));
}

#[test]
fn critical_window_comes_from_the_environment() {
    let args = ["constants", "--jumps", "-1:4,1:1,q=2", "--allow-periodic"];
    let regime = |o: &Output| stdout(o).lines().find(|l| l.starts_with("regime")).map(str::to_string);
    assert_eq!(regime(&catpaths(&args, &[])).as_deref(), Some("regime = NoRoot"));
    let widened = catpaths(&args, &[("CATPATHS_TOL_CRITICAL", "0.6")]);
    assert_eq!(regime(&widened).as_deref(), Some("regime = CriticalRoot"));
}

#[test]
fn waiting_time_csv() {
    let o = catpaths(&["law", "--param", "waiting", "--K", "400", "--csv"], &[]);
    let rows: Vec<f64> = stdout(&o).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 401);
    assert!(rows[6] > rows[4]);
    assert!((rows.iter().sum::<f64>() - 1.0).abs() < 1e-6);
}
