//! End-to-end tests of the command-line binary: output formats and the
//! exit-code contract (0 ok, 1 input, 2 hypothesis violation, 3 cap).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heavycycle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

const G1: &str = "3 3\n0 1 1\n1 2 1\n2 0 1\n";
const G2: &str = "3 5\n0 2 0.3\n0 1 0.7\n1 2 0.5\n1 0 0.5\n2 0 1.0\n";

#[test]
fn find_emits_a_valid_certificate_for_g1() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = write(dir.path(), "g1.el", G1);
    let out = run(&["find", &g1]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("n 3"));
    assert!(text.contains("achieved 3.0000000000000000e0"));
    assert!(text.contains("bound 6.309297536e-1"));
    assert!(text.contains("valid true"));
    assert!(text.contains("cycle 0 1 2 0"));
}

#[test]
fn find_trace_names_the_reduction_steps() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = write(dir.path(), "g2.el", G2);
    let out = run(&["find", &g2, "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("cycle 0 1 2 0"));
    let log = stderr(&out);
    assert!(log.contains("reduction steps"));
    assert!(log.contains("contract z="));
}

#[test]
fn find_rejects_weak_outdegrees_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let weak = write(dir.path(), "weak.el", "2 2\n0 1 0.4\n1 0 1.0\n");
    let out = run(&["find", &weak]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("vertex 0"));
}

#[test]
fn parse_errors_exit_1_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.el", "2 1\n0 1 -0.5\n");
    let out = run(&["find", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"));

    let out = run(&["find", dir.path().join("missing.el").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_accepts_emitted_and_rejects_tampered_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = write(dir.path(), "g1.el", G1);
    let out = run(&["find", &g1]);
    let cert_path = write(dir.path(), "cert.txt", &stdout(&out));
    let out = run(&["check", &g1, &cert_path]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("certificate OK"));

    let tampered = stdout(&run(&["find", &g1])).replace(
        "achieved 3.0000000000000000e0",
        "achieved 9.0000000000000000e0",
    );
    let bad_path = write(dir.path(), "bad_cert.txt", &tampered);
    let out = run(&["check", &g1, &bad_path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("re-sum"));

    // Certificate for a different graph: n mismatch is reported.
    let g2 = write(dir.path(), "g2.el", "4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n");
    let out = run(&["check", &g2, &cert_path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("n=3"));
}

#[test]
fn oracle_reports_exact_maximum() {
    let dir = tempfile::tempdir().unwrap();
    let g2 = write(dir.path(), "g2.el", G2);
    let out = run(&["oracle", &g2]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("weight 2.2000000000000002e0"),
        "got: {}",
        text
    );
    assert!(text.contains("cycle 0 1 2 0"));
}

#[test]
fn oracle_cap_exits_3_and_env_override_applies() {
    let dir = tempfile::tempdir().unwrap();
    let mut k4 = String::from("4 12\n");
    for a in 0..4 {
        for b in 0..4 {
            if a != b {
                k4.push_str(&format!("{} {} 1\n", a, b));
            }
        }
    }
    let path = write(dir.path(), "k4.el", &k4);
    let out = run(&["oracle", &path, "--cap", "3"]);
    assert_eq!(out.status.code(), Some(3));

    let out = bin()
        .args(["oracle", &path])
        .env("HEAVYCYCLE_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // The explicit flag outranks the environment.
    let out = bin()
        .args(["oracle", &path, "--cap", "100"])
        .env("HEAVYCYCLE_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn oracle_on_acyclic_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let dag = write(dir.path(), "dag.el", "3 2\n0 1 1\n1 2 1\n");
    let out = run(&["oracle", &dag]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic_and_validates_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.el");
    let b = dir.path().join("b.el");
    let out = run(&[
        "gen",
        "normalized",
        "--n",
        "5",
        "--k",
        "2",
        "--seed",
        "42",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "gen",
        "normalized",
        "--n",
        "5",
        "--k",
        "2",
        "--seed",
        "42",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let out = run(&["gen", "unweighted", "--n", "4", "--d", "4", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_loopheavy_produces_the_four_arc_fixture() {
    let out = run(&[
        "gen",
        "loopheavy",
        "--n",
        "2",
        "--eps",
        "0.2",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("2 4\n"));
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("0 0 2.0000000000000001e-1"));
    assert!(text.contains("0 1 8.0000000000000004e-1"));
}

#[test]
fn generated_files_flow_through_find_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.el");
    run(&[
        "gen",
        "layered",
        "--layers",
        "3",
        "--seed",
        "5",
        "--out",
        g.to_str().unwrap(),
    ]);
    let out = run(&["find", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let cert = write(dir.path(), "cert.txt", &stdout(&out));
    let out = run(&["check", g.to_str().unwrap(), &cert]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bench_csv_is_well_formed_and_bounded() {
    let out = run(&[
        "bench",
        "--family",
        "normalized",
        "--n",
        "4,8,16",
        "--k",
        "2",
        "--seeds",
        "10",
        "--oracle-limit",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,n,r,seed,bound_guarantee,bound_conjectured,bound_cuberoot,achieved_algorithm,oracle_max,runtime_ms"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 30);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 10);
        let n: usize = cols[1].parse().unwrap();
        let bound: f64 = cols[4].parse().unwrap();
        let achieved: f64 = cols[7].parse().unwrap();
        assert!(
            achieved >= bound - 1e-9,
            "row violates the guarantee: {}",
            row
        );
        if n <= 8 {
            let oracle: f64 = cols[8].parse().unwrap();
            assert!(achieved <= oracle + 1e-9, "row beats the oracle: {}", row);
        } else {
            assert!(cols[8].is_empty(), "oracle column should be blank: {}", row);
        }
    }
}

#[test]
fn bench_bound_columns_are_rederivable() {
    let out = run(&[
        "bench",
        "--family",
        "unweighted",
        "--n",
        "4,6",
        "--d",
        "2",
        "--seeds",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for row in stdout(&out).lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        let n: f64 = cols[1].parse().unwrap();
        let r: f64 = cols[2].parse().unwrap();
        let guarantee: f64 = cols[4].parse().unwrap();
        let conjectured: f64 = cols[5].parse().unwrap();
        let cuberoot: f64 = cols[6].parse().unwrap();
        assert!((guarantee - 1.0 / (n + r).log2()).abs() <= 1e-9);
        assert!((conjectured - 2.0 / n.log2()).abs() <= 1e-9);
        assert!((cuberoot - (24.0 * n).powf(-1.0 / 3.0)).abs() <= 1e-9);
        if n == 4.0 {
            // The family is loopless, so r = 0 and 1/log2(4) is exactly 0.5.
            assert_eq!(r, 0.0);
            assert!((guarantee - 0.5).abs() <= 1e-10, "row: {}", row);
        }
    }
}
