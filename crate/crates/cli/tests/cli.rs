use std::process::Command;

use loctab_cli::verify::{run_verify, Status};
use loctab_cli::{RunConfig, EXIT_ASSERTION, EXIT_CAPACITY, EXIT_OK};

fn loctab() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_loctab"));
    c.env_remove("LOCTAB_CONFIG");
    c
}

#[test]
fn unreachable_floor_fails_lemma310_only() {
    let cfg = RunConfig { yb_floor: 10.0, ..RunConfig::default() };
    let rep = run_verify(&cfg, Some("order.lemma310"));
    assert_eq!(rep.suites.len(), 1);
    assert_eq!(rep.suites[0].status, Status::Fail);
    assert_eq!(rep.exit_code(), EXIT_ASSERTION);
    assert!(rep.text().contains("below floor 10"));
    assert!(rep.text().ends_with("SUITES total=1 passed=0\n"));
}

#[test]
fn tiny_sieve_is_a_capacity_error() {
    let out = loctab().args(["--sieve-limit", "10", "verify"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_CAPACITY));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[ERROR] arith.factorization"));

    let out = loctab().args(["--sieve-limit", "10", "--allow-skips", "verify"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[SKIP] arith.factorization"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "k = 1\nmcSeed = 9\n").unwrap();
    let out = loctab().env("LOCTAB_CONFIG", &path).args(["table", "--n", "4"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "k,N,A,ratio,ratio_step,wall_ms\n1,4,9,,,0\n");
    let out = loctab().env("LOCTAB_CONFIG", &path).args(["--k", "2", "table", "--n", "2"]).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().ends_with("2,2,4,,,0\n"));

    std::fs::write(&path, "nonsense = 1\n").unwrap();
    let out = loctab().env("LOCTAB_CONFIG", &path).arg("constants").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_CAPACITY));
}

#[test]
fn sweeps_write_dat_and_output_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f.csv");
    let dat = dir.path().join("f.dat");
    let status =
        loctab().args(["farey", "--kp1", "2", "--r", "1,2,3", "-o"]).arg(&csv).arg("--dat").arg(&dat).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));
    assert_eq!(
        std::fs::read_to_string(&csv).unwrap(),
        "kp1,R,direct,characterized,equal\n2,1,1,1,true\n2,2,2,2,true\n2,3,6,6,true\n"
    );
    assert_eq!(std::fs::read_to_string(&dat).unwrap(), "# R direct characterized\n1 1 1\n2 2 2\n3 6 6\n");
}

#[test]
fn small_commands() {
    let run = |args: &[&str]| String::from_utf8(loctab().args(args).output().unwrap().stdout).unwrap();
    assert_eq!(run(&["orderstats", "--r", "2", "--u", "1", "--v", "2"]), "3/4\n");
    assert_eq!(run(&["--k", "2", "localized", "12", "--y", "1,1", "--z", "3,4"]), "4\n");
    assert!(run(&["--k", "1", "constants"]).contains("\n1,2,2,2,"));
}
