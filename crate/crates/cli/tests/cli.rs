//! End-to-end tests of the binary: subcommands, report shape, exit codes,
//! and determinism of outputs.

use std::path::Path;
use std::process::{Command, Output};

fn binlra(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binlra"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

fn strip_elapsed(v: &mut serde_json::Value) {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("elapsed_ms");
    }
}

#[test]
fn gen_lowerbound_writes_expected_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = binlra(
        dir.path(),
        &["gen", "lowerbound", "--k", "1", "--n", "6", "--out", "lb.bmx", "--factors"],
    );
    let report = stdout_json(&out);
    assert_eq!(report["generator"], "lowerbound");
    assert_eq!(report["files"].as_array().unwrap().len(), 3);

    let text = std::fs::read_to_string(dir.path().join("lb.bmx")).unwrap();
    // the all-ones matrix with the diagonal cleared
    assert_eq!(
        text,
        "6 6\n011111\n101111\n110111\n111011\n111101\n111110\n"
    );
    assert!(dir.path().join("lb.L.bmx").exists());
    assert!(dir.path().join("lb.R.bmx").exists());
}

#[test]
fn gen_negid_and_solve_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    binlra(dir.path(), &["gen", "negid", "--k", "2", "--out", "neg.bmx"]);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("neg.bmx")).unwrap(),
        "2 2\n01\n10\n"
    );
    assert!(dir.path().join("neg.U.bmx").exists());
    assert!(dir.path().join("neg.V.bmx").exists());

    // plain column selection leaves error 1 at k=1
    let out = binlra(
        dir.path(),
        &["solve", "css-gf2", "--k", "1", "--input", "neg.bmx"],
    );
    let report = stdout_json(&out);
    assert_eq!(report["error"], 1);
    assert_eq!(report["witness"]["subset"], serde_json::json!([0]));

    // generalized selection is exact at k=2
    let out = binlra(
        dir.path(),
        &["solve", "gcss-bool", "--k", "2", "--input", "neg.bmx", "--with-opt"],
    );
    let report = stdout_json(&out);
    assert_eq!(report["error"], 0);
    assert_eq!(report["ratio_vs_opt"], "exact");
}

#[test]
fn gen_planted_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen", "planted", "--rows", "5", "--cols", "6", "--k", "2", "--flip", "0", "--seed", "7",
        "--out",
    ];
    binlra(dir.path(), &[&args[..], &["a.bmx"]].concat());
    binlra(dir.path(), &[&args[..], &["b.bmx"]].concat());
    let a = std::fs::read(dir.path().join("a.bmx")).unwrap();
    let b = std::fs::read(dir.path().join("b.bmx")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn solve_reports_are_stable_modulo_elapsed() {
    let dir = tempfile::tempdir().unwrap();
    binlra(
        dir.path(),
        &["gen", "bernoulli", "--rows", "6", "--cols", "6", "--p", "3/10", "--seed", "5", "--out", "m.bmx"],
    );
    let args = ["solve", "css-gf2", "--k", "2", "--input", "m.bmx", "--with-opt"];
    let mut first = stdout_json(&binlra(dir.path(), &args));
    let mut second = stdout_json(&binlra(dir.path(), &args));
    strip_elapsed(&mut first);
    strip_elapsed(&mut second);
    assert_eq!(first, second);

    // thread count must not change the result
    let mut threaded = stdout_json(&binlra(
        dir.path(),
        &["--threads", "1", "solve", "css-gf2", "--k", "2", "--input", "m.bmx", "--with-opt"],
    ));
    strip_elapsed(&mut threaded);
    let (f, t) = (first.as_object().unwrap(), threaded.as_object().unwrap());
    assert_eq!(f["error"], t["error"]);
    assert_eq!(f["witness"], t["witness"]);
    assert_eq!(f["ratio_vs_opt"], t["ratio_vs_opt"]);
}

#[test]
fn rank1_solvers_on_identity() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("i3.bmx"), "3 3\n100\n010\n001\n").unwrap();
    let out = binlra(dir.path(), &["solve", "rank1-col", "--input", "i3.bmx", "--with-opt"]);
    let report = stdout_json(&out);
    assert_eq!(report["error"], 2);
    assert_eq!(report["witness"]["column"], 0);
    assert_eq!(report["opt_error"], 2);
    assert_eq!(report["ratio_vs_opt"]["num"], 1);

    let out = binlra(dir.path(), &["solve", "rank1-opt", "--input", "i3.bmx"]);
    assert_eq!(stdout_json(&out)["error"], 2);
}

#[test]
fn verify_lower_bound_instance_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = binlra(dir.path(), &["verify", "thm2-instance", "--k", "1", "--n", "6"]);
    let report = stdout_json(&out);
    assert_eq!(report["passed"], true);
    assert_eq!(report["failures"], 0);
    assert!(report["trials"].as_array().unwrap().len() >= 3);
}

#[test]
fn verify_small_runs_pass() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify", "thm1", "--trials", "5", "--dmax", "4", "--nmax", "5", "--seed", "1"],
        vec!["verify", "thm3", "--trials", "3", "--dmax", "4", "--nmax", "5"],
        vec!["verify", "thm4", "--trials", "3", "--dmax", "4", "--nmax", "4"],
        vec![
            "verify", "hardness-lemmas", "--block-trials", "3", "--gap-trials", "2",
            "--identity-trials", "10", "--lindsey", "1,2,4",
        ],
        vec!["verify", "rank1-2approx", "--trials", "5", "--equivalence-trials", "3", "--dmax", "6", "--nmax", "6"],
    ] {
        let out = binlra(dir.path(), &args);
        let report = stdout_json(&out);
        assert_eq!(report["passed"], true, "suite {:?} failed", args);
    }
}

#[test]
fn exit_codes_are_stable() {
    let dir = tempfile::tempdir().unwrap();

    // 4: unreadable input
    let out = binlra(dir.path(), &["solve", "css-gf2", "--input", "missing.bmx"]);
    assert_eq!(out.status.code(), Some(4));

    // 4: malformed matrix (missing final newline)
    std::fs::write(dir.path().join("bad.bmx"), "2 2\n10\n01").unwrap();
    let out = binlra(dir.path(), &["solve", "css-gf2", "--input", "bad.bmx"]);
    assert_eq!(out.status.code(), Some(4));

    // 4: divisibility violation in the generator
    let out = binlra(dir.path(), &["gen", "lowerbound", "--k", "2", "--n", "8", "--out", "x.bmx"]);
    assert_eq!(out.status.code(), Some(4));

    // 3: budget refusal
    std::fs::write(dir.path().join("ok.bmx"), "2 2\n10\n01\n").unwrap();
    let out = binlra(
        dir.path(),
        &["solve", "css-gf2", "--k", "1", "--input", "ok.bmx", "--budget", "1"],
    );
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("budget"), "stderr: {msg}");
}

#[test]
fn bmx_strictness_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        "2 2\n10\n01\n\n",   // trailing blank line
        "2 2\n10\n011\n",    // row too long
        "2 2\n10\n0x\n",     // bad character
        "2  2\n10\n01\n",    // double space in header
        "2 2 1\n10\n01\n",   // header junk
    ] {
        std::fs::write(dir.path().join("bad.bmx"), bad).unwrap();
        let out = binlra(dir.path(), &["solve", "rank1-opt", "--input", "bad.bmx"]);
        assert_eq!(out.status.code(), Some(4), "accepted malformed input {bad:?}");
    }
}
