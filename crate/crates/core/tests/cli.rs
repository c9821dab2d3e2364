use std::path::Path;
use std::process::{Command, Output};

use lpdec::{emit_alist, random_regular_ldpc};

const HEADER: &str = "block,seed,decoder,snr_db,status,iterations,cuts_added,final_parity_constraints,\
rpc_cuts_added,lp_pivots,elapsed_ns,wrong_codeword";

fn lpdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpdec")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// CSV rows with the elapsed_ns column blanked.
fn without_timing(csv: &str) -> Vec<String> {
    let col = HEADER.split(',').position(|c| c == "elapsed_ns").unwrap();
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f[col] = "";
            f.join(",")
        })
        .collect()
}

#[test]
fn noiseless_decode_from_alist() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.alist");
    std::fs::write(&path, emit_alist(&random_regular_ldpc(24, 3, 6, 2).unwrap())).unwrap();
    let o = lpdec(&["decode", "--code", path.to_str().unwrap(), "--noiseless"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 12);
    assert_eq!(row[2], "adaptive");
    assert_eq!(row[4], "MlCodeword");
    assert_eq!(row[5], "1");
    assert_eq!(row[11], "false");
    assert!(out.lines().any(|l| l.starts_with("# ") && l.contains("wer=0")));
}

#[test]
fn identical_runs_give_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = lpdec(&[
            "wer", "--gen", "32,3,4", "--snr", "2,3", "--blocks", "30", "--seed", "5", "--decoder",
            "adaptive,rpc,bp,standard", "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read_to_string(out).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a.lines().next(), Some(HEADER));
    assert_eq!(a.lines().filter(|l| *l == HEADER).count(), 1);
    assert_eq!(without_timing(&a), without_timing(&b));
    // 4 decoders, 2 SNRs, 30 blocks each
    assert_eq!(a.lines().filter(|l| !l.starts_with('#')).count(), 1 + 4 * 2 * 30);
    assert_eq!(a.lines().filter(|l| l.starts_with('#')).count(), 8);
    let rpc = a.lines().find(|l| l.starts_with("# ") && l.contains("decoder=rpc")).unwrap();
    assert!(rpc.contains("ml_lower_bound="));
}

#[test]
fn sweeps_run_one_group_per_code() {
    let o = lpdec(&["sweep-n", "--n", "12,24", "--blocks", "3"]);
    assert!(o.status.success());
    let summaries: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with('#')).map(String::from).collect();
    assert_eq!(summaries.len(), 2);
    assert!(summaries[0].contains("gen(12,3,6)") && summaries[1].contains("gen(24,3,6)"));
    let o = lpdec(&["sweep-dc", "--n", "24", "--dc", "4,6", "--blocks", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = lpdec(&["sweep-m", "--n", "24", "--m", "12,18", "--blocks", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn invalid_specs_exit_1() {
    for args in [
        vec!["decode", "--gen", "24,3,6", "--blocks", "0"],
        vec!["decode", "--gen", "24,3"],
        vec!["decode", "--gen", "25,3,6"],
        vec!["decode"],
        vec!["wer", "--gen", "24,3,6", "--decoder", "nonsense"],
        vec!["sweep-dc", "--n", "24", "--dc", "5"],
        vec!["sweep-m", "--n", "24", "--m", "7"],
        vec!["frobnicate"],
    ] {
        let o = lpdec(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn runtime_failures_exit_2() {
    let o = lpdec(&["decode", "--code", "/nonexistent/code.alist"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.alist");
    std::fs::write(&bad, "not an alist\n").unwrap();
    let o = lpdec(&["decode", "--code", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let out = Path::new("/nonexistent/dir/out.csv");
    let o = lpdec(&["decode", "--gen", "24,3,6", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_0() {
    assert!(lpdec(&["--help"]).status.success());
    assert!(lpdec(&["wer", "--help"]).status.success());
}
