//! End-to-end runs of the `tiler` binary.

use std::path::Path;
use std::process::{Command, Output};

fn tiler(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tiler"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).expect("write config");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "m.toml",
        "seed = 5\n[graph]\nfamily = \"cycle\"\nn = 30\n[multipack]\nradius = 3\nsamples = 500\n",
    );
    let a = tiler(dir.path(), &["multipack", "--config", "m.toml"]);
    let b = tiler(dir.path(), &["multipack", "--config", "m.toml"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let c = tiler(dir.path(), &["multipack", "--config", "m.toml", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout, "--seed overrides the config seed");
    let text = String::from_utf8(c.stdout).unwrap();
    assert!(text.contains("seed: 6\n"));
    assert!(text.contains("split.worst.confidence_radius,"));
}

#[test]
fn out_dir_receives_report_and_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "q.toml",
        "out = \"run\"\n[graph]\nfamily = \"cycle\"\nn = 60\n[quasitile]\nepsilon0 = \"1/2\"\nk0 = 6\neps1 = \"1/9\"\nk1 = 19\n",
    );
    let out = tiler(dir.path(), &["quasitile", "--config", "q.toml"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = dir.path().join("run");
    let report = std::fs::read_to_string(run.join("report.txt")).unwrap();
    assert_eq!(report.as_bytes(), out.stdout.as_slice());
    assert!(run.join("packing.txt").exists());
    assert!(run.join("probes.csv").exists());
    let other = dir.path().join("elsewhere");
    let out = tiler(dir.path(), &["quasitile", "--config", "q.toml", "--out", other.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(other.join("report.txt").exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("wall-clock"));
}

#[test]
fn exit_code_reflects_checks() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "ok.toml",
        "[graph]\nfamily = \"cycle\"\nn = 100\n[validate-witness]\nradius = 10\ntarget = 10\n",
    );
    write(
        dir.path(),
        "bad.toml",
        "[graph]\nfamily = \"cycle\"\nn = 100\n[validate-witness]\nradius = 10\ntarget = 11\n",
    );
    let ok = tiler(dir.path(), &["validate-witness", "--config", "ok.toml"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("max_neighbor_l1,2/21,0.095238"));
    let bad = tiler(dir.path(), &["validate-witness", "--config", "bad.toml"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("result: FAIL"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "noseed.toml", "[graph]\nfamily = \"cycle\"\nn = 10\n[cfw]\nj_max = 1\n");
    let out = tiler(dir.path(), &["cfw", "--config", "noseed.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
    write(dir.path(), "typo.toml", "[graph]\nfamily = \"cycle\"\nn = 10\nextra = 1\n");
    let out = tiler(dir.path(), &["validate-witness", "--config", "typo.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tiler(dir.path(), &["validate-witness", "--config", "missing.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trivial_runs_pass() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "empty.toml", "[graph]\nfamily = \"edgeless\"\nn = 0\n[quasitile]\nepsilon0 = \"1/2\"\n");
    let out = tiler(dir.path(), &["quasitile", "--config", "empty.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    write(dir.path(), "cfw0.toml", "seed = 1\n[graph]\nfamily = \"cycle\"\nn = 10\n[cfw]\nj_max = 0\n");
    let out = tiler(dir.path(), &["cfw", "--config", "cfw0.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    write(dir.path(), "none.toml", "seed = 1\n[oracle-suite]\nselect = []\n");
    let out = tiler(dir.path(), &["oracle-suite", "--config", "none.toml"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("checks: 0 passed, 0 failed"));
}

#[test]
fn graph_files_are_read_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let g = tiler_core::generate::cycle(40);
    write(dir.path(), "c40.graph", &tiler_core::io::write_graph(&g));
    std::fs::create_dir(dir.path().join("cfg")).unwrap();
    write(
        &dir.path().join("cfg"),
        "w.toml",
        "[graph]\nfamily = \"file\"\npath = \"../c40.graph\"\n[validate-witness]\nradius = 5\ntarget = 5\n",
    );
    let out = tiler(dir.path(), &["validate-witness", "--config", "cfg/w.toml"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("max_neighbor_l1,2/11,"));
}
