//! End-to-end runs of the `permlat` binary: exit codes, artifacts, manifests
//! and replay.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn permlat(args: &[&str]) -> Output {
    permlat_in(args, None, &[])
}

fn permlat_in(args: &[&str], dir: Option<&Path>, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_permlat"));
    cmd.args(args);
    if let Some(d) = dir {
        cmd.current_dir(d);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn distributive_lattice_checks_clean() {
    let o = permlat(&["lattice", "check", path_str(&fixture("b2.lat"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn m3_is_reported_with_a_witness() {
    let o = permlat(&["lattice", "check", path_str(&fixture("m3.lat"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not distributive: M3"), "{}", stdout(&o));
    let o = permlat(&["--json", "lattice", "check", path_str(&fixture("n5.lat"))]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["distributive"], false);
}

#[test]
fn a_poset_without_meets_is_rejected() {
    let o = permlat(&["lattice", "check", path_str(&fixture("notlattice.lat"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!stderr(&o).is_empty() || !stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(permlat(&["lattice", "frobnicate"]).status.code(), Some(2));
    assert_eq!(permlat(&["gen", "--size", "3"]).status.code(), Some(2));
    assert_eq!(permlat(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_files_name_the_path() {
    let o = permlat(&["lattice", "check", "/nonexistent/x.lat"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/x.lat"), "{}", stderr(&o));
}

#[test]
fn triangle_violations_fail_the_space_check() {
    let o = permlat(&["space", "check", path_str(&fixture("bad.space"))]);
    assert_eq!(o.status.code(), Some(1));
    let o = permlat(&["space", "check", path_str(&fixture("base.space"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn amalgam_of_the_fixture_spaces_validates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("amalgam.space");
    let o = permlat(&[
        "space",
        "amalgam",
        path_str(&fixture("base.space")),
        path_str(&fixture("ext1.space")),
        path_str(&fixture("ext2.space")),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(permlat(&["space", "check", path_str(&out)]).status.code(), Some(0));
    assert!(dir.path().join("amalgam.space.manifest").exists());
}

#[test]
fn probe_finds_failures_only_off_distributive() {
    assert_eq!(permlat(&["space", "probe", path_str(&fixture("m3.lat"))]).status.code(), Some(1));
    assert_eq!(permlat(&["space", "probe", path_str(&fixture("chain3.lat"))]).status.code(), Some(0));
}

fn gen_into(dir: &Path, name: &str, seed: &str) -> PathBuf {
    let out = dir.join(name);
    let lat = fixture("chain3.lat");
    let o = permlat_in(
        &[
            "gen",
            "--lattice",
            path_str(&lat),
            "--orders",
            "0:e,e:1",
            "--size",
            "25",
            "--seed",
            seed,
            "--out",
            path_str(&out),
        ],
        Some(dir),
        &[],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

#[test]
fn generation_is_byte_identical_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen_into(dir.path(), "a.struct", "3");
    let b = gen_into(dir.path(), "b.struct", "3");
    let c = gen_into(dir.path(), "c.struct", "4");
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));

    let manifest = dir.path().join("a.struct.manifest");
    let o = permlat(&["replay", path_str(&manifest)]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));

    // a manifest recording a different output hash does not replay
    let mut m: serde_json::Value = serde_json::from_slice(&read(&manifest)).unwrap();
    m["output"]["sha256"] = "0".repeat(64).into();
    std::fs::write(&manifest, serde_json::to_string_pretty(&m).unwrap()).unwrap();
    assert_eq!(permlat(&["replay", path_str(&manifest)]).status.code(), Some(1));
}

#[test]
fn encode_decode_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let s = gen_into(dir.path(), "s.struct", "1");
    let perm = dir.path().join("s.perm");
    let o = permlat(&["encode", "--in", path_str(&s), "--out", path_str(&perm)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let again = dir.path().join("again.perm");
    permlat(&["encode", "--in", path_str(&s), "--out", path_str(&again)]);
    assert_eq!(std::fs::read(&perm).unwrap(), std::fs::read(&again).unwrap());
    assert_eq!(permlat(&["replay", path_str(&dir.path().join("s.perm.manifest"))]).status.code(), Some(0));

    let o = permlat(&["--json", "decode", "--in", path_str(&perm)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["hasse"].is_array());
    assert_eq!(v["relations"].as_array().unwrap().len(), 3);
    assert_eq!(v["distributive"], true);

    // thread count does not change results
    let one =
        permlat_in(&["--json", "check", "hom", "--in", path_str(&s), "--k", "2"], None, &[("PERMLAT_THREADS", "1")]);
    let many =
        permlat_in(&["--json", "check", "hom", "--in", path_str(&s), "--k", "2"], None, &[("PERMLAT_THREADS", "4")]);
    assert_eq!(stdout(&one), stdout(&many));
}

#[test]
fn profile_and_cameron_report_json() {
    let dir = tempfile::tempdir().unwrap();
    let perm = dir.path().join("id.perm");
    std::fs::write(&perm, "2 4\n0 0\n1 1\n2 2\n3 3\n").unwrap();
    let o = permlat(&["--json", "profile", "--in", path_str(&perm), "--k", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counts"]["01|01"], 6);

    let o = permlat(&["--json", "cameron", "--size", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["distinct_profiles"].as_u64().unwrap() >= 1);
}
