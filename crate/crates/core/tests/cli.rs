use std::process::{Command, Output};

fn ffq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffq"))
        .args(args)
        .env("RUST_LOG", "error")
        .env_remove("FFQ_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn irr_writes_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let o = ffq(&["irr", "--q", "3", "--n", "2", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
    assert!(dir.path().join("irr_q3_n2.txt").exists());
}

#[test]
fn cache_dir_defaults_to_env() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ffq"))
        .args(["irr", "--q", "5", "--n", "3"])
        .env("RUST_LOG", "error")
        .env("FFQ_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("irr_q5_n3.txt").exists());
}

#[test]
fn symbol_prints_a_sign() {
    let o = ffq(&["symbol", "--f", "0,1", "--p", "2,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1");
    let o = ffq(&["symbol", "--f", "2,1,1", "--p", "2,1,1", "--oracle"]);
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn lfunc_prints_coefficients() {
    let o = ffq(&["lfunc", "--p", "1,2,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[1, -3, 3]"), "{}", stdout(&o));
}

#[test]
fn verify_suites_exit_zero() {
    for suite in ["fe", "rh", "afe", "le4", "weil"] {
        let o = ffq(&["verify", suite, "--max-deg", "4", "--max-arg-deg", "2", "--samples", "20"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn verification_failure_exits_one() {
    let o = ffq(&["verify", "weil", "--max-deg", "3", "--max-arg-deg", "2", "--threshold", "0.001"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ffq(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(ffq(&["irr"]).status.code(), Some(2));
    assert_eq!(ffq(&["symbol", "--q", "9", "--f", "1", "--p", "0,1"]).status.code(), Some(2));
    assert_eq!(ffq(&["lfunc", "--p", "1,1,2"]).status.code(), Some(2));
}

#[test]
fn resonate_is_reproducible_and_reportable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let cache = dir.path().join("cache");
        let o = ffq(&[
            "resonate", "--g", "2", "--seedless",
            "--cache-dir", cache.to_str().unwrap(),
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out.with_extension("json")).unwrap()
    };
    let a = run("a");
    let b = run("b");
    assert_eq!(a, b);
    assert!(dir.path().join("a.csv").exists());
    assert!(dir.path().join("a.histogram.csv").exists());

    let o = ffq(&["report", dir.path().join("a.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# symbol settings\nq = 5\nf = 0,1\np = 2,1\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(stdout(&ffq(&["symbol", "--config", c])).trim(), "-1");
    let o = ffq(&["symbol", "--config", c, "--q", "3", "--p", "2,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1");
}
