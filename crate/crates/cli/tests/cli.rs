use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fluidsinr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluidsinr"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn small<'a>(cmd: &'a str, out: &'a str) -> Vec<&'a str> {
    vec![
        cmd,
        "--runs",
        "3",
        "--users",
        "200",
        "--eta",
        "2.8,3.0,3.2",
        "--seed",
        "11",
        "--out",
        out,
    ]
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

#[test]
fn generate_prints_hex_layout_to_stdout() {
    let out = fluidsinr(&["generate", "--model", "hex", "--rings", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# config_digest="));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "bs_id,x,y");
    assert_eq!(rows.len() - 1, 19);
}

#[test]
fn generate_is_deterministic_and_seed_dependent() {
    let a = fluidsinr(&["generate", "--seed", "5"]).stdout;
    let b = fluidsinr(&["generate", "--seed", "5"]).stdout;
    let c = fluidsinr(&["generate", "--seed", "6"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn generate_writes_into_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = fluidsinr(&["generate", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(dir.path().join("layout_1.csv").is_file());
}

#[test]
fn cdf_and_fit_reruns_are_byte_identical() {
    for cmd in ["cdf", "fit"] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        for d in [&a, &b] {
            let out = fluidsinr(&small(cmd, d.path().to_str().unwrap()));
            assert!(
                out.status.success(),
                "{cmd}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
        let (x, y) = (dir_contents(a.path()), dir_contents(b.path()));
        assert!(!x.is_empty());
        assert_eq!(x, y, "{cmd}");
    }
}

#[test]
fn fit_prints_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let out = fluidsinr(&small("fit", dir.path().to_str().unwrap()));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("a="), "{text}");
    assert!(dir.path().join("fit.csv").is_file());
}

#[test]
fn report_writes_every_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = fluidsinr(&small("report", dir.path().to_str().unwrap()));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in [
        "report.txt",
        "fit.csv",
        "correlation.csv",
        "outage.csv",
        "throughput.csv",
        "cdf_fluid_eta3.0.csv",
    ] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
}

#[test]
fn fluid_cdf_needs_no_monte_carlo() {
    let dir = tempfile::tempdir().unwrap();
    let out = fluidsinr(&[
        "cdf",
        "--model",
        "fluid",
        "--eta",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(dir.path().join("cdf_fluid_eta3.0.csv").is_file());
    assert!(dir.path().join("fluid_curve_eta3.0.csv").is_file());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    fs::write(&cfg, "# test\nrings = 1\nseed = 3\n").unwrap();
    let from_file = fluidsinr(&[
        "generate",
        "--model",
        "hex",
        "--config",
        cfg.to_str().unwrap(),
    ])
    .stdout;
    let rows = String::from_utf8(from_file)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count();
    assert_eq!(rows - 1, 7);
    let overridden = fluidsinr(&[
        "generate",
        "--model",
        "hex",
        "--config",
        cfg.to_str().unwrap(),
        "--rings",
        "2",
    ])
    .stdout;
    let rows = String::from_utf8(overridden)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count();
    assert_eq!(rows - 1, 19);
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["fit", "--eta", "3.0", "--out", d],
        vec!["generate", "--model", "fluid"],
        vec!["generate", "--model", "square"],
        vec!["cdf", "--runs", "zero", "--out", d],
        vec!["cdf", "--eta", "1.5", "--out", d],
        vec!["generate", "--rings", "0", "--model", "hex"],
        vec!["generate", "--config", "/nonexistent/file.cfg"],
        vec!["report", "--density-scale", "-1", "--out", d],
        vec!["bogus"],
    ];
    for args in cases {
        let out = fluidsinr(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn bad_config_key_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let out = fluidsinr(&["generate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain_file");
    fs::write(&file, "x").unwrap();
    let out = fluidsinr(&[
        "cdf",
        "--model",
        "fluid",
        "--eta",
        "3",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}
