//! End-to-end behaviour of the `ruelle` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn presentation(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn ruelle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruelle")).args(args).output().expect("binary runs")
}

fn figure_eight() -> String {
    configs().join("figure_eight.toml").display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn spectrum_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<PathBuf> = ["a", "b"].iter().map(|n| dir.path().join(n)).collect();
    let runs: Vec<Output> = outs
        .iter()
        .map(|o| {
            ruelle(&[
                "--config",
                &figure_eight(),
                "--max-length",
                "5",
                "--max-word",
                "8",
                "--out",
                o.to_str().unwrap(),
                "spectrum",
            ])
        })
        .collect();
    for r in &runs {
        assert_eq!(r.status.code(), Some(0), "{}", stderr(r));
    }
    assert_eq!(runs[0].stdout, runs[1].stdout);
    let a = fs::read(outs[0].join("spectrum.csv")).unwrap();
    let b = fs::read(outs[1].join("spectrum.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("l,theta,l0,mu,rho_re,rho_im,a0_re,a0_im,a1_re,a1_im,word\n"));
    assert!(text.lines().count() > 1);
    let lengths: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(lengths.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn tiny_cutoff_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let r = ruelle(&["--config", &figure_eight(), "--max-length", "0.1", "--out", out, "spectrum"]);
    assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    let csv = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(csv, "l,theta,l0,mu,rho_re,rho_im,a0_re,a0_im,a1_re,a1_im,word\n");
}

#[test]
fn malformed_presentation_is_an_input_error_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "name = \"bad\"\nrelators = [\"a b A B\"\ncusp_words = []\n").unwrap();
    let r = ruelle(&["--presentation", bad.to_str().unwrap(), "spectrum"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(stderr(&r).contains("line 3"), "{}", stderr(&r));
}

#[test]
fn unknown_relator_letter_is_an_input_error_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let source = fs::read_to_string(presentation("trefoil.toml")).unwrap().replace("a b a B A B", "a b q B A B");
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, source).unwrap();
    let r = ruelle(&["--presentation", bad.to_str().unwrap(), "spectrum"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(stderr(&r).contains("line"), "{}", stderr(&r));
}

#[test]
fn bad_config_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, "max_geodesic_length = 3.0\nunexpected_key = 1\n").unwrap();
    assert_eq!(ruelle(&["--config", cfg.to_str().unwrap(), "spectrum"]).status.code(), Some(2));
    assert_eq!(ruelle(&["--config", "/nonexistent/cfg.toml", "spectrum"]).status.code(), Some(2));
    assert_eq!(ruelle(&["--config", &figure_eight(), "--max-length", "-1", "spectrum"]).status.code(), Some(2));
}

#[test]
fn low_abscissa_is_a_precondition_failure() {
    for which in ["rs", "prop31"] {
        let r = ruelle(&["--config", &figure_eight(), "--abscissa", "1.0", "verify", which]);
        assert_eq!(r.status.code(), Some(3), "{}", stderr(&r));
        assert!(stderr(&r).contains("abscissa"));
    }
}

#[test]
fn trivial_character_is_refused() {
    let cfg = configs().join("figure_eight_trivial.toml");
    let dir = tempfile::tempdir().unwrap();
    let r = ruelle(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "torsion"]);
    assert_eq!(r.status.code(), Some(4));
    assert!(stderr(&r).contains("nontrivial"), "{}", stderr(&r));
    let r = ruelle(&["--config", &figure_eight(), "--rho", "0", "--out", dir.path().to_str().unwrap(), "torsion"]);
    assert_eq!(r.status.code(), Some(4));
}

#[test]
fn non_acyclic_character_is_refused() {
    let cfg = configs().join("trefoil_nonacyclic.toml");
    let dir = tempfile::tempdir().unwrap();
    let r = ruelle(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "torsion"]);
    assert_eq!(r.status.code(), Some(4));
    assert!(stderr(&r).contains("acyclic"), "{}", stderr(&r));
}

#[test]
fn torsion_report_files_and_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let r = ruelle(&["--config", &figure_eight(), "--out", out, "torsion"]);
    assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    assert!(stdout(&r).contains("|tau|^2: 4.50000000000000e0"));
    assert!(stdout(&r).contains("meromorphic continuation"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!((json["tau_squared"].as_f64().unwrap() - 4.5).abs() <= 1e-9);
    assert!(json["delta_rho"].is_null());
    assert_eq!(fs::read_to_string(dir.path().join("report.txt")).unwrap(), stdout(&r));
}

#[test]
fn delta_rho_adds_the_product_line() {
    let dir = tempfile::tempdir().unwrap();
    let r =
        ruelle(&["--config", &figure_eight(), "--delta-rho", "2", "--out", dir.path().to_str().unwrap(), "torsion"]);
    assert_eq!(r.status.code(), Some(0));
    // (2 · 3/√2)² = 18
    assert!(stdout(&r).contains("(delta_rho |A*(1)|)^2: 1.80000000000000e1"), "{}", stdout(&r));
}

#[test]
fn cancellation_passes_and_is_seeded() {
    let a = ruelle(&["verify", "cancellation", "--seed", "4"]);
    let b = ruelle(&["verify", "cancellation", "--seed", "4"]);
    let c = ruelle(&["verify", "cancellation", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(stdout(&a).contains("vol=1.00000000000000e6"));
    assert!(!stdout(&a).contains("FAIL"));
}

#[test]
fn impossible_tolerance_is_a_residual_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(&cfg, "[tolerances]\nspot_values = 0.0\ntransforms = 1e-300\n").unwrap();
    let r = ruelle(&["--config", cfg.to_str().unwrap(), "verify", "transforms"]);
    assert_eq!(r.status.code(), Some(5));
    assert!(stdout(&r).contains("FAIL") || stderr(&r).contains("exceeded"));
}

#[test]
fn report_runs_end_to_end_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(PathBuf, Output)> = ["a", "b"]
        .iter()
        .map(|n| {
            let out = dir.path().join(n);
            let r = ruelle(&[
                "--config",
                &figure_eight(),
                "--max-length",
                "6",
                "--max-word",
                "8",
                "--out",
                out.to_str().unwrap(),
                "report",
            ]);
            (out, r)
        })
        .collect();
    for (_, r) in &runs {
        assert_eq!(r.status.code(), Some(0), "{}", stderr(r));
    }
    for file in ["spectrum.csv", "report.json", "report.txt"] {
        assert_eq!(fs::read(runs[0].0.join(file)).unwrap(), fs::read(runs[1].0.join(file)).unwrap(), "{file}");
    }
}
