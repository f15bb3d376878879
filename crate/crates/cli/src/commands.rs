//! The subcommands. Each returns the checks it ran; any failed check maps
//! to exit code 5.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use ruelle_core::lfunc::{write_csv, TransformRoute};
use ruelle_core::quadrature::{quadrature_laplace, LaplaceWindow};
use ruelle_core::torsion::ReportOptions;
use ruelle_core::transforms::{
    cancellation_check, full_line_moment_quadrature, gaussian_kernel, laplace_gaussian_kernel, laplace_mellin_pk,
    laplace_pk, p_k, p_k_quadrature, quadrature_gaussian_kernel, quadrature_mellin_pk, Cancellation,
};
use ruelle_core::{
    length_spectrum, rs_factorization_check, shifted_prop31_check, theorem_report, Character, GroupPresentation,
    LengthSpectrum, SpectrumSeries,
};

use crate::config::RunConfig;
use crate::error::CliError;

/// One checked quantity.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, bound: f64) -> Self {
        Self { name: name.into(), residual, bound, passed: residual <= bound }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sci(x: f64) -> String {
    format!("{x:.14e}")
}

fn relative(value: Complex64, reference: Complex64) -> f64 {
    (value - reference).norm() / reference.norm()
}

/// Rounds every float in `v` to 15 significant digits.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            let rounded: f64 = format!("{x:.14e}").parse().unwrap_or(x);
            serde_json::Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn write_outputs(dir: &Path, json: Value, text: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let body = serde_json::to_string_pretty(&round_floats(json)).map_err(|e| CliError::Numerical(e.to_string()))?;
    fs::write(dir.join("report.json"), body + "\n")?;
    fs::write(dir.join("report.txt"), text)?;
    Ok(())
}

fn render_checks(title: &str, checks: &[Check]) -> String {
    let mut s = format!("{title}\n");
    for ch in checks {
        let _ = writeln!(
            s,
            "{} {}: residual {} bound {}",
            if ch.passed { "PASS" } else { "FAIL" },
            ch.name,
            sci(ch.residual),
            sci(ch.bound)
        );
    }
    s
}

fn fail_if_any(checks: &[Check]) -> Result<(), CliError> {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Residual(format!("{} check(s) exceeded their bound: {}", failed.len(), failed.join("; "))))
    }
}

fn compute_spectrum(cfg: &RunConfig) -> Result<(GroupPresentation, Character, LengthSpectrum), CliError> {
    let p = cfg.presentation()?;
    let rho = cfg.character(&p)?;
    let spectrum = length_spectrum(&p, &rho, cfg.max_geodesic_length, cfg.max_word_length)?;
    Ok((p, rho, spectrum))
}

fn spectrum_summary(p: &GroupPresentation, rho: &Character, s: &LengthSpectrum) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "presentation: {}", p.name());
    let _ = writeln!(out, "character: {rho}");
    let _ = writeln!(out, "max geodesic length: {}", sci(s.max_geodesic_length));
    let _ = writeln!(out, "max word length: {}", s.max_word_length);
    let _ = writeln!(out, "words examined: {}", s.words_examined);
    let _ = writeln!(out, "classes: {}", s.classes.len());
    let _ = writeln!(out, "primitive classes: {}", s.primitive_count());
    let _ = writeln!(out, "stabilized: {} (clusters first seen two letters deeper: {})", s.stabilized, s.late_clusters);
    if !s.stabilized {
        let _ = writeln!(
            out,
            "caveat: classes below the cutoff appear only in longer words; the spectrum is incomplete at this word length"
        );
    }
    for w in p.warnings() {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

pub fn spectrum(cfg: &RunConfig) -> Result<String, CliError> {
    let (p, rho, s) = compute_spectrum(cfg)?;
    let series = SpectrumSeries::from_spectrum(&s, &p);
    fs::create_dir_all(&cfg.output_dir)?;
    let file = fs::File::create(cfg.output_dir.join("spectrum.csv"))?;
    write_csv(&series, std::io::BufWriter::new(file))?;
    Ok(spectrum_summary(&p, &rho, &s))
}

pub const GAUSSIAN_L: [f64; 4] = [0.5, 1.0, 1.7, 3.0];
pub const GAUSSIAN_Z: [f64; 3] = [0.7, 1.0, 2.3];
pub const MELLIN_S: [f64; 3] = [1.0, 2.0, 3.0];
pub const MELLIN_Z: [f64; 4] = [0.7, 1.0, 1.5, 2.3];

pub fn transform_checks(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let tol = cfg.tolerances;
    let mut checks = Vec::new();
    for &l in &GAUSSIAN_L {
        for &z in &GAUSSIAN_Z {
            let z = c(z, 0.0);
            let q = quadrature_gaussian_kernel(l, z)?;
            let exact = laplace_gaussian_kernel(l, z)?;
            checks.push(Check::new(
                format!("gaussian kernel l={l} z={}", z.re),
                relative(q.value, exact),
                tol.transforms,
            ));
        }
    }
    for k in 0..=2u32 {
        for &s in &MELLIN_S {
            for &z in &MELLIN_Z {
                let (s, z) = (c(s, 0.0), c(z, 0.0));
                let q = quadrature_mellin_pk(k, s, z)?;
                let exact = laplace_mellin_pk(k, s, z)?;
                checks.push(Check::new(
                    format!("laplace-mellin p_{k} s={} z={}", s.re, z.re),
                    relative(q.value, exact),
                    tol.transforms,
                ));
            }
        }
    }
    let spots = [
        ("L(p_0)(1, 2) = pi/4", laplace_mellin_pk(0, c(1.0, 0.0), c(2.0, 0.0))?, c(PI / 4.0, 0.0)),
        ("L(p_1)(2, 1) = pi/4", laplace_mellin_pk(1, c(2.0, 0.0), c(1.0, 0.0))?, c(PI / 4.0, 0.0)),
        ("L(p_0)(1) = -pi", laplace_pk(0, c(1.0, 0.0)), c(-PI, 0.0)),
        ("L(p_1)(2) = 8 pi / 3", laplace_pk(1, c(2.0, 0.0)), c(8.0 * PI / 3.0, 0.0)),
        ("e^(-lz)/l at l = 1, z = 1", laplace_gaussian_kernel(1.0, c(1.0, 0.0))?, c((-1.0f64).exp(), 0.0)),
    ];
    for (name, value, exact) in spots {
        checks.push(Check::new(name, relative(value, exact), tol.spot_values));
    }
    // the kernel sees only z², so ±z must agree
    for &z in GAUSSIAN_Z.iter().chain(&MELLIN_Z) {
        for &l in &GAUSSIAN_L {
            let f = |t: f64| c(gaussian_kernel(l, t), 0.0);
            let plus = quadrature_laplace(&f, c(0.0, 0.0), c(z, 0.0), LaplaceWindow::for_kernel(c(z, 0.0)))
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let minus = quadrature_laplace(&f, c(0.0, 0.0), c(-z, 0.0), LaplaceWindow::for_kernel(c(-z, 0.0)))
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            checks.push(Check::new(
                format!("evenness gaussian l={l} z=+-{z}"),
                relative(minus.value, plus.value),
                tol.evenness,
            ));
        }
        for k in 0..=2u32 {
            for &s in &MELLIN_S {
                let f = |t: f64| c(p_k(k, t), 0.0);
                let s = c(s, 0.0);
                if s.re <= k as f64 + 0.5 {
                    continue;
                }
                let plus = quadrature_laplace(&f, s, c(z, 0.0), LaplaceWindow::for_kernel(c(z, 0.0)))
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                let minus = quadrature_laplace(&f, s, c(-z, 0.0), LaplaceWindow::for_kernel(c(-z, 0.0)))
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                checks.push(Check::new(
                    format!("evenness p_{k} s={} z=+-{z}", s.re),
                    relative(minus.value, plus.value),
                    tol.evenness,
                ));
            }
        }
    }
    for k in 0..=2u32 {
        for t in [0.1, 1.0, 4.0] {
            let full = full_line_moment_quadrature(k, t)?.value;
            let half = p_k_quadrature(k, t)?.value;
            checks.push(Check::new(format!("full line = 2 p_{k}({t})"), relative(full, 2.0 * half), tol.half_line));
        }
    }
    Ok(checks)
}

pub fn cancellation_checks(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let tol = cfg.tolerances.cancellation;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut draws: Vec<(f64, f64)> =
        (0..20).map(|_| (10f64.powf(rng.gen_range(-2.0..4.0)), rng.gen_range(-50.0..50.0))).collect();
    draws[0].0 = 1e6;
    if let (Some(v), Some(cc)) = (cfg.vol, cfg.c_rho_gamma) {
        draws.push((v, cc));
    } else if let Some(v) = cfg.vol {
        draws.push((v, 1.0));
    } else if let Some(cc) = cfg.c_rho_gamma {
        draws.push((1.0, cc));
    }
    let mut checks = Vec::new();
    for (vol, cc) in draws {
        let r = cancellation_check(Cancellation::Identity { vol })?;
        checks.push(Check::new(format!("identity terms vol={}", sci(vol)), r.max_abs(), tol));
        let r = cancellation_check(Cancellation::Unipotent { c: cc })?;
        checks.push(Check::new(format!("unipotent terms C={}", sci(cc)), r.max_abs(), tol));
    }
    Ok(checks)
}

/// The single-primitive spectrum `l₀ = 2 ln 2`, `θ = 0`, `ρ = 1`, `n ≤ 40`.
pub fn synthetic_series() -> SpectrumSeries {
    SpectrumSeries::single_primitive(2.0 * 2f64.ln(), 0.0, c(1.0, 0.0), 40).expect("valid synthetic data")
}

pub const RS_POINTS: [(f64, f64); 4] = [(2.5, 0.0), (3.0, 0.0), (3.0, 1.0), (2.5, 0.3)];

fn rs_checks(cfg: &RunConfig, series: &SpectrumSeries) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let synthetic = synthetic_series().with_abscissa(cfg.abscissa)?;
    let r = rs_factorization_check(&synthetic, c(3.0, 0.0))?;
    checks.push(Check::new("rs single primitive, n <= 40, z = 3", r.residual, cfg.tolerances.synthetic_rs));
    for (re, im) in RS_POINTS {
        let z = c(re, im);
        if z.re < cfg.abscissa {
            continue;
        }
        let r = rs_factorization_check(series, z)?;
        checks.push(Check::new(format!("rs spectrum z = {z}"), r.residual, r.bound));
    }
    Ok(checks)
}

fn prop31_checks(cfg: &RunConfig, series: &SpectrumSeries) -> Result<Vec<Check>, CliError> {
    let z = prop31_point(cfg.abscissa);
    let tol = cfg.tolerances;
    let mut checks = Vec::new();
    let spectra = [("synthetic", synthetic_series().with_abscissa(cfg.abscissa)?), ("spectrum", series.clone())];
    for (name, s) in spectra {
        let closed = s.with_power_closure(z.re - 1.0);
        for (route, bound) in
            [(TransformRoute::ClosedForm, tol.prop31_closed_form), (TransformRoute::Quadrature, tol.prop31_quadrature)]
        {
            let report = shifted_prop31_check(&closed, z, route)?;
            for id in &report.identities {
                checks.push(Check::new(format!("{name} {route:?} z = {z}: {}", id.name), id.residual, bound));
            }
        }
    }
    Ok(checks)
}

/// `z = 3` unless the abscissa is higher, then half a unit right of it.
fn prop31_point(abscissa: f64) -> Complex64 {
    c(if abscissa < 3.0 { 3.0 } else { abscissa + 0.5 }, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyKind {
    Transforms,
    Cancellation,
    Rs,
    Prop31,
}

pub fn verify(cfg: &RunConfig, which: VerifyKind) -> Result<String, CliError> {
    let (title, checks) = match which {
        VerifyKind::Transforms => ("transform closed forms against quadrature", transform_checks(cfg)?),
        VerifyKind::Cancellation => ("identity and unipotent cancellations", cancellation_checks(cfg)?),
        VerifyKind::Rs | VerifyKind::Prop31 => {
            cfg.require_abscissa()?;
            let (p, _, s) = compute_spectrum(cfg)?;
            let series = SpectrumSeries::from_spectrum(&s, &p).with_abscissa(cfg.abscissa)?;
            if which == VerifyKind::Rs {
                ("product/series factorization", rs_checks(cfg, &series)?)
            } else {
                ("shifted transform identities", prop31_checks(cfg, &series)?)
            }
        }
    };
    let text = render_checks(title, &checks);
    write_outputs(&cfg.output_dir, json!({ "check": title, "results": checks }), &text)?;
    fail_if_any(&checks).map(|_| text.clone()).inspect_err(|_| print!("{text}"))
}

fn refuse_trivial(rho: &Character, p: &GroupPresentation) -> Result<(), CliError> {
    let nontrivial = rho.cusp_nontrivial(p).map_err(|e| CliError::Input(e.to_string()))?;
    if !nontrivial {
        return Err(CliError::Hypothesis(format!(
            "character {rho} is trivial on the cusp subgroup; the torsion identity requires rho restricted to the cusp to be nontrivial"
        )));
    }
    Ok(())
}

pub fn torsion(cfg: &RunConfig) -> Result<String, CliError> {
    let p = cfg.presentation()?;
    let rho = cfg.character(&p)?;
    refuse_trivial(&rho, &p)?;
    let options = ReportOptions { delta_rho: cfg.delta_rho, ..Default::default() };
    let report =
        theorem_report(&p, &rho, &SpectrumSeries::empty(cfg.max_geodesic_length), &options).map_err(CliError::from)?;
    let text = report.render_text();
    write_outputs(&cfg.output_dir, serde_json::to_value(&report).unwrap_or(Value::Null), &text)?;
    Ok(text)
}

pub fn report(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.require_abscissa()?;
    let (p, rho, s) = compute_spectrum(cfg)?;
    refuse_trivial(&rho, &p)?;
    let series = SpectrumSeries::from_spectrum(&s, &p).with_abscissa(cfg.abscissa)?;
    fs::create_dir_all(&cfg.output_dir)?;
    let file = fs::File::create(cfg.output_dir.join("spectrum.csv"))?;
    write_csv(&series, std::io::BufWriter::new(file))?;

    let rs_points: Vec<Complex64> =
        RS_POINTS.iter().map(|&(re, im)| c(re, im)).filter(|z| z.re >= cfg.abscissa).collect();
    let prop31_point = prop31_point(cfg.abscissa);
    let options = ReportOptions {
        delta_rho: cfg.delta_rho,
        rs_points,
        prop31_point: Some(prop31_point),
        spectrum_stabilized: Some(s.stabilized),
    };
    let report = theorem_report(&p, &rho, &series, &options).map_err(CliError::from)?;
    let mut checks: Vec<Check> =
        report.rs_residuals.iter().map(|(z, r)| Check::new(format!("rs z = {z}"), r.residual, r.bound)).collect();
    if let Some(v) = report.prop31_closed_form {
        checks.push(Check::new("shifted identities, closed form", v, cfg.tolerances.prop31_closed_form));
    }
    if let Some(v) = report.prop31_quadrature {
        checks.push(Check::new("shifted identities, quadrature", v, cfg.tolerances.prop31_quadrature));
    }
    let text =
        format!("{}\n{}\n{}", spectrum_summary(&p, &rho, &s), report.render_text(), render_checks("checks", &checks));
    let json = json!({ "spectrum": {
            "classes": s.classes.len(),
            "primitive_classes": s.primitive_count(),
            "words_examined": s.words_examined,
            "stabilized": s.stabilized,
            "late_clusters": s.late_clusters,
        },
        "torsion": report,
        "checks": checks,
    });
    write_outputs(&cfg.output_dir, json, &text)?;
    fail_if_any(&checks).map(|_| text.clone()).inspect_err(|_| print!("{text}"))
}
