//! Properties of the truncated product and series.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ruelle_core::lfunc::TransformRoute;
use ruelle_core::{
    examples, length_spectrum, rs_factorization_check, ruelle_product, s_series, shifted_prop31_check, Character,
    SpectrumSeries,
};

fn series(rho: &str) -> SpectrumSeries {
    let p = examples::figure_eight();
    let rho: Character = rho.parse().unwrap();
    SpectrumSeries::from_spectrum(&length_spectrum(&p, &rho, 6.0, 8).unwrap(), &p)
}

fn quarter() -> &'static SpectrumSeries {
    static S: OnceLock<SpectrumSeries> = OnceLock::new();
    S.get_or_init(|| series("1/4"))
}

const POINTS: [Complex64; 4] =
    [Complex64::new(2.5, 0.0), Complex64::new(3.0, 0.0), Complex64::new(3.0, 1.0), Complex64::new(2.5, 0.3)];

#[test]
fn factorization_below_bound_on_shipped_spectra() {
    let synthetic = SpectrumSeries::single_primitive(2.0 * 2f64.ln(), 0.7, Complex64::new(0.0, 1.0), 40).unwrap();
    for spec in [quarter(), &synthetic] {
        for z in POINTS {
            let r = rs_factorization_check(spec, z).unwrap();
            assert!(r.passed(), "z = {z}: {} > {}", r.residual, r.bound);
        }
    }
}

#[test]
fn input_order_does_not_matter() {
    let spec = quarter();
    let mut shuffled = spec.clone();
    shuffled.entries.shuffle(&mut ChaCha8Rng::seed_from_u64(9));
    shuffled.entries.reverse();
    for z in POINTS {
        let a = ruelle_product(spec, z).unwrap().value;
        let b = ruelle_product(&shuffled, z).unwrap().value;
        assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        for j in 0..2 {
            let a = s_series(spec, j, z).unwrap().value;
            let b = s_series(&shuffled, j, z).unwrap().value;
            assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }
}

#[test]
fn conjugate_character_gives_conjugate_product() {
    for r in ["1/3", "2/5"] {
        let spec = series(r);
        let conj = series(r.parse::<Character>().unwrap().conjugate().to_string().trim_matches(['[', ']']));
        for z in [2.5, 3.0, 4.0] {
            let z = Complex64::new(z, 0.0);
            let a = ruelle_product(&spec, z).unwrap().value;
            let b = ruelle_product(&conj, z).unwrap().value;
            assert!((a.conj() - b).norm() <= 1e-12, "{r}: {a} vs {b}");
        }
    }
    let trivial = ruelle_product(&series("0"), Complex64::new(3.0, 0.0)).unwrap().value;
    assert!(trivial.im.abs() <= 1e-14);
}

#[test]
fn shifted_identities_on_both_routes() {
    let z = Complex64::new(3.0, 0.0);
    let spec = quarter().clone().with_power_closure(z.re - 1.0);
    let closed = shifted_prop31_check(&spec, z, TransformRoute::ClosedForm).unwrap();
    let quad = shifted_prop31_check(&spec, z, TransformRoute::Quadrature).unwrap();
    assert!(closed.max_residual <= 1e-10, "{}", closed.max_residual);
    assert!(quad.max_residual <= 1e-7, "{}", quad.max_residual);
}

#[test]
fn below_abscissa_is_refused() {
    assert!(ruelle_product(quarter(), Complex64::new(2.0, 0.0)).is_err());
    assert!(rs_factorization_check(quarter(), Complex64::new(1.0, 5.0)).is_err());
}
