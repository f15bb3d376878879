//! Complex Gamma function.
//!
//! Lanczos approximation (g = 7, nine coefficients) on the right half plane,
//! reflection `Γ(z)Γ(1-z) = π / sin(πz)` on the left. The poles at the
//! non-positive integers are reported as errors instead of infinities.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GammaError {
    #[error("Gamma function pole at {0}")]
    Pole(Complex64),
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFICIENTS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Distance below which an argument is treated as sitting on a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Returns `Some(n)` when `z` is within [`POLE_TOLERANCE`] of the pole `-n`.
pub fn nearest_pole(z: Complex64) -> Option<i64> {
    if z.im.abs() > POLE_TOLERANCE || z.re > 0.5 {
        return None;
    }
    let n = z.re.round();
    if (z.re - n).abs() <= POLE_TOLERANCE && n <= 0.0 {
        Some(-n as i64)
    } else {
        None
    }
}

fn lanczos_right_half(z: Complex64) -> Complex64 {
    // z has Re z >= 1/2
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFICIENTS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFICIENTS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// `Γ(z)` for complex `z`.
pub fn gamma(z: Complex64) -> Result<Complex64, GammaError> {
    if nearest_pole(z).is_some() {
        return Err(GammaError::Pole(z));
    }
    if z.im == 0.0 && z.re > 0.0 && z.re == z.re.floor() && z.re <= 21.0 {
        let mut f = 1.0;
        for k in 2..(z.re as u32) {
            f *= k as f64;
        }
        return Ok(Complex64::new(f, 0.0));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * lanczos_right_half(1.0 - z)))
    } else {
        Ok(lanczos_right_half(z))
    }
}

/// Real-argument convenience wrapper.
pub fn gamma_real(x: f64) -> Result<f64, GammaError> {
    gamma(Complex64::new(x, 0.0)).map(|g| g.re)
}
