//! Closed-form Laplace and Laplace-Mellin transforms of heat-kernel terms,
//! and numerical quadrature oracles for them.
//!
//! Closed forms are kept symbolic as sums `c · z^p · Γ(g)`, so evaluating a
//! transform outside the region where its integral converges always means
//! continuing the closed form. The quadrature side never sees such points.
//!
//! Conventions: `p_k(t) = ∫₀^∞ x^{2k} e^{-tx²} dx = (√π C_k / 2) t^{-1/2-k}`
//! with `C_0 = 1`, `C_k = ∏_{m<k} (m + 1/2)`, and
//! `L(f)(s, z) = ∫₀^∞ e^{-tz²} t^{s-1} f(t) dt`, `L(f)(z) = L(f)(0, z)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::quadrature::{
    integrate_with_breakpoints, quadrature_laplace, quadrature_laplace_power, Estimate, LaplaceWindow, QuadratureError,
    QuadratureOptions,
};
use crate::special::{gamma, GammaError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("geodesic length must be positive, got {0}")]
    NonpositiveLength(f64),
    #[error("Gamma pole at argument {0}")]
    GammaPole(Complex64),
    #[error("volume must be positive, got {0}")]
    NonpositiveVolume(f64),
    #[error("z^{power} is singular at z = 0")]
    SingularPower { power: Complex64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

impl From<GammaError> for TransformError {
    fn from(e: GammaError) -> Self {
        match e {
            GammaError::Pole(z) => TransformError::GammaPole(z),
        }
    }
}

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// One term `coefficient · z^z_power · Γ(gamma_argument)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformTerm {
    pub coefficient: Complex64,
    pub z_power: Complex64,
    pub gamma_argument: Option<Complex64>,
}

impl TransformTerm {
    fn gamma_factor(&self) -> Result<Complex64, TransformError> {
        match self.gamma_argument {
            Some(g) => Ok(gamma(g)?),
            None => Ok(c64(1.0)),
        }
    }
}

/// `z^p` on the principal branch; integer powers use repeated products so
/// that negative real `z` and `z = 0` behave like a polynomial.
pub fn z_power(z: Complex64, p: Complex64) -> Result<Complex64, TransformError> {
    if p.im == 0.0 && p.re.fract() == 0.0 && p.re.abs() < i32::MAX as f64 {
        let n = p.re as i32;
        if n < 0 && z == c64(0.0) {
            return Err(TransformError::SingularPower { power: p });
        }
        return Ok(z.powi(n));
    }
    if z == c64(0.0) {
        return if p.re > 0.0 { Ok(c64(0.0)) } else { Err(TransformError::SingularPower { power: p }) };
    }
    Ok(z.powc(p))
}

/// A transform as a finite symbolic sum.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct TransformValue {
    pub terms: Vec<TransformTerm>,
}

impl TransformValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coefficient: Complex64, power: i32) -> Self {
        Self { terms: vec![TransformTerm { coefficient, z_power: c64(power as f64), gamma_argument: None }] }
    }

    /// Evaluates at `z`; a Gamma pole is an error, never infinity.
    pub fn numeric(&self, z: Complex64) -> Result<Complex64, TransformError> {
        let mut total = c64(0.0);
        for t in &self.terms {
            total += t.coefficient * t.gamma_factor()? * z_power(z, t.z_power)?;
        }
        Ok(total)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { terms: self.terms.iter().map(|t| TransformTerm { coefficient: t.coefficient * factor, ..*t }).collect() }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self { terms }
    }
}

/// Residual of a signed combination `Σ sign_i · T_i(z_i)`, kept per power of
/// `z` so that an identity holding coefficient by coefficient shows up as the
/// zero polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualPolynomial {
    /// `(power, Σ_i sign_i c_{i,p} Γ(g) z_i^p)`, sorted by power.
    pub coefficients: Vec<(f64, Complex64)>,
}

impl ResidualPolynomial {
    pub fn max_abs(&self) -> f64 {
        self.coefficients.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    pub fn total(&self) -> Complex64 {
        self.coefficients.iter().map(|(_, c)| c).sum()
    }

    pub fn is_zero(&self, tolerance: f64) -> bool {
        self.max_abs() <= tolerance
    }
}

/// Combines `(sign, transform, point)` triples. Terms with complex powers are
/// grouped under their real part.
pub fn combine(parts: &[(f64, &TransformValue, Complex64)]) -> Result<ResidualPolynomial, TransformError> {
    let mut by_power: BTreeMap<i64, (f64, Complex64)> = BTreeMap::new();
    for (sign, value, point) in parts {
        for t in &value.terms {
            let contribution = *sign * t.coefficient * t.gamma_factor()? * z_power(*point, t.z_power)?;
            // key on the power in units of 1/1024 to group equal exponents
            let key = (t.z_power.re * 1024.0).round() as i64;
            let slot = by_power.entry(key).or_insert((t.z_power.re, c64(0.0)));
            slot.1 += contribution;
        }
    }
    Ok(ResidualPolynomial { coefficients: by_power.into_values().collect() })
}

/// `C_k = ∏_{m=0}^{k-1} (m + 1/2)`.
pub fn c_k(k: u32) -> f64 {
    (0..k).map(|m| m as f64 + 0.5).product()
}

/// `p_k(t) = ∫₀^∞ x^{2k} e^{-tx²} dx` in closed form.
pub fn p_k(k: u32, t: f64) -> f64 {
    PI.sqrt() * c_k(k) / 2.0 * t.powf(-0.5 - k as f64)
}

/// Gaussian heat kernel term `(4πt)^{-1/2} e^{-l²/4t}`.
pub fn gaussian_kernel(l: f64, t: f64) -> f64 {
    (-(l * l) / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

/// `L((4πt)^{-1/2} e^{-l²/4t})(z) = e^{-lz}/l`.
pub fn laplace_gaussian_kernel(l: f64, z: Complex64) -> Result<Complex64, TransformError> {
    if !(l > 0.0) {
        return Err(TransformError::NonpositiveLength(l));
    }
    Ok((-l * z).exp() / l)
}

/// Symbolic `L(p_k)(s, z) = (√π C_k / 2) z^{1+2k-2s} Γ(s - 1/2 - k)`.
pub fn laplace_mellin_pk_value(k: u32, s: Complex64) -> TransformValue {
    let k = k as f64;
    TransformValue {
        terms: vec![TransformTerm {
            coefficient: c64(PI.sqrt() * c_k(k as u32) / 2.0),
            z_power: 1.0 + 2.0 * k - 2.0 * s,
            gamma_argument: Some(s - 0.5 - k),
        }],
    }
}

pub fn laplace_mellin_pk(k: u32, s: Complex64, z: Complex64) -> Result<Complex64, TransformError> {
    laplace_mellin_pk_value(k, s).numeric(z)
}

/// Symbolic `L(p_k)(z) = (√π C_k / 2) Γ(-1/2 - k) z^{1+2k}`, entire in `z`.
pub fn laplace_pk_value(k: u32) -> TransformValue {
    let g = gamma(c64(-0.5 - k as f64)).expect("negative half-integers are not poles");
    TransformValue::monomial(PI.sqrt() * c_k(k) / 2.0 * g, 1 + 2 * k as i32)
}

pub fn laplace_pk(k: u32, z: Complex64) -> Complex64 {
    laplace_pk_value(k).numeric(z).expect("polynomial with non-negative power")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IdentityTransform {
    /// `L(e^t I₀)(z) = (π/3) vol z³`
    ExpI0,
    /// `L(I₁)(z) = 2π vol (z³/3 - z)`
    I1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnipotentTransform {
    /// `L(e^t U₀)(z) = -π c z / 2`
    ExpU0,
    /// `L(U₁)(z) = -π c z`
    U1,
}

pub fn identity_term_transform(which: IdentityTransform, vol: f64) -> Result<TransformValue, TransformError> {
    if !(vol > 0.0) {
        return Err(TransformError::NonpositiveVolume(vol));
    }
    Ok(match which {
        IdentityTransform::ExpI0 => TransformValue::monomial(c64(PI / 3.0 * vol), 3),
        IdentityTransform::I1 => TransformValue::monomial(c64(2.0 * PI * vol / 3.0), 3)
            .plus(&TransformValue::monomial(c64(-2.0 * PI * vol), 1)),
    })
}

pub fn unipotent_term_transform(which: UnipotentTransform, c: f64) -> TransformValue {
    match which {
        UnipotentTransform::ExpU0 => TransformValue::monomial(c64(-PI * c / 2.0), 1),
        UnipotentTransform::U1 => TransformValue::monomial(c64(-PI * c), 1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HeatTermKind {
    Identity0,
    Identity1,
    Unipotent0,
    Unipotent1,
}

/// Identity or unipotent contribution to the heat trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelHeatTerm {
    pub kind: HeatTermKind,
    pub volume: f64,
    pub c_rho_gamma: f64,
}

impl ModelHeatTerm {
    /// The transform paired with this term: `L(e^t ·)` for the index-0
    /// terms, `L(·)` for the index-1 terms.
    pub fn transform(&self) -> Result<TransformValue, TransformError> {
        match self.kind {
            HeatTermKind::Identity0 => identity_term_transform(IdentityTransform::ExpI0, self.volume),
            HeatTermKind::Identity1 => identity_term_transform(IdentityTransform::I1, self.volume),
            HeatTermKind::Unipotent0 => Ok(unipotent_term_transform(UnipotentTransform::ExpU0, self.c_rho_gamma)),
            HeatTermKind::Unipotent1 => Ok(unipotent_term_transform(UnipotentTransform::U1, self.c_rho_gamma)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Cancellation {
    /// `L(I₁)(0) - L(e^t I₀)(-1) - L(e^t I₀)(1)`
    Identity { vol: f64 },
    /// `L(U₁)(0) - L(e^t U₀)(-1) - L(e^t U₀)(1)`
    Unipotent { c: f64 },
}

pub fn cancellation_check(which: Cancellation) -> Result<ResidualPolynomial, TransformError> {
    let (one, zero) = match which {
        Cancellation::Identity { vol } => (
            identity_term_transform(IdentityTransform::I1, vol)?,
            identity_term_transform(IdentityTransform::ExpI0, vol)?,
        ),
        Cancellation::Unipotent { c } => (
            unipotent_term_transform(UnipotentTransform::U1, c),
            unipotent_term_transform(UnipotentTransform::ExpU0, c),
        ),
    };
    combine(&[(1.0, &one, c64(0.0)), (-1.0, &zero, c64(-1.0)), (-1.0, &zero, c64(1.0))])
}

fn quadrature_options() -> QuadratureOptions {
    QuadratureOptions::default()
}

/// `∫₀^∞ x^{2k} e^{-tx²} dx` by quadrature in `x`.
pub fn p_k_quadrature(k: u32, t: f64) -> Result<Estimate, TransformError> {
    let x_max = (60.0 / t).sqrt();
    let f = |x: f64| c64(x.powi(2 * k as i32) * (-t * x * x).exp());
    let breaks: Vec<f64> = [0.0, 0.0625, 0.125, 0.25, 0.5, 1.0].iter().map(|b| b * x_max).collect();
    Ok(integrate_with_breakpoints(&f, &breaks, &quadrature_options())?)
}

/// `∫_{-∞}^∞ x^{2k} e^{-tx²} dx` by quadrature over the whole line.
pub fn full_line_moment_quadrature(k: u32, t: f64) -> Result<Estimate, TransformError> {
    let x_max = (60.0 / t).sqrt();
    let f = |x: f64| c64(x.powi(2 * k as i32) * (-t * x * x).exp());
    // the two halves are split differently, so the result is not 2·p_k by symmetry
    let mut breaks: Vec<f64> = [1.0, 0.6, 0.3, 0.1].iter().map(|b| -b * x_max).collect();
    breaks.extend([0.0, 0.0625, 0.125, 0.25, 0.5, 1.0].iter().map(|b| b * x_max));
    Ok(integrate_with_breakpoints(&f, &breaks, &quadrature_options())?)
}

/// Quadrature of `L((4πt)^{-1/2} e^{-l²/4t})(z)`.
pub fn quadrature_gaussian_kernel(l: f64, z: Complex64) -> Result<Estimate, TransformError> {
    if !(l > 0.0) {
        return Err(TransformError::NonpositiveLength(l));
    }
    let f = |t: f64| c64(gaussian_kernel(l, t));
    Ok(quadrature_laplace(&f, c64(0.0), z, LaplaceWindow::for_kernel(z))?)
}

/// Quadrature of `L(p_k)(s, z)` with `p_k` itself computed by quadrature.
///
/// When `Re s > k + 1/2` the integral converges and is computed directly.
/// Otherwise the finite part of the divergent integral is returned; it is the
/// analytic continuation of the closed form in `s`.
pub fn quadrature_mellin_pk(k: u32, s: Complex64, z: Complex64) -> Result<Estimate, TransformError> {
    if s.re > k as f64 + 0.5 {
        let failure = std::cell::Cell::new(None);
        let f = |t: f64| match p_k_quadrature(k, t) {
            Ok(e) => e.value,
            Err(e) => {
                failure.set(Some(e));
                c64(0.0)
            }
        };
        let est = quadrature_laplace(&f, s, z, LaplaceWindow::for_kernel(z))?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
        Ok(est)
    } else {
        let coefficient = p_k_quadrature(k, 1.0)?;
        let est = quadrature_laplace_power(coefficient.value, c64(-0.5 - k as f64), s, z)?;
        Ok(Estimate { value: est.value, error: est.error + coefficient.error * est.value.norm() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn gaussian_kernel_spot_values() {
        let v = laplace_gaussian_kernel(1.0, c64(1.0)).unwrap();
        assert!((v.re - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(laplace_gaussian_kernel(2.0, c64(0.0)).unwrap(), c64(0.5));
        assert!(matches!(laplace_gaussian_kernel(0.0, c64(1.0)), Err(TransformError::NonpositiveLength(_))));
        let q = quadrature_gaussian_kernel(1.7, c64(2.3)).unwrap();
        assert!(close(q.value, laplace_gaussian_kernel(1.7, c64(2.3)).unwrap(), 1e-8));
    }

    #[test]
    fn mellin_spot_values() {
        let v = laplace_mellin_pk(0, c64(1.0), c64(2.0)).unwrap();
        assert!((v.re - PI / 4.0).abs() < 1e-12);
        let v = laplace_mellin_pk(1, c64(2.0), c64(1.0)).unwrap();
        assert!((v.re - PI / 4.0).abs() < 1e-12);
        assert!(matches!(laplace_mellin_pk(0, c64(0.5), c64(1.0)), Err(TransformError::GammaPole(_))));
        assert!(matches!(laplace_mellin_pk(1, c64(-0.5), c64(1.0)), Err(TransformError::GammaPole(_))));
    }

    #[test]
    fn laplace_pk_spot_values() {
        assert!((laplace_pk(0, c64(1.0)).re + PI).abs() < 1e-12);
        assert!((laplace_pk(1, c64(2.0)).re - 8.0 * PI / 3.0).abs() < 1e-12);
        for k in 0..4 {
            assert_eq!(laplace_pk(k, c64(0.0)), c64(0.0));
        }
    }

    #[test]
    fn identity_and_unipotent_terms() {
        let e = identity_term_transform(IdentityTransform::ExpI0, 1.0).unwrap();
        assert!((e.numeric(c64(1.0)).unwrap().re - PI / 3.0).abs() < 1e-14);
        let i1 = identity_term_transform(IdentityTransform::I1, 1.0).unwrap();
        assert!((i1.numeric(c64(1.0)).unwrap().re + 4.0 * PI / 3.0).abs() < 1e-14);
        assert_eq!(i1.numeric(c64(0.0)).unwrap(), c64(0.0));
        assert!(identity_term_transform(IdentityTransform::I1, 0.0).is_err());
        let u1 = unipotent_term_transform(UnipotentTransform::U1, 1.0);
        assert!((u1.numeric(c64(2.0)).unwrap().re + 2.0 * PI).abs() < 1e-14);
        let u0 = unipotent_term_transform(UnipotentTransform::ExpU0, 1.0);
        assert!((u0.numeric(c64(2.0)).unwrap().re + PI).abs() < 1e-14);
        assert_eq!(u0.numeric(c64(0.0)).unwrap(), c64(0.0));
    }

    #[test]
    fn cancellations_vanish() {
        for which in [
            Cancellation::Identity { vol: 1.0 },
            Cancellation::Identity { vol: 1e6 },
            Cancellation::Unipotent { c: 7.3 },
        ] {
            let r = cancellation_check(which).unwrap();
            assert!(r.is_zero(1e-12), "{which:?}: {r:?}");
        }
    }

    #[test]
    fn shifted_identity_combination_does_not_vanish() {
        // the cancellation is special to z = 0
        let i1 = identity_term_transform(IdentityTransform::I1, 1.0).unwrap();
        let e0 = identity_term_transform(IdentityTransform::ExpI0, 1.0).unwrap();
        let r = combine(&[(1.0, &i1, c64(1.0)), (-1.0, &e0, c64(0.0)), (-1.0, &e0, c64(2.0))]).unwrap();
        assert!(r.max_abs() > 1.0);
    }

    #[test]
    fn p_k_by_quadrature() {
        for k in 0..3 {
            for t in [1e-6, 0.3, 1.0, 7.0] {
                let q = p_k_quadrature(k, t).unwrap();
                assert!((q.value.re - p_k(k, t)).abs() <= 1e-10 * p_k(k, t));
                let full = full_line_moment_quadrature(k, t).unwrap();
                assert!((full.value.re - 2.0 * q.value.re).abs() <= 1e-10 * full.value.re);
            }
        }
    }

    #[test]
    fn mellin_oracle_convergent_and_finite_part() {
        let q = quadrature_mellin_pk(0, c64(3.0), c64(1.5)).unwrap();
        assert!(close(q.value, laplace_mellin_pk(0, c64(3.0), c64(1.5)).unwrap(), 1e-8));
        let q = quadrature_mellin_pk(2, c64(1.0), c64(0.7)).unwrap();
        assert!(close(q.value, laplace_mellin_pk(2, c64(1.0), c64(0.7)).unwrap(), 1e-8));
    }

    #[test]
    fn z_power_branches() {
        assert_eq!(z_power(c64(-2.0), c64(3.0)).unwrap(), c64(-8.0));
        assert!(z_power(c64(0.0), c64(-1.0)).is_err());
        assert_eq!(z_power(c64(0.0), c64(0.5)).unwrap(), c64(0.0));
    }
}
