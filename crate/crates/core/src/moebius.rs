//! Elements of `PSL(2, C)`: arithmetic, classification and the geodesic
//! invariants (length and holonomy angle) of loxodromic elements.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MoebiusError {
    #[error("matrix is not unimodular: |det - 1| = {0:e}")]
    NonUnimodular(f64),
    #[error("element is {0:?}, not loxodromic")]
    NotLoxodromic(Classification),
    #[error("singular matrix cannot be normalized to determinant 1")]
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// A 2×2 complex matrix of determinant 1, considered up to sign.
///
/// Stored in the sign-canonical form: the first entry (row-major) that is not
/// negligible has argument in `(-π/2, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusElement {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl MoebiusElement {
    pub const IDENTITY: MoebiusElement = MoebiusElement {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    };

    /// Builds an element from entries that must already have determinant 1
    /// within `tol.unimodular`; the small defect is then normalized away.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64, tol: &Tolerances) -> Result<Self, MoebiusError> {
        let det = a * d - b * c;
        let defect = (det - 1.0).norm();
        if defect > tol.unimodular {
            return Err(MoebiusError::NonUnimodular(defect));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    /// Divides by a square root of the determinant and canonicalizes the sign.
    pub fn from_entries_normalizing(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
    ) -> Result<Self, MoebiusError> {
        let det = a * d - b * c;
        if det.norm() == 0.0 || !det.norm().is_finite() {
            return Err(MoebiusError::Singular);
        }
        Ok(Self::normalized(a, b, c, d))
    }

    fn normalized(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        let det = a * d - b * c;
        let (a, b, c, d) = if det == c64(1.0, 0.0) {
            (a, b, c, d)
        } else {
            let r = det.sqrt();
            (a / r, b / r, c / r, d / r)
        };
        Self { a, b, c, d }.canonical_sign()
    }

    /// Constructor for entries that are exactly unimodular by design
    /// (e.g. `diag(λ, 1/λ)`).
    pub fn diagonal(lambda: Complex64) -> Self {
        Self::normalized(lambda, c64(0.0, 0.0), c64(0.0, 0.0), 1.0 / lambda)
    }

    fn canonical_sign(self) -> Self {
        let scale = self.max_abs();
        let threshold = 1e-12 * scale;
        for e in self.entries() {
            if e.norm() > threshold {
                let arg = e.arg();
                return if arg > -PI / 2.0 && arg <= PI / 2.0 { self } else { self.negated() };
            }
        }
        self
    }

    fn negated(self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    fn max_abs(&self) -> f64 {
        self.entries().iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Trace of the canonical representative; meaningful up to sign.
    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        // det = 1, so the adjugate is the inverse; no renormalization needed
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }.canonical_sign()
    }

    /// Product without sign canonicalization, renormalized only when the
    /// determinant drifted by more than `tol.renormalization`.
    pub fn compose(&self, rhs: &Self, tol: &Tolerances) -> Self {
        let a = self.a * rhs.a + self.b * rhs.c;
        let b = self.a * rhs.b + self.b * rhs.d;
        let c = self.c * rhs.a + self.d * rhs.c;
        let d = self.c * rhs.b + self.d * rhs.d;
        let det = a * d - b * c;
        if (det - 1.0).norm() > tol.renormalization {
            Self::normalized(a, b, c, d)
        } else {
            Self { a, b, c, d }.canonical_sign()
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let tol = Tolerances::DEFAULT;
        let base = if n < 0 { self.inverse() } else { *self };
        let mut result = Self::IDENTITY;
        let mut square = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&square, &tol);
            }
            square = square.compose(&square, &tol);
            e >>= 1;
        }
        result
    }

    /// Equality in `PSL(2, C)`: entrywise up to a global sign.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let close = |s: f64| self.entries().iter().zip(other.entries().iter()).all(|(x, y)| (x - y * s).norm() <= tol);
        close(1.0) || close(-1.0)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&Self::IDENTITY, tol)
    }

    pub fn classify(&self) -> Result<Classification, MoebiusError> {
        self.classify_with(&Tolerances::DEFAULT)
    }

    /// Ties between elliptic and parabolic resolve to parabolic.
    pub fn classify_with(&self, tol: &Tolerances) -> Result<Classification, MoebiusError> {
        let defect = (self.determinant() - 1.0).norm();
        if defect > tol.unimodular {
            return Err(MoebiusError::NonUnimodular(defect));
        }
        if self.is_identity(tol.comparison) {
            return Ok(Classification::Identity);
        }
        let tr = self.trace();
        let tr2 = tr * tr;
        if (tr2 - 4.0).norm() <= tol.comparison {
            return Ok(Classification::Parabolic);
        }
        if tr2.im.abs() <= tol.comparison && tr2.re >= 0.0 && tr2.re < 4.0 {
            return Ok(Classification::Elliptic);
        }
        Ok(Classification::Loxodromic)
    }

    pub fn geodesic_invariants(&self) -> Result<GeodesicInvariants, MoebiusError> {
        self.geodesic_invariants_with(&Tolerances::DEFAULT)
    }

    pub fn geodesic_invariants_with(&self, tol: &Tolerances) -> Result<GeodesicInvariants, MoebiusError> {
        match self.classify_with(tol)? {
            Classification::Loxodromic => Ok(GeodesicInvariants::from_trace(self.trace())),
            other => Err(MoebiusError::NotLoxodromic(other)),
        }
    }
}

impl Mul for MoebiusElement {
    type Output = MoebiusElement;

    fn mul(self, rhs: Self) -> Self::Output {
        self.compose(&rhs, &Tolerances::DEFAULT)
    }
}

impl fmt::Display for MoebiusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Length, holonomy angle and trace of a loxodromic element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicInvariants {
    /// Translation length `l = 2 ln|λ|`.
    pub length: f64,
    /// Rotation angle `θ = 2 arg λ` reduced to `(-π, π]`.
    pub holonomy_angle: f64,
    pub trace: Complex64,
}

/// Reduces an angle to `(-π, π]`.
pub fn reduce_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = theta.rem_euclid(two_pi);
    if r > PI {
        r -= two_pi;
    }
    r
}

impl GeodesicInvariants {
    /// Invariants from the trace `λ + 1/λ` of a loxodromic element.
    pub fn from_trace(trace: Complex64) -> Self {
        let disc = (trace * trace - 4.0).sqrt();
        let r1 = (trace + disc) * 0.5;
        let r2 = (trace - disc) * 0.5;
        // larger root directly; the smaller one suffers cancellation
        let lambda = if r1.norm() >= r2.norm() { r1 } else { r2 };
        Self { length: 2.0 * lambda.norm().ln(), holonomy_angle: reduce_angle(2.0 * lambda.arg()), trace }
    }

    /// Invariants of a synthetic class with given length and angle.
    pub fn from_length_angle(length: f64, holonomy_angle: f64) -> Self {
        let lambda = Complex64::from_polar((0.5 * length).exp(), 0.5 * holonomy_angle);
        Self { length, holonomy_angle: reduce_angle(holonomy_angle), trace: lambda + 1.0 / lambda }
    }

    /// `λ = e^{(l + iθ)/2}` with `|λ| > 1`.
    pub fn eigenvalue(&self) -> Complex64 {
        Complex64::new(0.5 * self.length, 0.5 * self.holonomy_angle).exp()
    }

    /// `Δ(γ) = det(I - e^{-l} m(γ)) = 1 - 2e^{-l} cos θ + e^{-2l}`.
    pub fn delta(&self) -> f64 {
        delta_gamma(self.length, self.holonomy_angle)
    }
}

/// `(1 - e^{-l+iθ})(1 - e^{-l-iθ})`, evaluated as `|1 - e^{-l+iθ}|²`.
pub fn delta_gamma(length: f64, holonomy_angle: f64) -> f64 {
    let q = Complex64::from_polar((-length).exp(), holonomy_angle);
    (Complex64::new(1.0, 0.0) - q).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> MoebiusElement {
        MoebiusElement::new(c64(a.0, a.1), c64(b.0, b.1), c64(c.0, c.1), c64(d.0, d.1), &Tolerances::DEFAULT).unwrap()
    }

    #[test]
    fn classification_examples() {
        let parabolic = m((1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0));
        assert_eq!(parabolic.classify().unwrap(), Classification::Parabolic);
        let lox = m((2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.5, 0.0));
        assert_eq!(lox.classify().unwrap(), Classification::Loxodromic);
        let minus_i = m((-1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0));
        assert_eq!(minus_i.classify().unwrap(), Classification::Identity);
        let rotation = MoebiusElement::diagonal(Complex64::from_polar(1.0, 0.3));
        assert_eq!(rotation.classify().unwrap(), Classification::Elliptic);
        // purely imaginary trace is loxodromic with θ = π
        let twist = MoebiusElement::diagonal(c64(0.0, 2.0));
        assert_eq!(twist.classify().unwrap(), Classification::Loxodromic);
    }

    #[test]
    fn non_unimodular_rejected() {
        let err = MoebiusElement::new(c64(2.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0), &Tolerances::DEFAULT);
        assert!(matches!(err, Err(MoebiusError::NonUnimodular(_))));
    }

    #[test]
    fn near_parabolic_ties_go_to_parabolic() {
        // trace² = 4 - 5e-11, inside the tie tolerance
        let eps = 1.25e-11;
        let tr = (4.0_f64 - 4.0 * eps).sqrt();
        let e = MoebiusElement::diagonal(Complex64::from_polar(1.0, (tr / 2.0).acos()));
        assert_eq!(e.classify().unwrap(), Classification::Parabolic);
    }

    #[test]
    fn invariants_of_diagonal_elements() {
        let g = MoebiusElement::diagonal(c64(2.0, 0.0));
        let inv = g.geodesic_invariants().unwrap();
        assert!((inv.length - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!(inv.holonomy_angle.abs() < 1e-15);

        let g = MoebiusElement::diagonal(Complex64::from_polar(2.0, PI / 4.0));
        let inv = g.geodesic_invariants().unwrap();
        assert!((inv.length - 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!((inv.holonomy_angle - PI / 2.0).abs() < 1e-14);
        let lambda = inv.eigenvalue();
        assert!(((lambda + 1.0 / lambda).norm() - inv.trace.norm()).abs() < 1e-10);
    }

    #[test]
    fn parabolic_has_no_invariants() {
        let p = m((1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0));
        assert_eq!(p.geodesic_invariants(), Err(MoebiusError::NotLoxodromic(Classification::Parabolic)));
    }

    #[test]
    fn delta_examples() {
        let l = 4f64.ln();
        assert!((delta_gamma(l, 0.0) - 9.0 / 16.0).abs() < 1e-15);
        assert!((delta_gamma(l, PI) - 25.0 / 16.0).abs() < 1e-15);
        let d = delta_gamma(30.0, 1.234);
        let e = (-30f64).exp();
        assert!(d >= 1.0 - 2.0 * e - e * e && d <= 1.0 + 2.0 * e + e * e);
    }

    #[test]
    fn sign_canonical_equality() {
        let g = m((0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (3.0, 0.0));
        let h = MoebiusElement::from_entries_normalizing(c64(0.0, 0.0), c64(-1.0, 0.0), c64(1.0, 0.0), c64(-3.0, 0.0))
            .unwrap();
        assert_eq!(g.entries(), h.entries());
        assert!(g.approx_eq(&h, 0.0));
    }

    #[test]
    fn inverse_and_pow() {
        let g = MoebiusElement::from_entries_normalizing(c64(2.0, 1.0), c64(1.0, 0.0), c64(3.0, 0.0), c64(1.4, -0.2))
            .unwrap();
        assert!((g * g.inverse()).is_identity(1e-12));
        let cube = g * g * g;
        assert!(cube.approx_eq(&g.pow(3), 1e-10));
        assert!(g.pow(-2).approx_eq(&(g.inverse() * g.inverse()), 1e-10));
    }
}
