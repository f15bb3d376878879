//! Laurent polynomials in one variable with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// Coefficients with modulus at or below this are dropped.
pub const ZERO_THRESHOLD: f64 = 1e-13;

/// `Σ c_k t^k`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    coefficients: BTreeMap<i64, Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Complex64, exponent: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, c);
        p
    }

    /// From `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// From real coefficients of `t⁰, t¹, ...`.
    pub fn from_real_coefficients(coefficients: &[f64]) -> Self {
        Self::from_terms(coefficients.iter().enumerate().map(|(i, &c)| (i as i64, Complex64::new(c, 0.0))))
    }

    fn add_term(&mut self, exponent: i64, c: Complex64) {
        let entry = self.coefficients.entry(exponent).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() <= ZERO_THRESHOLD {
            self.coefficients.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, exponent: i64) -> Complex64 {
        self.coefficients.get(&exponent).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coefficients.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coefficients.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coefficients.keys().next_back().copied()
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coefficients.iter().map(|(&e, &c)| c * t.powi(e as i32)).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * factor)))
    }

    pub fn shift(&self, by: i64) -> Self {
        Self { coefficients: self.coefficients.iter().map(|(&e, &c)| (e + by, c)).collect() }
    }

    /// Representative of the class modulo units `u t^k` with `|u| = 1`:
    /// lowest exponent 0 and a positive real leading coefficient.
    pub fn normalized(&self) -> Self {
        let (Some(low), Some(high)) = (self.min_exponent(), self.max_exponent()) else {
            return Self::zero();
        };
        let lead = self.coefficients[&high];
        let phase = lead / lead.norm();
        self.shift(-low).scale(phase.inv())
    }

    /// Coefficient-wise comparison with absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let exponents = self.coefficients.keys().chain(other.coefficients.keys());
        exponents.into_iter().all(|&e| (self.coefficient(e) - other.coefficient(e)).norm() <= tol)
    }

    /// Equality modulo units `u t^k`, `|u| = 1`.
    pub fn unit_equivalent(&self, other: &Self, tol: f64) -> bool {
        self.normalized().approx_eq(&other.normalized(), tol)
    }

    /// Determinant of a square matrix by cofactor expansion along the first
    /// row, for the small matrices of knot presentations.
    pub fn determinant(matrix: &[Vec<LaurentPoly>]) -> LaurentPoly {
        let n = matrix.len();
        if n == 0 {
            return Self::one();
        }
        assert!(matrix.iter().all(|r| r.len() == n), "determinant needs a square matrix");
        if n == 1 {
            return matrix[0][0].clone();
        }
        let mut total = Self::zero();
        for col in 0..n {
            if matrix[0][col].is_zero() {
                continue;
            }
            let minor: Vec<Vec<LaurentPoly>> = matrix[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &matrix[0][col] * &Self::determinant(&minor);
            total = if col % 2 == 0 { &total + &term } else { &total - &term };
        }
        total
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

fn format_coefficient(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

/// Sorted by ascending exponent, e.g. `1 - 3 t + t^2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let real_negative = c.im == 0.0 && c.re < 0.0;
            let shown = if real_negative && i > 0 { -c } else { c };
            if i > 0 {
                write!(f, "{}", if real_negative { " - " } else { " + " })?;
            }
            let unit = shown == Complex64::new(1.0, 0.0) && e != 0;
            let coefficient = if unit { String::new() } else { format_coefficient(shown) };
            let sep = if unit || e == 0 { "" } else { " " };
            match e {
                0 => write!(f, "{coefficient}")?,
                1 => write!(f, "{coefficient}{sep}t")?,
                _ => write!(f, "{coefficient}{sep}t^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    /// A list of `[exponent, re, im]` triples in ascending order.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let triples: Vec<(i64, f64, f64)> = self.terms().map(|(e, c)| (e, c.re, c.im)).collect();
        triples.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn arithmetic_and_zero_dropping() {
        let p = LaurentPoly::from_real_coefficients(&[1.0, -1.0]);
        let q = LaurentPoly::from_real_coefficients(&[1.0, 1.0]);
        let pq = &p * &q;
        assert_eq!(pq, LaurentPoly::from_real_coefficients(&[1.0, 0.0, -1.0]));
        assert_eq!(pq.terms().count(), 2);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn normalization_removes_units() {
        let p = LaurentPoly::from_real_coefficients(&[1.0, -3.0, 1.0]);
        let unit = LaurentPoly::monomial(Complex64::new(0.0, -1.0), -4);
        let q = &p * &unit;
        assert!(q.unit_equivalent(&p, 1e-14));
        assert_eq!(q.normalized().min_exponent(), Some(0));
        assert!(!p.unit_equivalent(&LaurentPoly::from_real_coefficients(&[1.0, -1.0, 1.0]), 1e-12));
    }

    #[test]
    fn determinant_of_small_matrices() {
        let t = LaurentPoly::monomial(c(1.0), 1);
        let one = LaurentPoly::one();
        let m = vec![vec![t.clone(), one.clone()], vec![one.clone(), t.clone()]];
        assert_eq!(LaurentPoly::determinant(&m), LaurentPoly::from_real_coefficients(&[-1.0, 0.0, 1.0]));
        assert_eq!(LaurentPoly::determinant(&[]), one);
    }

    #[test]
    fn display_sorted() {
        let p = LaurentPoly::from_real_coefficients(&[1.0, -3.0, 1.0]);
        assert_eq!(p.to_string(), "1 - 3 t + t^2");
        assert_eq!(LaurentPoly::monomial(c(2.0), -1).to_string(), "2 t^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn evaluation() {
        let p = LaurentPoly::from_real_coefficients(&[1.0, -3.0, 1.0]);
        let v = p.eval(Complex64::new(0.0, 1.0));
        assert!((v - Complex64::new(0.0, -3.0)).norm() < 1e-15);
    }
}
