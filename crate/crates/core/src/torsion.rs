//! Fox calculus, twisted Alexander invariants and Reidemeister torsion of the
//! presentation 2-complex with coefficients twisted by `ρ ⊗ t^{φ}`.
//!
//! Chains are row vectors. For a presentation with `g` generators and `r`
//! relators the complex is `C² → C^g → C¹` with
//! `∂₂ = (∂r_i/∂a_j)` (`r × g`, the Fox Jacobian) and
//! `∂₁ = (ρ(a_j) t^{φ(a_j)} - 1)` (`g × 1`).
//!
//! Torsion is `τ = ∏ |det ∂_i[S_i, T_{i-1}]|^{(-1)^i}`, so `∂₂` contributes
//! to the numerator. Only the magnitude is computed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::characters::{Character, CharacterError};
use crate::laurent::LaurentPoly;
use crate::lfunc::{
    rs_factorization_check, shifted_prop31_check, IdentityResidual, LfuncError, SpectrumSeries, TransformRoute,
};
use crate::presentation::GroupPresentation;
use crate::tolerance::Tolerances;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorsionError {
    #[error("twisted complex is not acyclic: homology dimensions (H0, H1, H2) = ({h0}, {h1}, {h2})")]
    NotAcyclic { h0: usize, h1: usize, h2: usize },
    #[error("boundary maps do not compose to zero (max entry {0:e})")]
    NotAComplex(f64),
    #[error("presentation has deficiency {0}, need 1")]
    ShapeError(i64),
    #[error("presentation has no epimorphism to Z")]
    MissingEpimorphism,
    #[error("removed generator {0} has ρ(a) t^φ(a) - 1 identically zero")]
    DegenerateDenominator(usize),
    #[error("twisted Alexander invariant has a pole at t = 1")]
    PoleAtOne,
    #[error("row {0} of the 1-boundary is zero and cannot start a subbasis")]
    InvalidSubbasis(usize),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Lfunc(#[from] LfuncError),
}

/// Coefficient rings for Fox derivatives.
pub trait FoxRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
}

impl FoxRing for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl FoxRing for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl FoxRing for Matrix2<Complex64> {
    fn zero() -> Self {
        Matrix2::zeros()
    }
    fn one() -> Self {
        Matrix2::identity()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

/// Element of the integral group ring of the free group.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElement(pub BTreeMap<Word, i64>);

impl GroupRingElement {
    pub fn word(w: Word) -> Self {
        Self(BTreeMap::from([(w, 1)]))
    }

    fn insert(&mut self, w: Word, c: i64) {
        let entry = self.0.entry(w.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.0.remove(&w);
        }
    }

    /// `Σ c_w · image(w)`, expanding every word letter by letter.
    pub fn evaluate<R: FoxRing>(&self, image: impl Fn(Letter) -> R) -> R {
        let mut total = R::zero();
        for (w, &c) in &self.0 {
            let value = w.letters().iter().fold(R::one(), |acc, &l| acc.mul(&image(l)));
            let sign = if c < 0 { R::zero().sub(&R::one()) } else { R::one() };
            for _ in 0..c.unsigned_abs() {
                total = total.add(&value.mul(&sign));
            }
        }
        total
    }
}

impl FoxRing for GroupRingElement {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::word(Word::identity())
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in &other.0 {
            out.insert(w.clone(), c);
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in &other.0 {
            out.insert(w.clone(), -c);
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (u, &a) in &self.0 {
            for (v, &b) in &other.0 {
                out.insert(u.concat(v), a * b);
            }
        }
        out
    }
}

/// `∂w/∂a_i` evaluated through `image`, by the rules
/// `∂a_j/∂a_i = δ_ij`, `∂a_i⁻¹/∂a_i = -a_i⁻¹`, `∂(uv) = ∂u + u ∂v`.
pub fn fox_derivative<R: FoxRing>(w: &Word, i: usize, image: impl Fn(Letter) -> R) -> R {
    let mut prefix = R::one();
    let mut acc = R::zero();
    for &l in w.letters() {
        let next = prefix.mul(&image(l));
        if l.generator == i {
            acc = if l.inverse { acc.sub(&next) } else { acc.add(&prefix) };
        }
        prefix = next;
    }
    acc
}

/// Letter images `ρ(a_j) t^{φ(a_j)}` as Laurent monomials.
fn laurent_images(p: &GroupPresentation, rho: &Character) -> Vec<LaurentPoly> {
    let phases = rho.generator_phases(p);
    let epim: Vec<i64> = p.epimorphism().map(<[i64]>::to_vec).unwrap_or_else(|| vec![0; p.generator_count()]);
    (0..2 * p.generator_count())
        .map(|code| {
            let l = Letter::from_code(code);
            let phase = if l.inverse { phases[l.generator].neg() } else { phases[l.generator] };
            LaurentPoly::monomial(phase.value(), l.exponent() * epim[l.generator])
        })
        .collect()
}

/// Fox Jacobian `(∂r_i/∂a_j)` over Laurent polynomials.
pub fn fox_jacobian(p: &GroupPresentation, rho: &Character) -> Result<Vec<Vec<LaurentPoly>>, TorsionError> {
    rho.check_rank(p)?;
    let images = laurent_images(p, rho);
    Ok(p.relators()
        .iter()
        .map(|r| (0..p.generator_count()).map(|j| fox_derivative(r, j, |l| images[l.code()].clone())).collect())
        .collect())
}

/// The twisted cellular complex at a specialization of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedChainComplex {
    /// `r × g`.
    pub boundary_2: DMatrix<Complex64>,
    /// `g × 1`.
    pub boundary_1: DMatrix<Complex64>,
    pub twisting: Option<Character>,
    pub evaluation_point: Complex64,
}

impl TwistedChainComplex {
    pub fn new(p: &GroupPresentation, rho: &Character, t: Complex64) -> Result<Self, TorsionError> {
        let jacobian = fox_jacobian(p, rho)?;
        let g = p.generator_count();
        let r = p.relators().len();
        let boundary_2 = DMatrix::from_fn(r, g, |i, j| jacobian[i][j].eval(t));
        let images = laurent_images(p, rho);
        let boundary_1 = DMatrix::from_fn(g, 1, |j, _| images[2 * j].eval(t) - 1.0);
        Ok(Self { boundary_2, boundary_1, twisting: Some(rho.clone()), evaluation_point: t })
    }

    /// A complex given directly by its boundary matrices.
    pub fn from_matrices(boundary_2: DMatrix<Complex64>, boundary_1: DMatrix<Complex64>) -> Self {
        Self { boundary_2, boundary_1, twisting: None, evaluation_point: Complex64::new(1.0, 0.0) }
    }

    /// `max |(∂₂ ∂₁)_{ij}|`.
    pub fn composition_defect(&self) -> f64 {
        if self.boundary_2.nrows() == 0 {
            return 0.0;
        }
        (&self.boundary_2 * &self.boundary_1).iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Errors unless `∂₁ ∘ ∂₂ = 0` to `1e-10` relative to the entries.
    pub fn check_complex(&self) -> Result<(), TorsionError> {
        let scale = self.boundary_2.iter().chain(self.boundary_1.iter()).map(|x| x.norm()).fold(1.0, f64::max);
        let defect = self.composition_defect();
        if defect > 1e-10 * scale * scale {
            return Err(TorsionError::NotAComplex(defect));
        }
        Ok(())
    }

    /// Largest singular value over both boundary maps; ranks are cut
    /// relative to it so that a numerically vanishing map has rank 0.
    pub fn scale(&self) -> f64 {
        singular_values(&self.boundary_1).into_iter().chain(singular_values(&self.boundary_2)).fold(0.0, f64::max)
    }

    /// `(H₀, H₁, H₂)` dimensions from numeric ranks.
    pub fn homology_dimensions(&self, tol: &Tolerances) -> (usize, usize, usize) {
        let cut = tol.rank * self.scale();
        let r1 = rank_above(&self.boundary_1, cut);
        let r2 = rank_above(&self.boundary_2, cut);
        let c0 = self.boundary_1.ncols();
        let c1 = self.boundary_1.nrows();
        let c2 = self.boundary_2.nrows();
        (c0 - r1, c1 - r1 - r2.min(c1 - r1), c2 - r2)
    }

    pub fn check_acyclic(&self, tol: &Tolerances) -> Result<(), TorsionError> {
        match self.homology_dimensions(tol) {
            (0, 0, 0) => Ok(()),
            (h0, h1, h2) => Err(TorsionError::NotAcyclic { h0, h1, h2 }),
        }
    }
}

fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

fn rank_above(m: &DMatrix<Complex64>, cut: f64) -> usize {
    singular_values(m).into_iter().filter(|&s| s > cut).count()
}

/// Numeric rank with singular values below `relative · σ_max` dropped.
pub fn numeric_rank(m: &DMatrix<Complex64>, relative: f64) -> usize {
    let max = singular_values(m).into_iter().fold(0.0, f64::max);
    if max == 0.0 {
        0
    } else {
        rank_above(m, relative * max)
    }
}

fn square_determinant(m: DMatrix<Complex64>) -> Complex64 {
    if m.nrows() == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        m.determinant()
    }
}

/// `|τ|` with the subbasis starting at row `k` of `∂₁`:
/// `|det ∂₂[:, T]| / |∂₁[k]|`, `T` the other rows.
pub fn reidemeister_torsion_with_subbasis(c: &TwistedChainComplex, k: usize) -> Result<f64, TorsionError> {
    let tol = Tolerances::DEFAULT;
    c.check_complex()?;
    c.check_acyclic(&tol)?;
    let d1 = c.boundary_1[(k, 0)];
    let scale = c.boundary_1.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if d1.norm() <= tol.rank * scale {
        return Err(TorsionError::InvalidSubbasis(k));
    }
    let columns: Vec<usize> = (0..c.boundary_1.nrows()).filter(|&j| j != k).collect();
    let minor = c.boundary_2.select_columns(&columns);
    Ok(square_determinant(minor).norm() / d1.norm())
}

/// `|τ|` via the subbasis through the largest entry of `∂₁`.
pub fn reidemeister_torsion_magnitude(c: &TwistedChainComplex) -> Result<f64, TorsionError> {
    let k = c
        .boundary_1
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(i, _)| i)
        .ok_or(TorsionError::NotAcyclic { h0: 1, h1: 0, h2: 0 })?;
    reidemeister_torsion_with_subbasis(c, k)
}

/// `|τ|` from singular values: `∏ σ(∂₂) / ∏ σ(∂₁)`, valid in the standard
/// (orthonormal) bases.
pub fn reidemeister_torsion_svd(c: &TwistedChainComplex) -> Result<f64, TorsionError> {
    let tol = Tolerances::DEFAULT;
    c.check_complex()?;
    c.check_acyclic(&tol)?;
    let cut = tol.rank * c.scale();
    let p2: f64 = singular_values(&c.boundary_2).into_iter().filter(|&s| s > cut).product();
    let p1: f64 = singular_values(&c.boundary_1).into_iter().filter(|&s| s > cut).product();
    Ok(p2 / p1)
}

/// Wada invariant `det A_k / (ρ(a_k) t^{φ(a_k)} - 1)`, numerator and
/// denominator each normalized modulo units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistedAlexander {
    pub numerator: LaurentPoly,
    pub denominator: LaurentPoly,
    pub removed_generator: usize,
}

impl TwistedAlexander {
    pub fn eval(&self, t: Complex64) -> Result<Complex64, TorsionError> {
        let d = self.denominator.eval(t);
        if d.norm() <= 1e-12 {
            return Err(TorsionError::PoleAtOne);
        }
        Ok(self.numerator.eval(t) / d)
    }

    /// Equality of the ratios modulo units, by cross multiplication.
    pub fn unit_equivalent(&self, other: &Self, tol: f64) -> bool {
        (&self.numerator * &other.denominator).unit_equivalent(&(&other.numerator * &self.denominator), tol)
    }
}

/// First generator with `ρ(a_i) ≠ 1`, else the first with `φ(a_i) ≠ 0`.
pub fn default_removed_generator(p: &GroupPresentation, rho: &Character) -> Option<usize> {
    let phases = rho.generator_phases(p);
    let epim = p.epimorphism()?;
    phases.iter().position(|ph| !ph.is_zero()).or_else(|| epim.iter().position(|&e| e != 0))
}

pub fn twisted_alexander(p: &GroupPresentation, rho: &Character) -> Result<TwistedAlexander, TorsionError> {
    rho.check_rank(p)?;
    let k = default_removed_generator(p, rho).ok_or(TorsionError::MissingEpimorphism)?;
    twisted_alexander_removing(p, rho, k)
}

pub fn twisted_alexander_removing(
    p: &GroupPresentation,
    rho: &Character,
    k: usize,
) -> Result<TwistedAlexander, TorsionError> {
    if p.deficiency() != 1 {
        return Err(TorsionError::ShapeError(p.deficiency()));
    }
    if p.epimorphism().is_none() {
        return Err(TorsionError::MissingEpimorphism);
    }
    let jacobian = fox_jacobian(p, rho)?;
    let minor: Vec<Vec<LaurentPoly>> = jacobian
        .iter()
        .map(|row| row.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, x)| x.clone()).collect())
        .collect();
    let numerator = LaurentPoly::determinant(&minor);
    let images = laurent_images(p, rho);
    let denominator = &images[2 * k] - &LaurentPoly::one();
    if denominator.is_zero() {
        return Err(TorsionError::DegenerateDenominator(k));
    }
    Ok(TwistedAlexander {
        numerator: numerator.normalized(),
        denominator: denominator.normalized(),
        removed_generator: k,
    })
}

/// `A*(ρ)(1)`.
pub fn alexander_at_one(p: &GroupPresentation, rho: &Character) -> Result<Complex64, TorsionError> {
    twisted_alexander(p, rho)?.eval(Complex64::new(1.0, 0.0))
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub delta_rho: Option<f64>,
    /// Points for the product/series factorization check.
    pub rs_points: Vec<Complex64>,
    /// Point for the shifted transform identities.
    pub prop31_point: Option<Complex64>,
    pub spectrum_stabilized: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub presentation: String,
    pub character: String,
    pub tau_magnitude: f64,
    pub tau_squared: f64,
    pub tau_svd: f64,
    pub alexander_numerator: String,
    pub alexander_denominator: String,
    pub alexander_at_one_abs: f64,
    /// `| |τ| - |A*(1)| |`.
    pub torsion_alexander_difference: f64,
    pub delta_rho: Option<f64>,
    pub delta_alexander_squared: Option<f64>,
    pub rs_residuals: Vec<(Complex64, IdentityResidual)>,
    pub prop31_closed_form: Option<f64>,
    pub prop31_quadrature: Option<f64>,
    pub spectrum_stabilized: Option<bool>,
    pub classes: usize,
    pub continuation_note: String,
    pub warnings: Vec<String>,
}

pub const CONTINUATION_NOTE: &str =
    "R_rho(0) is defined by meromorphic continuation from Re z > 2 and is not computed here; \
the identities above are checked where the product and series converge absolutely";

/// Torsion-side values and convergent-region residuals for `(p, ρ)`.
/// Refuses characters trivial on the cusp and non-acyclic complexes.
pub fn theorem_report(
    p: &GroupPresentation,
    rho: &Character,
    spec: &SpectrumSeries,
    options: &ReportOptions,
) -> Result<TheoremReport, TorsionError> {
    if !rho.cusp_nontrivial(p)? {
        return Err(TorsionError::HypothesisFailed(format!(
            "character {rho} is trivial on the cusp subgroup; the torsion identity needs rho nontrivial there"
        )));
    }
    let complex = TwistedChainComplex::new(p, rho, Complex64::new(1.0, 0.0))?;
    let tau = match reidemeister_torsion_magnitude(&complex) {
        Err(TorsionError::NotAcyclic { h0, h1, h2 }) => return Err(TorsionError::HypothesisFailed(format!(
            "twisted complex is not acyclic (H0, H1, H2) = ({h0}, {h1}, {h2}); the torsion identity needs h^1(rho) = 0"
        ))),
        other => other?,
    };
    let tau_svd = reidemeister_torsion_svd(&complex)?;
    let alexander = twisted_alexander(p, rho)?;
    let a1 = alexander.eval(Complex64::new(1.0, 0.0))?.norm();

    let mut rs_residuals = Vec::new();
    for &z in &options.rs_points {
        rs_residuals.push((z, rs_factorization_check(spec, z)?));
    }
    let (mut closed, mut quad) = (None, None);
    if let Some(z) = options.prop31_point {
        let closed_spec = spec.clone().with_power_closure(z.re - 1.0);
        closed = Some(shifted_prop31_check(&closed_spec, z, TransformRoute::ClosedForm)?.max_residual);
        quad = Some(shifted_prop31_check(&closed_spec, z, TransformRoute::Quadrature)?.max_residual);
    }
    Ok(TheoremReport {
        presentation: p.name().to_string(),
        character: rho.to_string(),
        tau_magnitude: tau,
        tau_squared: tau * tau,
        tau_svd,
        alexander_numerator: alexander.numerator.to_string(),
        alexander_denominator: alexander.denominator.to_string(),
        alexander_at_one_abs: a1,
        torsion_alexander_difference: (tau - a1).abs(),
        delta_rho: options.delta_rho,
        delta_alexander_squared: options.delta_rho.map(|d| (d * a1).powi(2)),
        rs_residuals,
        prop31_closed_form: closed,
        prop31_quadrature: quad,
        spectrum_stabilized: options.spectrum_stabilized,
        classes: spec.entries.len(),
        continuation_note: CONTINUATION_NOTE.to_string(),
        warnings: p.warnings(),
    })
}

fn sci(x: f64) -> String {
    format!("{x:.14e}")
}

impl TheoremReport {
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "presentation: {}", self.presentation);
        let _ = writeln!(s, "character: {}", self.character);
        let _ = writeln!(s, "|tau|: {}", sci(self.tau_magnitude));
        let _ = writeln!(s, "|tau|^2: {}", sci(self.tau_squared));
        let _ = writeln!(s, "|tau| (singular values): {}", sci(self.tau_svd));
        let _ = writeln!(s, "A*(t) numerator: {}", self.alexander_numerator);
        let _ = writeln!(s, "A*(t) denominator: {}", self.alexander_denominator);
        let _ = writeln!(s, "|A*(1)|: {}", sci(self.alexander_at_one_abs));
        let _ = writeln!(s, "| |tau| - |A*(1)| |: {}", sci(self.torsion_alexander_difference));
        match (self.delta_rho, self.delta_alexander_squared) {
            (Some(d), Some(v)) => {
                let _ = writeln!(s, "delta_rho: {}", sci(d));
                let _ = writeln!(s, "(delta_rho |A*(1)|)^2: {}", sci(v));
            }
            _ => {
                let _ = writeln!(s, "|R_rho(0)| = (delta_rho |A*(1)|)^2 with delta_rho not supplied");
            }
        }
        for (z, r) in &self.rs_residuals {
            let _ = writeln!(s, "rs residual at z = {z}: {} (bound {})", sci(r.residual), sci(r.bound));
        }
        if let Some(v) = self.prop31_closed_form {
            let _ = writeln!(s, "shifted transform identities, closed form: {}", sci(v));
        }
        if let Some(v) = self.prop31_quadrature {
            let _ = writeln!(s, "shifted transform identities, quadrature: {}", sci(v));
        }
        if let Some(st) = self.spectrum_stabilized {
            let _ = writeln!(s, "spectrum stabilized: {st}");
        }
        let _ = writeln!(s, "classes in series: {}", self.classes);
        let _ = writeln!(s, "note: {}", self.continuation_note);
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fox_basic_rules() {
        let p = examples::trefoil();
        let ab = p.parse_word("a b").unwrap();
        let a = GroupRingElement::word(p.parse_word("a").unwrap());
        let image = |l: Letter| GroupRingElement::word(Word::reduced([l]));
        assert_eq!(fox_derivative(&ab, 0, image), GroupRingElement::one());
        assert_eq!(fox_derivative(&ab, 1, image), a);
        let a_inv = p.parse_word("A").unwrap();
        let d = fox_derivative(&a_inv, 0, image);
        assert_eq!(d, GroupRingElement::zero().sub(&GroupRingElement::word(a_inv.clone())));
    }

    #[test]
    fn trefoil_alexander() {
        let p = examples::trefoil();
        let ta = twisted_alexander(&p, &Character::trivial(1)).unwrap();
        assert!(ta.numerator.approx_eq(&LaurentPoly::from_real_coefficients(&[1.0, -1.0, 1.0]), 1e-12));
        assert!(ta.denominator.approx_eq(&LaurentPoly::from_real_coefficients(&[-1.0, 1.0]), 1e-12));
    }

    #[test]
    fn figure_eight_alexander() {
        let p = examples::figure_eight();
        let ta = twisted_alexander(&p, &Character::trivial(1)).unwrap();
        assert!(
            ta.numerator.approx_eq(&LaurentPoly::from_real_coefficients(&[1.0, -3.0, 1.0]), 1e-12),
            "{}",
            ta.numerator
        );
        assert!(matches!(alexander_at_one(&p, &Character::trivial(1)), Err(TorsionError::PoleAtOne)));
    }

    #[test]
    fn circle_complex() {
        let d2 = DMatrix::<Complex64>::zeros(0, 1);
        let d1 = DMatrix::from_element(1, 1, c(-2.0, 0.0));
        let cx = TwistedChainComplex::from_matrices(d2, d1);
        assert!((reidemeister_torsion_magnitude(&cx).unwrap() - 0.5).abs() < 1e-15);
        assert!((reidemeister_torsion_svd(&cx).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn figure_eight_torsion_at_i() {
        let p = examples::figure_eight();
        let rho: Character = "1/4".parse().unwrap();
        let cx = TwistedChainComplex::new(&p, &rho, c(1.0, 0.0)).unwrap();
        assert!(cx.composition_defect() < 1e-12);
        let tau = reidemeister_torsion_magnitude(&cx).unwrap();
        assert!((tau - 3.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((reidemeister_torsion_svd(&cx).unwrap() - tau).abs() < 1e-12);
        assert!((alexander_at_one(&p, &rho).unwrap().norm() - tau).abs() < 1e-12);
    }

    #[test]
    fn trefoil_at_sixth_root_is_not_acyclic() {
        let p = examples::trefoil();
        let rho: Character = "1/6".parse().unwrap();
        let cx = TwistedChainComplex::new(&p, &rho, c(1.0, 0.0)).unwrap();
        assert!(matches!(reidemeister_torsion_magnitude(&cx), Err(TorsionError::NotAcyclic { h1: 1, h2: 1, .. })));
    }

    #[test]
    fn wada_column_choice_is_a_unit() {
        let p = examples::figure_eight();
        for rho in ["0", "1/4", "1/3"] {
            let rho: Character = rho.parse().unwrap();
            let a = twisted_alexander_removing(&p, &rho, 0).unwrap();
            let b = twisted_alexander_removing(&p, &rho, 1).unwrap();
            assert!(a.unit_equivalent(&b, 1e-10));
        }
    }

    #[test]
    fn circle_presentation_has_empty_numerator() {
        let p = examples::loxodromic_cyclic();
        let ta = twisted_alexander(&p, &Character::trivial(1)).unwrap();
        assert_eq!(ta.numerator, LaurentPoly::one());
        assert!(ta.denominator.approx_eq(&LaurentPoly::from_real_coefficients(&[-1.0, 1.0]), 1e-15));
    }

    #[test]
    fn deficiency_other_than_one_is_a_shape_error() {
        let source = r#"
name = "trefoil, relator repeated"
hyperbolic = false
relators = ["a b a B A B", "b a b A B A"]
cusp_words = ["a"]
abelianization = [[1], [1]]
epimorphism = [1, 1]

[[generators]]
name = "a"
matrix = [[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]

[[generators]]
name = "b"
matrix = [[1.0, 0.0], [0.0, 0.0], [-1.0, 0.0], [1.0, 0.0]]
"#;
        let p = GroupPresentation::from_toml_str(source).unwrap();
        assert!(matches!(twisted_alexander(&p, &Character::trivial(1)), Err(TorsionError::ShapeError(0))));
    }
}
