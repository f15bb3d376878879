//! Geodesic sums: the Ruelle product `R_ρ(z)`, the series `S₀`, `S₁`, the
//! theta sums `H₀`, `H₁`, and the identities linking them in the region of
//! absolute convergence.
//!
//! Coefficients per loxodromic class `γ = γ₀^μ`:
//! `a₀ = ρ(γ) l₀ / Δ(γ)`, `a₁ = ρ(γ) 2cos θ l₀ / Δ(γ)` with
//! `Δ(γ) = |1 - e^{-l + iθ}|²`. Then
//!
//! - `R_ρ(z) = ∏_{μ=1} (1 - ρ(γ) e^{-zl})`
//! - `S_j(z) = exp[-Σ_γ (a_j / l) e^{-zl}]`
//! - `H₁(t) = Σ a₁ (4πt)^{-1/2} e^{-l²/4t - l}`, `H₀(t) = e^{-t} Σ a₀ (...)`
//!
//! and `log R = log S₀(z) + log S₀(z+2) - log S₁(z+1)` holds per primitive
//! class once all of its powers are summed.
//!
//! Truncation bounds assume a counting function `N(x) ≤ K e^{2x}` with `K`
//! calibrated on the enumerated classes. An enumeration that misses classes
//! below the cutoff underestimates `K`; the spectrum's `stabilized` flag
//! reports that case.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::group::LengthSpectrum;
use crate::moebius::{delta_gamma, reduce_angle};
use crate::presentation::GroupPresentation;
use crate::quadrature::{integrate_with_breakpoints, quadrature_laplace, LaplaceWindow, QuadratureOptions};
use crate::summation::ComplexSum;
use crate::transforms::{gaussian_kernel, laplace_gaussian_kernel, TransformError};

pub const DEFAULT_ABSCISSA: f64 = 2.1;

/// Powers beyond the cutoff are added until `e^{-σ n l₀}` drops below this.
pub const POWER_CLOSURE_EPSILON: f64 = 1e-18;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LfuncError {
    #[error("Re z = {re} is below the convergence abscissa {abscissa}")]
    BelowAbscissa { re: f64, abscissa: f64 },
    #[error("convergence abscissa must exceed 2, got {0}")]
    InvalidAbscissa(f64),
    #[error("invalid series data: {0}")]
    InvalidData(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("csv export failed: {0}")]
    Export(String),
}

/// A primitive class: the root of a tower of powers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Primitive {
    pub length: f64,
    pub holonomy_angle: f64,
    pub rho: Complex64,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesEntry {
    pub length: f64,
    pub holonomy_angle: f64,
    pub primitive_length: f64,
    pub multiplicity: u32,
    pub rho: Complex64,
    pub a0: Complex64,
    pub a1: Complex64,
    pub primitive: usize,
    pub word: String,
}

impl SeriesEntry {
    fn new(
        length: f64,
        holonomy_angle: f64,
        primitive_length: f64,
        multiplicity: u32,
        rho: Complex64,
        primitive: usize,
        word: String,
    ) -> Self {
        let delta = delta_gamma(length, holonomy_angle);
        let a0 = rho * primitive_length / delta;
        let a1 = a0 * (2.0 * holonomy_angle.cos());
        Self { length, holonomy_angle, primitive_length, multiplicity, rho, a0, a1, primitive, word }
    }

    pub fn coefficient(&self, j: u8) -> Complex64 {
        if j == 0 {
            self.a0
        } else {
            self.a1
        }
    }
}

/// Truncated geodesic series with its coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSeries {
    pub primitives: Vec<Primitive>,
    /// Sorted by `(l, θ)`.
    pub entries: Vec<SeriesEntry>,
    pub cutoff: f64,
    pub abscissa: f64,
    /// Largest multiplicity present per primitive.
    pub max_power: Vec<u32>,
}

fn sort_entries(entries: &mut [SeriesEntry]) {
    entries.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.holonomy_angle.total_cmp(&b.holonomy_angle))
            .then_with(|| a.rho.re.total_cmp(&b.rho.re))
            .then_with(|| a.rho.im.total_cmp(&b.rho.im))
            .then_with(|| a.word.cmp(&b.word))
    });
}

impl SpectrumSeries {
    pub fn empty(cutoff: f64) -> Self {
        Self { primitives: Vec::new(), entries: Vec::new(), cutoff, abscissa: DEFAULT_ABSCISSA, max_power: Vec::new() }
    }

    /// Builds the series from a length spectrum; `ρ` values come from the
    /// classes.
    pub fn from_spectrum(spectrum: &LengthSpectrum, p: &GroupPresentation) -> Self {
        let names = p.generator_names();
        let mut primitive_slot = vec![usize::MAX; spectrum.classes.len()];
        let mut primitives = Vec::new();
        for (i, c) in spectrum.classes.iter().enumerate() {
            if c.is_primitive {
                primitive_slot[i] = primitives.len();
                primitives.push(Primitive {
                    length: c.length(),
                    holonomy_angle: c.holonomy_angle(),
                    rho: c.rho_value(),
                    word: c.representative.display_with(names).to_string(),
                });
            }
        }
        let mut max_power = vec![0; primitives.len()];
        let mut entries: Vec<SeriesEntry> = spectrum
            .classes
            .iter()
            .map(|c| {
                let prim = primitive_slot[c.primitive_index];
                max_power[prim] = max_power[prim].max(c.multiplicity);
                SeriesEntry::new(
                    c.length(),
                    c.holonomy_angle(),
                    c.primitive_length,
                    c.multiplicity,
                    c.rho_value(),
                    prim,
                    c.representative.display_with(names).to_string(),
                )
            })
            .collect();
        sort_entries(&mut entries);
        Self { primitives, entries, cutoff: spectrum.max_geodesic_length, abscissa: DEFAULT_ABSCISSA, max_power }
    }

    /// One primitive `(l₀, θ₀, ρ)` with its powers `n = 1..=max_power`.
    pub fn single_primitive(
        length: f64,
        holonomy_angle: f64,
        rho: Complex64,
        max_power: u32,
    ) -> Result<Self, LfuncError> {
        if !(length > 0.0) || max_power == 0 {
            return Err(LfuncError::InvalidData(format!(
                "need a positive length and at least one power, got l = {length}, n = {max_power}"
            )));
        }
        let mut s = Self::empty(length * max_power as f64);
        s.primitives.push(Primitive { length, holonomy_angle, rho, word: "g".into() });
        s.max_power.push(0);
        s.push_powers(0, 1..=max_power);
        sort_entries(&mut s.entries);
        Ok(s)
    }

    fn push_powers(&mut self, primitive: usize, powers: std::ops::RangeInclusive<u32>) {
        let p = self.primitives[primitive].clone();
        for n in powers {
            let word = if n == 1 { p.word.clone() } else { format!("({})^{n}", p.word) };
            self.entries.push(SeriesEntry::new(
                p.length * n as f64,
                reduce_angle(p.holonomy_angle * n as f64),
                p.length,
                n,
                p.rho.powu(n),
                primitive,
                word,
            ));
            self.max_power[primitive] = self.max_power[primitive].max(n);
        }
    }

    pub fn with_abscissa(mut self, abscissa: f64) -> Result<Self, LfuncError> {
        if !(abscissa > 2.0) {
            return Err(LfuncError::InvalidAbscissa(abscissa));
        }
        self.abscissa = abscissa;
        Ok(self)
    }

    /// Adds every power of every primitive beyond the cutoff whose weight
    /// `e^{-σ n l₀}` is still above [`POWER_CLOSURE_EPSILON`] for
    /// `Re z ≥ sigma_min`.
    pub fn with_power_closure(mut self, sigma_min: f64) -> Self {
        for i in 0..self.primitives.len() {
            let l0 = self.primitives[i].length;
            let last = ((-POWER_CLOSURE_EPSILON.ln()) / (sigma_min * l0)).ceil() as u32;
            let start = self.max_power[i] + 1;
            if start <= last {
                self.push_powers(i, start..=last);
            }
        }
        sort_entries(&mut self.entries);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn check(&self, z: Complex64) -> Result<(), LfuncError> {
        if z.re < self.abscissa {
            return Err(LfuncError::BelowAbscissa { re: z.re, abscissa: self.abscissa });
        }
        Ok(())
    }

    /// `K = max_x N(x) e^{-2x}` over the given sorted lengths.
    fn counting_constant<'a>(lengths: impl Iterator<Item = &'a f64>) -> f64 {
        lengths.enumerate().map(|(i, l)| (i + 1) as f64 * (-2.0 * l).exp()).fold(0.0, f64::max)
    }

    fn shortest(&self) -> f64 {
        self.entries.first().map(|e| e.length).unwrap_or(f64::INFINITY)
    }

    /// `σK e^{(2-σ)L}/(σ-2)`: bound for `Σ_{l > L} e^{-σl}` under
    /// `N(x) ≤ K e^{2x}`.
    fn exponential_tail(&self, sigma: f64, k: f64) -> f64 {
        if k == 0.0 {
            return 0.0;
        }
        sigma * k * ((2.0 - sigma) * self.cutoff).exp() / (sigma - 2.0)
    }

    /// `err(L, z)` for the Ruelle product's logarithm.
    pub fn product_tail_bound(&self, z: Complex64) -> f64 {
        let sigma = z.re;
        let lengths: Vec<f64> = self.entries.iter().filter(|e| e.multiplicity == 1).map(|e| e.length).collect();
        let k = Self::counting_constant(lengths.iter());
        let c = 1.0 / (1.0 - (-sigma * self.cutoff).exp());
        c * self.exponential_tail(sigma, k)
    }

    /// Tail bound for `log S_j`.
    pub fn series_tail_bound(&self, j: u8, z: Complex64) -> f64 {
        let k = Self::counting_constant(self.entries.iter().map(|e| &e.length));
        let lmin = self.shortest().min(self.cutoff);
        let weight = if j == 0 { 1.0 } else { 2.0 } / (1.0 - (-lmin).exp()).powi(2);
        weight * self.exponential_tail(z.re, k)
    }

    /// `Σ_{prim} Σ_{n > N} |ρ|ⁿ e^{-σ n l₀}/n` for the powers absent from
    /// the series.
    pub fn missing_power_tail(&self, z: Complex64) -> f64 {
        let sigma = z.re;
        self.primitives
            .iter()
            .zip(&self.max_power)
            .map(|(p, &n)| {
                let next = (n + 1) as f64;
                let q = (-sigma * p.length).exp();
                q.powf(next) / (next * (1.0 - q))
            })
            .sum()
    }

    /// `Σ_{μ=1} Log(1 - ρ e^{-zl})`.
    pub fn log_ruelle(&self, z: Complex64) -> Result<Complex64, LfuncError> {
        self.check(z)?;
        let mut sum = ComplexSum::new();
        for e in self.entries.iter().filter(|e| e.multiplicity == 1) {
            sum.add((1.0 - e.rho * (-z * e.length).exp()).ln());
        }
        Ok(sum.total())
    }

    /// `log S_j(z) = -Σ (a_j / l) e^{-zl}`.
    pub fn log_s(&self, j: u8, z: Complex64) -> Result<Complex64, LfuncError> {
        self.check(z)?;
        let mut sum = ComplexSum::new();
        for e in &self.entries {
            sum.add(-e.coefficient(j) / e.length * (-z * e.length).exp());
        }
        Ok(sum.total())
    }

    /// Sum of `|terms|` of `log S_j(z)`, the scale for rounding bounds.
    fn log_s_magnitude(&self, j: u8, z: Complex64) -> f64 {
        self.entries.iter().map(|e| (e.coefficient(j) / e.length).norm() * (-z.re * e.length).exp()).sum()
    }

    /// `Σ a_j (4πt)^{-1/2} e^{-l²/4t - l}`: `H₁(t)`, or `e^t H₀(t)` for `j = 0`.
    pub fn kernel_sum(&self, j: u8, t: f64) -> Complex64 {
        let mut sum = ComplexSum::new();
        for e in &self.entries {
            sum.add(e.coefficient(j) * gaussian_kernel(e.length, t) * (-e.length).exp());
        }
        sum.total()
    }

    /// `H_j(t)` truncated at the cutoff.
    pub fn theta_sum(&self, j: u8, t: f64) -> Complex64 {
        let total = self.kernel_sum(j, t);
        if j == 0 {
            total * (-t).exp()
        } else {
            total
        }
    }

    /// Bound on the part of `H_j(t)` from classes beyond the cutoff, under
    /// `N(x) ≤ K e^{2x}` and `|a_j| ≤ w x`.
    pub fn theta_tail_bound(&self, j: u8, t: f64) -> f64 {
        let k = Self::counting_constant(self.entries.iter().map(|e| &e.length));
        if k == 0.0 || !(t > 0.0) {
            return 0.0;
        }
        let lmin = self.shortest().min(self.cutoff);
        let w = if j == 0 { 1.0 } else { 2.0 } / (1.0 - (-lmin).exp()).powi(2);
        // g(x) = x e^{-x²/4t - x} is decreasing for x ≥ 1, so the tail sum is
        // at most ∫_L^∞ K e^{2x} (-g'(x)) dx.
        let lower = self.cutoff.max(1.0);
        let integrand = |x: f64| Complex64::new(k * (x * x / (2.0 * t) + x - 1.0) * (x - x * x / (4.0 * t)).exp(), 0.0);
        let peak = (2.0 * t).max(lower);
        let upper = peak + 40.0 * t.sqrt() + 40.0;
        let mut breaks = vec![lower];
        if peak > lower {
            breaks.push(peak);
        }
        breaks.push(upper);
        let integral = integrate_with_breakpoints(&integrand, &breaks, &QuadratureOptions::default())
            .map(|e| e.value.re + e.error)
            .unwrap_or(f64::INFINITY);
        let bound = w * integral / (4.0 * PI * t).sqrt();
        if j == 0 {
            bound * (-t).exp()
        } else {
            bound
        }
    }
}

/// Value with a truncation error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounded {
    pub value: Complex64,
    pub bound: f64,
}

pub fn ruelle_product(spec: &SpectrumSeries, z: Complex64) -> Result<Bounded, LfuncError> {
    let log = spec.log_ruelle(z)?;
    let value = log.exp();
    let log_bound = spec.product_tail_bound(z);
    Ok(Bounded { value, bound: value.norm() * log_bound.exp_m1() })
}

pub fn s_series(spec: &SpectrumSeries, j: u8, z: Complex64) -> Result<Bounded, LfuncError> {
    let log = spec.log_s(j, z)?;
    let value = log.exp();
    let log_bound = spec.series_tail_bound(j, z);
    Ok(Bounded { value, bound: value.norm() * log_bound.exp_m1() })
}

/// Residual and bound of one checked identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub name: String,
    pub residual: f64,
    pub bound: f64,
}

impl IdentityResidual {
    pub fn passed(&self) -> bool {
        self.residual <= self.bound
    }
}

const ROUNDING: f64 = 64.0 * f64::EPSILON;

/// `|log R(z) - (log S₀(z) + log S₀(z+2) - log S₁(z+1))|` against the
/// missing-power tail plus rounding.
pub fn rs_factorization_check(spec: &SpectrumSeries, z: Complex64) -> Result<IdentityResidual, LfuncError> {
    let one = Complex64::new(1.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let lhs = spec.log_ruelle(z)?;
    let rhs = spec.log_s(0, z)? + spec.log_s(0, z + two)? - spec.log_s(1, z + one)?;
    let magnitude = spec.log_s_magnitude(0, z) + spec.log_s_magnitude(0, z + two) + spec.log_s_magnitude(1, z + one);
    let rounding = ROUNDING * (magnitude + lhs.norm() + spec.entries.len() as f64 * f64::EPSILON);
    Ok(IdentityResidual {
        name: "rs".into(),
        residual: (lhs - rhs).norm(),
        bound: spec.missing_power_tail(z) + rounding,
    })
}

/// Which route computes the Laplace transforms of the theta sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TransformRoute {
    /// Term by term through `L(kernel)(z) = e^{-lz}/l`.
    ClosedForm,
    /// Adaptive quadrature of the summed theta function.
    Quadrature,
}

/// Residuals of the three transform identities and of their combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop31Report {
    pub route: TransformRoute,
    pub z: Complex64,
    pub identities: Vec<IdentityResidual>,
    pub max_residual: f64,
}

impl Prop31Report {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.max_residual <= tolerance
    }
}

fn laplace_theta(spec: &SpectrumSeries, j: u8, w: Complex64, route: TransformRoute) -> Result<Complex64, LfuncError> {
    match route {
        TransformRoute::ClosedForm => {
            let mut sum = ComplexSum::new();
            for e in &spec.entries {
                sum.add(e.coefficient(j) * (-e.length).exp() * laplace_gaussian_kernel(e.length, w)?);
            }
            Ok(sum.total())
        }
        TransformRoute::Quadrature => {
            let f = |t: f64| spec.kernel_sum(j, t);
            let est = quadrature_laplace(&f, Complex64::new(0.0, 0.0), w, LaplaceWindow::for_kernel(w))
                .map_err(TransformError::from)?;
            Ok(est.value)
        }
    }
}

/// Checks at `z` (with `Re z - 1` inside the convergence region of the
/// series) that
/// `L(H₁)(z) = -log S₁(z+1)`, `L(e^t H₀)(z-1) = -log S₀(z)`,
/// `L(e^t H₀)(z+1) = -log S₀(z+2)` and
/// `log R(z) = L(H₁)(z) - L(e^t H₀)(z-1) - L(e^t H₀)(z+1)`.
/// Residuals are relative to `max(1, |reference|)`.
pub fn shifted_prop31_check(
    spec: &SpectrumSeries,
    z: Complex64,
    route: TransformRoute,
) -> Result<Prop31Report, LfuncError> {
    if z.re <= spec.abscissa {
        return Err(LfuncError::BelowAbscissa { re: z.re, abscissa: spec.abscissa });
    }
    let one = Complex64::new(1.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let lh1 = laplace_theta(spec, 1, z, route)?;
    let lh0_minus = laplace_theta(spec, 0, z - one, route)?;
    let lh0_plus = laplace_theta(spec, 0, z + one, route)?;
    let refs = [
        ("L(H1)(z) = -log S1(z+1)", lh1, -spec.log_s(1, z + one)?),
        ("L(e^t H0)(z-1) = -log S0(z)", lh0_minus, -spec.log_s(0, z)?),
        ("L(e^t H0)(z+1) = -log S0(z+2)", lh0_plus, -spec.log_s(0, z + two)?),
        ("log R(z) = L(H1)(z) - L(e^t H0)(z-1) - L(e^t H0)(z+1)", lh1 - lh0_minus - lh0_plus, spec.log_ruelle(z)?),
    ];
    let identities: Vec<IdentityResidual> = refs
        .iter()
        .map(|(name, value, reference)| IdentityResidual {
            name: name.to_string(),
            residual: (value - reference).norm() / reference.norm().max(1.0),
            bound: f64::INFINITY,
        })
        .collect();
    let max_residual = identities.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(Prop31Report { route, z, identities, max_residual })
}

/// Writes the series as CSV with 15 significant digits.
pub fn write_csv<W: Write>(spec: &SpectrumSeries, writer: W) -> Result<(), LfuncError> {
    let mut w = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| LfuncError::Export(e.to_string());
    w.write_record(["l", "theta", "l0", "mu", "rho_re", "rho_im", "a0_re", "a0_im", "a1_re", "a1_im", "word"])
        .map_err(err)?;
    for e in &spec.entries {
        let f = |x: f64| format!("{x:.14e}");
        w.write_record([
            f(e.length),
            f(e.holonomy_angle),
            f(e.primitive_length),
            e.multiplicity.to_string(),
            f(e.rho.re),
            f(e.rho.im),
            f(e.a0.re),
            f(e.a0.im),
            f(e.a1.re),
            f(e.a1.im),
            e.word.clone(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| LfuncError::Export(e.to_string()))
}
