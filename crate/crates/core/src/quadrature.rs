//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands, and the
//! Laplace-Mellin integral `∫₀^∞ e^{-tz²} t^{s-1} f(t) dt` built on it.
//!
//! The Laplace-Mellin integral is split at `t = 1`. The piece over `(0, 1]`
//! is integrated in `u = ln t` so that the `t^{s-1}` singularity becomes an
//! exponentially decaying tail; the piece over `[1, ∞)` is cut where the
//! kernel `e^{-t Re z²}` has decayed below machine precision.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("adaptive quadrature did not converge after {evaluations} evaluations (error estimate {error:e}, value {value})")]
    NoConvergence { value: Complex64, error: f64, evaluations: usize },
    #[error("invalid integration domain: {0}")]
    InvalidDomain(String),
    #[error("integrand returned a non-finite value at t = {0}")]
    NonFinite(f64),
}

/// Value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    /// Maximum number of subinterval bisections.
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { relative_tolerance: 1e-10, absolute_tolerance: 1e-300, max_subdivisions: 4000 }
    }
}

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F>(f: &F, a: f64, b: f64) -> Result<Segment, QuadratureError>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.re.is_finite() || !fc.im.is_finite() {
        return Err(QuadratureError::NonFinite(center));
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (x1, x2) = (center - dx, center + dx);
        let (f1, f2) = (f(x1), f(x2));
        if !(f1.re.is_finite() && f1.im.is_finite()) {
            return Err(QuadratureError::NonFinite(x1));
        }
        if !(f2.re.is_finite() && f2.im.is_finite()) {
            return Err(QuadratureError::NonFinite(x2));
        }
        let pair = f1 + f2;
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    Ok(Segment { a, b, value, error })
}

/// Globally adaptive integration of `f` over the union of the consecutive
/// intervals given by `breakpoints`.
pub fn integrate_with_breakpoints<F>(
    f: &F,
    breakpoints: &[f64],
    options: &QuadratureOptions,
) -> Result<Estimate, QuadratureError>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    if breakpoints.len() < 2 {
        return Err(QuadratureError::InvalidDomain("need at least two breakpoints".into()));
    }
    if breakpoints.windows(2).any(|w| !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite()) {
        return Err(QuadratureError::InvalidDomain(format!(
            "breakpoints must be finite and increasing: {breakpoints:?}"
        )));
    }

    let mut heap = BinaryHeap::new();
    for w in breakpoints.windows(2) {
        heap.push(kronrod15(f, w[0], w[1])?);
    }
    let mut subdivisions = 0;
    loop {
        let (value, error) = totals(&heap);
        let target = options.absolute_tolerance.max(options.relative_tolerance * value.norm());
        if error <= target {
            return Ok(Estimate { value, error });
        }
        if subdivisions >= options.max_subdivisions {
            return Err(QuadratureError::NoConvergence { value, error, evaluations: 15 * (heap.len() + subdivisions) });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // Interval exhausted at machine precision; accept its contribution.
            heap.push(Segment { error: 0.0, ..worst });
            subdivisions += 1;
            continue;
        }
        heap.push(kronrod15(f, worst.a, mid)?);
        heap.push(kronrod15(f, mid, worst.b)?);
        subdivisions += 1;
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (Complex64, f64) {
    // Sum in a fixed order so that results do not depend on heap layout.
    let mut segments: Vec<&Segment> = heap.iter().collect();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = crate::summation::sum_complex(segments.iter().map(|s| s.value));
    let error = crate::summation::sum_f64(segments.iter().map(|s| s.error));
    (value, error)
}

/// Adaptive integration over `[a, b]`.
pub fn integrate<F>(f: &F, a: f64, b: f64, options: &QuadratureOptions) -> Result<Estimate, QuadratureError>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    integrate_with_breakpoints(f, &[a, b], options)
}

/// Truncation window for the Laplace-Mellin integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceWindow {
    pub t_min: f64,
    pub t_max: f64,
}

impl LaplaceWindow {
    /// Window for the kernel `e^{-tz²}`: from `1e-40` up to the point where the
    /// kernel is below `e^{-50}` (at least `t = 2`).
    pub fn for_kernel(z: Complex64) -> Self {
        let decay = (z * z).re;
        let t_max = if decay > 0.0 { (50.0 / decay).max(2.0) } else { 2.0 };
        Self { t_min: 1e-40, t_max }
    }
}

/// `∫_{t_min}^{t_max} e^{-tz²} t^{s-1} f(t) dt`, adaptive with relative
/// target 1e-10.
pub fn quadrature_laplace<F>(
    f: &F,
    s: Complex64,
    z: Complex64,
    window: LaplaceWindow,
) -> Result<Estimate, QuadratureError>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    quadrature_laplace_with(f, s, z, window, &QuadratureOptions::default())
}

pub fn quadrature_laplace_with<F>(
    f: &F,
    s: Complex64,
    z: Complex64,
    window: LaplaceWindow,
    options: &QuadratureOptions,
) -> Result<Estimate, QuadratureError>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let LaplaceWindow { t_min, t_max } = window;
    if !(t_min > 0.0 && t_min < t_max) {
        return Err(QuadratureError::InvalidDomain(format!("need 0 < t_min < t_max, got ({t_min}, {t_max})")));
    }
    let z2 = z * z;
    let kernel = move |t: f64| -> Complex64 {
        let weight = (-(z2 * t)).exp() * Complex64::new(t, 0.0).powc(s - 1.0);
        if weight == Complex64::new(0.0, 0.0) {
            // Underflowed kernel: skip f so that integrands singular at the
            // truncation edge do not poison the product.
            return weight;
        }
        weight * f(t)
    };

    let mut total = Estimate { value: Complex64::new(0.0, 0.0), error: 0.0 };
    let split = 1.0_f64.clamp(t_min, t_max);

    if t_min < split {
        // u = ln t, dt = t du
        let u_lo = t_min.ln();
        let mut breaks = vec![u_lo];
        let mut u = u_lo;
        while u + 4.0 < 0.0 {
            u += 4.0;
            breaks.push(u);
        }
        breaks.push(split.ln());
        breaks.dedup();
        let integrand = |u: f64| {
            let t = u.exp();
            kernel(t) * t
        };
        let part = integrate_with_breakpoints(&integrand, &breaks, options)?;
        total.value += part.value;
        total.error += part.error;
    }
    if split < t_max {
        let mut breaks = vec![split];
        let mut t = split;
        while 2.0 * t < t_max {
            t *= 2.0;
            breaks.push(t);
        }
        breaks.push(t_max);
        let part = integrate_with_breakpoints(&kernel, &breaks, options)?;
        total.value += part.value;
        total.error += part.error;
    }
    Ok(total)
}

/// Remainder `e^{-x} - Σ_{j<order} (-x)^j / j!`, accurate for small `|x|`.
fn exp_taylor_remainder(x: Complex64, order: usize) -> Complex64 {
    if x.norm() < 1.0 {
        let mut term = Complex64::new(1.0, 0.0);
        for j in 1..=order {
            term *= -x / j as f64;
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut j = order;
        loop {
            sum += term;
            j += 1;
            term *= -x / j as f64;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        let mut partial = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for j in 0..order {
            partial += term;
            term *= -x / (j + 1) as f64;
        }
        (-x).exp() - partial
    }
}

/// Finite-part quadrature of the Laplace-Mellin integral of a pure power
/// `c·t^α`, valid for every `(s, z)` with `Re z² > 0` and `s + α` off the
/// non-positive integers.
///
/// Over `(0, 1]` the first `J` Taylor terms of `e^{-tz²}` are subtracted
/// (enough to make the integrand integrable at 0) and integrated as
/// elementary powers; the rest is ordinary quadrature. For convergent
/// parameters `J = 0` and this reduces to [`quadrature_laplace`].
pub fn quadrature_laplace_power(
    coefficient: Complex64,
    alpha: Complex64,
    s: Complex64,
    z: Complex64,
) -> Result<Estimate, QuadratureError> {
    let a = s + alpha;
    let order = if a.re > 0.0 { 0 } else { (-a.re).floor() as usize + 1 };
    for j in 0..order {
        if (a + j as f64).norm() < 1e-12 {
            return Err(QuadratureError::InvalidDomain(format!("finite part undefined at s + α = -{j}")));
        }
    }
    let z2 = z * z;
    let options = QuadratureOptions::default();

    // (0, 1] in u = ln t
    let head = |u: f64| {
        let t = u.exp();
        exp_taylor_remainder(z2 * t, order) * Complex64::new(t, 0.0).powc(a)
    };
    let mut breaks = vec![-92.0];
    let mut u: f64 = -92.0;
    while u < 0.0 {
        u = (u + 4.0_f64).min(0.0);
        breaks.push(u);
    }
    let head_part = integrate_with_breakpoints(&head, &breaks, &options)?;

    let mut analytic = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    let mut factorial = 1.0;
    for j in 0..order {
        if j > 0 {
            power *= -z2;
            factorial *= j as f64;
        }
        analytic += power / factorial / (a + j as f64);
    }

    let window = LaplaceWindow::for_kernel(z);
    let tail = |t: f64| (-(z2 * t)).exp() * Complex64::new(t, 0.0).powc(a - 1.0);
    let mut tail_breaks = vec![1.0];
    let mut t = 1.0;
    while 2.0 * t < window.t_max {
        t *= 2.0;
        tail_breaks.push(t);
    }
    tail_breaks.push(window.t_max.max(2.0));
    let tail_part = integrate_with_breakpoints(&tail, &tail_breaks, &options)?;

    Ok(Estimate {
        value: coefficient * (head_part.value + analytic + tail_part.value),
        error: coefficient.norm() * (head_part.error + tail_part.error),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn polynomial_is_exact() {
        let f = |t: f64| c(3.0 * t * t - t + 2.0);
        let est = integrate(&f, 0.0, 2.0, &QuadratureOptions::default()).unwrap();
        assert!((est.value - c(8.0 - 2.0 + 4.0)).norm() < 1e-13);
    }

    #[test]
    fn oscillatory_complex_integrand() {
        // ∫₀^π e^{it} dt = 2i
        let f = |t: f64| Complex64::new(0.0, t).exp();
        let est = integrate(&f, 0.0, PI, &QuadratureOptions::default()).unwrap();
        assert!((est.value - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn exponential_laplace_is_one_half() {
        let f = |t: f64| c((-t).exp());
        let est = quadrature_laplace(&f, c(1.0), c(1.0), LaplaceWindow::for_kernel(c(1.0))).unwrap();
        assert!((est.value - c(0.5)).norm() < 1e-11, "{}", est.value);
        assert!(est.error < 1e-10);
    }

    #[test]
    fn even_in_z() {
        let f = |t: f64| c((-t).exp() * (1.0 + t).sqrt());
        for &z in &[c(0.7), c(2.3), Complex64::new(1.0, 0.4)] {
            let a = quadrature_laplace(&f, c(2.0), z, LaplaceWindow::for_kernel(z)).unwrap();
            let b = quadrature_laplace(&f, c(2.0), -z, LaplaceWindow::for_kernel(-z)).unwrap();
            assert!((a.value - b.value).norm() <= 1e-12 * a.value.norm());
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let f = |t: f64| c((1.0 / t).sin() / t);
        let options = QuadratureOptions { max_subdivisions: 10, ..Default::default() };
        assert!(matches!(integrate(&f, 1e-6, 1.0, &options), Err(QuadratureError::NoConvergence { .. })));
    }

    #[test]
    fn finite_part_matches_gamma_continuation() {
        // ∫ e^{-t} t^{a-1} dt continued to a = -1/2 is Γ(-1/2) = -2√π.
        let est = quadrature_laplace_power(c(1.0), c(-1.5), c(1.0), c(1.0)).unwrap();
        assert!((est.value - c(-2.0 * PI.sqrt())).norm() < 1e-10, "{}", est.value);
        // convergent case reduces to Γ(3/2) z^{-3}
        let est = quadrature_laplace_power(c(1.0), c(0.5), c(1.0), c(2.0)).unwrap();
        assert!((est.value - c(0.5 * PI.sqrt() / 8.0)).norm() < 1e-12);
    }

    #[test]
    fn taylor_remainder_small_and_large() {
        let x = Complex64::new(1e-4, 2e-5);
        let direct = (-x).exp() - 1.0 + x;
        assert!((exp_taylor_remainder(x, 2) - direct).norm() < 1e-16);
        let x = c(3.0);
        assert!((exp_taylor_remainder(x, 1) - c((-3.0f64).exp() - 1.0)).norm() < 1e-15);
    }
}
