//! Rank-one unitary characters `ρ(w) = exp(2πi ⟨v, ab(w)⟩)`.
//!
//! The angle vector `v` is held as exact rationals (in full turns) and
//! pairings are computed in `Q/Z`, so `ρ(w₁w₂) = ρ(w₁)ρ(w₂)` holds exactly at
//! the level of phases.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::presentation::GroupPresentation;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharacterError {
    #[error("cannot parse character component `{0}`")]
    Parse(String),
    #[error("character has {got} components but the abelianization has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("presentation has no cusp words")]
    NoCuspData,
}

/// An element of `Q/Z`, stored reduced in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub fn zero() -> Self {
        Self(Ratio::zero())
    }

    pub fn new(turns: Ratio<i64>) -> Self {
        let floor = turns.floor();
        Self(turns - floor)
    }

    pub fn turns(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.0 + other.0)
    }

    pub fn scale(&self, n: i64) -> Self {
        Self::new(self.0 * n)
    }

    /// True when the phase equals its conjugate, i.e. `ρ` is `±1`.
    pub fn is_real(&self) -> bool {
        *self == self.neg()
    }

    /// The unordered pair `{φ, -φ}` represented by its smaller element.
    pub fn conjugation_class(&self) -> Self {
        (*self).min(self.neg())
    }

    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// `exp(2πi φ)`, with the quarter-turn points computed exactly.
    pub fn value(&self) -> Complex64 {
        let (n, d) = (*self.0.numer(), *self.0.denom());
        match (n, d) {
            (0, _) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            _ => {
                // reduce to (-1/2, 1/2] so the argument to sin/cos is small
                let x = if 2 * n > d { (n - d) as f64 / d as f64 } else { n as f64 / d as f64 };
                Complex64::from_polar(1.0, 2.0 * PI * x)
            }
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A unitary character given by its angle vector against the abelianization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    turns: Vec<Ratio<i64>>,
}

impl Serialize for Character {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.turns.iter().map(|r| r.to_string()))
    }
}

fn parse_component(text: &str) -> Result<Ratio<i64>, CharacterError> {
    let t = text.trim();
    let err = || CharacterError::Parse(t.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| err())?;
        let d: i64 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Ratio::new(n, d));
    }
    // exact decimal: digits [. digits] with optional sign
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 15
    {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| err())? };
    let denom = 10i64.pow(frac_part.len() as u32);
    let r = Ratio::new(numer, denom);
    Ok(if negative { -r } else { r })
}

impl FromStr for Character {
    type Err = CharacterError;

    /// Accepts `"1/3, 0"`, `"[1/3, 0]"` or decimals such as `"0.25"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        if inner.trim().is_empty() {
            return Ok(Self { turns: Vec::new() });
        }
        let turns = inner.split(',').map(parse_component).collect::<Result<_, _>>()?;
        Ok(Self { turns })
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.turns.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

impl Character {
    pub fn new(turns: Vec<Ratio<i64>>) -> Self {
        Self { turns }
    }

    pub fn trivial(rank: usize) -> Self {
        Self { turns: vec![Ratio::zero(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.turns.len()
    }

    pub fn turns(&self) -> &[Ratio<i64>] {
        &self.turns
    }

    pub fn is_trivial(&self) -> bool {
        self.turns.iter().all(|t| t.fract().is_zero())
    }

    pub fn conjugate(&self) -> Self {
        Self { turns: self.turns.iter().map(|t| -t).collect() }
    }

    pub fn check_rank(&self, p: &GroupPresentation) -> Result<(), CharacterError> {
        if self.rank() != p.betti_rank() {
            return Err(CharacterError::RankMismatch { expected: p.betti_rank(), got: self.rank() });
        }
        Ok(())
    }

    /// `⟨v, n⟩` for an abelianization image `n`.
    pub fn phase_of_abelian(&self, image: &[i64]) -> Phase {
        let sum = self.turns.iter().zip(image).fold(Ratio::zero(), |acc: Ratio<i64>, (t, &n)| acc + t * n);
        Phase::new(sum)
    }

    pub fn phase(&self, w: &Word, p: &GroupPresentation) -> Phase {
        self.phase_of_abelian(&p.abelianize(w))
    }

    /// `ρ(a_i)` for each generator.
    pub fn generator_phases(&self, p: &GroupPresentation) -> Vec<Phase> {
        p.abelianization().iter().map(|row| self.phase_of_abelian(row)).collect()
    }

    pub fn evaluate(&self, w: &Word, p: &GroupPresentation) -> Complex64 {
        self.phase(w, p).value()
    }

    /// Whether `ρ` restricted to the cusp subgroup is nontrivial.
    pub fn cusp_nontrivial(&self, p: &GroupPresentation) -> Result<bool, CharacterError> {
        self.check_rank(p)?;
        if p.cusp_words().is_empty() {
            return Err(CharacterError::NoCuspData);
        }
        Ok(p.cusp_words().iter().any(|w| !self.phase(w, p).is_zero()))
    }
}
