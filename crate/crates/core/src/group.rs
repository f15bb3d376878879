//! Word enumeration and the geodesic length spectrum of a Kleinian group.
//!
//! Loxodromic conjugacy classes are found by enumerating freely reduced words
//! and deduplicated by numeric conjugacy invariants: `(l, θ)` (equivalently
//! the trace up to sign) together with the unordered pair `{ρ(γ), ρ(γ)⁻¹}`.
//! In a torsion-free group a loxodromic `γ` is never conjugate to `γ⁻¹`, and
//! both share `(l, θ)`, so each invariant cluster is emitted as the two
//! classes `γ` and `γ⁻¹`. Distinct classes with identical trace and
//! character value are merged; that collision is part of the completeness
//! caveat.
//!
//! Word length does not bound geodesic length, so completeness is checked
//! heuristically: the search runs to depth `W + 2` and the spectrum at depth
//! `W` is reported as stabilized when no class below the length cutoff
//! first appears at depth `W + 1` or `W + 2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::characters::{Character, CharacterError, Phase};
use crate::moebius::{GeodesicInvariants, MoebiusElement};
use crate::presentation::{GroupPresentation, PresentationError};
use crate::tolerance::Tolerances;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error(transparent)]
    InconsistentPresentation(#[from] PresentationError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Depth-first stream of every freely reduced word of length `1..=max_len`
/// together with its matrix.
pub struct WordEnumerator<'a> {
    presentation: &'a GroupPresentation,
    max_len: usize,
    letter_count: usize,
    letters: Vec<usize>,
    products: Vec<MoebiusElement>,
    cursor: Vec<usize>,
    letter_matrices: Vec<MoebiusElement>,
    tol: Tolerances,
}

impl Iterator for WordEnumerator<'_> {
    type Item = (Word, MoebiusElement);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let depth = self.letters.len();
            if depth < self.max_len {
                let forbidden = self.letters.last().map(|&c| c ^ 1);
                while self.cursor[depth] < self.letter_count && Some(self.cursor[depth]) == forbidden {
                    self.cursor[depth] += 1;
                }
                if self.cursor[depth] < self.letter_count {
                    let code = self.cursor[depth];
                    self.cursor[depth] += 1;
                    let prefix = self.products.last().copied().unwrap_or(MoebiusElement::IDENTITY);
                    let m = prefix.compose(&self.letter_matrices[code], &self.tol);
                    self.letters.push(code);
                    self.products.push(m);
                    self.cursor.push(0);
                    let word = Word::reduced(self.letters.iter().map(|&c| Letter::from_code(c)));
                    return Some((word, m));
                }
            }
            if depth == 0 {
                return None;
            }
            self.letters.pop();
            self.products.pop();
            self.cursor.pop();
        }
    }
}

fn letter_matrices(p: &GroupPresentation) -> Vec<MoebiusElement> {
    (0..2 * p.generator_count()).map(|c| p.letter_matrix(Letter::from_code(c))).collect()
}

/// Every freely reduced word of length at most `max_word_length`, each once.
pub fn enumerate_words(p: &GroupPresentation, max_word_length: usize) -> WordEnumerator<'_> {
    WordEnumerator {
        presentation: p,
        max_len: max_word_length,
        letter_count: 2 * p.generator_count(),
        letters: Vec::new(),
        products: Vec::new(),
        cursor: vec![0],
        letter_matrices: letter_matrices(p),
        tol: Tolerances::DEFAULT,
    }
}

impl WordEnumerator<'_> {
    pub fn presentation(&self) -> &GroupPresentation {
        self.presentation
    }
}

/// A loxodromic conjugacy class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicClass {
    pub representative: Word,
    pub invariants: GeodesicInvariants,
    /// `l₀ = l / μ`.
    pub primitive_length: f64,
    pub multiplicity: u32,
    pub is_primitive: bool,
    #[serde(serialize_with = "serialize_phase")]
    pub rho: Phase,
    /// Index (in the spectrum) of the primitive class this one is a power of.
    pub primitive_index: usize,
    /// Depth at which the class was found; `None` when it was added as a
    /// power of a primitive class.
    pub found_at_word_length: Option<usize>,
}

fn serialize_phase<S: serde::Serializer>(p: &Phase, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl GeodesicClass {
    pub fn length(&self) -> f64 {
        self.invariants.length
    }

    pub fn holonomy_angle(&self) -> f64 {
        self.invariants.holonomy_angle
    }

    pub fn rho_value(&self) -> Complex64 {
        self.rho.value()
    }
}

/// Result of [`length_spectrum`].
#[derive(Debug, Clone, Serialize)]
pub struct LengthSpectrum {
    pub classes: Vec<GeodesicClass>,
    pub max_geodesic_length: f64,
    pub max_word_length: usize,
    /// True when searching two letters deeper found no new class below the
    /// cutoff.
    pub stabilized: bool,
    /// Number of invariant clusters first seen at depth `W + 1` or `W + 2`.
    pub late_clusters: usize,
    pub words_examined: u64,
}

impl LengthSpectrum {
    pub fn primitive_count(&self) -> usize {
        self.classes.iter().filter(|c| c.is_primitive).count()
    }

    /// `(l, θ, μ)` of every class with `l ≤ cutoff`, in spectrum order.
    pub fn truncated_triples(&self, cutoff: f64) -> Vec<(f64, f64, u32)> {
        self.classes
            .iter()
            .filter(|c| c.length() <= cutoff)
            .map(|c| (c.length(), c.holonomy_angle(), c.multiplicity))
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    length: f64,
    angle: f64,
    trace: Complex64,
    phase_class: Phase,
    codes: Vec<u8>,
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

struct SearchContext<'a> {
    letter_matrices: &'a [MoebiusElement],
    letter_abelian: &'a [Vec<i64>],
    character: &'a Character,
    max_len: usize,
    max_geodesic_length: f64,
    tol: Tolerances,
}

impl SearchContext<'_> {
    fn visit(
        &self,
        codes: &mut Vec<u8>,
        prefix: MoebiusElement,
        abelian: &mut Vec<i64>,
        out: &mut Vec<Candidate>,
        examined: &mut u64,
    ) {
        *examined += 1;
        self.consider(codes, &prefix, abelian, out);
        if codes.len() == self.max_len {
            return;
        }
        let last = *codes.last().expect("visit starts from a non-empty word") as usize;
        for code in 0..self.letter_matrices.len() {
            if code == last ^ 1 {
                continue;
            }
            let m = prefix.compose(&self.letter_matrices[code], &self.tol);
            codes.push(code as u8);
            for (a, d) in abelian.iter_mut().zip(&self.letter_abelian[code]) {
                *a += d;
            }
            self.visit(codes, m, abelian, out, examined);
            for (a, d) in abelian.iter_mut().zip(&self.letter_abelian[code]) {
                *a -= d;
            }
            codes.pop();
        }
    }

    fn consider(&self, codes: &[u8], m: &MoebiusElement, abelian: &[i64], out: &mut Vec<Candidate>) {
        let tr = m.trace();
        let tr2 = tr * tr;
        if (tr2 - 4.0).norm() <= self.tol.comparison {
            return;
        }
        if tr2.im.abs() <= self.tol.comparison && tr2.re >= 0.0 && tr2.re < 4.0 {
            return;
        }
        let inv = GeodesicInvariants::from_trace(tr);
        if inv.length > self.max_geodesic_length || inv.length <= 0.0 {
            return;
        }
        out.push(Candidate {
            length: inv.length,
            angle: inv.holonomy_angle,
            trace: tr,
            phase_class: self.character.phase_of_abelian(abelian).conjugation_class(),
            codes: codes.to_vec(),
        });
    }
}

#[derive(Debug, Clone)]
struct Cluster {
    invariants: GeodesicInvariants,
    phase_class: Phase,
    codes: Vec<u8>,
}

fn cluster_candidates(mut candidates: Vec<Candidate>, tol: f64) -> Vec<Cluster> {
    candidates.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.codes.len().cmp(&b.codes.len()))
            .then_with(|| a.codes.cmp(&b.codes))
    });
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut start = 0;
    while start < candidates.len() {
        // chain of lengths within tolerance of the previous one
        let mut end = start + 1;
        while end < candidates.len() && candidates[end].length - candidates[end - 1].length <= tol {
            end += 1;
        }
        let mut local: Vec<(usize, Cluster)> = Vec::new();
        for c in &candidates[start..end] {
            let hit = local.iter_mut().find(|(_, k)| {
                k.phase_class == c.phase_class
                    && (k.invariants.length - c.length).abs() <= tol
                    && angle_distance(k.invariants.holonomy_angle, c.angle) <= tol
            });
            match hit {
                Some((_, k)) => {
                    if (c.codes.len(), &c.codes) < (k.codes.len(), &k.codes) {
                        k.codes = c.codes.clone();
                    }
                }
                None => local.push((
                    local.len(),
                    Cluster {
                        invariants: GeodesicInvariants { length: c.length, holonomy_angle: c.angle, trace: c.trace },
                        phase_class: c.phase_class,
                        codes: c.codes.clone(),
                    },
                )),
            }
        }
        clusters.extend(local.into_iter().map(|(_, k)| k));
        start = end;
    }
    clusters
}

fn word_from_codes(codes: &[u8]) -> Word {
    Word::reduced(codes.iter().map(|&c| Letter::from_code(c as usize)))
}

/// Loxodromic root data used by [`primitive_decomposition`].
#[derive(Debug, Clone, Copy)]
pub struct RootCandidate {
    pub length: f64,
    pub matrix: MoebiusElement,
    pub phase: Phase,
}

/// Largest `μ` such that some root candidate of length `l/μ` has a `μ`-th
/// power matching `(matrix, phase)` up to conjugacy invariants; `μ = 1` when
/// nothing matches. The phase comparison is up to conjugation because the
/// root may be found in either orientation.
pub fn decompose_against(
    matrix: &MoebiusElement,
    phase: Phase,
    roots: &[RootCandidate],
    tol: &Tolerances,
) -> Option<(f64, u32, usize)> {
    let inv = GeodesicInvariants::from_trace(matrix.trace());
    let l = inv.length;
    let shortest = roots.iter().map(|r| r.length).fold(f64::INFINITY, f64::min);
    if !shortest.is_finite() || shortest <= 0.0 {
        return None;
    }
    let max_mu = (l / shortest + tol.class_match).floor() as u32;
    for mu in (2..=max_mu).rev() {
        let target = l / mu as f64;
        for (i, r) in roots.iter().enumerate() {
            if (r.length * mu as f64 - l).abs() > tol.class_match * mu as f64 {
                continue;
            }
            let powered = r.phase.scale(mu as i64);
            if powered != phase && powered != phase.neg() {
                continue;
            }
            let tr = r.matrix.pow(mu as i64).trace();
            let scale = tr.norm().max(1.0);
            let tk = matrix.trace();
            if (tr - tk).norm() <= tol.class_match * scale || (tr + tk).norm() <= tol.class_match * scale {
                return Some((target, mu, i));
            }
        }
    }
    None
}

/// `(l₀, μ)` for the class of `w`, matched against the primitive classes of
/// `spectrum_so_far`.
pub fn primitive_decomposition(
    p: &GroupPresentation,
    character: &Character,
    w: &Word,
    spectrum_so_far: &[GeodesicClass],
) -> Result<(f64, u32), GroupError> {
    character.check_rank(p)?;
    let m = p.evaluate(w);
    let inv =
        m.geodesic_invariants().map_err(|e| GroupError::InvalidArgument(format!("word is not loxodromic: {e}")))?;
    let roots: Vec<RootCandidate> = spectrum_so_far
        .iter()
        .filter(|c| c.is_primitive)
        .map(|c| RootCandidate { length: c.length(), matrix: p.evaluate(&c.representative), phase: c.rho })
        .collect();
    let phase = character.phase(w, p);
    Ok(match decompose_against(&m, phase, &roots, &Tolerances::DEFAULT) {
        Some((l0, mu, _)) => (l0, mu),
        None => (inv.length, 1),
    })
}

#[derive(Debug, Clone)]
struct KeyClass {
    invariants: GeodesicInvariants,
    matrix: MoebiusElement,
    word: Word,
    phase: Phase,
    found_at: Option<usize>,
    // (root key index, multiplicity)
    root: Option<(usize, u32)>,
}

/// Loxodromic classes with `l ≤ max_geodesic_length` among words of length
/// `≤ max_word_length`, completed under powers of the primitive classes
/// found, sorted by `(l, θ, ρ)`.
pub fn length_spectrum(
    p: &GroupPresentation,
    character: &Character,
    max_geodesic_length: f64,
    max_word_length: usize,
) -> Result<LengthSpectrum, GroupError> {
    length_spectrum_with(p, character, max_geodesic_length, max_word_length, &Tolerances::DEFAULT)
}

pub fn length_spectrum_with(
    p: &GroupPresentation,
    character: &Character,
    max_geodesic_length: f64,
    max_word_length: usize,
    tol: &Tolerances,
) -> Result<LengthSpectrum, GroupError> {
    if !(max_geodesic_length > 0.0) {
        return Err(GroupError::InvalidArgument(format!(
            "max_geodesic_length must be positive, got {max_geodesic_length}"
        )));
    }
    if max_word_length == 0 {
        return Err(GroupError::InvalidArgument("max_word_length must be at least 1".into()));
    }
    p.validate(tol)?;
    character.check_rank(p)?;

    let search_depth = max_word_length + 2;
    let matrices = letter_matrices(p);
    let abelian: Vec<Vec<i64>> = (0..matrices.len())
        .map(|c| {
            let l = Letter::from_code(c);
            p.abelianization()[l.generator].iter().map(|a| a * l.exponent()).collect()
        })
        .collect();
    let ctx = SearchContext {
        letter_matrices: &matrices,
        letter_abelian: &abelian,
        character,
        max_len: search_depth,
        max_geodesic_length: max_geodesic_length + tol.class_match,
        tol: *tol,
    };

    let results: Vec<(Vec<Candidate>, u64)> = (0..matrices.len())
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let mut examined = 0;
            let mut codes = vec![first as u8];
            let mut ab = abelian[first].clone();
            ctx.visit(&mut codes, matrices[first], &mut ab, &mut out, &mut examined);
            (out, examined)
        })
        .collect();
    let words_examined = results.iter().map(|r| r.1).sum();
    let candidates: Vec<Candidate> = results.into_iter().flat_map(|r| r.0).collect();
    let clusters = cluster_candidates(candidates, tol.class_match);

    let late_clusters = clusters
        .iter()
        .filter(|k| k.codes.len() > max_word_length && k.invariants.length <= max_geodesic_length)
        .count();

    let mut keys: Vec<KeyClass> = clusters
        .into_iter()
        .filter(|k| k.codes.len() <= max_word_length && k.invariants.length <= max_geodesic_length)
        .map(|k| {
            let word = word_from_codes(&k.codes);
            let matrix = p.evaluate(&word);
            KeyClass {
                invariants: k.invariants,
                phase: character.phase(&word, p),
                matrix,
                word,
                found_at: Some(k.codes.len()),
                root: None,
            }
        })
        .collect();
    keys.sort_by(|a, b| a.invariants.length.total_cmp(&b.invariants.length));

    assign_roots(&mut keys, tol);
    complete_powers(&mut keys, max_geodesic_length, tol);

    Ok(LengthSpectrum {
        classes: emit_oriented(keys),
        max_geodesic_length,
        max_word_length,
        stabilized: late_clusters == 0,
        late_clusters,
        words_examined,
    })
}

fn assign_roots(keys: &mut [KeyClass], tol: &Tolerances) {
    let mut primitives: Vec<usize> = Vec::new();
    let mut roots: Vec<RootCandidate> = Vec::new();
    for (i, key) in keys.iter_mut().enumerate() {
        match decompose_against(&key.matrix, key.phase, &roots, tol) {
            Some((_, mu, r)) => key.root = Some((primitives[r], mu)),
            None => {
                key.root = Some((i, 1));
                primitives.push(i);
                roots.push(RootCandidate { length: key.invariants.length, matrix: key.matrix, phase: key.phase });
            }
        }
    }
}

fn complete_powers(keys: &mut Vec<KeyClass>, cutoff: f64, tol: &Tolerances) {
    let primitive_count = keys.len();
    let mut added = Vec::new();
    for i in 0..primitive_count {
        if keys[i].root != Some((i, 1)) {
            continue;
        }
        let l0 = keys[i].invariants.length;
        let max_n = ((cutoff + tol.class_match) / l0).floor() as u32;
        for n in 2..=max_n {
            let present = keys.iter().any(|k| k.root == Some((i, n)));
            if present {
                continue;
            }
            let matrix = keys[i].matrix.pow(n as i64);
            let invariants = GeodesicInvariants::from_trace(matrix.trace());
            if invariants.length > cutoff {
                continue;
            }
            added.push(KeyClass {
                invariants,
                matrix,
                word: keys[i].word.pow(n as i64),
                phase: keys[i].phase.scale(n as i64),
                found_at: None,
                root: Some((i, n)),
            });
        }
    }
    keys.extend(added);
}

fn emit_oriented(keys: Vec<KeyClass>) -> Vec<GeodesicClass> {
    // two oriented classes per key; index 2k is γ, 2k + 1 is γ⁻¹
    let mut raw: Vec<(GeodesicClass, usize)> = Vec::with_capacity(2 * keys.len());
    for (k, key) in keys.iter().enumerate() {
        let (root, mu) = key.root.unwrap_or((k, 1));
        // orientation of the root that matches ρ(γ)
        let root_phase = keys[root].phase.scale(mu as i64);
        let forward_root = if root_phase == key.phase { 2 * root } else { 2 * root + 1 };
        let backward_root = forward_root ^ 1;
        let l0 = key.invariants.length / mu as f64;
        let base = GeodesicClass {
            representative: key.word.clone(),
            invariants: key.invariants,
            primitive_length: l0,
            multiplicity: mu,
            is_primitive: mu == 1,
            rho: key.phase,
            primitive_index: forward_root,
            found_at_word_length: key.found_at,
        };
        let mut inverse = base.clone();
        inverse.representative = key.word.inverse();
        inverse.rho = key.phase.neg();
        inverse.primitive_index = backward_root;
        raw.push((base, 2 * k));
        raw.push((inverse, 2 * k + 1));
    }
    raw.sort_by(|(a, _), (b, _)| {
        a.length()
            .total_cmp(&b.length())
            .then_with(|| a.holonomy_angle().total_cmp(&b.holonomy_angle()))
            .then_with(|| a.rho.cmp(&b.rho))
            .then_with(|| a.representative.cmp(&b.representative))
    });
    let mut new_index = vec![0; raw.len()];
    for (pos, (_, old)) in raw.iter().enumerate() {
        new_index[*old] = pos;
    }
    raw.into_iter()
        .map(|(mut c, _)| {
            c.primitive_index = new_index[c.primitive_index];
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn free_word_counts() {
        let p = examples::figure_eight();
        assert_eq!(enumerate_words(&p, 1).count(), 4);
        assert_eq!(enumerate_words(&p, 2).count(), 16);
        for l in 1..=6usize {
            let exact = enumerate_words(&p, l).filter(|(w, _)| w.len() == l).count();
            assert_eq!(exact, 4 * 3usize.pow(l as u32 - 1));
        }
    }

    #[test]
    fn enumerated_words_are_reduced_unique_and_evaluated() {
        let p = examples::figure_eight();
        let mut seen = std::collections::HashSet::new();
        for (w, m) in enumerate_words(&p, 5) {
            assert!(seen.insert(w.clone()));
            assert_eq!(Word::reduced(w.letters().to_vec()), w);
            assert!(p.evaluate(&w).approx_eq(&m, 1e-10));
        }
    }

    #[test]
    fn cyclic_group_powers() {
        let p = examples::loxodromic_cyclic();
        let s = length_spectrum(&p, &Character::trivial(1), 5.0, 6).unwrap();
        let l = 2.0 * 2f64.ln();
        // γⁿ and γ⁻ⁿ for n = 1, 2, 3
        assert_eq!(s.classes.len(), 6);
        for (i, c) in s.classes.iter().enumerate() {
            let n = (i / 2 + 1) as u32;
            assert!((c.length() - n as f64 * l).abs() < 1e-12);
            assert_eq!(c.multiplicity, n);
            assert_eq!(c.is_primitive, n == 1);
            assert!((c.primitive_length - l).abs() < 1e-12);
            assert!(s.classes[c.primitive_index].is_primitive);
        }
        assert!(s.stabilized);
    }

    #[test]
    fn powers_found_by_words_and_by_completion_agree() {
        // depth 1 finds only the generator; powers come from completion
        let p = examples::loxodromic_cyclic();
        let shallow = length_spectrum(&p, &Character::trivial(1), 5.0, 1).unwrap();
        let deep = length_spectrum(&p, &Character::trivial(1), 5.0, 6).unwrap();
        assert_eq!(shallow.truncated_triples(5.0).len(), deep.truncated_triples(5.0).len());
        for (a, b) in shallow.truncated_triples(5.0).iter().zip(deep.truncated_triples(5.0)) {
            assert!((a.0 - b.0).abs() < 1e-10 && a.2 == b.2);
        }
        assert!(shallow.classes.iter().any(|c| c.found_at_word_length.is_none()));
    }

    #[test]
    fn square_and_cube_decomposition() {
        let p = examples::loxodromic_cyclic();
        let rho = Character::trivial(1);
        let s = length_spectrum(&p, &rho, 5.0, 6).unwrap();
        let g = p.parse_word("g").unwrap();
        let (l0, mu) = primitive_decomposition(&p, &rho, &g.pow(2), &s.classes).unwrap();
        assert_eq!(mu, 2);
        assert!((l0 - 2.0 * 2f64.ln()).abs() < 1e-12);
        let (_, mu) = primitive_decomposition(&p, &rho, &g, &s.classes).unwrap();
        assert_eq!(mu, 1);
        // v³ and v·v² are the same word after reduction, hence the same class
        assert_eq!(g.pow(3), g.concat(&g.pow(2)));
        let (_, mu) = primitive_decomposition(&p, &rho, &g.pow(3), &s.classes).unwrap();
        assert_eq!(mu, 3);
    }

    #[test]
    fn spectrum_invariants_figure_eight() {
        let p = examples::figure_eight();
        let rho: Character = "1/4".parse().unwrap();
        let s = length_spectrum(&p, &rho, 3.5, 7).unwrap();
        assert!(!s.classes.is_empty());
        for w in s.classes.windows(2) {
            assert!(w[0].length() <= w[1].length());
        }
        for c in &s.classes {
            assert!(c.length() <= 3.5);
            assert!((c.multiplicity as f64 * c.primitive_length - c.length()).abs() < 1e-8);
            assert_eq!(c.is_primitive, c.multiplicity == 1);
            let m = p.evaluate(&c.representative);
            let inv = m.geodesic_invariants().unwrap();
            assert!((inv.length - c.length()).abs() < 1e-8);
            assert_eq!(rho.phase(&c.representative, &p), c.rho);
        }
        // no two classes share (l, θ, ρ) except an inverse pair with real ρ
        for (i, a) in s.classes.iter().enumerate() {
            for b in &s.classes[i + 1..] {
                let same = (a.length() - b.length()).abs() < 1e-8
                    && angle_distance(a.holonomy_angle(), b.holonomy_angle()) < 1e-8
                    && a.rho == b.rho;
                if same {
                    assert!(a.rho.is_real());
                    assert_eq!(a.representative.inverse(), b.representative);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = examples::figure_eight();
        assert!(length_spectrum(&p, &Character::trivial(1), 0.0, 4).is_err());
        assert!(length_spectrum(&p, &Character::trivial(1), 1.0, 0).is_err());
        assert!(matches!(length_spectrum(&p, &Character::trivial(2), 1.0, 3), Err(GroupError::Character(_))));
    }
}
