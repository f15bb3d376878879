//! Finitely presented groups with a matrix assignment of the generators, and
//! the TOML presentation file format.
//!
//! ```toml
//! name = "figure-eight knot complement"
//! hyperbolic = true
//! relators = ["X y x Y x y X Y x Y"]
//! cusp_words = ["x", "y X Y x x Y X y"]
//! abelianization = [[1], [1]]
//! epimorphism = [1, 1]
//!
//! [[generators]]
//! name = "x"
//! matrix = [[1.0, 0.0], [1.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
//! ```
//!
//! Words are whitespace-separated generator names; the upper-cased name
//! denotes the inverse. Generator names must therefore be lower case.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::moebius::{Classification, MoebiusElement};
use crate::tolerance::Tolerances;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PresentationError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: inconsistent presentation: {message}")]
    Inconsistent { line: usize, message: String },
    #[error("inconsistent presentation: {0}")]
    InconsistentPresentation(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl PresentationError {
    fn inconsistent(span: Option<(usize, &str)>, message: String) -> Self {
        match span {
            Some((line, _)) => Self::Inconsistent { line, message },
            None => Self::InconsistentPresentation(message),
        }
    }
}

/// A presentation together with its matrix representation and the
/// homological data needed for characters and Alexander invariants.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    name: String,
    hyperbolic: bool,
    generator_names: Vec<String>,
    generator_matrices: Vec<MoebiusElement>,
    relators: Vec<Word>,
    cusp_words: Vec<Word>,
    cusp_count: usize,
    abelianization: Vec<Vec<i64>>,
    epimorphism: Option<Vec<i64>>,
    // 1-based source lines of relators and cusp words, when parsed from text
    relator_lines: Vec<Option<usize>>,
    cusp_lines: Vec<Option<usize>>,
}

/// Plain description used to build a [`GroupPresentation`] in code.
#[derive(Debug, Clone, Default)]
pub struct PresentationSpec {
    pub name: String,
    pub hyperbolic: bool,
    pub generator_names: Vec<String>,
    pub generator_matrices: Vec<[Complex64; 4]>,
    pub relators: Vec<String>,
    pub cusp_words: Vec<String>,
    pub cusp_count: Option<usize>,
    pub abelianization: Vec<Vec<i64>>,
    pub epimorphism: Option<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    #[serde(default)]
    name: String,
    #[serde(default = "default_true")]
    hyperbolic: bool,
    generators: Vec<toml::Spanned<RawGenerator>>,
    #[serde(default)]
    relators: Vec<toml::Spanned<String>>,
    #[serde(default)]
    cusp_words: Vec<toml::Spanned<String>>,
    cusp_count: Option<usize>,
    abelianization: toml::Spanned<Vec<Vec<i64>>>,
    epimorphism: Option<toml::Spanned<Vec<i64>>>,
}

fn default_true() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    matrix: [[f64; 2]; 4],
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parses a word such as `"a b A B"` against `names`.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word, String> {
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        if token == "1" {
            continue;
        }
        if let Some(g) = names.iter().position(|n| n == token) {
            letters.push(Letter::new(g, false));
        } else if let Some(g) = names.iter().position(|n| n.to_uppercase() == token) {
            letters.push(Letter::new(g, true));
        } else {
            return Err(format!("unknown generator `{token}` in word \"{text}\""));
        }
    }
    Ok(Word::reduced(letters))
}

impl GroupPresentation {
    pub fn from_toml_str(source: &str) -> Result<Self, PresentationError> {
        let raw: RawPresentation = toml::from_str(source).map_err(|e| PresentationError::Parse {
            line: e.span().map(|s| line_of(source, s.start)).unwrap_or(0),
            message: e.message().to_string(),
        })?;

        let mut names = Vec::new();
        let mut matrices = Vec::new();
        for g in &raw.generators {
            let line = line_of(source, g.span().start);
            let gen = g.get_ref();
            if gen.name.is_empty()
                || gen.name != gen.name.to_lowercase()
                || gen.name.chars().any(char::is_whitespace)
                || gen.name == "1"
            {
                return Err(PresentationError::Parse {
                    line,
                    message: format!("generator name `{}` must be a lower-case token", gen.name),
                });
            }
            if names.contains(&gen.name) {
                return Err(PresentationError::Parse { line, message: format!("duplicate generator `{}`", gen.name) });
            }
            names.push(gen.name.clone());
            let m = gen.matrix;
            matrices.push([
                Complex64::new(m[0][0], m[0][1]),
                Complex64::new(m[1][0], m[1][1]),
                Complex64::new(m[2][0], m[2][1]),
                Complex64::new(m[3][0], m[3][1]),
            ]);
        }

        let parse_words = |words: &[toml::Spanned<String>]| -> Result<(Vec<String>, Vec<usize>), PresentationError> {
            let mut texts = Vec::new();
            let mut lines = Vec::new();
            for w in words {
                let line = line_of(source, w.span().start);
                parse_word(w.get_ref(), &names).map_err(|message| PresentationError::Parse { line, message })?;
                texts.push(w.get_ref().clone());
                lines.push(line);
            }
            Ok((texts, lines))
        };
        let (relators, relator_lines) = parse_words(&raw.relators)?;
        let (cusp_words, cusp_lines) = parse_words(&raw.cusp_words)?;

        let spec = PresentationSpec {
            name: raw.name,
            hyperbolic: raw.hyperbolic,
            generator_names: names,
            generator_matrices: matrices,
            relators,
            cusp_words,
            cusp_count: raw.cusp_count,
            abelianization: raw.abelianization.get_ref().clone(),
            epimorphism: raw.epimorphism.as_ref().map(|e| e.get_ref().clone()),
        };
        let ab_line = line_of(source, raw.abelianization.span().start);
        let epi_line = raw.epimorphism.as_ref().map(|e| line_of(source, e.span().start));
        Self::build(
            spec,
            &Tolerances::DEFAULT,
            relator_lines.into_iter().map(Some).collect(),
            cusp_lines.into_iter().map(Some).collect(),
            Some(ab_line),
            epi_line,
        )
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, PresentationError> {
        let path = path.as_ref();
        let source = std::fs::read_to_string(path)
            .map_err(|e| PresentationError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_toml_str(&source)
    }

    /// Builds and eagerly validates a presentation.
    pub fn new(spec: PresentationSpec, tol: &Tolerances) -> Result<Self, PresentationError> {
        let r = spec.relators.len();
        let c = spec.cusp_words.len();
        Self::build(spec, tol, vec![None; r], vec![None; c], None, None)
    }

    fn build(
        spec: PresentationSpec,
        tol: &Tolerances,
        relator_lines: Vec<Option<usize>>,
        cusp_lines: Vec<Option<usize>>,
        ab_line: Option<usize>,
        epi_line: Option<usize>,
    ) -> Result<Self, PresentationError> {
        let names = spec.generator_names;
        if names.is_empty() {
            return Err(PresentationError::InconsistentPresentation("no generators".into()));
        }
        if names.len() != spec.generator_matrices.len() {
            return Err(PresentationError::InconsistentPresentation(format!(
                "{} generator names but {} matrices",
                names.len(),
                spec.generator_matrices.len()
            )));
        }
        let mut matrices = Vec::with_capacity(names.len());
        for (name, m) in names.iter().zip(&spec.generator_matrices) {
            let g = MoebiusElement::new(m[0], m[1], m[2], m[3], tol)
                .map_err(|e| PresentationError::InconsistentPresentation(format!("generator {name}: {e}")))?;
            matrices.push(g);
        }
        let parse_all = |texts: &[String], lines: &[Option<usize>]| -> Result<Vec<Word>, PresentationError> {
            texts
                .iter()
                .zip(lines)
                .map(|(t, line)| {
                    parse_word(t, &names).map_err(|message| match line {
                        Some(line) => PresentationError::Parse { line: *line, message },
                        None => PresentationError::InconsistentPresentation(message),
                    })
                })
                .collect()
        };
        let relators = parse_all(&spec.relators, &relator_lines)?;
        let cusp_words = parse_all(&spec.cusp_words, &cusp_lines)?;

        let b = spec.abelianization.first().map(Vec::len).unwrap_or(0);
        if spec.abelianization.len() != names.len() || spec.abelianization.iter().any(|row| row.len() != b) {
            return Err(PresentationError::inconsistent(
                ab_line.map(|l| (l, "")),
                format!("abelianization must be a {}×b integer matrix with equal row lengths", names.len()),
            ));
        }
        if let Some(e) = &spec.epimorphism {
            if e.len() != names.len() {
                return Err(PresentationError::inconsistent(
                    epi_line.map(|l| (l, "")),
                    format!("epimorphism has {} entries for {} generators", e.len(), names.len()),
                ));
            }
        }

        let p = Self {
            name: spec.name,
            hyperbolic: spec.hyperbolic,
            generator_names: names,
            generator_matrices: matrices,
            relators,
            cusp_words,
            cusp_count: spec.cusp_count.unwrap_or(1),
            abelianization: spec.abelianization,
            epimorphism: spec.epimorphism,
            relator_lines,
            cusp_lines,
        };
        p.validate(tol)?;
        Ok(p)
    }

    /// Checks every presentation invariant: relators evaluate to `±I`, cusp
    /// words are parabolic, and the abelianization and epimorphism kill
    /// every relator.
    pub fn validate(&self, tol: &Tolerances) -> Result<(), PresentationError> {
        for (i, r) in self.relators.iter().enumerate() {
            let line = self.relator_lines.get(i).copied().flatten();
            let text = r.display_with(&self.generator_names).to_string();
            let m = self.evaluate(r);
            if !m.is_identity(tol.relator) {
                return Err(PresentationError::inconsistent(
                    line.map(|l| (l, "")),
                    format!("relator \"{text}\" evaluates to {m}, not ±I"),
                ));
            }
            if self.abelianize(r).iter().any(|&x| x != 0) {
                return Err(PresentationError::inconsistent(
                    line.map(|l| (l, "")),
                    format!("abelianization does not vanish on relator \"{text}\""),
                ));
            }
            if let Some(e) = &self.epimorphism {
                let v: i64 = r.exponent_sums(self.generator_count()).iter().zip(e).map(|(n, k)| n * k).sum();
                if v != 0 {
                    return Err(PresentationError::inconsistent(
                        line.map(|l| (l, "")),
                        format!("epimorphism does not vanish on relator \"{text}\""),
                    ));
                }
            }
        }
        for (i, w) in self.cusp_words.iter().enumerate() {
            let line = self.cusp_lines.get(i).copied().flatten();
            let class = self
                .evaluate(w)
                .classify_with(tol)
                .map_err(|e| PresentationError::InconsistentPresentation(e.to_string()))?;
            if class != Classification::Parabolic {
                return Err(PresentationError::inconsistent(
                    line.map(|l| (l, "")),
                    format!("cusp word \"{}\" is {class:?}, expected Parabolic", w.display_with(&self.generator_names)),
                ));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.hyperbolic
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_matrices(&self) -> &[MoebiusElement] {
        &self.generator_matrices
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn cusp_words(&self) -> &[Word] {
        &self.cusp_words
    }

    pub fn cusp_count(&self) -> usize {
        self.cusp_count
    }

    /// Rank `b` of the free part of `H₁`.
    pub fn betti_rank(&self) -> usize {
        self.abelianization.first().map(Vec::len).unwrap_or(0)
    }

    pub fn abelianization(&self) -> &[Vec<i64>] {
        &self.abelianization
    }

    pub fn epimorphism(&self) -> Option<&[i64]> {
        self.epimorphism.as_deref()
    }

    /// Deficiency `#generators - #relators`.
    pub fn deficiency(&self) -> i64 {
        self.generator_count() as i64 - self.relators.len() as i64
    }

    /// Warnings about inputs outside the one-cusp setting.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.cusp_count > 1 {
            out.push(format!(
                "presentation declares {} cusps; the identities checked here are stated for one cusp",
                self.cusp_count
            ));
        }
        if !self.hyperbolic {
            out.push("presentation is marked non-hyperbolic; geodesic-side results are not meaningful".into());
        }
        out
    }

    pub fn letter_matrix(&self, letter: Letter) -> MoebiusElement {
        let g = self.generator_matrices[letter.generator];
        if letter.inverse {
            g.inverse()
        } else {
            g
        }
    }

    pub fn evaluate(&self, w: &Word) -> MoebiusElement {
        let tol = Tolerances::DEFAULT;
        w.letters().iter().fold(MoebiusElement::IDENTITY, |acc, &l| acc.compose(&self.letter_matrix(l), &tol))
    }

    /// Image of `w` in `Z^b`.
    pub fn abelianize(&self, w: &Word) -> Vec<i64> {
        let mut out = vec![0; self.betti_rank()];
        for l in w.letters() {
            for (o, a) in out.iter_mut().zip(&self.abelianization[l.generator]) {
                *o += l.exponent() * a;
            }
        }
        out
    }

    /// Image of `w` under the epimorphism to `Z`.
    pub fn epimorphism_value(&self, w: &Word) -> Option<i64> {
        let e = self.epimorphism.as_ref()?;
        Some(w.letters().iter().map(|l| l.exponent() * e[l.generator]).sum())
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, String> {
        parse_word(text, &self.generator_names)
    }

    /// Tietze expansion: adds a generator `name` equal to `w` and the relator
    /// `name · w⁻¹`.
    pub fn with_elementary_expansion(&self, name: &str, w: &Word) -> Result<Self, PresentationError> {
        let mut spec = self.to_spec();
        let new_index = spec.generator_names.len();
        spec.generator_names.push(name.to_string());
        spec.generator_matrices.push(self.evaluate(w).entries());
        let mut relator = Word::generator(new_index).letters().to_vec();
        relator.extend(w.inverse().letters().iter().copied());
        spec.relators.push(Word::reduced(relator).display_with(&spec.generator_names).to_string());
        spec.abelianization.push(self.abelianize(w));
        if let Some(e) = &mut spec.epimorphism {
            e.push(self.epimorphism_value(w).unwrap_or(0));
        }
        Self::new(spec, &Tolerances::DEFAULT)
    }

    /// Same group with generators reordered: new generator `i` is old
    /// generator `order[i]`.
    pub fn with_generator_order(&self, order: &[usize]) -> Result<Self, PresentationError> {
        let n = self.generator_count();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(PresentationError::InconsistentPresentation(format!(
                "{order:?} is not a permutation of 0..{n}"
            )));
        }
        let mut spec = self.to_spec();
        spec.generator_names = order.iter().map(|&i| self.generator_names[i].clone()).collect();
        spec.generator_matrices = order.iter().map(|&i| self.generator_matrices[i].entries()).collect();
        spec.abelianization = order.iter().map(|&i| self.abelianization[i].clone()).collect();
        spec.epimorphism = self.epimorphism.as_ref().map(|e| order.iter().map(|&i| e[i]).collect());
        Self::new(spec, &Tolerances::DEFAULT)
    }

    fn to_spec(&self) -> PresentationSpec {
        let names = &self.generator_names;
        PresentationSpec {
            name: self.name.clone(),
            hyperbolic: self.hyperbolic,
            generator_names: names.clone(),
            generator_matrices: self.generator_matrices.iter().map(MoebiusElement::entries).collect(),
            relators: self.relators.iter().map(|w| w.display_with(names).to_string()).collect(),
            cusp_words: self.cusp_words.iter().map(|w| w.display_with(names).to_string()).collect(),
            cusp_count: Some(self.cusp_count),
            abelianization: self.abelianization.clone(),
            epimorphism: self.epimorphism.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = r#"
name = "trefoil"
hyperbolic = false
relators = ["a b a B A B"]
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

    #[test]
    fn parses_trefoil() {
        let p = GroupPresentation::from_toml_str(TREFOIL).unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.deficiency(), 1);
        assert_eq!(p.betti_rank(), 1);
        assert!(!p.is_hyperbolic());
    }

    #[test]
    fn bad_relator_reports_its_line() {
        let src = TREFOIL.replace("a b a B A B", "a b a B A A");
        match GroupPresentation::from_toml_str(&src) {
            Err(PresentationError::Inconsistent { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_generator_reports_its_line() {
        let src = TREFOIL.replace("cusp_words = [\"a\"]", "cusp_words = [\"q\"]");
        match GroupPresentation::from_toml_str(&src) {
            Err(PresentationError::Parse { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains('q'));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_line() {
        let src = TREFOIL.replace("epimorphism = [1, 1]", "epimorphism = [1, 1");
        match GroupPresentation::from_toml_str(&src) {
            Err(PresentationError::Parse { line, .. }) => assert!(line >= 7, "line {line}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn abelianization_must_kill_relators() {
        let src = TREFOIL.replace("abelianization = [[1], [1]]", "abelianization = [[1], [2]]");
        assert!(matches!(GroupPresentation::from_toml_str(&src), Err(PresentationError::Inconsistent { line: 4, .. })));
    }

    #[test]
    fn non_parabolic_cusp_word_rejected() {
        let src = TREFOIL.replace("cusp_words = [\"a\"]", "cusp_words = [\"a b\"]");
        assert!(matches!(GroupPresentation::from_toml_str(&src), Err(PresentationError::Inconsistent { .. })));
    }

    #[test]
    fn expansion_and_permutation_stay_valid() {
        let p = GroupPresentation::from_toml_str(TREFOIL).unwrap();
        let w = p.parse_word("a b").unwrap();
        let q = p.with_elementary_expansion("c", &w).unwrap();
        assert_eq!(q.generator_count(), 3);
        assert_eq!(q.relators().len(), 2);
        assert_eq!(q.abelianization()[2], vec![2]);
        let r = p.with_generator_order(&[1, 0]).unwrap();
        assert_eq!(r.generator_names(), &["b".to_string(), "a".to_string()]);
        assert!(p.with_generator_order(&[0, 0]).is_err());
    }

    #[test]
    fn multi_cusp_warns() {
        let src = TREFOIL.replace("hyperbolic = false", "hyperbolic = true\ncusp_count = 2");
        let p = GroupPresentation::from_toml_str(&src).unwrap();
        assert_eq!(p.warnings().len(), 1);
    }
}
