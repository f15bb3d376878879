//! Geodesic length spectra of Kleinian groups, twisted Ruelle L-functions,
//! Laplace-Mellin transforms of heat-trace terms and twisted Reidemeister
//! torsion.

pub mod characters;
pub mod examples;
pub mod group;
pub mod laurent;
pub mod lfunc;
pub mod moebius;
pub mod presentation;
pub mod quadrature;
pub mod special;
pub mod summation;
pub mod tolerance;
pub mod torsion;
pub mod transforms;
pub mod word;

pub use characters::{Character, CharacterError, Phase};
pub use group::{enumerate_words, length_spectrum, primitive_decomposition, GeodesicClass, GroupError, LengthSpectrum};
pub use laurent::LaurentPoly;
pub use lfunc::{rs_factorization_check, ruelle_product, s_series, shifted_prop31_check, LfuncError, SpectrumSeries};
pub use moebius::{Classification, GeodesicInvariants, MoebiusElement, MoebiusError};
pub use presentation::{GroupPresentation, PresentationError};
pub use tolerance::Tolerances;
pub use torsion::{
    alexander_at_one, reidemeister_torsion_magnitude, theorem_report, twisted_alexander, TheoremReport, TorsionError,
    TwistedChainComplex,
};
pub use transforms::{TransformError, TransformValue};
pub use word::{Letter, Word};
