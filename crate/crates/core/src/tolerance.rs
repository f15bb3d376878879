//! Centralized numeric tolerances.
//!
//! Every comparison in the crate goes through one of these values so that a
//! run can tighten or loosen them in one place.

use serde::{Deserialize, Serialize};

/// Tolerances used by classification, enumeration and linear algebra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Entrywise comparison of matrices and traces.
    pub comparison: f64,
    /// Allowed determinant drift before a product is renormalized.
    pub renormalization: f64,
    /// Determinant defect above which an input is rejected as non-unimodular.
    pub unimodular: f64,
    /// Relators must evaluate to `±I` within this bound.
    pub relator: f64,
    /// Matching of geodesic invariants `(l, θ)` and traces during deduplication.
    pub class_match: f64,
    /// Distance-to-integer threshold for character pairings.
    pub character: f64,
    /// Singular values below `rank * σ_max` count as zero.
    pub rank: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        comparison: 1e-10,
        renormalization: 1e-12,
        unimodular: 1e-9,
        relator: 1e-8,
        class_match: 1e-8,
        character: 1e-12,
        rank: 1e-8,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
