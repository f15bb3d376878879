//! Presentations shipped with the crate.

use crate::presentation::GroupPresentation;

pub const FIGURE_EIGHT_TOML: &str = include_str!("../data/figure_eight.toml");
pub const TREFOIL_TOML: &str = include_str!("../data/trefoil.toml");
pub const LOXODROMIC_CYCLIC_TOML: &str = include_str!("../data/loxodromic_cyclic.toml");

pub fn figure_eight() -> GroupPresentation {
    GroupPresentation::from_toml_str(FIGURE_EIGHT_TOML).expect("shipped presentation is valid")
}

pub fn trefoil() -> GroupPresentation {
    GroupPresentation::from_toml_str(TREFOIL_TOML).expect("shipped presentation is valid")
}

pub fn loxodromic_cyclic() -> GroupPresentation {
    GroupPresentation::from_toml_str(LOXODROMIC_CYCLIC_TOML).expect("shipped presentation is valid")
}
