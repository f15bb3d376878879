//! Run configuration: a TOML file with command-line overrides.

use std::path::{Path, PathBuf};

use ruelle_core::{Character, GroupPresentation};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    presentation: Option<PathBuf>,
    character: Option<String>,
    max_geodesic_length: Option<f64>,
    max_word_length: Option<usize>,
    abscissa: Option<f64>,
    vol: Option<f64>,
    c_rho_gamma: Option<f64>,
    delta_rho: Option<f64>,
    output_dir: Option<PathBuf>,
    seed: Option<u64>,
    #[serde(default)]
    tolerances: ToleranceOverrides,
}

/// Pass/fail thresholds of the verify checks.
#[derive(Debug, Clone, Copy, Deserialize, serde::Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceOverrides {
    pub transforms: f64,
    pub spot_values: f64,
    pub evenness: f64,
    pub half_line: f64,
    pub cancellation: f64,
    pub synthetic_rs: f64,
    pub prop31_quadrature: f64,
    pub prop31_closed_form: f64,
}

impl Default for ToleranceOverrides {
    fn default() -> Self {
        Self {
            transforms: 1e-8,
            spot_values: 1e-12,
            evenness: 1e-12,
            half_line: 1e-10,
            cancellation: 1e-12,
            synthetic_rs: 1e-10,
            prop31_quadrature: 1e-7,
            prop31_closed_form: 1e-10,
        }
    }
}

/// Flags that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub presentation: Option<PathBuf>,
    pub rho: Option<String>,
    pub max_length: Option<f64>,
    pub max_word: Option<usize>,
    pub abscissa: Option<f64>,
    pub delta_rho: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub presentation_path: Option<PathBuf>,
    pub character: Option<String>,
    pub max_geodesic_length: f64,
    pub max_word_length: usize,
    pub abscissa: f64,
    pub vol: Option<f64>,
    pub c_rho_gamma: Option<f64>,
    pub delta_rho: Option<f64>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub tolerances: ToleranceOverrides,
}

impl RunConfig {
    pub fn load(o: &Overrides) -> Result<Self, CliError> {
        let (file, base) = match &o.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
                let file: FileConfig =
                    toml::from_str(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?;
                (file, path.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (FileConfig::default(), PathBuf::new()),
        };
        let presentation_path = match &o.presentation {
            Some(p) => Some(p.clone()),
            None => file.presentation.map(|p| if p.is_absolute() { p } else { base.join(p) }),
        };
        let config = Self {
            presentation_path,
            character: o.rho.clone().or(file.character),
            max_geodesic_length: o.max_length.or(file.max_geodesic_length).unwrap_or(8.0),
            max_word_length: o.max_word.or(file.max_word_length).unwrap_or(10),
            abscissa: o.abscissa.or(file.abscissa).unwrap_or(ruelle_core::lfunc::DEFAULT_ABSCISSA),
            vol: file.vol,
            c_rho_gamma: file.c_rho_gamma,
            delta_rho: o.delta_rho.or(file.delta_rho),
            output_dir: o.out.clone().or(file.output_dir).unwrap_or_else(|| PathBuf::from("out")),
            seed: o.seed.or(file.seed).unwrap_or(0),
            tolerances: file.tolerances,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.max_geodesic_length > 0.0) {
            return Err(CliError::Input(format!(
                "max_geodesic_length must be positive, got {}",
                self.max_geodesic_length
            )));
        }
        if self.max_word_length == 0 {
            return Err(CliError::Input("max_word_length must be at least 1".into()));
        }
        if let Some(v) = self.vol {
            if !(v > 0.0) {
                return Err(CliError::Input(format!("vol must be positive, got {v}")));
            }
        }
        if let Some(d) = self.delta_rho {
            if !(d > 0.0) {
                return Err(CliError::Input(format!("delta_rho must be positive, got {d}")));
            }
        }
        if let Some(p) = &self.presentation_path {
            if !p.exists() {
                return Err(CliError::Input(format!("presentation file {} does not exist", p.display())));
            }
        }
        Ok(())
    }

    pub fn presentation(&self) -> Result<GroupPresentation, CliError> {
        let path = self
            .presentation_path
            .as_ref()
            .ok_or_else(|| CliError::Input("no presentation given (set `presentation` or --presentation)".into()))?;
        GroupPresentation::from_file(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    /// The configured character, or the trivial one.
    pub fn character(&self, p: &GroupPresentation) -> Result<Character, CliError> {
        let rho = match &self.character {
            Some(text) => text.parse::<Character>().map_err(|e| CliError::Input(e.to_string()))?,
            None => Character::trivial(p.betti_rank()),
        };
        rho.check_rank(p).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(rho)
    }

    pub fn require_abscissa(&self) -> Result<(), CliError> {
        if !(self.abscissa > 2.0) {
            return Err(CliError::Precondition(format!(
                "convergence abscissa {} is not above 2; the geodesic counting function grows like e^(2L), \
                 so the product and series only converge absolutely for Re z > 2",
                self.abscissa
            )));
        }
        Ok(())
    }
}
