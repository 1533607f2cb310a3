use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use floquet_core::{HillConfig, IntegrationConfig, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::presets::Preset;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("unknown format '{s}' (expected csv or json)")),
        }
    }
}

/// One source of settings (command line or config file). Unset fields fall
/// through to the next source.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub potential: Option<String>,
    pub preset: Option<Preset>,
    pub v0: Option<f64>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub n_samples: Option<usize>,
    pub steps_per_period: Option<usize>,
    #[serde(alias = "hill_N")]
    pub hill_n: Option<usize>,
    pub tol_identity: Option<f64>,
    pub tol_root: Option<f64>,
    pub merge_tol: Option<f64>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.to_owned(),
            source,
        })
    }

    /// `self` over `lower`. The potential source (`potential` or `preset`)
    /// is taken as a unit from the first layer that names one.
    pub fn over(self, lower: ConfigLayer) -> ConfigLayer {
        let names_potential = self.potential.is_some() || self.preset.is_some();
        let (potential, preset) = if names_potential {
            (self.potential, self.preset)
        } else {
            (lower.potential, lower.preset)
        };
        ConfigLayer {
            potential,
            preset,
            v0: self.v0.or(lower.v0),
            e_min: self.e_min.or(lower.e_min),
            e_max: self.e_max.or(lower.e_max),
            n_samples: self.n_samples.or(lower.n_samples),
            steps_per_period: self.steps_per_period.or(lower.steps_per_period),
            hill_n: self.hill_n.or(lower.hill_n),
            tol_identity: self.tol_identity.or(lower.tol_identity),
            tol_root: self.tol_root.or(lower.tol_root),
            merge_tol: self.merge_tol.or(lower.merge_tol),
            output_format: self.output_format.or(lower.output_format),
            output_path: self.output_path.or(lower.output_path),
        }
    }
}

pub const DEFAULT_E_MIN: f64 = -2.0;
pub const DEFAULT_E_MAX: f64 = 30.0;
pub const DEFAULT_N_SAMPLES: usize = 200;
/// Fourier cutoff handed to the Hill oracle (capped by `hill_n`).
pub const HILL_FOURIER: usize = 8;
/// Largest plane-wave cutoff (matrix dimension 101).
pub const MAX_HILL_N: usize = 50;

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub potential: String,
    pub e_min: f64,
    pub e_max: f64,
    pub n_samples: usize,
    pub steps_per_period: usize,
    pub hill_n: usize,
    pub tol_identity: f64,
    pub tol_root: f64,
    pub merge_tol: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    /// Applies defaults to `layer` and checks every value.
    pub fn resolve(layer: ConfigLayer) -> Result<Self, CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        let potential = match (layer.potential, layer.preset) {
            (Some(_), Some(_)) => return usage("give either a potential or a preset, not both".into()),
            (None, None) => return usage("no potential: pass --potential or --preset".into()),
            (Some(text), None) => {
                if layer.v0.is_some() {
                    return usage("v0 only applies to the pt-lattice preset".into());
                }
                text
            }
            (None, Some(preset)) => {
                if layer.v0.is_some() && !preset.takes_v0() {
                    return usage(format!("v0 does not apply to preset {preset}"));
                }
                if layer.v0.is_some_and(|v| !v.is_finite()) {
                    return usage("v0 must be finite".into());
                }
                preset.potential(layer.v0)
            }
        };
        let defaults = Tolerances::default();
        let cfg = RunConfig {
            potential,
            e_min: layer.e_min.unwrap_or(DEFAULT_E_MIN),
            e_max: layer.e_max.unwrap_or(DEFAULT_E_MAX),
            n_samples: layer.n_samples.unwrap_or(DEFAULT_N_SAMPLES),
            steps_per_period: layer
                .steps_per_period
                .unwrap_or(IntegrationConfig::default().steps_per_period),
            hill_n: layer.hill_n.unwrap_or(HillConfig::default().truncation),
            tol_identity: layer.tol_identity.unwrap_or(defaults.identity),
            tol_root: layer.tol_root.unwrap_or(defaults.root),
            merge_tol: layer.merge_tol.unwrap_or(defaults.merge),
            output_format: layer.output_format.unwrap_or_default(),
            output_path: layer.output_path,
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CliError> {
        let fail = |m: &str| Err(CliError::Usage(m.into()));
        if !(self.e_min.is_finite() && self.e_max.is_finite() && self.e_min < self.e_max) {
            return fail("energy range must be finite with e_min < e_max");
        }
        if self.n_samples < 2 {
            return fail("n_samples must be at least 2");
        }
        self.integration().validate().map_err(CliError::from)?;
        if !(1..=MAX_HILL_N).contains(&self.hill_n) {
            return Err(CliError::Usage(format!("hill_n must be between 1 and {MAX_HILL_N}")));
        }
        for (name, t) in [
            ("tol_identity", self.tol_identity),
            ("tol_root", self.tol_root),
            ("merge_tol", self.merge_tol),
        ] {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn integration(&self) -> IntegrationConfig {
        IntegrationConfig::with_steps(self.steps_per_period)
    }

    pub fn hill(&self) -> HillConfig {
        HillConfig {
            truncation: self.hill_n,
            fourier: HILL_FOURIER.min(self.hill_n),
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            identity: self.tol_identity,
            root: self.tol_root,
            merge: self.merge_tol,
            ..Tolerances::default()
        }
    }

    /// Output file, defaulting to `<command>.<ext>` in the working directory.
    pub fn output_file(&self, command: &str) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{command}.{}", self.output_format.extension())))
    }
}
