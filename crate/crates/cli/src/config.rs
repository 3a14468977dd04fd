//! JSON run configuration.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use trigspline::{FactorSpec64, Indicator, SplineConfig64};

use crate::parse_error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A spline plus output controls. Every field has a default; the default
/// spline is the figure setup (`N = 9`, `r = 1`, both grids through the
/// origin, `1/j²` factor).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub spline: SplineConfig64,
    /// Number of t samples, or the largest `j` for `factors`.
    pub samples: usize,
    /// Center index for `fundamental`.
    pub k: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

pub fn figure_spline(i1: Indicator, i2: Indicator) -> SplineConfig64 {
    SplineConfig64::simple(9, 1, i1, i2, FactorSpec64::constant_power(1.0, 1))
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            spline: figure_spline(Indicator::Zero, Indicator::Zero),
            samples: 721,
            k: 5,
            out: None,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        // serde_json messages already carry the line and column
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| parse_error(format!("config error: {e}")))?;
        cfg.spline
            .validate()
            .map_err(|e| parse_error(format!("config error: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| parse_error(format!("reading {}: {e}", path.display())))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }
}
