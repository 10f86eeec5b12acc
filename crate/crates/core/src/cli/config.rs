//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ensemble::{validate_spec, EntryDistribution};
use crate::error::{Error, Result};
use crate::estimation::MomentPath;
use crate::spectra::{DEFAULT_BINS, DEFAULT_RANGE};

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_MOMENT: usize = 12;

/// Matrices per dimension: one count for all, or one per entry of `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SimCount {
    All(u64),
    PerDim(Vec<u64>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    /// Moment table CSV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Full JSON report.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    /// Directory receiving one histogram CSV per `N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistogramSettings {
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_range")]
    pub range: [f64; 2],
}

fn default_bins() -> usize {
    DEFAULT_BINS
}

fn default_range() -> [f64; 2] {
    [DEFAULT_RANGE.0, DEFAULT_RANGE.1]
}

impl Default for HistogramSettings {
    fn default() -> Self {
        Self {
            bins: default_bins(),
            range: default_range(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub n: u32,
    #[serde(rename = "N")]
    pub dims: Vec<usize>,
    pub num_matrices: SimCount,
    pub max_moment: usize,
    #[serde(default)]
    pub distribution: EntryDistribution,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: Outputs,
    /// Polynomial order in `1/N` for per-moment extrapolation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_order: Option<usize>,
    /// Weight fit points by `1/stderr^2`.
    #[serde(default)]
    pub weighted_fit: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<HistogramSettings>,
    #[serde(default)]
    pub moment_path: MomentPath,
    /// Adds elapsed seconds to the report, which then differs between runs.
    #[serde(default)]
    pub record_wall_time: bool,
}

impl RunConfig {
    pub fn new(n: u32, dims: Vec<usize>, num_matrices: u64, max_moment: usize) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n,
            dims,
            num_matrices: SimCount::All(num_matrices),
            max_moment,
            distribution: EntryDistribution::default(),
            seed: 0,
            outputs: Outputs::default(),
            fit_order: None,
            weighted_fit: false,
            histogram: None,
            moment_path: MomentPath::default(),
            record_wall_time: false,
        }
    }

    pub fn sims(&self, row: usize) -> u64 {
        match &self.num_matrices {
            SimCount::All(s) => *s,
            SimCount::PerDim(v) => v.get(row).copied().unwrap_or(0),
        }
    }

    /// Every semantic problem with the config, empty when it is valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.schema_version != SCHEMA_VERSION {
            out.push(format!(
                "schema_version must be {SCHEMA_VERSION}, got {}",
                self.schema_version
            ));
        }
        if self.dims.is_empty() {
            out.push("N must list at least one dimension".to_string());
        }
        for (i, &dim) in self.dims.iter().enumerate() {
            if let Err(e) = validate_spec(self.n, dim) {
                out.push(match e {
                    Error::Dimension(msg) => msg,
                    other => other.to_string(),
                });
            }
            if self.dims[..i].contains(&dim) {
                out.push(format!("N = {dim} is listed more than once"));
            }
        }
        match &self.num_matrices {
            SimCount::All(s) if *s < 2 => {
                out.push(format!("num_matrices must be at least 2, got {s}"))
            }
            SimCount::PerDim(v) => {
                if v.len() != self.dims.len() {
                    out.push(format!(
                        "num_matrices lists {} counts for {} dimensions",
                        v.len(),
                        self.dims.len()
                    ));
                }
                for s in v.iter().filter(|s| **s < 2) {
                    out.push(format!("num_matrices must be at least 2, got {s}"));
                }
            }
            _ => {}
        }
        if !self.max_moment.is_multiple_of(2) {
            out.push(format!("max_moment must be even, got {}", self.max_moment));
        }
        if self.max_moment == 0 || self.max_moment > MAX_MOMENT {
            out.push(format!(
                "max_moment must be between 2 and {MAX_MOMENT}, got {}",
                self.max_moment
            ));
        }
        if let Some(p) = self.fit_order {
            if self.dims.len() < p + 2 {
                out.push(format!(
                    "fit_order {p} needs at least {} dimensions, got {}",
                    p + 2,
                    self.dims.len()
                ));
            }
        }
        if let Some(h) = &self.histogram {
            if h.bins == 0 {
                out.push("histogram.bins must be positive".to_string());
            }
            let [lo, hi] = h.range;
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                out.push(format!(
                    "histogram.range must be increasing, got [{lo}, {hi}]"
                ));
            }
            if self.moment_path == MomentPath::Trace {
                out.push("histograms need moment_path \"eigen\"".to_string());
            }
        }
        if self.outputs.histogram_dir.is_some() && self.histogram.is_none() {
            out.push("outputs.histogram_dir is set but histogram is not".to_string());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "{} problem(s):\n  - {}",
                v.len(),
                v.join("\n  - ")
            )))
        }
    }
}

/// A validated config together with the exact text it was read from.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub text: String,
    pub config: RunConfig,
}

impl LoadedConfig {
    pub fn parse(text: String) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(&text).map_err(|e| {
            Error::Config(format!(
                "parse error at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        config.validate()?;
        Ok(Self { text, config })
    }

    pub fn from_config(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let text = serde_json::to_string_pretty(&config)?;
        Ok(Self { text, config })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}
