use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::Result;
use crate::estimation::{ExtrapolationFit, MomentTable};
use crate::spectra::Histogram;

use super::commands::ConfigurationsReport;

#[derive(Clone, Debug, Serialize)]
pub struct ReportMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl ReportMetadata {
    pub fn new(wall_time_seconds: Option<f64>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            wall_time_seconds,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentFit {
    pub moment: usize,
    pub fit: ExtrapolationFit,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimHistogram {
    #[serde(rename = "N")]
    pub dim: usize,
    pub histogram: Histogram,
}

/// Everything a `simulate` run produced. `config` is the config text
/// exactly as read, minus surrounding whitespace.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub metadata: ReportMetadata,
    pub config: Box<RawValue>,
    pub moments: MomentTable,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fits: Vec<MomentFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub configurations: Option<ConfigurationsReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub histograms: Vec<DimHistogram>,
}

impl ReportDocument {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Echoed config text of a serialized report.
pub fn config_echo(report_json: &str) -> Result<String> {
    #[derive(serde::Deserialize)]
    struct Echo<'a> {
        #[serde(borrow)]
        config: &'a RawValue,
    }
    let echo: Echo = serde_json::from_str(report_json)?;
    Ok(echo.config.get().to_string())
}
