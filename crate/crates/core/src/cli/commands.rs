//! Command implementations. Each returns data; the front end decides where
//! it is written.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use super::config::{LoadedConfig, RunConfig};
use super::report::{DimHistogram, MomentFit, ReportDocument, ReportMetadata};
use crate::ensemble::{EnsembleSpec, EntryDistribution, LinkFunction};
use crate::error::{Error, Result};
use crate::estimation::{
    default_order, extrapolate, run_ensemble, ExtrapolationFit, MomentTable, RunOptions,
};
use crate::matchings::{
    adjacent_lower_value, configuration_contribution, conjectured_moment, double_factorial,
    enumerate_pair_matchings, exact_expected_moment, fourth_moment_limit, lower_bound_moment,
    upper_bound_moment, ConfigurationReport, OffsetFilter, PairMatching,
};
use crate::spectra::histogram;

pub const MAX_FORMULA_M: u32 = 30;
pub const MAX_FORMULA_N: u32 = 20;

/// Outcome of `validate`.
pub fn cmd_validate(path: &Path) -> Result<RunConfig> {
    Ok(LoadedConfig::load(path)?.config)
}

pub struct SimulationOutput {
    pub table: MomentTable,
    pub report: ReportDocument,
}

/// Runs the ensemble at every configured `N`.
pub fn cmd_simulate(loaded: &LoadedConfig) -> Result<SimulationOutput> {
    let start = Instant::now();
    let config = &loaded.config;
    config.validate()?;
    let options = RunOptions {
        path: config.moment_path,
        pool_eigenvalues: config.histogram.is_some(),
        keep_samples: false,
    };
    let mut runs = Vec::with_capacity(config.dims.len());
    let mut histograms = Vec::new();
    for (row, &dim) in config.dims.iter().enumerate() {
        let spec = EnsembleSpec::new(config.n, dim, config.distribution, config.seed)?;
        let run = run_ensemble(&spec, config.sims(row), config.max_moment, &options)?;
        if let (Some(settings), Some(pool)) = (&config.histogram, &run.pool) {
            let h = histogram(pool, settings.bins, (settings.range[0], settings.range[1]))?;
            histograms.push(DimHistogram { dim, histogram: h });
        }
        runs.push(run);
    }
    let table = MomentTable::from_runs(&runs);
    let mut fits = Vec::new();
    if let Some(order) = config.fit_order {
        for k in (2..=config.max_moment).step_by(2) {
            fits.push(MomentFit {
                moment: k,
                fit: fit_column(&table, k, Some(order), config.weighted_fit)?,
            });
        }
    }
    let wall = config
        .record_wall_time
        .then(|| start.elapsed().as_secs_f64());
    let report = ReportDocument {
        metadata: ReportMetadata::new(wall),
        config: RawValue::from_string(loaded.text.trim().to_string())?,
        moments: table.clone(),
        fits,
        configurations: None,
        histograms,
    };
    Ok(SimulationOutput { table, report })
}

/// Fits moment `k` of `table`; `order` defaults to `min(3, rows - 2)`.
pub fn fit_column(
    table: &MomentTable,
    k: usize,
    order: Option<usize>,
    weighted: bool,
) -> Result<ExtrapolationFit> {
    let column = table.column(k);
    if column.is_empty() {
        return Err(Error::InvalidArgument(format!("no rows for moment {k}")));
    }
    let order = order.unwrap_or_else(|| default_order(column.len()));
    let points: Vec<(f64, f64)> = column.iter().map(|p| (p.0, p.1)).collect();
    let weights: Option<Vec<f64>> =
        weighted.then(|| column.iter().map(|p| 1.0 / (p.2 * p.2)).collect());
    extrapolate(&points, order, weights.as_deref())
}

/// Fits moment `k` from a moment-table CSV file.
pub fn cmd_extrapolate(
    csv_path: &Path,
    k: usize,
    order: Option<usize>,
    weighted: bool,
) -> Result<ExtrapolationFit> {
    let file = std::fs::File::open(csv_path)
        .map_err(|e| Error::Config(format!("{}: {e}", csv_path.display())))?;
    let table = MomentTable::read_csv(file)?;
    fit_column(&table, k, order, weighted)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    pub value: f64,
    #[serde(rename = "N")]
    pub dim: usize,
    pub n: u32,
    pub k: u32,
    pub distribution: EntryDistribution,
}

pub fn cmd_exact(
    degree: u32,
    dim: usize,
    k: u32,
    distribution: EntryDistribution,
) -> Result<ExactReport> {
    Ok(ExactReport {
        value: exact_expected_moment(dim, degree, k, distribution)?,
        dim,
        n: degree,
        k,
        distribution,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaRow {
    pub m: u32,
    pub n: u32,
    pub moment: u32,
    pub fourth_moment_limit: f64,
    /// Limiting contribution of the fully adjacent configuration.
    pub adjacent_contribution: f64,
    /// Only defined for `n = 1`.
    pub conjectured_moment: Option<f64>,
    pub lower_bound: f64,
    pub lower_bound_unconditional: f64,
    pub upper_bound: f64,
    /// `(2m-1)!!`, the standard normal moment.
    pub gaussian_moment: f64,
}

/// Closed-form values over the inclusive ranges of `m` and `n`.
pub fn cmd_formulas(ms: (u32, u32), ns: (u32, u32)) -> Result<Vec<FormulaRow>> {
    if ms.0 == 0 || ms.0 > ms.1 || ns.0 > ns.1 {
        return Err(Error::InvalidArgument(format!(
            "bad ranges m = {}..{}, n = {}..{}",
            ms.0, ms.1, ns.0, ns.1
        )));
    }
    if ms.1 > MAX_FORMULA_M {
        return Err(Error::Guard {
            what: format!("formulas up to m = {}", ms.1),
            cost: f64::from(ms.1),
            limit: f64::from(MAX_FORMULA_M),
        });
    }
    if ns.1 > MAX_FORMULA_N {
        return Err(Error::Guard {
            what: format!("formulas up to n = {}", ns.1),
            cost: f64::from(ns.1),
            limit: f64::from(MAX_FORMULA_N),
        });
    }
    let mut rows = Vec::new();
    for n in ns.0..=ns.1 {
        for m in ms.0..=ms.1 {
            rows.push(FormulaRow {
                m,
                n,
                moment: 2 * m,
                fourth_moment_limit: fourth_moment_limit(n),
                adjacent_contribution: adjacent_lower_value(m, n),
                conjectured_moment: conjectured_moment(m, n).ok(),
                lower_bound: lower_bound_moment(m, n, true),
                lower_bound_unconditional: lower_bound_moment(m, n, false),
                upper_bound: upper_bound_moment(m, n),
                gaussian_moment: double_factorial(2 * i64::from(m) - 1) as f64,
            });
        }
    }
    Ok(rows)
}

/// Offset restriction in units of the period, resolved per `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "c")]
pub enum FilterSpec {
    NoCross(i64),
    Cross(i64),
}

impl FilterSpec {
    /// Parses `no-cross:C` or `cross:C`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidArgument(format!("filter must be no-cross:C or cross:C, got {s:?}"));
        let (kind, c) = s.split_once(':').ok_or_else(bad)?;
        let c: i64 = c.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "no-cross" => Ok(FilterSpec::NoCross(c)),
            "cross" => Ok(FilterSpec::Cross(c)),
            _ => Err(bad()),
        }
    }

    pub fn resolve(self, link: &LinkFunction) -> OffsetFilter {
        match self {
            FilterSpec::NoCross(c) => OffsetFilter::no_cross(c, link),
            FilterSpec::Cross(c) => OffsetFilter::cross(c, link),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchingSeries {
    pub matching: PairMatching,
    pub label: String,
    pub reports: Vec<ConfigurationReport>,
    /// `contribution ~ limit + C/N` over the listed `N`; needs three or more.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contribution_fit: Option<ExtrapolationFit>,
    /// The same for the all-negative-sign main term.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub main_term_fit: Option<ExtrapolationFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigurationsReport {
    pub n: u32,
    pub moment: usize,
    #[serde(rename = "N")]
    pub dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterSpec>,
    pub matchings: Vec<MatchingSeries>,
}

/// Per-matching census of the `size`-th moment across `dims`. With a filter,
/// only matchings whose first pair is adjacent are reported.
pub fn cmd_configurations(
    degree: u32,
    dims: &[usize],
    size: usize,
    filter: Option<FilterSpec>,
) -> Result<ConfigurationsReport> {
    if dims.is_empty() {
        return Err(Error::InvalidArgument("no dimensions given".into()));
    }
    let mut matchings = Vec::new();
    for matching in enumerate_pair_matchings(size)? {
        if filter.is_some() && !OffsetFilter::applies_to(&matching) {
            continue;
        }
        let mut reports = Vec::with_capacity(dims.len());
        for &dim in dims {
            let link = LinkFunction::new(degree, dim)?;
            let f = filter.map(|f| f.resolve(&link));
            reports.push(configuration_contribution(dim, degree, &matching, f)?);
        }
        let fit = |value: fn(&ConfigurationReport) -> f64| {
            let pts: Vec<(f64, f64)> = reports.iter().map(|r| (r.dim as f64, value(r))).collect();
            (pts.len() >= 3)
                .then(|| extrapolate(&pts, 1, None))
                .transpose()
        };
        matchings.push(MatchingSeries {
            label: matching.label(),
            contribution_fit: fit(|r| r.contribution)?,
            main_term_fit: fit(|r| r.main_term)?,
            matching,
            reports,
        });
    }
    Ok(ConfigurationsReport {
        n: degree,
        moment: size,
        dims: dims.to_vec(),
        filter,
        matchings,
    })
}

/// Files written by a command, removed again if a later step fails.
#[derive(Default)]
pub struct OutputSet {
    written: Vec<PathBuf>,
    dirs: Vec<PathBuf>,
}

impl OutputSet {
    pub fn write(&mut self, path: &Path, contents: &str) -> Result<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            self.create_dir(parent)?;
        }
        std::fs::write(path, contents)?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    pub fn create_dir(&mut self, dir: &Path) -> Result<()> {
        if !dir.exists() {
            std::fs::create_dir_all(dir)?;
            self.dirs.push(dir.to_path_buf());
        }
        Ok(())
    }

    pub fn remove_all(self) {
        for path in self.written.iter().rev() {
            let _ = std::fs::remove_file(path);
        }
        for dir in self.dirs.iter().rev() {
            let _ = std::fs::remove_dir(dir);
        }
    }
}

/// Writes every configured output of a simulation, or none of them.
pub fn write_simulation(config: &RunConfig, output: &SimulationOutput) -> Result<Vec<PathBuf>> {
    let mut set = OutputSet::default();
    let result = (|| {
        if let Some(p) = &config.outputs.csv {
            set.write(p, &output.table.to_csv())?;
        }
        if let Some(p) = &config.outputs.report {
            set.write(p, &output.report.to_json()?)?;
        }
        if let Some(dir) = &config.outputs.histogram_dir {
            set.create_dir(dir)?;
            for h in &output.report.histograms {
                set.write(
                    &dir.join(format!("hist_N{}.csv", h.dim)),
                    &h.histogram.to_csv(),
                )?;
            }
        }
        Ok(())
    })();
    match result {
        Ok(()) => Ok(set.written),
        Err(e) => {
            set.remove_all();
            Err(e)
        }
    }
}
