use serde::{Deserialize, Serialize};

use super::monte_carlo::{run_ensemble, MomentEstimate, RunOptions};
use crate::ensemble::EnsembleSpec;
use crate::error::{Error, Result};

/// Fraction of `pool` at or above `threshold`.
pub fn tail_mass(pool: &[f64], threshold: f64) -> f64 {
    if pool.is_empty() {
        return 0.0;
    }
    pool.iter().filter(|&&x| x >= threshold).count() as f64 / pool.len() as f64
}

/// Standard normal upper tail `P(Z >= threshold)`.
pub fn gaussian_tail(threshold: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(threshold / std::f64::consts::SQRT_2)
}

/// Binomial standard error of a tail fraction over `count` values.
pub fn tail_stderr(fraction: f64, count: usize) -> f64 {
    (fraction * (1.0 - fraction) / count as f64).sqrt()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OddMomentRow {
    #[serde(rename = "N")]
    pub dim: usize,
    pub estimate: MomentEstimate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OddMomentDecay {
    pub order: usize,
    pub rows: Vec<OddMomentRow>,
    /// Log-log slope of `|mean|` against `N`, over rows where the mean
    /// clears three standard errors. `None` when fewer than two do.
    pub exponent: Option<f64>,
}

impl OddMomentDecay {
    /// True when every mean is within `sigmas` standard errors of zero.
    pub fn consistent_with_zero(&self, sigmas: f64) -> bool {
        self.rows
            .iter()
            .all(|r| r.estimate.mean.abs() <= sigmas * r.estimate.stderr)
    }
}

/// Odd moment `k` across dimensions.
pub fn odd_moment_decay(
    spec: &EnsembleSpec,
    dims: &[usize],
    num_matrices: u64,
    k: usize,
) -> Result<OddMomentDecay> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "odd moment order expected, got {k}"
        )));
    }
    let mut rows = Vec::with_capacity(dims.len());
    for &dim in dims {
        let run = run_ensemble(
            &spec.with_dim(dim)?,
            num_matrices,
            k,
            &RunOptions::default(),
        )?;
        rows.push(OddMomentRow {
            dim,
            estimate: run.estimate(k),
        });
    }
    let significant: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.estimate.mean.abs() > 3.0 * r.estimate.stderr)
        .map(|r| (r.dim as f64, r.estimate.mean.abs()))
        .collect();
    Ok(OddMomentDecay {
        order: k,
        rows,
        exponent: log_log_slope(&significant),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VarianceRow {
    #[serde(rename = "N")]
    pub dim: usize,
    /// Unbiased sample variance of the per-matrix moment.
    pub variance: f64,
    /// Standard error of `variance`.
    pub stderr: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VarianceReport {
    pub order: usize,
    pub num_matrices: u64,
    pub rows: Vec<VarianceRow>,
    /// `(v[i] - v[i+1]) / sqrt(se[i]^2 + se[i+1]^2)` for consecutive rows.
    pub drop_z: Vec<f64>,
}

impl VarianceReport {
    /// Every consecutive drop is positive and at least `sigmas` noise units.
    pub fn decreasing(&self, sigmas: f64) -> bool {
        self.drop_z.iter().all(|&z| z > 0.0 && z >= sigmas)
    }

    pub fn slope(&self) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .rows
            .iter()
            .map(|r| (r.dim as f64, r.variance))
            .collect();
        log_log_slope(&pts)
    }
}

/// Sample variance of `x` and its standard error from the fourth central moment.
pub fn variance_with_stderr(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    let var = m2 * n / (n - 1.0);
    let se = ((m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt();
    (var, se)
}

/// Variance of the per-matrix `k`-th moment across dimensions.
pub fn variance_diagnostic(
    spec: &EnsembleSpec,
    dims: &[usize],
    num_matrices: u64,
    k: usize,
) -> Result<VarianceReport> {
    let options = RunOptions {
        keep_samples: true,
        ..Default::default()
    };
    let mut rows = Vec::with_capacity(dims.len());
    for &dim in dims {
        let run = run_ensemble(&spec.with_dim(dim)?, num_matrices, k, &options)?;
        let values: Vec<f64> = run.samples.unwrap().iter().map(|s| s[k]).collect();
        let (variance, stderr) = variance_with_stderr(&values);
        rows.push(VarianceRow {
            dim,
            variance,
            stderr,
        });
    }
    let drop_z = rows
        .windows(2)
        .map(|w| {
            let noise = w[0].stderr.hypot(w[1].stderr);
            let drop = w[0].variance - w[1].variance;
            if noise == 0.0 {
                if drop > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            } else {
                drop / noise
            }
        })
        .collect();
    Ok(VarianceReport {
        order: k,
        num_matrices,
        rows,
        drop_z,
    })
}
