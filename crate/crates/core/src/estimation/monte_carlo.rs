//! Ensemble averages over sampled matrices.
//!
//! Samples are grouped in fixed chunks of consecutive sample indices. Each
//! chunk is reduced sequentially, and chunk summaries are merged along a
//! fixed binary tree, so the output bits do not depend on how many worker
//! threads ran the chunks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{sample_matrix, EnsembleSpec};
use crate::error::{Error, Result};
use crate::spectra::{eigenvalues_symmetric, empirical_moments, trace_power_moment};

/// Samples per reduction leaf.
pub const CHUNK: u64 = 64;

/// How each matrix's moments are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentPath {
    #[default]
    Eigen,
    Trace,
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub path: MomentPath,
    /// Keep every normalized eigenvalue (eigen path only), in sample order.
    pub pool_eigenvalues: bool,
    /// Keep each sample's moment vector, in sample order.
    pub keep_samples: bool,
}

/// Ensemble estimate of one moment order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub order: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(num_samples)`.
    pub stderr: f64,
    pub num_samples: u64,
}

/// Running mean and sum of squared deviations per moment order.
#[derive(Clone, Debug, PartialEq)]
struct Accumulator {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Accumulator {
    fn new(width: usize) -> Self {
        Self {
            count: 0,
            mean: vec![0.0; width],
            m2: vec![0.0; width],
        }
    }

    fn push(&mut self, x: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((mean, m2), &v) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let delta = v - *mean;
            *mean += delta / n;
            *m2 += delta * (v - *mean);
        }
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        let count = a.count + b.count;
        let (na, nb, n) = (a.count as f64, b.count as f64, count as f64);
        let mut out = Self::new(a.mean.len());
        out.count = count;
        for k in 0..a.mean.len() {
            let delta = b.mean[k] - a.mean[k];
            out.mean[k] = if delta == 0.0 {
                a.mean[k]
            } else {
                a.mean[k] + delta * nb / n
            };
            out.m2[k] = a.m2[k] + b.m2[k] + delta * delta * na * nb / n;
        }
        out
    }
}

fn tree_merge(mut parts: Vec<Accumulator>, width: usize) -> Accumulator {
    if parts.is_empty() {
        return Accumulator::new(width);
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => Accumulator::merge(a, b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop().unwrap()
}

/// Output of one ensemble run at a single `(n, N)`.
#[derive(Clone, Debug)]
pub struct EnsembleRun {
    pub spec: EnsembleSpec,
    pub num_samples: u64,
    pub mean: Vec<f64>,
    /// Unbiased sample variance of each per-matrix moment.
    pub variance: Vec<f64>,
    pub pool: Option<Vec<f64>>,
    pub samples: Option<Vec<Vec<f64>>>,
}

impl EnsembleRun {
    pub fn k_max(&self) -> usize {
        self.mean.len() - 1
    }

    pub fn estimate(&self, k: usize) -> MomentEstimate {
        MomentEstimate {
            order: k,
            mean: self.mean[k],
            stderr: (self.variance[k] / self.num_samples as f64).sqrt(),
            num_samples: self.num_samples,
        }
    }

    pub fn estimates(&self) -> Vec<MomentEstimate> {
        (0..self.mean.len()).map(|k| self.estimate(k)).collect()
    }
}

/// Moments `0..=k_max` of matrix number `sample_index`.
pub fn sample_moments(
    spec: &EnsembleSpec,
    sample_index: u64,
    k_max: usize,
    path: MomentPath,
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let matrix = sample_matrix(spec, sample_index);
    match path {
        MomentPath::Eigen => {
            let spectrum = eigenvalues_symmetric(&matrix).map_err(|e| Error::Sample {
                sample_index,
                source: Box::new(e),
            })?;
            let moments = empirical_moments(&spectrum, k_max).values().to_vec();
            Ok((moments, Some(spectrum.normalized())))
        }
        MomentPath::Trace => {
            let moments = (0..=k_max as u32)
                .map(|k| trace_power_moment(&matrix, k))
                .collect();
            Ok((moments, None))
        }
    }
}

struct ChunkResult {
    acc: Accumulator,
    pool: Vec<f64>,
    samples: Vec<Vec<f64>>,
}

pub fn run_ensemble(
    spec: &EnsembleSpec,
    num_matrices: u64,
    k_max: usize,
    options: &RunOptions,
) -> Result<EnsembleRun> {
    if num_matrices < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 matrices for a standard error, got {num_matrices}"
        )));
    }
    let width = k_max + 1;
    let chunks = num_matrices.div_ceil(CHUNK);
    let results: Vec<Result<ChunkResult>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut out = ChunkResult {
                acc: Accumulator::new(width),
                pool: Vec::new(),
                samples: Vec::new(),
            };
            let end = ((c + 1) * CHUNK).min(num_matrices);
            for index in c * CHUNK..end {
                let (moments, normalized) = sample_moments(spec, index, k_max, options.path)?;
                out.acc.push(&moments);
                if options.pool_eigenvalues {
                    if let Some(ev) = normalized {
                        out.pool.extend(ev);
                    }
                }
                if options.keep_samples {
                    out.samples.push(moments);
                }
            }
            Ok(out)
        })
        .collect();

    let mut accs = Vec::with_capacity(results.len());
    let mut pool = options.pool_eigenvalues.then(Vec::new);
    let mut samples = options.keep_samples.then(Vec::new);
    for r in results {
        let r = r?;
        accs.push(r.acc);
        if let Some(p) = pool.as_mut() {
            p.extend(r.pool);
        }
        if let Some(s) = samples.as_mut() {
            s.extend(r.samples);
        }
    }
    let total = tree_merge(accs, width);
    let denom = (total.count - 1) as f64;
    Ok(EnsembleRun {
        spec: *spec,
        num_samples: total.count,
        variance: total.m2.iter().map(|m2| m2 / denom).collect(),
        mean: total.mean,
        pool,
        samples,
    })
}

/// Mean and standard error of the normalized moments `0..=k_max` over
/// `num_matrices` samples (eigenvalue path).
pub fn monte_carlo_moments(
    spec: &EnsembleSpec,
    num_matrices: u64,
    k_max: usize,
) -> Result<Vec<MomentEstimate>> {
    Ok(run_ensemble(spec, num_matrices, k_max, &RunOptions::default())?.estimates())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::EntryDistribution;

    fn spec(degree: u32, dim: usize, seed: u64) -> EnsembleSpec {
        EnsembleSpec::new(degree, dim, EntryDistribution::Gaussian, seed).unwrap()
    }

    #[test]
    fn zeroth_moment_is_exact() {
        let est = monte_carlo_moments(&spec(1, 16, 1), 150, 4).unwrap();
        assert_eq!(est[0].mean, 1.0);
        assert_eq!(est[0].stderr, 0.0);
        assert_eq!(est[0].num_samples, 150);
    }

    #[test]
    fn rejects_single_sample() {
        assert!(monte_carlo_moments(&spec(1, 16, 1), 1, 4).is_err());
    }

    #[test]
    fn accumulator_matches_two_pass() {
        let rows: Vec<Vec<f64>> = (0..37)
            .map(|i| vec![1.0, (i as f64 * 0.37).sin(), (i as f64).sqrt()])
            .collect();
        let mut parts = Vec::new();
        for chunk in rows.chunks(5) {
            let mut a = Accumulator::new(3);
            for r in chunk {
                a.push(r);
            }
            parts.push(a);
        }
        let acc = tree_merge(parts, 3);
        for k in 0..3 {
            let mean = rows.iter().map(|r| r[k]).sum::<f64>() / 37.0;
            let ss = rows.iter().map(|r| (r[k] - mean).powi(2)).sum::<f64>();
            assert!((acc.mean[k] - mean).abs() < 1e-13);
            assert!((acc.m2[k] - ss).abs() < 1e-11);
        }
        assert_eq!(acc.mean[0], 1.0);
        assert_eq!(acc.m2[0], 0.0);
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let s = spec(1, 32, 5);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo_moments(&s, 300, 6).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn trace_path_agrees_with_eigen_path() {
        let s = spec(2, 32, 9);
        let a = run_ensemble(&s, 20, 6, &RunOptions::default()).unwrap();
        let b = run_ensemble(
            &s,
            20,
            6,
            &RunOptions {
                path: MomentPath::Trace,
                ..Default::default()
            },
        )
        .unwrap();
        for k in (0..=6).step_by(2) {
            assert!((a.mean[k] - b.mean[k]).abs() < 1e-9 * a.mean[k]);
        }
    }

    #[test]
    fn pool_and_samples_are_ordered() {
        let s = spec(0, 8, 2);
        let opts = RunOptions {
            pool_eigenvalues: true,
            keep_samples: true,
            ..Default::default()
        };
        let run = run_ensemble(&s, 130, 2, &opts).unwrap();
        assert_eq!(run.pool.as_ref().unwrap().len(), 130 * 8);
        let samples = run.samples.as_ref().unwrap();
        assert_eq!(samples.len(), 130);
        let (m, _) = sample_moments(&s, 129, 2, MomentPath::Eigen).unwrap();
        assert_eq!(samples[129], m);
    }
}
