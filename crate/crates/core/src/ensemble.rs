//! Highly palindromic real symmetric Toeplitz matrices.
//!
//! For palindromicity degree `n` and dimension `N`, the first row is `2^n`
//! copies of a palindrome of length `P = N / 2^n`. Each palindrome reads
//! `b_0 b_1 ... b_{h-1} b_{h-1} ... b_1 b_0` with `h = P / 2`, so every free
//! entry `b_l` appears exactly `2^(n+1)` times in the first row.

use rand::distr::{Distribution, Uniform};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest palindromicity degree accepted; `2^(n+1)` must fit comfortably in a `usize`.
pub const MAX_DEGREE: u32 = 30;

/// Mean-zero, unit-variance law of the independent entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryDistribution {
    #[default]
    Gaussian,
    Rademacher,
    /// Uniform on `[-sqrt(3), sqrt(3)]`.
    #[serde(alias = "uniformscaled")]
    Uniform,
}

impl EntryDistribution {
    pub fn name(self) -> &'static str {
        match self {
            EntryDistribution::Gaussian => "gaussian",
            EntryDistribution::Rademacher => "rademacher",
            EntryDistribution::Uniform => "uniform",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(EntryDistribution::Gaussian),
            "rademacher" => Ok(EntryDistribution::Rademacher),
            "uniform" | "uniformscaled" => Ok(EntryDistribution::Uniform),
            other => Err(Error::InvalidArgument(format!(
                "unknown distribution {other:?} (expected gaussian, rademacher or uniform)"
            ))),
        }
    }

    /// k-th raw moment `E[X^k]`.
    pub fn moment(self, k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        match self {
            EntryDistribution::Gaussian => (1..k).step_by(2).map(f64::from).product(),
            EntryDistribution::Rademacher => 1.0,
            // E[X^k] = 3^(k/2) / (k + 1) on [-sqrt 3, sqrt 3]
            EntryDistribution::Uniform => 3f64.powi((k / 2) as i32) / f64::from(k + 1),
        }
    }

    /// All three supported laws are symmetric about zero.
    pub fn is_even(self) -> bool {
        true
    }

    fn draw<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            EntryDistribution::Gaussian => rng.sample(StandardNormal),
            EntryDistribution::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            EntryDistribution::Uniform => {
                let r = 3f64.sqrt();
                Uniform::new_inclusive(-r, r)
                    .expect("finite bounds")
                    .sample(rng)
            }
        }
    }
}

impl std::fmt::Display for EntryDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Checks that `dim` is a positive multiple of `2^(degree+1)`.
pub fn validate_spec(degree: u32, dim: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(Error::Dimension(format!(
            "palindromicity n = {degree} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    let block = 1usize << (degree + 1);
    if dim < block || !dim.is_multiple_of(block) {
        return Err(Error::Dimension(format!(
            "N must be a multiple of {block} (2^(n+1) with n = {degree}), got N = {dim}"
        )));
    }
    Ok(())
}

/// Maps matrix positions to free-entry indices.
///
/// With period `P = N / 2^n` and `d = |i - j| mod P`, the index is `d` when
/// `d < P/2` and `P - 1 - d` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkFunction {
    dim: usize,
    period: usize,
}

impl LinkFunction {
    pub fn new(degree: u32, dim: usize) -> Result<Self> {
        validate_spec(degree, dim)?;
        Ok(Self {
            dim,
            period: dim >> degree,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Palindrome length `N / 2^n`.
    pub fn period(&self) -> usize {
        self.period
    }

    /// Number of independent entries, `N / 2^(n+1)`.
    pub fn num_entries(&self) -> usize {
        self.period / 2
    }

    /// Entry index for a signed diagonal offset `delta = i - j`.
    #[inline]
    pub fn offset_index(&self, delta: i64) -> usize {
        let d = (delta.unsigned_abs() as usize) % self.period;
        if d < self.period / 2 {
            d
        } else {
            self.period - 1 - d
        }
    }

    /// Entry index for zero-based positions; no range check.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        self.offset_index(i as i64 - j as i64)
    }

    /// Dense `N x N` table of entry indices, row-major.
    pub fn table(&self) -> Vec<u32> {
        let n = self.dim;
        let row: Vec<u32> = (0..n).map(|d| self.offset_index(d as i64) as u32).collect();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(row[i.abs_diff(j)]);
            }
        }
        out
    }
}

/// One-based link function: entry index of position `(i, j)` for an `N x N` matrix of degree `n`.
pub fn link_index(i: usize, j: usize, dim: usize, degree: u32) -> Result<usize> {
    let link = LinkFunction::new(degree, dim)?;
    if i == 0 || j == 0 || i > dim || j > dim {
        return Err(Error::IndexOutOfRange { i, j, dim });
    }
    Ok(link.index(i - 1, j - 1))
}

/// Parameters of one ensemble: degree, dimension, entry law and RNG seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    degree: u32,
    dim: usize,
    distribution: EntryDistribution,
    seed: u64,
}

impl EnsembleSpec {
    pub fn new(
        degree: u32,
        dim: usize,
        distribution: EntryDistribution,
        seed: u64,
    ) -> Result<Self> {
        validate_spec(degree, dim)?;
        Ok(Self {
            degree,
            dim,
            distribution,
            seed,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn distribution(&self) -> EntryDistribution {
        self.distribution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn link(&self) -> LinkFunction {
        LinkFunction {
            dim: self.dim,
            period: self.dim >> self.degree,
        }
    }

    pub fn num_entries(&self) -> usize {
        self.link().num_entries()
    }

    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(self.degree, dim, self.distribution, self.seed)
    }
}

/// The independent entries `b_0, ..., b_{N/2^(n+1) - 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntryVector(Vec<f64>);

impl EntryVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|v| -v).collect())
    }
}

/// Draws the entries of sample `sample_index`.
///
/// The stream is ChaCha8 keyed by `seed` on stream `sample_index`, so every
/// sample is reproducible on its own regardless of scheduling. Specs that
/// differ only in `N` share a prefix of their entry draws.
pub fn sample_entries(spec: &EnsembleSpec, sample_index: u64) -> EntryVector {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(sample_index);
    let dist = spec.distribution;
    EntryVector(
        (0..spec.num_entries())
            .map(|_| dist.draw(&mut rng))
            .collect(),
    )
}

/// Dense symmetric palindromic Toeplitz matrix, row-major.
#[derive(Clone, Debug)]
pub struct PalindromicMatrix {
    spec: EnsembleSpec,
    entries: EntryVector,
    data: Vec<f64>,
}

impl PalindromicMatrix {
    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    pub fn entries(&self) -> &EntryVector {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    /// Zero-based element access.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.spec.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.spec.dim;
        &self.data[i * n..(i + 1) * n]
    }

    pub fn first_row(&self) -> &[f64] {
        self.row(0)
    }

    /// Row-major storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Sum of squared entries (squared Frobenius norm).
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .values()
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn build_matrix(spec: &EnsembleSpec, entries: EntryVector) -> Result<PalindromicMatrix> {
    let expected = spec.num_entries();
    if entries.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            actual: entries.len(),
        });
    }
    let n = spec.dim;
    let link = spec.link();
    let diagonals: Vec<f64> = (0..n)
        .map(|d| entries.values()[link.offset_index(d as i64)])
        .collect();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        data.extend((0..i).map(|j| diagonals[i - j]));
        data.extend_from_slice(&diagonals[..n - i]);
    }
    Ok(PalindromicMatrix {
        spec: *spec,
        entries,
        data,
    })
}

/// Samples and builds matrix number `sample_index` of the ensemble.
pub fn sample_matrix(spec: &EnsembleSpec, sample_index: u64) -> PalindromicMatrix {
    build_matrix(spec, sample_entries(spec, sample_index)).expect("sampled length matches spec")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(degree: u32, dim: usize) -> EnsembleSpec {
        EnsembleSpec::new(degree, dim, EntryDistribution::Gaussian, 7).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_spec(1, 8).is_ok());
        assert!(validate_spec(0, 2).is_ok());
        let err = validate_spec(1, 6).unwrap_err().to_string();
        assert!(err.contains("N must be a multiple of 4"), "{err}");
        assert!(validate_spec(2, 4).is_err());
        assert!(validate_spec(0, 0).is_err());
    }

    #[test]
    fn link_examples() {
        assert_eq!(link_index(3, 3, 8, 1).unwrap(), 0);
        assert_eq!(link_index(1, 4, 8, 1).unwrap(), 0);
        assert_eq!(link_index(1, 5, 8, 1).unwrap(), 0);
        assert_eq!(link_index(1, 2, 8, 1).unwrap(), 1);
        assert!(matches!(
            link_index(0, 1, 8, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(link_index(1, 9, 8, 1).is_err());
    }

    #[test]
    fn first_rows_match_display() {
        let m = build_matrix(&spec(1, 8), EntryVector::new(vec![10.0, 20.0])).unwrap();
        assert_eq!(
            m.first_row(),
            &[10.0, 20.0, 20.0, 10.0, 10.0, 20.0, 20.0, 10.0]
        );
        let m = build_matrix(&spec(0, 4), EntryVector::new(vec![10.0, 20.0])).unwrap();
        assert_eq!(m.first_row(), &[10.0, 20.0, 20.0, 10.0]);
        let z = build_matrix(&spec(2, 16), EntryVector::new(vec![0.0; 2])).unwrap();
        assert!(z.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn build_rejects_wrong_length() {
        let err = build_matrix(&spec(1, 8), EntryVector::new(vec![1.0; 3])).unwrap_err();
        assert!(matches!(
            err,
            Error::LengthMismatch {
                expected: 2,
                actual: 3
            }
        ));
    }

    #[test]
    fn each_entry_appears_2_pow_n_plus_1_times() {
        for (degree, dim) in [(0, 2), (0, 12), (1, 8), (1, 20), (2, 32), (3, 48)] {
            let link = LinkFunction::new(degree, dim).unwrap();
            let mut counts = vec![0usize; link.num_entries()];
            for j in 0..dim {
                counts[link.index(0, j)] += 1;
            }
            assert!(
                counts.iter().all(|&c| c == 1 << (degree + 1)),
                "{degree} {dim} {counts:?}"
            );
        }
    }

    #[test]
    fn rademacher_support_and_determinism() {
        let s = EnsembleSpec::new(1, 64, EntryDistribution::Rademacher, 3).unwrap();
        let a = sample_entries(&s, 5);
        assert!(a.values().iter().all(|&v| v == 1.0 || v == -1.0));
        assert_eq!(a, sample_entries(&s, 5));
        assert_ne!(a, sample_entries(&s, 6));
    }

    #[test]
    fn gaussian_mean_of_a_million_draws() {
        let s = EnsembleSpec::new(0, 2_000_000, EntryDistribution::Gaussian, 11).unwrap();
        let v = sample_entries(&s, 0);
        assert_eq!(v.len(), 1_000_000);
        let mean = v.values().iter().sum::<f64>() / v.len() as f64;
        assert!(mean.abs() < 0.004, "mean {mean}");
    }

    #[test]
    fn distribution_moments() {
        for d in [
            EntryDistribution::Gaussian,
            EntryDistribution::Rademacher,
            EntryDistribution::Uniform,
        ] {
            assert_eq!(d.moment(0), 1.0);
            assert_eq!(d.moment(1), 0.0);
            assert!((d.moment(2) - 1.0).abs() < 1e-15);
            assert_eq!(d.moment(5), 0.0);
        }
        assert_eq!(EntryDistribution::Gaussian.moment(4), 3.0);
        assert_eq!(EntryDistribution::Gaussian.moment(8), 105.0);
        assert_eq!(EntryDistribution::Rademacher.moment(6), 1.0);
        assert!((EntryDistribution::Uniform.moment(4) - 9.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_samples_within_support() {
        let s = EnsembleSpec::new(0, 20_000, EntryDistribution::Uniform, 1).unwrap();
        let v = sample_entries(&s, 0);
        let r = 3f64.sqrt();
        assert!(v.values().iter().all(|x| x.abs() <= r));
        let var = v.values().iter().map(|x| x * x).sum::<f64>() / v.len() as f64;
        assert!((var - 1.0).abs() < 0.05, "{var}");
    }
}
