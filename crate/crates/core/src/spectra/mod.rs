//! Spectra and normalized moments of sampled matrices.
//!
//! Two independent routes to the k-th moment are provided: through the
//! eigenvalues (`empirical_moments`) and through `trace(A^k)` by dense
//! multiplication (`trace_power_moment`).

pub mod eigen;
mod histogram;

pub use histogram::{histogram, Histogram, DEFAULT_BINS, DEFAULT_RANGE};

use crate::ensemble::PalindromicMatrix;
use crate::error::Result;

/// Sorted eigenvalues of one `N x N` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    raw: Vec<f64>,
}

impl Spectrum {
    /// Wraps an eigenvalue list; sorts ascending.
    pub fn from_eigenvalues(mut raw: Vec<f64>) -> Self {
        raw.sort_by(f64::total_cmp);
        Self { raw }
    }

    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn dim(&self) -> usize {
        self.raw.len()
    }

    /// Eigenvalues divided by `sqrt(N)`.
    pub fn normalized(&self) -> Vec<f64> {
        let s = (self.raw.len() as f64).sqrt();
        self.raw.iter().map(|l| l / s).collect()
    }
}

pub fn eigenvalues_symmetric(matrix: &PalindromicMatrix) -> Result<Spectrum> {
    let ev = eigen::symmetric_eigenvalues(matrix.as_slice(), matrix.dim())?;
    Ok(Spectrum { raw: ev })
}

/// Normalized moments `M_k = N^-(k/2+1) sum lambda_i^k`, `k = 0..=k_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector(Vec<f64>);

impl MomentVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn get(&self, k: usize) -> f64 {
        self.0[k]
    }

    pub fn k_max(&self) -> usize {
        self.0.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

pub fn empirical_moments(spectrum: &Spectrum, k_max: usize) -> MomentVector {
    MomentVector(power_means(&spectrum.normalized(), k_max, false))
}

/// `(1/N) sum |lambda_i / sqrt N|^k`; the natural scale for comparing odd moments.
pub fn absolute_moments(spectrum: &Spectrum, k_max: usize) -> MomentVector {
    MomentVector(power_means(&spectrum.normalized(), k_max, true))
}

fn power_means(xs: &[f64], k_max: usize, absolute: bool) -> Vec<f64> {
    let mut sums = vec![0.0; k_max + 1];
    for &x in xs {
        let x = if absolute { x.abs() } else { x };
        let mut pow = 1.0;
        for s in sums.iter_mut().skip(1) {
            pow *= x;
            *s += pow;
        }
    }
    let n = xs.len().max(1) as f64;
    let mut out: Vec<f64> = sums.into_iter().map(|s| s / n).collect();
    out[0] = 1.0;
    out
}

/// `trace(A^k) / N^(k/2+1)` without diagonalizing.
pub fn trace_power_moment(matrix: &PalindromicMatrix, k: u32) -> f64 {
    let n = matrix.dim();
    trace_power(matrix.as_slice(), n, k) / (n as f64).powf(k as f64 / 2.0 + 1.0)
}

/// `trace(A^k)` for a row-major `n x n` matrix.
///
/// Forms `P = A^(k/2)` by repeated squaring and contracts `trace(P P)` or
/// `trace(P (P A))` elementwise.
pub fn trace_power(a: &[f64], n: usize, k: u32) -> f64 {
    if k == 0 {
        return n as f64;
    }
    if k == 1 {
        return (0..n).map(|i| a[i * n + i]).sum();
    }
    let half = matrix_power(a, n, k / 2);
    let other = if k.is_multiple_of(2) {
        half.clone()
    } else {
        matmul(&half, a, n)
    };
    // trace(X Y) = sum_ij X_ij Y_ji
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += half[i * n + j] * other[j * n + i];
        }
    }
    total
}

fn matrix_power(a: &[f64], n: usize, mut e: u32) -> Vec<f64> {
    let mut base = a.to_vec();
    let mut acc: Option<Vec<f64>> = None;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(x) => matmul(&x, &base, n),
            });
        }
        e >>= 1;
        if e > 0 {
            base = matmul(&base, &base, n);
        }
    }
    acc.unwrap_or_else(|| {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        id
    })
}

fn matmul(x: &[f64], y: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        let orow = &mut out[i * n..(i + 1) * n];
        for k in 0..n {
            let xik = x[i * n + k];
            if xik == 0.0 {
                continue;
            }
            for (o, &ykj) in orow.iter_mut().zip(&y[k * n..(k + 1) * n]) {
                *o += xik * ykj;
            }
        }
    }
    out
}
