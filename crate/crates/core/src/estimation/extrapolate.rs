//! Polynomial extrapolation in `1/N` to the `N -> infinity` limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares fit of `M(N) = c0 + c1/N + ... + cp/N^p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationFit {
    pub order: usize,
    /// `c0`.
    pub limit: f64,
    /// `c0..=cp`.
    pub coefficients: Vec<f64>,
    /// Weighted residual 2-norm.
    pub residual: f64,
}

impl ExtrapolationFit {
    pub fn predict(&self, dim: f64) -> f64 {
        let x = 1.0 / dim;
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }
}

/// Default fit order for `rows` data points.
pub fn default_order(rows: usize) -> usize {
    rows.saturating_sub(2).min(3)
}

/// Fits `(N, moment)` points with polynomial order `order` in `1/N`.
///
/// Needs at least `order + 2` points so that a residual is defined.
/// Optional `weights` multiply each squared residual.
pub fn extrapolate(
    points: &[(f64, f64)],
    order: usize,
    weights: Option<&[f64]>,
) -> Result<ExtrapolationFit> {
    let rows = points.len();
    let cols = order + 1;
    if rows < order + 2 {
        return Err(Error::InsufficientData {
            needed: order + 2,
            got: rows,
        });
    }
    if let Some(w) = weights {
        if w.len() != rows {
            return Err(Error::LengthMismatch {
                expected: rows,
                actual: w.len(),
            });
        }
        if let Some(bad) = w.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "weights must be positive and finite, got {bad}"
            )));
        }
    }
    for &(dim, value) in points {
        if !(dim.is_finite() && dim > 0.0 && value.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bad data point (N = {dim}, moment = {value})"
            )));
        }
    }

    // column-major design matrix, rows scaled by sqrt(weight)
    let mut a = vec![0.0; rows * cols];
    let mut b = vec![0.0; rows];
    for (r, &(dim, value)) in points.iter().enumerate() {
        let s = weights.map_or(1.0, |w| w[r].sqrt());
        let x = 1.0 / dim;
        let mut pow = 1.0;
        for c in 0..cols {
            a[c * rows + r] = s * pow;
            pow *= x;
        }
        b[r] = s * value;
    }
    // unit column norms; undone after the solve
    let mut scale = vec![0.0; cols];
    for c in 0..cols {
        let col = &mut a[c * rows..(c + 1) * rows];
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        scale[c] = norm;
        col.iter_mut().for_each(|v| *v /= norm);
    }

    // Householder QR, applying each reflector to b as it is formed
    let mut rdiag = vec![0.0; cols];
    for c in 0..cols {
        let norm = a[c * rows + c..(c + 1) * rows]
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
        if norm <= 1e-12 {
            return Err(Error::RankDeficient { column: c });
        }
        let head = a[c * rows + c];
        let alpha = if head > 0.0 { -norm } else { norm };
        a[c * rows + c] = head - alpha;
        let vnorm2 = norm * norm - head * head + (head - alpha) * (head - alpha);
        rdiag[c] = alpha;
        let (left, right) = a.split_at_mut((c + 1) * rows);
        let v = &left[c * rows + c..];
        for j in c + 1..cols {
            let col = &mut right[(j - c - 1) * rows + c..(j - c) * rows];
            let f = 2.0 * dot(v, col) / vnorm2;
            col.iter_mut().zip(v).for_each(|(x, vi)| *x -= f * vi);
        }
        let f = 2.0 * dot(v, &b[c..]) / vnorm2;
        b[c..].iter_mut().zip(v).for_each(|(x, vi)| *x -= f * vi);
    }

    // back substitution in the scaled basis
    let mut coef = vec![0.0; cols];
    for c in (0..cols).rev() {
        let mut s = b[c];
        for j in c + 1..cols {
            s -= a[j * rows + c] * coef[j];
        }
        coef[c] = s / rdiag[c];
    }
    let residual = b[cols..].iter().map(|v| v * v).sum::<f64>().sqrt();
    let coefficients: Vec<f64> = coef.iter().zip(&scale).map(|(c, s)| c / s).collect();
    Ok(ExtrapolationFit {
        order,
        limit: coefficients[0],
        coefficients,
        residual,
    })
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(coefs: &[f64], dims: &[f64]) -> Vec<(f64, f64)> {
        dims.iter()
            .map(|&n| {
                let v = coefs.iter().rev().fold(0.0, |acc, c| acc * (1.0 / n) + c);
                (n, v)
            })
            .collect()
    }

    #[test]
    fn recovers_polynomial_exactly() {
        let dims: Vec<f64> = (1..=18).map(|i| 8.0 * i as f64).collect();
        let truth = [4.5, -2.0, 7.0, -30.0];
        let fit = extrapolate(&model(&truth, &dims), 3, None).unwrap();
        for (c, t) in fit.coefficients.iter().zip(&truth) {
            assert!((c - t).abs() < 1e-10 * t.abs().max(1.0), "{fit:?}");
        }
        assert!(fit.residual < 1e-12);
        assert!((fit.predict(64.0) - model(&truth, &[64.0])[0].1).abs() < 1e-12);
    }

    #[test]
    fn constant_fit_is_mean() {
        let pts = [(8.0, 1.0), (16.0, 2.0), (32.0, 3.0)];
        let fit = extrapolate(&pts, 0, None).unwrap();
        assert!((fit.limit - 2.0).abs() < 1e-15);
        assert!((fit.residual - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn weights_pick_out_points() {
        let pts = [(8.0, 1.0), (16.0, 2.0), (32.0, 3.0)];
        let fit = extrapolate(&pts, 0, Some(&[1.0, 1.0, 2.0])).unwrap();
        assert!((fit.limit - 9.0 / 4.0).abs() < 1e-14);
    }

    #[test]
    fn too_few_points() {
        let err = extrapolate(&[(8.0, 1.0), (16.0, 2.0), (24.0, 3.0)], 3, None).unwrap_err();
        assert!(matches!(err, Error::InsufficientData { needed: 5, got: 3 }));
        assert!(err.to_string().contains("need"));
        assert_eq!(default_order(3), 1);
        assert_eq!(default_order(18), 3);
    }

    #[test]
    fn repeated_dimension_is_rank_deficient() {
        let pts = [(8.0, 1.0), (8.0, 2.0), (8.0, 3.0), (8.0, 3.5)];
        let err = extrapolate(&pts, 1, None).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { column: 1 }));
    }

    #[test]
    fn bad_inputs() {
        let pts = [(8.0, 1.0), (16.0, 2.0), (32.0, 3.0)];
        assert!(extrapolate(&pts, 0, Some(&[1.0, 0.0, 1.0])).is_err());
        assert!(extrapolate(&pts, 0, Some(&[1.0])).is_err());
        assert!(extrapolate(&[(0.0, 1.0), (1.0, 1.0)], 0, None).is_err());
    }

    #[test]
    fn json_shape() {
        let fit = ExtrapolationFit {
            order: 1,
            limit: 4.5,
            coefficients: vec![4.5, 10.0],
            residual: 0.0,
        };
        let s = serde_json::to_string(&fit).unwrap();
        assert_eq!(
            s,
            r#"{"order":1,"limit":4.5,"coefficients":[4.5,10.0],"residual":0.0}"#
        );
        assert_eq!(serde_json::from_str::<ExtrapolationFit>(&s).unwrap(), fit);
    }
}
