//! Dense symmetric eigenvalues: Householder reduction to tridiagonal form
//! followed by the implicitly shifted QL iteration. Eigenvalues only.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Relative asymmetry tolerated before the input is rejected.
const SYMMETRY_TOL: f64 = 1e-12;

/// Eigenvalues of the symmetric `n x n` row-major matrix `a`, ascending.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    if a.len() != n * n {
        return Err(Error::LengthMismatch {
            expected: n * n,
            actual: a.len(),
        });
    }
    check_symmetric(a, n)?;
    let (mut diag, mut off) = tridiagonalize(a.to_vec(), n);
    implicit_ql(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

fn check_symmetric(a: &[f64], n: usize) -> Result<()> {
    let scale = a
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in 0..i {
            let gap = (a[i * n + j] - a[j * n + i]).abs();
            if gap > SYMMETRY_TOL * scale || gap.is_nan() {
                return Err(Error::NotSymmetric { i, j, gap });
            }
        }
    }
    Ok(())
}

/// Reduces the lower triangle of `a` to tridiagonal form.
///
/// Returns `(diag, off)` where `off[i]` couples `diag[i]` and `diag[i + 1]`
/// and `off[n - 1] = 0`.
pub fn tridiagonalize(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    if n == 0 {
        return (diag, off);
    }
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        diag[k] = a[k * n + k];

        let mut norm2 = 0.0;
        for r in lo..n {
            let x = a[r * n + k];
            v[r] = x;
            norm2 += x * x;
        }
        let head = v[lo];
        let tail = norm2 - head * head;
        if tail <= 0.0 {
            // column already reduced
            off[k] = head;
            continue;
        }
        let alpha = if head >= 0.0 {
            -norm2.sqrt()
        } else {
            norm2.sqrt()
        };
        off[k] = alpha;
        v[lo] = head - alpha;
        let beta = 2.0 / (tail + v[lo] * v[lo]);

        // p = beta * S v over the trailing block, reading only its lower triangle
        p[lo..n].fill(0.0);
        for r in lo..n {
            let vr = v[r];
            let row = &a[r * n + lo..r * n + r];
            let acc = symv_row(row, &v[lo..r], &mut p[lo..r], vr);
            p[r] += acc + a[r * n + r] * vr;
        }
        let mut pv = 0.0;
        for r in lo..n {
            p[r] *= beta;
            pv += p[r] * v[r];
        }
        let half = 0.5 * beta * pv;
        for r in lo..n {
            p[r] -= half * v[r];
        }

        // S -= v w^T + w v^T on the lower triangle
        for r in lo..n {
            let (vr, wr) = (v[r], p[r]);
            let row = &mut a[r * n + lo..=r * n + r];
            for ((x, &vc), &wc) in row.iter_mut().zip(&v[lo..=r]).zip(&p[lo..=r]) {
                *x -= vc * wr + wc * vr;
            }
        }
    }

    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2];
        off[n - 2] = a[(n - 1) * n + n - 2];
    }
    diag[n - 1] = a[n * n - 1];
    (diag, off)
}

/// Returns `row . v` and accumulates `p += vr * row`, with independent
/// partial sums so the loop vectorizes.
#[inline]
fn symv_row(row: &[f64], v: &[f64], p: &mut [f64], vr: f64) -> f64 {
    const LANES: usize = 8;
    let mut acc = [0.0; LANES];
    let split = row.len() - row.len() % LANES;
    for ((rc, vc), pc) in row[..split]
        .chunks_exact(LANES)
        .zip(v[..split].chunks_exact(LANES))
        .zip(p[..split].chunks_exact_mut(LANES))
    {
        for l in 0..LANES {
            acc[l] += rc[l] * vc[l];
            pc[l] += rc[l] * vr;
        }
    }
    let mut tail = 0.0;
    for ((&x, &y), q) in row[split..].iter().zip(&v[split..]).zip(&mut p[split..]) {
        tail += x * y;
        *q += x * vr;
    }
    acc.iter().sum::<f64>() + tail
}

/// Implicitly shifted QL on a symmetric tridiagonal matrix; `diag` is
/// overwritten with the (unsorted) eigenvalues.
pub fn implicit_ql(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: sweeps,
                });
            }

            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
