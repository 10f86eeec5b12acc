//! Closed-form limiting moments and moment bounds.

use super::double_factorial;
use crate::error::{Error, Result};

/// Limiting fourth moment `2^(n+1) + 2^(-n)`.
pub fn fourth_moment_limit(degree: u32) -> f64 {
    2f64.powi(degree as i32 + 1) + 2f64.powi(-(degree as i32))
}

/// Limiting contribution of one fully adjacent configuration to the
/// `2m`-th moment for two palindromes: `-2 + 2^-m (1^m + 2^m + 3^m)`.
pub fn dpt_adjacent_contribution(m: u32) -> f64 {
    let sum: f64 = (1..=3).map(|b| f64::from(b).powi(m as i32)).sum();
    -2.0 + sum * 2f64.powi(-(m as i32))
}

/// The same contribution summed over C-vector cores before collapsing with
/// the binomial theorem: the zero vector contributes 1 and each of the four
/// alternating core families with `k` nonzero entries contributes
/// `binom(m, k) 2^-(k+1)`.
pub fn dpt_adjacent_sum(m: u32) -> f64 {
    let mut total = 1.0;
    let mut binom = 1.0; // binom(m, 0)
    for k in 1..=m {
        binom = binom * f64::from(m - k + 1) / f64::from(k);
        if k % 2 == 0 {
            total += 4.0 * binom * 2f64.powi(-(k as i32 + 1));
        }
    }
    total
}

/// Upper bound `(2 * 2^n)^m (2m-1)!!` on the limiting `2m`-th moment.
pub fn upper_bound_moment(m: u32, degree: u32) -> f64 {
    2f64.powi(((degree + 1) * m) as i32) * double_factorial(2 * i64::from(m) - 1) as f64
}

/// Limiting contribution of the fully adjacent configuration for `2^n`
/// palindromes: `-2(2^n - 1) + 2^(-mn) sum_{c=1}^{2^(n+1)-1} c^m`.
pub fn adjacent_lower_value(m: u32, degree: u32) -> f64 {
    let top = (1u64 << (degree + 1)) - 1;
    let sum: f64 = (1..=top).map(|c| (c as f64).powi(m as i32)).sum();
    -2.0 * ((1u64 << degree) - 1) as f64 + sum * 2f64.powi(-((m * degree) as i32))
}

/// Lower bound on the limiting `2m`-th moment.
///
/// Assuming every configuration shares the adjacent main term the bound is
/// `adjacent * (2m-1)!!`; otherwise the remaining `(2m-1)!! - 1`
/// configurations are only known to contribute at least 1 each.
pub fn lower_bound_moment(m: u32, degree: u32, assume_conjecture: bool) -> f64 {
    let adjacent = adjacent_lower_value(m, degree);
    let configurations = double_factorial(2 * i64::from(m) - 1) as f64;
    if assume_conjecture {
        adjacent * configurations
    } else {
        adjacent + configurations - 1.0
    }
}

/// `(2m-1)!!` times the adjacent contribution; closed form known for `n = 1` only.
pub fn conjectured_moment(m: u32, degree: u32) -> Result<f64> {
    if degree != 1 {
        return Err(Error::InvalidArgument(format!(
            "closed-form conjectured moments exist only for n = 1, got n = {degree}"
        )));
    }
    Ok(double_factorial(2 * i64::from(m) - 1) as f64 * dpt_adjacent_contribution(m))
}
