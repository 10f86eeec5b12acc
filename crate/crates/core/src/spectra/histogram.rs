use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 120;
pub const DEFAULT_RANGE: (f64, f64) = (-6.0, 6.0);

/// Uniform-bin histogram with masses normalized by the total sample count.
///
/// Bins are left-closed and right-open except the last, which also contains
/// the upper edge. Samples outside the range are tallied in `below`/`above`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub min: f64,
    pub max: f64,
    pub mass: Vec<f64>,
    pub below: f64,
    pub above: f64,
    pub total: usize,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.mass.len()
    }

    pub fn width(&self) -> f64 {
        (self.max - self.min) / self.mass.len() as f64
    }

    pub fn edges(&self, bin: usize) -> (f64, f64) {
        let w = self.width();
        let right = if bin + 1 == self.bins() {
            self.max
        } else {
            self.min + (bin + 1) as f64 * w
        };
        (self.min + bin as f64 * w, right)
    }

    pub fn in_range_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    /// `bin_left,bin_right,mass` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,mass\n");
        for (b, m) in self.mass.iter().enumerate() {
            let (l, r) = self.edges(b);
            let _ = writeln!(out, "{l},{r},{m}");
        }
        out
    }
}

pub fn histogram(values: &[f64], bins: usize, range: (f64, f64)) -> Result<Histogram> {
    let (min, max) = range;
    if bins == 0 {
        return Err(Error::InvalidArgument(
            "histogram needs at least one bin".into(),
        ));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Error::InvalidArgument(format!(
            "histogram range [{min}, {max}] is empty"
        )));
    }
    let width = (max - min) / bins as f64;
    let mut counts = vec![0u64; bins];
    let (mut below, mut above) = (0u64, 0u64);
    for &x in values {
        if x < min {
            below += 1;
        } else if x > max {
            above += 1;
        } else if x == max {
            counts[bins - 1] += 1;
        } else if x >= min {
            let b = (((x - min) / width) as usize).min(bins - 1);
            counts[b] += 1;
        } else {
            // NaN
            above += 1;
        }
    }
    let total = values.len();
    let norm = if total == 0 { 0.0 } else { 1.0 / total as f64 };
    Ok(Histogram {
        min,
        max,
        mass: counts.iter().map(|&c| c as f64 * norm).collect(),
        below: below as f64 * norm,
        above: above as f64 * norm,
        total,
    })
}
