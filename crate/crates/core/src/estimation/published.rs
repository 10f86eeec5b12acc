//! Published observed moments, kept as fixtures for extrapolation and
//! reconciliation checks. Standard errors were not published and are
//! recorded as NaN.

use super::monte_carlo::MomentEstimate;
use super::table::{MomentTable, MomentTableRow};

/// Observed moments at `N = 2048`, 1000 matrices, two palindromes:
/// `(order, conjectured, observed)`.
pub const LARGE_DIM_OBSERVED: [(usize, f64, f64); 5] = [
    (2, 1.000, 1.001),
    (4, 4.500, 4.521),
    (6, 37.500, 37.887),
    (8, 433.125, 468.53),
    (10, 6260.63, 107717.3),
];

/// Observed moments across small dimensions, two palindromes:
/// `(N, sims, [2nd, 4th, 6th, 8th, 10th])`.
pub const SMALL_DIM_OBSERVED: [(usize, u64, [f64; 5]); 18] = [
    (8, 1_000_000, [1.000, 8.583, 150.246, 3984.36, 141270.00]),
    (12, 1_000_000, [1.000, 7.178, 110.847, 2709.61, 90816.60]),
    (16, 1_000_000, [1.001, 6.529, 93.311, 2195.78, 73780.00]),
    (20, 1_000_000, [1.001, 6.090, 80.892, 1790.39, 57062.50]),
    (24, 1_000_000, [1.000, 5.818, 73.741, 1577.42, 49221.50]),
    (28, 1_000_000, [1.000, 5.621, 68.040, 1396.50, 42619.90]),
    (64, 250_000, [1.001, 4.992, 50.719, 858.58, 22012.90]),
    (68, 250_000, [1.000, 4.955, 49.813, 831.66, 20949.60]),
    (72, 250_000, [1.000, 4.933, 49.168, 811.50, 20221.20]),
    (76, 250_000, [1.000, 4.903, 48.474, 794.10, 19924.10]),
    (80, 250_000, [1.000, 4.888, 47.951, 773.31, 18817.00]),
    (84, 250_000, [1.001, 4.876, 47.615, 764.84, 18548.00]),
    (128, 125_000, [1.000, 4.745, 44.155, 659.00, 14570.60]),
    (132, 125_000, [1.000, 4.739, 43.901, 651.18, 14325.30]),
    (136, 125_000, [0.999, 4.718, 43.456, 637.70, 13788.10]),
    (140, 125_000, [1.000, 4.718, 43.320, 638.74, 14440.40]),
    (144, 125_000, [1.001, 4.727, 43.674, 647.05, 14221.80]),
    (148, 125_000, [1.000, 4.716, 43.172, 628.02, 13648.10]),
];

/// Best-fit limits reported alongside [`SMALL_DIM_OBSERVED`].
pub const SMALL_DIM_BEST_FIT: [(usize, f64); 5] = [
    (2, 1.000),
    (4, 4.496),
    (6, 38.186),
    (8, 490.334),
    (10, 6120.94),
];

/// [`SMALL_DIM_OBSERVED`] as a moment table (even orders only).
pub fn small_dim_table() -> MomentTable {
    let rows = SMALL_DIM_OBSERVED
        .iter()
        .map(|&(dim, sims, values)| MomentTableRow {
            dim,
            sims,
            estimates: values
                .iter()
                .enumerate()
                .map(|(i, &mean)| MomentEstimate {
                    order: 2 * (i + 1),
                    mean,
                    stderr: f64::NAN,
                    num_samples: sims,
                })
                .collect(),
        })
        .collect();
    MomentTable { rows }
}
