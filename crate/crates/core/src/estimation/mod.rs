//! Monte Carlo moment estimation, `1/N` extrapolation and convergence
//! diagnostics.

mod diagnostics;
mod extrapolate;
mod monte_carlo;
pub mod published;
mod table;

pub use diagnostics::{
    gaussian_tail, log_log_slope, odd_moment_decay, tail_mass, tail_stderr, variance_diagnostic,
    variance_with_stderr, OddMomentDecay, OddMomentRow, VarianceReport, VarianceRow,
};
pub use extrapolate::{default_order, extrapolate, ExtrapolationFit};
pub use monte_carlo::{
    monte_carlo_moments, run_ensemble, sample_moments, EnsembleRun, MomentEstimate, MomentPath,
    RunOptions, CHUNK,
};
pub use table::{MomentTable, MomentTableRow, CSV_HEADER};
