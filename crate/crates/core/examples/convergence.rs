//! Variance of the per-matrix fourth moment across N, which should fall
//! roughly like 1/N.
//!
//! cargo run --example convergence -- [sims]

use palintoep::ensemble::{EnsembleSpec, EntryDistribution};
use palintoep::estimation::variance_diagnostic;

fn main() -> palintoep::Result<()> {
    let sims = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(500);
    let spec = EnsembleSpec::new(1, 32, EntryDistribution::Gaussian, 9)?;
    let report = variance_diagnostic(&spec, &[32, 64, 128, 256], sims, 4)?;
    for r in &report.rows {
        println!(
            "N = {:>3}: Var(M4) = {:.4} +- {:.4}",
            r.dim, r.variance, r.stderr
        );
    }
    println!("drop z-scores: {:.2?}", report.drop_z);
    println!("log-log slope: {:.3}", report.slope().unwrap_or(f64::NAN));
    Ok(())
}
