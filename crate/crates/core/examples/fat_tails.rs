//! Tail mass of pooled normalized eigenvalues against the standard normal,
//! and the spectral histogram as CSV on stdout.
//!
//! cargo run --example fat_tails -- [sims] > hist.csv

use palintoep::ensemble::{EnsembleSpec, EntryDistribution};
use palintoep::estimation::{gaussian_tail, run_ensemble, tail_mass, RunOptions};
use palintoep::spectra::histogram;

fn main() -> palintoep::Result<()> {
    let sims = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(100);
    let options = RunOptions {
        pool_eigenvalues: true,
        ..Default::default()
    };
    let mut last = Vec::new();
    for degree in 0..=3 {
        let spec = EnsembleSpec::new(degree, 256, EntryDistribution::Gaussian, 3)?;
        let run = run_ensemble(&spec, sims, 4, &options)?;
        let pool = run.pool.unwrap_or_default();
        eprintln!(
            "n = {degree}: M4 {:.3}, tail(2.5) {:.5}, tail(3) {:.5}",
            run.mean[4],
            tail_mass(&pool, 2.5),
            tail_mass(&pool, 3.0)
        );
        last = pool;
    }
    eprintln!(
        "normal: tail(2.5) {:.5}, tail(3) {:.5}",
        gaussian_tail(2.5),
        gaussian_tail(3.0)
    );
    print!("{}", histogram(&last, 60, (-6.0, 6.0))?.to_csv());
    Ok(())
}
