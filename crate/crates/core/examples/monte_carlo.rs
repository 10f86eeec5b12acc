//! Ensemble averages with standard errors, and the odd moments shrinking
//! toward zero.
//!
//! cargo run --example monte_carlo -- [sims]

use palintoep::ensemble::{EnsembleSpec, EntryDistribution};
use palintoep::estimation::{monte_carlo_moments, odd_moment_decay};
use palintoep::matchings::conjectured_moment;

fn main() -> palintoep::Result<()> {
    let sims = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(400);
    for dim in [64, 128, 256] {
        let spec = EnsembleSpec::new(1, dim, EntryDistribution::Gaussian, 1)?;
        let estimates = monte_carlo_moments(&spec, sims, 8)?;
        println!("N = {dim}, {sims} matrices");
        for e in estimates.iter().skip(2).step_by(2) {
            let limit = conjectured_moment(e.order as u32 / 2, 1)?;
            println!(
                "  M{:<2} {:>10.4} +- {:<8.4} conjectured limit {limit}",
                e.order, e.mean, e.stderr
            );
        }
    }

    let spec = EnsembleSpec::new(1, 32, EntryDistribution::Gaussian, 2)?;
    let decay = odd_moment_decay(&spec, &[32, 64, 128], sims, 3)?;
    println!("third moment:");
    for r in &decay.rows {
        println!(
            "  N = {:>3}: {:+.5} +- {:.5}",
            r.dim, r.estimate.mean, r.estimate.stderr
        );
    }
    Ok(())
}
