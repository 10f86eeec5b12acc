//! Samples one matrix, computes its spectrum and compares the eigenvalue
//! and trace-power routes to the normalized moments.
//!
//! cargo run --example spectrum_moments -- [n] [N] [seed]

use palintoep::ensemble::{sample_matrix, EnsembleSpec, EntryDistribution};
use palintoep::spectra::{eigenvalues_symmetric, empirical_moments, trace_power_moment};

fn main() -> palintoep::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let degree = args.first().copied().unwrap_or(1) as u32;
    let dim = args.get(1).copied().unwrap_or(256) as usize;
    let seed = args.get(2).copied().unwrap_or(7);

    let spec = EnsembleSpec::new(degree, dim, EntryDistribution::Gaussian, seed)?;
    let matrix = sample_matrix(&spec, 0);
    let spectrum = eigenvalues_symmetric(&matrix)?;
    let normalized = spectrum.normalized();
    println!(
        "n = {degree}, N = {dim}: normalized eigenvalues span [{:.3}, {:.3}]",
        normalized[0],
        normalized[dim - 1]
    );
    let moments = empirical_moments(&spectrum, 8);
    println!("{:>3} {:>16} {:>16}", "k", "eigenvalues", "trace powers");
    for k in 0..=8u32 {
        println!(
            "{k:>3} {:>16.10} {:>16.10}",
            moments.get(k as usize),
            trace_power_moment(&matrix, k)
        );
    }
    Ok(())
}
