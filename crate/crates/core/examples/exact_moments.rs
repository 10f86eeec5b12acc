//! Exact ensemble-average moments by enumerating every index cycle, for
//! several entry laws.
//!
//! cargo run --example exact_moments

use palintoep::ensemble::EntryDistribution;
use palintoep::matchings::{exact_expected_moment, fourth_moment_limit};

fn main() -> palintoep::Result<()> {
    let laws = [
        EntryDistribution::Gaussian,
        EntryDistribution::Rademacher,
        EntryDistribution::Uniform,
    ];
    for degree in 0..=2u32 {
        println!(
            "n = {degree} (limit of the 4th moment: {})",
            fourth_moment_limit(degree)
        );
        for dim in [4usize, 8, 16, 24, 32] {
            if dim % (1 << (degree + 1)) != 0 {
                continue;
            }
            let values: Vec<String> = laws
                .iter()
                .map(|&law| {
                    exact_expected_moment(dim, degree, 4, law)
                        .map(|v| format!("{law} {v:.6}"))
                        .unwrap_or_else(|e| format!("{law} ({e})"))
                })
                .collect();
            println!("  N = {dim:>2}: {}", values.join(", "));
        }
    }
    let m2 = exact_expected_moment(8, 1, 2, EntryDistribution::Gaussian)?;
    let m3 = exact_expected_moment(8, 1, 3, EntryDistribution::Gaussian)?;
    println!("\nN = 8, n = 1: second moment {m2}, third moment {m3}");
    Ok(())
}
