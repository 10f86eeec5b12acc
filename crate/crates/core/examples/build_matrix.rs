//! Builds a small matrix of each degree and prints its first row, showing
//! the palindromic blocks, plus the link table for the doubly palindromic case.
//!
//! cargo run --example build_matrix

use palintoep::ensemble::{build_matrix, EnsembleSpec, EntryDistribution, EntryVector};

fn main() -> palintoep::Result<()> {
    for degree in 0..=2 {
        let spec = EnsembleSpec::new(degree, 16, EntryDistribution::Gaussian, 0)?;
        // label entries 0, 1, 2, ... so the structure is visible
        let labels = (0..spec.num_entries()).map(|v| v as f64).collect();
        let a = build_matrix(&spec, EntryVector::new(labels))?;
        let row: Vec<String> = a.first_row().iter().map(|v| v.to_string()).collect();
        println!("n = {degree}, N = 16, {} free entries", spec.num_entries());
        println!("  first row: {}", row.join(" "));
    }

    let link = EnsembleSpec::new(1, 8, EntryDistribution::Gaussian, 0)?.link();
    println!("\nlink table, n = 1, N = 8:");
    for i in 0..8 {
        let row: Vec<String> = (0..8).map(|j| link.index(i, j).to_string()).collect();
        println!("  {}", row.join(" "));
    }
    Ok(())
}
