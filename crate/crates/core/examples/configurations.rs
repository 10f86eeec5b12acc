//! Fourth-moment census for two palindromes: the contribution of each pair
//! matching, its sign split, and the adjacent-matching region counts.
//!
//! cargo run --example configurations

use palintoep::matchings::{
    adjacent_region_counts, configuration_contribution, dpt_adjacent_contribution,
    enumerate_pair_matchings,
};

fn main() -> palintoep::Result<()> {
    println!("limit per configuration: {}", dpt_adjacent_contribution(2));
    let matchings = enumerate_pair_matchings(4)?;
    for dim in [16, 32, 64] {
        println!("N = {dim}");
        for m in &matchings {
            let r = configuration_contribution(dim, 1, m, None)?;
            println!(
                "  {:<12} contribution {:.5}  main term {:.5}  positive-sign share {:.4}",
                m.label(),
                r.contribution,
                r.main_term,
                r.positive_fraction()
            );
        }
        let (no_cross, cross) = adjacent_region_counts(dim, 1, 1)?;
        let cube = (dim as f64).powi(3);
        println!(
            "  region counts / N^3: {:.4} and {:.4}",
            no_cross as f64 / cube,
            cross as f64 / cube
        );
    }
    Ok(())
}
