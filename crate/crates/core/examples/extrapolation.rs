//! Fits the published small-N moment columns in powers of 1/N and compares
//! the limits with the closed forms.
//!
//! cargo run --example extrapolation

use palintoep::estimation::{extrapolate, published};
use palintoep::matchings::conjectured_moment;

fn main() -> palintoep::Result<()> {
    let table = published::small_dim_table();
    println!(
        "{:>4} {:>12} {:>12} {:>12} {:>12}",
        "k", "p = 1", "p = 2", "p = 3", "conjectured"
    );
    for &(k, reported) in &published::SMALL_DIM_BEST_FIT {
        let points: Vec<(f64, f64)> = table.column(k).iter().map(|p| (p.0, p.1)).collect();
        let mut fits = Vec::new();
        for order in 1..=3 {
            fits.push(extrapolate(&points, order, None)?.limit);
        }
        println!(
            "{k:>4} {:>12.4} {:>12.4} {:>12.4} {:>12.4}   (reported {reported})",
            fits[0],
            fits[1],
            fits[2],
            conjectured_moment(k as u32 / 2, 1)?
        );
    }

    let fit = extrapolate(
        &[8.0, 16.0, 24.0, 32.0].map(|n| (n, 4.5 + 10.0 / n)),
        1,
        None,
    )?;
    println!("\nmodel data 4.5 + 10/N: {}", serde_json::to_string(&fit)?);
    Ok(())
}
