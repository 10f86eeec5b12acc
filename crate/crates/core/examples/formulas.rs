//! Closed-form limiting moments and bounds; more palindromes push the
//! moments above the Gaussian ones.
//!
//! cargo run --example formulas

use palintoep::matchings::{
    double_factorial, fourth_moment_limit, lower_bound_moment, upper_bound_moment,
};

fn main() {
    println!("fourth moment limits:");
    for n in 0..=5 {
        println!("  n = {n}: {}", fourth_moment_limit(n));
    }
    println!(
        "\n{:>3} {:>3} {:>14} {:>14} {:>14}",
        "2m", "n", "lower", "gaussian", "upper"
    );
    for n in 1..=3 {
        for m in 2..=6 {
            println!(
                "{:>3} {n:>3} {:>14.3} {:>14} {:>14}",
                2 * m,
                lower_bound_moment(m, n, true),
                double_factorial(2 * i64::from(m) - 1),
                upper_bound_moment(m, n)
            );
        }
    }
}
