//! Drives a whole simulation from a config, as the command line does, and
//! prints the JSON report.
//!
//! cargo run --example run_config

use palintoep::cli::{cmd_simulate, HistogramSettings, LoadedConfig, RunConfig, SimCount};
use palintoep::parallel::with_configured_threads;

fn main() -> palintoep::Result<()> {
    let mut config = RunConfig::new(1, vec![8, 12, 16, 20, 24, 28], 2000, 6);
    config.num_matrices = SimCount::PerDim(vec![4000, 3000, 2000, 2000, 1000, 1000]);
    config.seed = 12;
    config.fit_order = Some(2);
    config.histogram = Some(HistogramSettings {
        bins: 24,
        range: [-4.0, 4.0],
    });
    let loaded = LoadedConfig::from_config(config)?;
    let output = with_configured_threads(|| cmd_simulate(&loaded))??;
    print!("{}", output.table.to_csv());
    for fit in &output.report.fits {
        println!("M{} -> {:.4}", fit.moment, fit.fit.limit);
    }
    Ok(())
}
