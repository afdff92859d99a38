//! Sparsity sweep on Pit Props written as plot-ready CSV.
//!
//! cargo run --example sparsity_sweep > sweep.csv

use spca::data::pit_props;
use spca::eval::write_sweep_csv;
use spca::{sparsity_sweep, Algorithm, SweepConfig};

fn main() -> spca::Result<()> {
    let a = pit_props();
    let cfg = SweepConfig {
        epsilon: 0.9,
        ..SweepConfig::default()
    };
    let grid: Vec<usize> = (2..=10).collect();
    let mut rows = Vec::new();
    for algo in [Algorithm::Svd, Algorithm::Sdp, Algorithm::Oracle] {
        rows.extend(sparsity_sweep(&a, algo, &grid, &cfg)?);
    }
    write_sweep_csv(std::io::stdout().lock(), &rows)
}
