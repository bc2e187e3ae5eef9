//! Run a small density sweep and write per-episode rows and per-cell
//! summaries as CSV.
//!
//! Usage: `cargo run --release --example batch_sweep -- [rows.csv] [summary.csv]`

use std::fs::File;
use uam_sched::batch::{run_batch, summarize, write_rows_csv, write_summary_csv, SweepConfig};
use uam_sched::network::{generate_network, NetworkParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let rows_path = args.next().unwrap_or_else(|| "rows.csv".into());
    let summary_path = args.next().unwrap_or_else(|| "summary.csv".into());

    let scenario = generate_network(&NetworkParams::default())?;
    let sweep = SweepConfig {
        densities: vec![5, 10],
        episodes: 3,
        ..SweepConfig::default()
    };
    let rows = run_batch(&sweep, &scenario);
    write_rows_csv(File::create(&rows_path)?, &rows)?;
    write_summary_csv(File::create(&summary_path)?, &summarize(&rows))?;
    println!("{} rows -> {rows_path}, summary -> {summary_path}", rows.len());
    Ok(())
}
