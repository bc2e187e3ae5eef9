//! Compare the four protocols at one density over a handful of episodes.
//!
//! Usage: `cargo run --release --example protocol_comparison -- [aircraft_per_route] [episodes]`

use uam_sched::batch::{run_batch, summarize, SweepConfig};
use uam_sched::network::{generate_network, NetworkParams};

fn main() {
    let mut args = std::env::args().skip(1);
    let density: usize = args.next().map_or(15, |s| s.parse().expect("density is an integer"));
    let episodes: usize = args.next().map_or(5, |s| s.parse().expect("episodes is an integer"));

    let scenario = generate_network(&NetworkParams::default()).expect("default network is valid");
    let sweep = SweepConfig {
        densities: vec![density],
        episodes,
        ..SweepConfig::default()
    };
    let cells = summarize(&run_batch(&sweep, &scenario));

    println!("{:<12} {:>14} {:>16} {:>12}", "protocol", "cross LOS", "max flight (s)", "halting %");
    for c in &cells {
        println!(
            "{:<12} {:>14.2} {:>16.0} {:>12.2}",
            c.protocol.as_str(),
            c.cross_corridor_los.mean,
            c.max_flight_time_s.mean,
            c.mean_halt_pct.mean
        );
    }
}
