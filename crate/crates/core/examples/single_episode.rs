//! Run one CSMA/CD episode on the default network and print its metrics.
//!
//! Usage: `cargo run --release --example single_episode -- [aircraft_per_route] [seed]`

use std::sync::Arc;
use uam_sched::engine::run_episode;
use uam_sched::network::{generate_network, NetworkParams};
use uam_sched::protocols::ProtocolKind;

fn main() {
    let mut args = std::env::args().skip(1);
    let density: usize = args.next().map_or(15, |s| s.parse().expect("density is an integer"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed is an integer"));

    let mut scenario = generate_network(&NetworkParams::default()).expect("default network is valid");
    scenario.protocol = ProtocolKind::Csma;
    scenario.aircraft_per_route = density;
    scenario.seed = seed;
    let airspace = Arc::new(scenario.validate().expect("scenario validates"));

    let report = run_episode(airspace, &scenario.per_route(), scenario.engine_config());
    println!("aircraft             {}", report.aircraft);
    println!("steps                {} ({:.0} s)", report.steps, report.steps as f64 * scenario.dt);
    println!("cross-corridor LOS   {}", report.cross_corridor_los);
    println!("max flight time      {:.0} s", report.max_flight_time_s);
    println!("mean halting         {:.2} %", report.mean_halt_pct);
    println!("timed out            {}", report.timeout);
}
