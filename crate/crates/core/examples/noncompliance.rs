//! Sweep the non-compliance probability at 15 aircraft per route and show
//! how many LOS events each compliant aircraft suffers.
//!
//! Usage: `cargo run --release --example noncompliance -- [episodes]`

use uam_sched::batch::{run_batch, summarize, SweepConfig};
use uam_sched::network::{generate_network, NetworkParams};
use uam_sched::protocols::ProtocolKind;

fn main() {
    let episodes: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("episodes is an integer"));
    let probabilities: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).collect();

    let scenario = generate_network(&NetworkParams::default()).expect("default network is valid");
    let sweep = SweepConfig {
        protocols: vec![ProtocolKind::Csma, ProtocolKind::Srtf, ProtocolKind::RoundRobin],
        densities: vec![15],
        noncompliance: probabilities.clone(),
        episodes,
        ..SweepConfig::default()
    };
    let cells = summarize(&run_batch(&sweep, &scenario));

    print!("{:<12}", "p");
    for p in &probabilities {
        print!("{p:>7.1}");
    }
    println!();
    for protocol in &sweep.protocols {
        print!("{:<12}", protocol.as_str());
        for c in cells.iter().filter(|c| c.protocol == *protocol) {
            print!("{:>7.3}", c.los_per_compliant_aircraft.mean);
        }
        println!();
    }
}
