//! Step an episode by hand and check mutual exclusion at every step, for
//! the unscheduled baseline and for CSMA/CD.

use std::sync::Arc;
use uam_sched::engine::{mutual_exclusion_audit, World};
use uam_sched::network::{generate_network, NetworkParams};
use uam_sched::protocols::ProtocolKind;

fn main() {
    let mut scenario = generate_network(&NetworkParams::default()).expect("default network is valid");
    scenario.aircraft_per_route = 10;
    let airspace = Arc::new(scenario.validate().expect("scenario validates"));

    for protocol in [ProtocolKind::None, ProtocolKind::Csma] {
        scenario.protocol = protocol;
        let mut world = World::new(Arc::clone(&airspace), &scenario.per_route(), scenario.engine_config());
        let mut violations = 0;
        let mut first = None;
        while !world.finished() {
            world.step();
            if !mutual_exclusion_audit(world.aircraft(), &airspace, scenario.d_los) {
                violations += 1;
                first.get_or_insert(world.clock());
            }
        }
        match first {
            Some(t) => println!("{:<6} {violations} violating steps, first at step {t}", protocol.as_str()),
            None => println!("{:<6} exclusive at every step", protocol.as_str()),
        }
    }
}
