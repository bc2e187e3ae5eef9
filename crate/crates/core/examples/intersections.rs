//! Build the default network and list its intersections and the
//! bottleneck corridor pairs they induce.

use uam_sched::airspace::collection_of_bottlenecks;
use uam_sched::engine::{EngineConfig, World};
use uam_sched::network::{generate_network, NetworkParams};
use std::sync::Arc;

fn main() {
    let scenario = generate_network(&NetworkParams::default()).expect("default network is valid");
    let airspace = Arc::new(scenario.validate().expect("generated scenario validates"));

    for route in airspace.routes() {
        let names: Vec<&str> = route.corridors().iter().map(|&c| airspace.corridor(c).name.as_str()).collect();
        println!("route {:<10} {:>8.0} m  {}", route.name, route.length(), names.join(" -> "));
    }
    for inter in airspace.intersections() {
        let names: Vec<&str> = inter.members.iter().map(|&c| airspace.corridor(c).name.as_str()).collect();
        println!(
            "intersection {} at ({:.0}, {:.0}), radius {:.0}: {}",
            inter.id.0,
            inter.center.x + 0.0,
            inter.center.y + 0.0,
            inter.radius,
            names.join(", ")
        );
    }

    let world = World::new(Arc::clone(&airspace), &vec![1; airspace.routes().len()], EngineConfig::default());
    let union = collection_of_bottlenecks(world.aircraft(), &airspace).expect("fleet is on the network");
    println!("{} ordered bottleneck pairs", union.pairs.len());
}
