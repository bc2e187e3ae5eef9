//! Define a small scenario in TOML, validate it and run it under SRTF.

use std::sync::Arc;
use uam_sched::engine::run_episode;
use uam_sched::scenario::parse_scenario;

const SCENARIO: &str = r#"
protocol = "srtf"
aircraft_per_route = 4
seed = 11

[[corridors]]
id = "west_east"
waypoints = [[-6000.0, 0.0], [6000.0, 0.0]]

[[corridors]]
id = "south_north"
waypoints = [[0.0, -6000.0], [0.0, 6000.0]]

[[routes]]
id = "eastbound"
corridors = ["west_east"]

[[routes]]
id = "northbound"
corridors = ["south_north"]
aircraft = 6
"#;

fn main() {
    let scenario = match parse_scenario(SCENARIO) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let airspace = Arc::new(scenario.validate().expect("parsed scenarios are valid"));
    println!("{} intersection(s)", airspace.intersections().len());

    let report = run_episode(airspace, &scenario.per_route(), scenario.engine_config());
    for r in &report.records {
        println!(
            "aircraft {:>2} route {} flight {:>6.0} s, halted {:>5.1} %",
            r.id.0,
            r.route.0,
            r.flight_time_s().unwrap_or(f64::NAN),
            r.halt_pct().unwrap_or(0.0)
        );
    }
    println!("cross-corridor LOS: {}", report.cross_corridor_los);
}
