//! Fixtures shared by unit tests.

use crate::aircraft::{AircraftId, AircraftState, Phase};
use crate::airspace::{Airspace, CorridorSpec, Point, RouteId, RouteSpec};

/// Two routes crossing at the origin: route 0 flies west to east, route 1
/// south to north. Each is approach, crossing segment (+-600 m), departure.
pub fn cross_airspace() -> Airspace {
    cross_airspace_with(600.0)
}

/// As [`cross_airspace`], with crossing segments of half-length `inner`.
pub fn cross_airspace_with(inner: f64) -> Airspace {
    let mut corridors = Vec::new();
    let mut routes = Vec::new();
    for (r, dir) in [Point::new(1.0, 0.0), Point::new(0.0, 1.0)].into_iter().enumerate() {
        let stops = [-3600.0, -inner, inner, 3600.0];
        let names: Vec<String> = (0..3).map(|k| format!("r{r}c{k}")).collect();
        for k in 0..3 {
            corridors.push(CorridorSpec {
                name: names[k].clone(),
                waypoints: vec![dir * stops[k], dir * stops[k + 1]],
                half_width: 50.0,
            });
        }
        routes.push(RouteSpec {
            name: format!("r{r}"),
            corridors: names,
        });
    }
    Airspace::new(&corridors, &routes, 1350.0).unwrap()
}

/// An airborne aircraft `arc` meters along `route`, moving at `velocity`.
pub fn place(airspace: &Airspace, id: u32, route: usize, arc: f64, velocity: f64) -> AircraftState {
    let mut a = AircraftState::pending(AircraftId(id), RouteId(route), airspace);
    let r = airspace.route(RouteId(route));
    let index = (0..r.corridors().len())
        .rev()
        .find(|&i| r.offset(i) <= arc)
        .unwrap();
    let corridor = airspace.corridor(r.corridors()[index]);
    a.corridor_index = index;
    a.corridor = corridor.id;
    a.arc_offset = arc - r.offset(index);
    a.position = corridor.point_at(a.arc_offset);
    a.heading = corridor.heading_at(a.arc_offset);
    a.velocity = velocity;
    a.phase = Phase::Airborne;
    a.takeoff_time = Some(0.0);
    a
}
