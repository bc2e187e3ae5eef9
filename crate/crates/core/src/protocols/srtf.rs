use super::{relevant_intersections, scene, Command, MAX_BACKOFF_STEPS};
use crate::airspace::Airspace;
use crate::observation::Observation;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Distances to the center closer than this count as a tie.
pub const TIE_TOLERANCE: f64 = 1e-6;

/// Per-aircraft SRTF state. The backoff is only used to break exact ties.
#[derive(Debug, Clone)]
pub struct SrtfState {
    pub wait: u32,
    pub ties: u32,
    rng: ChaCha8Rng,
}

impl SrtfState {
    pub fn new(rng: ChaCha8Rng) -> Self {
        Self { wait: 0, ties: 0, rng }
    }
}

/// Shortest remaining time first, with distance to the intersection center
/// standing in for remaining time.
///
/// 1. inside, and a cross-route aircraft inside is closer to the center, or
///    a halted one is as close with a lower id: wait;
/// 2. inside, and a moving one is exactly as close: wait, drawing a random
///    backoff;
/// 3. outside, and any cross-route aircraft is inside: wait;
/// 4. otherwise go.
pub fn decide_srtf(
    obs: &Observation,
    state: &mut SrtfState,
    airspace: &Airspace,
    d_comm: f64,
) -> Command {
    if state.wait > 0 {
        state.wait -= 1;
        return Command::Wait;
    }
    let mut tie = false;
    for id in relevant_intersections(obs, airspace, d_comm) {
        let s = scene(obs, airspace, id);
        if !s.me.inside {
            if !s.occupants.is_empty() {
                return Command::Wait;
            }
            continue;
        }
        if s.halted_ahead(obs.self_state.id) {
            return Command::Wait;
        }
        for (_, loc, _) in s.movers() {
            if (loc.d_center - s.me.d_center).abs() <= TIE_TOLERANCE {
                tie = true;
            } else if loc.d_center < s.me.d_center {
                return Command::Wait;
            }
        }
    }
    if tie {
        state.ties += 1;
        state.wait = state.rng.gen_range(1..=MAX_BACKOFF_STEPS) - 1;
        return Command::Wait;
    }
    Command::Go
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aircraft::{AircraftId, AircraftState};
    use crate::observation::observe;
    use crate::rng::stream;
    use crate::testkit::{cross_airspace, cross_airspace_with, place};

    const D_COMM: f64 = 1350.0;

    fn decide(fleet: &[AircraftState], who: u32, state: &mut SrtfState, airspace: &Airspace) -> Command {
        let obs = observe(AircraftId(who), fleet, D_COMM, 0).unwrap();
        decide_srtf(&obs, state, airspace, D_COMM)
    }

    fn fresh(k: u64) -> SrtfState {
        SrtfState::new(stream(1, "srtf", k, 0))
    }

    #[test]
    fn farther_aircraft_yields_to_closer_mover() {
        let airspace = cross_airspace_with(1000.0);
        let fleet = [
            place(&airspace, 0, 0, 2800.0, 30.0),
            place(&airspace, 1, 1, 3300.0, 30.0),
        ];
        assert_eq!(decide(&fleet, 0, &mut fresh(0), &airspace), Command::Wait);
        assert_eq!(decide(&fleet, 1, &mut fresh(1), &airspace), Command::Go);
    }

    #[test]
    fn same_route_traffic_inside_goes() {
        let airspace = cross_airspace();
        let fleet = [
            place(&airspace, 0, 0, 3100.0, 30.0),
            place(&airspace, 1, 0, 3500.0, 30.0),
        ];
        assert_eq!(decide(&fleet, 0, &mut fresh(0), &airspace), Command::Go);
    }

    #[test]
    fn alone_goes() {
        let airspace = cross_airspace();
        let fleet = [place(&airspace, 0, 0, 3100.0, 30.0)];
        assert_eq!(decide(&fleet, 0, &mut fresh(0), &airspace), Command::Go);
    }

    #[test]
    fn outside_with_cross_mover_inside_waits() {
        let airspace = cross_airspace();
        let fleet = [
            place(&airspace, 0, 0, 2500.0, 30.0),
            place(&airspace, 1, 1, 3400.0, 30.0),
        ];
        assert_eq!(decide(&fleet, 0, &mut fresh(0), &airspace), Command::Wait);
    }

    #[test]
    fn halted_aircraft_closer_to_center_goes_first() {
        let airspace = cross_airspace();
        let fleet = [
            place(&airspace, 0, 0, 3300.0, 0.0),
            place(&airspace, 1, 1, 3050.0, 0.0),
        ];
        assert_eq!(decide(&fleet, 0, &mut fresh(0), &airspace), Command::Go);
        assert_eq!(decide(&fleet, 1, &mut fresh(1), &airspace), Command::Wait);
    }

    #[test]
    fn halted_aircraft_past_the_center_resumes_before_one_approaching_it() {
        let airspace = cross_airspace();
        let fleet = [
            place(&airspace, 0, 0, 4100.0, 0.0),
            place(&airspace, 1, 1, 3300.0, 0.0),
        ];
        assert_eq!(decide(&fleet, 0, &mut fresh(0), &airspace), Command::Go);
        assert_eq!(decide(&fleet, 1, &mut fresh(1), &airspace), Command::Wait);
    }

    #[test]
    fn halted_occupant_blocks_entry() {
        let airspace = cross_airspace();
        let fleet = [
            place(&airspace, 0, 0, 2500.0, 30.0),
            place(&airspace, 1, 1, 3400.0, 0.0),
        ];
        assert_eq!(decide(&fleet, 0, &mut fresh(0), &airspace), Command::Wait);
    }

    #[test]
    fn equal_distance_makes_both_wait_then_backoff_decides() {
        let airspace = cross_airspace();
        let fleet = [
            place(&airspace, 0, 0, 3200.0, 30.0),
            place(&airspace, 1, 1, 3200.0, 30.0),
        ];
        let (mut a, mut b) = (fresh(0), fresh(1));
        assert_eq!(decide(&fleet, 0, &mut a, &airspace), Command::Wait);
        assert_eq!(decide(&fleet, 1, &mut b, &airspace), Command::Wait);
        assert_eq!((a.ties, b.ties), (1, 1));
        assert!(a.wait < MAX_BACKOFF_STEPS && b.wait < MAX_BACKOFF_STEPS);
        let mut again = fresh(0);
        decide(&fleet, 0, &mut again, &airspace);
        assert_eq!(again.wait, a.wait);
    }
}
