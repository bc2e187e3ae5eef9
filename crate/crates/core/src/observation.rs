//! Local observations: an aircraft's own state plus everything airborne
//! within communication range.

use crate::aircraft::{AircraftId, AircraftState, NeighborInfo};

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub self_state: AircraftState,
    /// Airborne aircraft within `d_comm`, ordered by id.
    pub neighbors: Vec<NeighborInfo>,
    pub time: u64,
}

/// Observation of aircraft `id` over a snapshot of the fleet. The boundary
/// is inclusive. Returns `None` unless `id` is airborne.
pub fn observe(id: AircraftId, fleet: &[AircraftState], d_comm: f64, time: u64) -> Option<Observation> {
    let me = fleet.iter().find(|a| a.id == id)?;
    if !me.is_airborne() {
        return None;
    }
    let mut neighbors: Vec<NeighborInfo> = fleet
        .iter()
        .filter(|a| a.id != id && a.is_airborne() && a.position.distance(me.position) <= d_comm)
        .map(AircraftState::neighbor_info)
        .collect();
    neighbors.sort_by_key(|n| n.id);
    Some(Observation {
        self_state: me.clone(),
        neighbors,
        time,
    })
}

/// Observations for every airborne aircraft in one pass. `fleet` must be
/// indexed by id.
pub fn observe_all(fleet: &[AircraftState], d_comm: f64, time: u64) -> Vec<Option<Observation>> {
    let airborne: Vec<&AircraftState> = fleet.iter().filter(|a| a.is_airborne()).collect();
    let mut out: Vec<Option<Observation>> = vec![None; fleet.len()];
    for me in &airborne {
        let neighbors = airborne
            .iter()
            .filter(|a| a.id != me.id && a.position.distance(me.position) <= d_comm)
            .map(|a| a.neighbor_info())
            .collect();
        out[me.id.0 as usize] = Some(Observation {
            self_state: (*me).clone(),
            neighbors,
            time,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aircraft::Phase;
    use crate::airspace::{CorridorId, Point, RouteId};

    fn at(id: u32, x: f64, phase: Phase) -> AircraftState {
        AircraftState {
            id: AircraftId(id),
            route: RouteId(0),
            corridor_index: 0,
            corridor: CorridorId(0),
            arc_offset: x,
            position: Point::new(x, 0.0),
            velocity: 10.0,
            acceleration: 0.0,
            heading: 0.0,
            phase,
            compliant: true,
            takeoff_time: Some(0.0),
            landing_time: None,
        }
    }

    #[test]
    fn range_is_inclusive() {
        let fleet = vec![
            at(0, 0.0, Phase::Airborne),
            at(1, 1000.0, Phase::Airborne),
            at(2, 1400.0, Phase::Airborne),
            at(3, -1350.0, Phase::Airborne),
        ];
        let obs = observe(AircraftId(0), &fleet, 1350.0, 0).unwrap();
        let ids: Vec<u32> = obs.neighbors.iter().map(|n| n.id.0).collect();
        assert_eq!(ids, vec![1, 3]);
    }

    #[test]
    fn self_pending_and_landed_are_excluded() {
        let fleet = vec![
            at(0, 0.0, Phase::Airborne),
            at(1, 10.0, Phase::Pending),
            at(2, 20.0, Phase::Landed),
        ];
        let obs = observe(AircraftId(0), &fleet, 1350.0, 5).unwrap();
        assert!(obs.neighbors.is_empty());
        assert_eq!(obs.time, 5);
        assert!(observe(AircraftId(1), &fleet, 1350.0, 5).is_none());
    }

    #[test]
    fn batch_matches_single() {
        let fleet: Vec<AircraftState> = (0..6).map(|i| at(i, i as f64 * 700.0, Phase::Airborne)).collect();
        let all = observe_all(&fleet, 1350.0, 2);
        for a in &fleet {
            assert_eq!(all[a.id.0 as usize], observe(a.id, &fleet, 1350.0, 2));
        }
    }
}
