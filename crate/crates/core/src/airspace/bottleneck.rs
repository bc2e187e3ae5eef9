use super::{Airspace, CorridorId};
use crate::aircraft::{AircraftError, AircraftState};
use std::collections::BTreeSet;

/// Corridors the aircraft must still traverse after its current one, in
/// route order.
pub fn critical_resources<'a>(
    state: &AircraftState,
    airspace: &'a Airspace,
) -> Result<&'a [CorridorId], AircraftError> {
    let route = airspace.route(state.route);
    match route.corridors().get(state.corridor_index) {
        Some(&c) if c == state.corridor => Ok(&route.corridors()[state.corridor_index + 1..]),
        _ => Err(AircraftError::InvalidState {
            id: state.id,
            corridor: state.corridor,
        }),
    }
}

/// Whether aircraft `si` blocks `sj`: closer than `d_los`, on a different
/// corridor, and moving. Not symmetric in the velocity condition.
pub fn blocking(si: &AircraftState, sj: &AircraftState, d_los: f64) -> bool {
    si.position.distance(sj.position) < d_los && si.corridor != sj.corridor && si.velocity != 0.0
}

/// Conflict pairs `(future corridor of i, future corridor of j)` whose
/// volumes overlap.
pub fn pairwise_bottlenecks(
    si: &AircraftState,
    sj: &AircraftState,
    airspace: &Airspace,
) -> Result<BTreeSet<(CorridorId, CorridorId)>, AircraftError> {
    let ci = critical_resources(si, airspace)?;
    let cj = critical_resources(sj, airspace)?;
    let mut out = BTreeSet::new();
    for &a in ci {
        for &b in cj {
            if a != b && airspace.overlap(a, b) {
                out.insert((a, b));
            }
        }
    }
    Ok(out)
}

/// Union of pairwise bottlenecks over every ordered pair of aircraft on
/// distinct routes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BottleneckSet {
    pub pairs: BTreeSet<(CorridorId, CorridorId)>,
}

pub fn collection_of_bottlenecks(
    states: &[AircraftState],
    airspace: &Airspace,
) -> Result<BottleneckSet, AircraftError> {
    let mut set = BottleneckSet::default();
    for si in states {
        for sj in states {
            if si.id != sj.id && si.route != sj.route {
                set.pairs.extend(pairwise_bottlenecks(si, sj, airspace)?);
            }
        }
    }
    Ok(set)
}
