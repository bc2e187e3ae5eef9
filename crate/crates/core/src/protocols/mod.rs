//! Shared scheduling protocols. Each maps an aircraft's view of the
//! intersections ahead of it to a `Go` or `Wait` command.
//!
//! CSMA/CD and SRTF are decentralized: their decision functions see only the
//! aircraft's [`Observation`], its own route, the static map, and their own
//! per-aircraft state. Round Robin runs one central controller per
//! intersection.

mod csma;
mod round_robin;
mod srtf;

pub use csma::{decide_csma, CsmaState, MAX_BACKOFF_STEPS};
pub use round_robin::{
    gather_round_robin_requests, EntryRequest, IntersectionTraffic, Occupant, RoundRobinController,
    TURN_LENGTH_STEPS,
};
pub use srtf::{decide_srtf, SrtfState, TIE_TOLERANCE};

use crate::aircraft::{AircraftId, NeighborInfo};
use crate::airspace::{locate, Airspace, Intersection, IntersectionId, Location, Point};
use crate::observation::Observation;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Command {
    Go,
    Wait,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    None,
    Csma,
    Srtf,
    RoundRobin,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 4] = [
        ProtocolKind::None,
        ProtocolKind::Csma,
        ProtocolKind::Srtf,
        ProtocolKind::RoundRobin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolKind::None => "none",
            ProtocolKind::Csma => "csma",
            ProtocolKind::Srtf => "srtf",
            ProtocolKind::RoundRobin => "round_robin",
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown protocol {0:?} (expected none, csma, srtf or round_robin)")]
pub struct UnknownProtocol(pub String);

impl FromStr for ProtocolKind {
    type Err = UnknownProtocol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(ProtocolKind::None),
            "csma" => Ok(ProtocolKind::Csma),
            "srtf" => Ok(ProtocolKind::Srtf),
            "round_robin" => Ok(ProtocolKind::RoundRobin),
            other => Err(UnknownProtocol(other.to_string())),
        }
    }
}

/// No protocol: always go.
pub fn decide_baseline(_obs: &Observation) -> Command {
    Command::Go
}

/// Non-compliant aircraft behave as if every command were `Go`.
pub fn compliance_gate(cmd: Command, compliant: bool) -> Command {
    if compliant {
        cmd
    } else {
        Command::Go
    }
}

/// Intersections that concern the observer: one of its current or remaining
/// corridors is a member, and it is either inside or within `d_comm` of the
/// center. Ordered by id.
pub fn relevant_intersections(obs: &Observation, airspace: &Airspace, d_comm: f64) -> Vec<IntersectionId> {
    let me = &obs.self_state;
    let route = airspace.route(me.route);
    let mut out: Vec<IntersectionId> = route.corridors()[me.corridor_index..]
        .iter()
        .filter_map(|&c| airspace.intersection_of(c))
        .collect();
    out.sort();
    out.dedup();
    out.retain(|&id| {
        let loc = locate(me.position, me.corridor, airspace.intersection(id));
        loc.inside || loc.d_center <= d_comm
    });
    out
}

/// One intersection as seen by one aircraft.
#[derive(Debug, Clone)]
pub(crate) struct Scene {
    pub id: IntersectionId,
    pub me: Location,
    /// Path length the observer still needs to clear the intersection.
    pub me_transit: f64,
    /// Observed aircraft inside the intersection on corridors off the
    /// observer's route, moving or not, with their remaining transit.
    pub occupants: Vec<(NeighborInfo, Location, f64)>,
}

impl Scene {
    pub fn movers(&self) -> impl Iterator<Item = &(NeighborInfo, Location, f64)> {
        self.occupants.iter().filter(|(n, _, _)| n.velocity != 0.0)
    }

    /// A halted occupant that should resume before a halted observer: less
    /// transit left, or as much with a lower id. Ranking by transit rather
    /// than by distance to the center keeps a same-route leader ahead of
    /// its follower, so halted aircraft never wait on each other in a
    /// cycle.
    pub fn halted_ahead(&self, me: AircraftId) -> bool {
        self.occupants.iter().any(|(n, _, transit)| {
            n.velocity == 0.0
                && (*transit < self.me_transit - TIE_TOLERANCE
                    || ((transit - self.me_transit).abs() <= TIE_TOLERANCE && n.id < me))
        })
    }
}

/// Straight-line estimate of the path left inside the intersection: the
/// radius plus the distance to the center while approaching it, the radius
/// minus that distance once past it.
fn transit_left(position: Point, heading: f64, loc: &Location, inter: &Intersection) -> f64 {
    let to_center = inter.center - position;
    let along = to_center.x * heading.cos() + to_center.y * heading.sin();
    if along >= 0.0 {
        inter.radius + loc.d_center
    } else {
        inter.radius - loc.d_center
    }
}

pub(crate) fn scene(obs: &Observation, airspace: &Airspace, id: IntersectionId) -> Scene {
    let inter = airspace.intersection(id);
    let route = airspace.route(obs.self_state.route);
    let me_state = &obs.self_state;
    let me = locate(me_state.position, me_state.corridor, inter);
    let me_transit = transit_left(me_state.position, me_state.heading, &me, inter);
    let occupants = obs
        .neighbors
        .iter()
        .filter(|n| !route.contains(n.corridor))
        .filter_map(|n| {
            let loc = locate(n.position, n.corridor, inter);
            loc.inside
                .then(|| (*n, loc, transit_left(n.position, n.heading, &loc, inter)))
        })
        .collect();
    Scene {
        id,
        me,
        me_transit,
        occupants,
    }
}
