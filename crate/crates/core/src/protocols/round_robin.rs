use super::Command;
use crate::aircraft::{AircraftId, AircraftState};
use crate::airspace::{locate, Airspace, CorridorId, Intersection, IntersectionId};
use std::collections::{BTreeMap, BTreeSet};

/// Steps a corridor group keeps priority before the controller moves on.
pub const TURN_LENGTH_STEPS: u32 = 100;

/// A compliant aircraft near an intersection asking to enter it via
/// `corridor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntryRequest {
    pub aircraft: AircraftId,
    pub corridor: CorridorId,
}

/// A compliant aircraft currently inside the intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occupant {
    pub aircraft: AircraftId,
    pub corridor: CorridorId,
}

/// Central scheduler for one intersection. Priority cycles through member
/// corridors in ascending order, skipping corridors with nobody waiting.
#[derive(Debug, Clone)]
pub struct RoundRobinController {
    intersection: IntersectionId,
    members: Vec<CorridorId>,
    priority: Option<CorridorId>,
    timer: u32,
    turn_length: u32,
    turns: u64,
}

impl RoundRobinController {
    pub fn new(intersection: &Intersection) -> Self {
        Self::with_turn_length(intersection, TURN_LENGTH_STEPS)
    }

    pub fn with_turn_length(intersection: &Intersection, turn_length: u32) -> Self {
        Self {
            intersection: intersection.id,
            members: intersection.members.clone(),
            priority: None,
            timer: 0,
            turn_length: turn_length.max(1),
            turns: 0,
        }
    }

    pub fn intersection(&self) -> IntersectionId {
        self.intersection
    }

    pub fn priority(&self) -> Option<CorridorId> {
        self.priority
    }

    pub fn timer(&self) -> u32 {
        self.timer
    }

    /// Number of times priority has been assigned.
    pub fn turns(&self) -> u64 {
        self.turns
    }

    /// Update priority, then answer every request. A request is granted only
    /// on the priority corridor, and only while no aircraft from another
    /// corridor is inside.
    pub fn controller_step(
        &mut self,
        requests: &[EntryRequest],
        occupants: &[Occupant],
    ) -> BTreeMap<AircraftId, Command> {
        let pending: BTreeSet<CorridorId> = requests.iter().map(|r| r.corridor).collect();
        self.rotate(&pending);
        let blocked = occupants.iter().any(|o| Some(o.corridor) != self.priority);
        requests
            .iter()
            .map(|r| {
                let go = Some(r.corridor) == self.priority && !blocked;
                (r.aircraft, if go { Command::Go } else { Command::Wait })
            })
            .collect()
    }

    fn rotate(&mut self, pending: &BTreeSet<CorridorId>) {
        let Some(current) = self.priority else {
            if let Some(&c) = pending.first() {
                self.assign(c);
            }
            return;
        };
        self.timer += 1;
        let expired = self.timer >= self.turn_length;
        if !expired && pending.contains(&current) {
            return;
        }
        let start = self.members.iter().position(|&m| m == current).unwrap_or(0);
        let n = self.members.len();
        let next = (1..n)
            .map(|k| self.members[(start + k) % n])
            .find(|m| pending.contains(m));
        match next {
            Some(c) => self.assign(c),
            None if expired => self.timer = 0,
            None => {}
        }
    }

    fn assign(&mut self, corridor: CorridorId) {
        self.priority = Some(corridor);
        self.timer = 0;
        self.turns += 1;
    }
}

/// Requests and occupants for one intersection.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntersectionTraffic {
    pub requests: Vec<EntryRequest>,
    pub occupants: Vec<Occupant>,
}

/// Sort the airborne fleet into per-intersection requests and occupants,
/// indexed by intersection id.
///
/// Only compliant aircraft take part: those inside are occupants, those
/// outside but within `d_comm` of the center request entry on the first
/// member corridor left on their route. Non-compliant aircraft never
/// register and stay invisible to the controller.
pub fn gather_round_robin_requests(
    fleet: &[AircraftState],
    airspace: &Airspace,
    d_comm: f64,
) -> Vec<IntersectionTraffic> {
    let mut out = vec![IntersectionTraffic::default(); airspace.intersections().len()];
    for a in fleet.iter().filter(|a| a.is_airborne() && a.compliant) {
        let route = airspace.route(a.route);
        let mut seen = BTreeSet::new();
        for &c in &route.corridors()[a.corridor_index..] {
            let Some(id) = airspace.intersection_of(c) else {
                continue;
            };
            if !seen.insert(id) {
                continue;
            }
            let inter = airspace.intersection(id);
            let loc = locate(a.position, a.corridor, inter);
            let traffic = &mut out[id.0];
            if loc.inside {
                traffic.occupants.push(Occupant {
                    aircraft: a.id,
                    corridor: a.corridor,
                });
            } else if loc.d_center <= d_comm {
                traffic.requests.push(EntryRequest {
                    aircraft: a.id,
                    corridor: c,
                });
            }
        }
    }
    out
}
