//! Aircraft state, speed actions, kinematic stepping along routes, spawning,
//! and the fixed baseline policy with same-route car-following.

use crate::airspace::{Airspace, CorridorId, Point, RouteId};
use crate::observation::Observation;
use crate::protocols::Command;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Meters per second in one knot.
pub const KNOT_MS: f64 = 0.514444;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AircraftError {
    #[error("{id} is {phase:?}, expected airborne")]
    InvalidPhase { id: AircraftId, phase: Phase },
    #[error("{id}: corridor {corridor} is not on its route")]
    InvalidState { id: AircraftId, corridor: CorridorId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AircraftId(pub u32);

impl fmt::Display for AircraftId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AC{:04}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Pending,
    Airborne,
    Landed,
}

/// Airspeed bounds in m/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedLimits {
    pub v_min: f64,
    pub v_max: f64,
}

impl SpeedLimits {
    pub fn from_knots(v_min_kt: f64, v_max_kt: f64) -> Self {
        Self {
            v_min: v_min_kt * KNOT_MS,
            v_max: v_max_kt * KNOT_MS,
        }
    }

    /// `v` is zero or within `[v_min, v_max]`.
    pub fn admits(&self, v: f64) -> bool {
        v == 0.0 || (v >= self.v_min && v <= self.v_max)
    }
}

impl Default for SpeedLimits {
    fn default() -> Self {
        Self::from_knots(5.0, 60.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpeedAction {
    /// Fly at `v_max`.
    Max,
    /// Fly at `v_min`.
    Min,
    Maintain,
    /// Hover in place.
    Halt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AircraftState {
    pub id: AircraftId,
    pub route: RouteId,
    /// Index of `corridor` within the route; never decreases.
    pub corridor_index: usize,
    pub corridor: CorridorId,
    /// Meters along the current corridor centerline.
    pub arc_offset: f64,
    pub position: Point,
    pub velocity: f64,
    pub acceleration: f64,
    pub heading: f64,
    pub phase: Phase,
    pub compliant: bool,
    pub takeoff_time: Option<f64>,
    pub landing_time: Option<f64>,
}

impl AircraftState {
    /// A pending aircraft parked at the start of its route.
    pub fn pending(id: AircraftId, route: RouteId, airspace: &Airspace) -> Self {
        let first = airspace.route(route).corridors()[0];
        let corridor = airspace.corridor(first);
        Self {
            id,
            route,
            corridor_index: 0,
            corridor: first,
            arc_offset: 0.0,
            position: corridor.start(),
            velocity: 0.0,
            acceleration: 0.0,
            heading: corridor.heading_at(0.0),
            phase: Phase::Pending,
            compliant: true,
            takeoff_time: None,
            landing_time: None,
        }
    }

    pub fn is_airborne(&self) -> bool {
        self.phase == Phase::Airborne
    }

    /// Distance flown from the route origin.
    pub fn route_arc(&self, airspace: &Airspace) -> f64 {
        airspace.route(self.route).offset(self.corridor_index) + self.arc_offset
    }

    pub fn neighbor_info(&self) -> NeighborInfo {
        NeighborInfo {
            id: self.id,
            position: self.position,
            corridor: self.corridor,
            velocity: self.velocity,
            acceleration: self.acceleration,
            heading: self.heading,
        }
    }
}

/// The part of an aircraft's state that neighbors can observe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborInfo {
    pub id: AircraftId,
    pub position: Point,
    pub corridor: CorridorId,
    pub velocity: f64,
    pub acceleration: f64,
    pub heading: f64,
}

/// Set the airspeed for this step. Acceleration is recorded as the speed
/// change over `dt`.
pub fn apply_action(
    state: &AircraftState,
    action: SpeedAction,
    limits: SpeedLimits,
    dt: f64,
) -> Result<AircraftState, AircraftError> {
    if state.phase != Phase::Airborne {
        return Err(AircraftError::InvalidPhase {
            id: state.id,
            phase: state.phase,
        });
    }
    let v = match action {
        SpeedAction::Max => limits.v_max,
        SpeedAction::Min => limits.v_min,
        SpeedAction::Maintain => state.velocity,
        SpeedAction::Halt => 0.0,
    };
    let mut next = state.clone();
    next.acceleration = (v - state.velocity) / dt;
    next.velocity = v;
    Ok(next)
}

/// Advance along the route by `velocity * dt`, carrying any overrun into the
/// following corridors. Overrunning the final corridor lands the aircraft at
/// `landing_time`.
pub fn step_kinematics(
    state: &AircraftState,
    airspace: &Airspace,
    dt: f64,
    landing_time: f64,
) -> AircraftState {
    let mut next = state.clone();
    if state.phase != Phase::Airborne || state.velocity == 0.0 {
        return next;
    }
    let route = airspace.route(state.route);
    let mut arc = state.arc_offset + state.velocity * dt;
    let mut index = state.corridor_index;
    loop {
        let len = airspace.corridor(route.corridors()[index]).length();
        if arc < len {
            break;
        }
        if index + 1 == route.corridors().len() {
            let corridor = airspace.corridor(route.corridors()[index]);
            next.corridor_index = index;
            next.corridor = corridor.id;
            next.arc_offset = len;
            next.position = corridor.end();
            next.heading = corridor.heading_at(len);
            next.phase = Phase::Landed;
            next.landing_time = Some(landing_time);
            return next;
        }
        arc -= len;
        index += 1;
    }
    let corridor = airspace.corridor(route.corridors()[index]);
    next.corridor_index = index;
    next.corridor = corridor.id;
    next.arc_offset = arc;
    next.position = corridor.point_at(arc);
    next.heading = corridor.heading_at(arc);
    next
}

/// The nearest same-route aircraft ahead, with the gap to it along the route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leader {
    pub info: NeighborInfo,
    pub gap: f64,
}

/// Nearest observed aircraft ahead on the observer's own route.
pub fn find_leader(obs: &Observation, airspace: &Airspace) -> Option<Leader> {
    let me = &obs.self_state;
    let route = airspace.route(me.route);
    let own = me.route_arc(airspace);
    obs.neighbors
        .iter()
        .filter_map(|n| {
            let index = route.index_of(n.corridor)?;
            let arc = route.offset(index) + airspace.corridor(n.corridor).project(n.position);
            let gap = arc - own;
            (gap > 0.0 || (gap == 0.0 && n.id < me.id)).then_some(Leader { info: *n, gap })
        })
        .min_by(|a, b| a.gap.total_cmp(&b.gap).then(a.info.id.cmp(&b.info.id)))
}

/// Fastest action whose one-step lookahead keeps the gap to the leader at
/// least `follow_gap`, assuming the leader holds its observed speed. Halts
/// when no moving action qualifies.
pub fn car_following(
    state: &AircraftState,
    leader: Option<&Leader>,
    limits: SpeedLimits,
    dt: f64,
    follow_gap: f64,
) -> SpeedAction {
    let Some(leader) = leader else {
        return SpeedAction::Max;
    };
    let mut candidates = vec![(SpeedAction::Max, limits.v_max)];
    if state.velocity > limits.v_min && state.velocity < limits.v_max {
        candidates.push((SpeedAction::Maintain, state.velocity));
    }
    candidates.push((SpeedAction::Min, limits.v_min));
    candidates
        .into_iter()
        .find(|&(_, v)| leader.gap + (leader.info.velocity - v) * dt >= follow_gap)
        .map(|(a, _)| a)
        .unwrap_or(SpeedAction::Halt)
}

/// Knobs of the fixed policy that are not part of the observation.
#[derive(Debug, Clone, Copy)]
pub struct PolicyParams {
    pub limits: SpeedLimits,
    pub dt: f64,
    pub follow_gap: f64,
}

/// Constant top speed unless told to wait or held back by the aircraft ahead.
/// Non-compliant aircraft treat every command as `Go`.
pub fn baseline_policy(
    obs: &Observation,
    command: Command,
    airspace: &Airspace,
    params: PolicyParams,
) -> SpeedAction {
    if command == Command::Wait && obs.self_state.compliant {
        return SpeedAction::Halt;
    }
    let leader = find_leader(obs, airspace);
    car_following(
        &obs.self_state,
        leader.as_ref(),
        params.limits,
        params.dt,
        params.follow_gap,
    )
}

/// Per-route takeoff queue.
#[derive(Debug, Clone)]
pub struct SpawnQueue {
    pub route: RouteId,
    /// Aircraft ids in takeoff order.
    pub aircraft: Vec<AircraftId>,
    pub next: usize,
}

impl SpawnQueue {
    pub fn remaining(&self) -> usize {
        self.aircraft.len() - self.next
    }
}

/// Release every aircraft due to take off now: the head of each queue at the
/// first step, and afterwards each aircraft whose predecessor has flown at
/// least `spawn_gap` from the route origin. Returns the ids released.
///
/// `aircraft` is indexed by id.
pub fn spawn_step(
    queues: &mut [SpawnQueue],
    aircraft: &mut [AircraftState],
    airspace: &Airspace,
    spawn_gap: f64,
    now: f64,
) -> Vec<AircraftId> {
    let mut released = Vec::new();
    for queue in queues.iter_mut() {
        if queue.remaining() == 0 {
            continue;
        }
        let due = match queue.next.checked_sub(1) {
            None => true,
            Some(prev) => {
                let p = &aircraft[queue.aircraft[prev].0 as usize];
                p.phase == Phase::Landed || p.route_arc(airspace) >= spawn_gap
            }
        };
        if due {
            let id = queue.aircraft[queue.next];
            let a = &mut aircraft[id.0 as usize];
            a.phase = Phase::Airborne;
            a.takeoff_time = Some(now);
            queue.next += 1;
            released.push(id);
        }
    }
    released
}
