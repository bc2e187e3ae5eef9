use super::{relevant_intersections, scene, Command, Scene};
use crate::aircraft::AircraftId;
use crate::airspace::{Airspace, IntersectionId};
use crate::observation::Observation;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Backoff waits are drawn uniformly from `1..=MAX_BACKOFF_STEPS`.
pub const MAX_BACKOFF_STEPS: u32 = 100;

#[derive(Debug, Clone, Default, PartialEq)]
struct AccessMemory {
    movers: BTreeSet<AircraftId>,
}

/// Per-aircraft CSMA/CD state: the backoff counter, the aircraft's own
/// random stream, and what it saw at each nearby intersection on the
/// previous step.
#[derive(Debug, Clone)]
pub struct CsmaState {
    /// Remaining backoff steps.
    pub wait: u32,
    /// Simultaneous-access conflicts detected so far.
    pub conflicts: u32,
    rng: ChaCha8Rng,
    memory: BTreeMap<IntersectionId, AccessMemory>,
}

impl CsmaState {
    pub fn new(rng: ChaCha8Rng) -> Self {
        Self {
            wait: 0,
            conflicts: 0,
            rng,
            memory: BTreeMap::new(),
        }
    }
}

/// First come, first served with random backoff.
///
/// An aircraft is accessing an intersection while it is inside and moving.
/// A conflict is detected when, while accessing, it sees a cross-route
/// mover inside that was not moving there on the previous step: two
/// aircraft that entered together, whether they notice each other at once
/// or only once in range, or an aircraft that ignored the protocol. The
/// aircraft then draws a fresh backoff.
///
/// 1. backoff pending: wait;
/// 2. outside, and any cross-route aircraft is inside, moving or halted:
///    wait;
/// 3. inside but halted, and a cross-route aircraft is moving inside: wait;
/// 4. otherwise go.
pub fn decide_csma(
    obs: &Observation,
    state: &mut CsmaState,
    airspace: &Airspace,
    d_comm: f64,
) -> Command {
    let scenes: Vec<Scene> = relevant_intersections(obs, airspace, d_comm)
        .into_iter()
        .map(|id| scene(obs, airspace, id))
        .collect();
    let moving = obs.self_state.velocity != 0.0;

    let mut conflict = false;
    let mut memory = BTreeMap::new();
    for s in &scenes {
        let accessing = s.me.inside && moving;
        let movers: BTreeSet<AircraftId> = s.movers().map(|(n, _, _)| n.id).collect();
        let prev = state.memory.get(&s.id);
        if accessing && movers.iter().any(|id| !prev.is_some_and(|m| m.movers.contains(id))) {
            conflict = true;
        }
        memory.insert(s.id, AccessMemory { movers });
    }
    state.memory = memory;

    if conflict {
        state.wait = state.rng.gen_range(1..=MAX_BACKOFF_STEPS);
        state.conflicts += 1;
    }
    if state.wait > 0 {
        state.wait -= 1;
        return Command::Wait;
    }
    for s in &scenes {
        let blocked = if !s.me.inside {
            !s.occupants.is_empty()
        } else {
            !moving && s.movers().next().is_some()
        };
        if blocked {
            return Command::Wait;
        }
    }
    Command::Go
}
