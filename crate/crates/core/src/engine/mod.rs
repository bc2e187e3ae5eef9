//! The discrete-time simulation loop.
//!
//! Each step runs in a fixed order: takeoffs, observations from the
//! pre-step snapshot, protocol commands, the compliance gate, the fixed
//! policy, simultaneous movement, then separation checks and bookkeeping.

mod los;
mod metrics;

pub use los::{
    categorize, detect_los, CompliancePairing, LosCategory, LosEpisode, LosPair, LosTracker,
};
pub use metrics::{AircraftRecord, MetricsReport};

use crate::aircraft::{
    apply_action, baseline_policy, spawn_step, step_kinematics, AircraftId, AircraftState, Phase,
    PolicyParams, SpawnQueue, SpeedLimits,
};
use crate::airspace::{locate, Airspace, RouteId};
use crate::observation::observe_all;
use crate::protocols::{
    compliance_gate, decide_baseline, decide_csma, decide_srtf, gather_round_robin_requests, Command,
    CsmaState, ProtocolKind, RoundRobinController, SrtfState,
};
use crate::rng::stream;
use los::near_intersection;
use metrics::{build_report, ReportInputs};
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

/// Order in which aircraft are visited within a step. Outcomes must not
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProcessingOrder {
    #[default]
    Ascending,
    Descending,
    /// A fixed permutation drawn from this seed.
    Shuffled(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub protocol: ProtocolKind,
    pub d_los: f64,
    pub d_comm: f64,
    pub dt: f64,
    pub limits: SpeedLimits,
    pub follow_gap: f64,
    pub spawn_gap: f64,
    pub max_steps: u64,
    /// Probability that an aircraft ignores protocol commands.
    pub noncompliance: f64,
    pub seed: u64,
    pub order: ProcessingOrder,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            protocol: ProtocolKind::None,
            d_los: 150.0,
            d_comm: 1350.0,
            dt: 4.0,
            limits: SpeedLimits::default(),
            follow_gap: 300.0,
            spawn_gap: 300.0,
            max_steps: 10_000,
            noncompliance: 0.0,
            seed: 0,
            order: ProcessingOrder::Ascending,
        }
    }
}

#[derive(Debug, Clone)]
enum Agent {
    Baseline,
    Csma(CsmaState),
    Srtf(SrtfState),
}

/// Pending, airborne and landed head counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseCounts {
    pub pending: usize,
    pub airborne: usize,
    pub landed: usize,
}

/// A running episode. Ids are route-major: route 0's aircraft come first,
/// in takeoff order.
#[derive(Debug, Clone)]
pub struct World {
    clock: u64,
    config: EngineConfig,
    airspace: Arc<Airspace>,
    aircraft: Vec<AircraftState>,
    queues: Vec<SpawnQueue>,
    agents: Vec<Agent>,
    controllers: Vec<RoundRobinController>,
    order: Vec<usize>,
    tracker: LosTracker,
    airborne_steps: Vec<u64>,
    halted_steps: Vec<u64>,
    exclusion_violations: u64,
    last_commands: Vec<Option<Command>>,
}

impl World {
    /// `per_route[r]` aircraft take off from route `r`.
    pub fn new(airspace: Arc<Airspace>, per_route: &[usize], config: EngineConfig) -> Self {
        assert_eq!(per_route.len(), airspace.routes().len(), "one count per route");
        let mut aircraft = Vec::new();
        let mut queues = Vec::new();
        let mut agents = Vec::new();
        for (r, &n) in per_route.iter().enumerate() {
            let mut ids = Vec::with_capacity(n);
            for k in 0..n {
                let id = AircraftId(aircraft.len() as u32);
                aircraft.push(AircraftState::pending(id, RouteId(r), &airspace));
                agents.push(match config.protocol {
                    ProtocolKind::Csma => Agent::Csma(CsmaState::new(stream(config.seed, "csma", r as u64, k as u64))),
                    ProtocolKind::Srtf => Agent::Srtf(SrtfState::new(stream(config.seed, "srtf", r as u64, k as u64))),
                    _ => Agent::Baseline,
                });
                ids.push(id);
            }
            queues.push(SpawnQueue {
                route: RouteId(r),
                aircraft: ids,
                next: 0,
            });
        }
        let controllers = match config.protocol {
            ProtocolKind::RoundRobin => airspace.intersections().iter().map(RoundRobinController::new).collect(),
            _ => Vec::new(),
        };
        let n = aircraft.len();
        let mut order: Vec<usize> = (0..n).collect();
        match config.order {
            ProcessingOrder::Ascending => {}
            ProcessingOrder::Descending => order.reverse(),
            ProcessingOrder::Shuffled(s) => order.shuffle(&mut stream(s, "order", 0, 0)),
        }
        Self {
            clock: 0,
            config,
            airspace,
            aircraft,
            queues,
            agents,
            controllers,
            order,
            tracker: LosTracker::default(),
            airborne_steps: vec![0; n],
            halted_steps: vec![0; n],
            exclusion_violations: 0,
            last_commands: vec![None; n],
        }
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn time_s(&self) -> f64 {
        self.clock as f64 * self.config.dt
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn airspace(&self) -> &Airspace {
        &self.airspace
    }

    /// Indexed by id.
    pub fn aircraft(&self) -> &[AircraftState] {
        &self.aircraft
    }

    /// Commands after the compliance gate on the last step, by id.
    pub fn last_commands(&self) -> &[Option<Command>] {
        &self.last_commands
    }

    pub fn phase_counts(&self) -> PhaseCounts {
        let count = |p| self.aircraft.iter().filter(|a| a.phase == p).count();
        PhaseCounts {
            pending: count(Phase::Pending),
            airborne: count(Phase::Airborne),
            landed: count(Phase::Landed),
        }
    }

    pub fn finished(&self) -> bool {
        self.aircraft.iter().all(|a| a.phase == Phase::Landed)
    }

    pub fn timed_out(&self) -> bool {
        !self.finished() && self.clock >= self.config.max_steps
    }

    pub fn open_los(&self) -> usize {
        self.tracker.open_count()
    }

    /// Advance one step.
    pub fn step(&mut self) {
        let cfg = &self.config;
        let now = self.time_s();
        let airspace = Arc::clone(&self.airspace);

        for id in spawn_step(&mut self.queues, &mut self.aircraft, &airspace, cfg.spawn_gap, now) {
            let a = &mut self.aircraft[id.0 as usize];
            let ordinal = self.queues[a.route.0].aircraft.iter().position(|&x| x == id).unwrap_or(0);
            let u: f64 = stream(cfg.seed, "compliance", a.route.0 as u64, ordinal as u64).gen();
            a.compliant = u >= cfg.noncompliance;
        }

        let observations = observe_all(&self.aircraft, cfg.d_comm, self.clock);

        let mut commands: Vec<Option<Command>> = vec![None; self.aircraft.len()];
        if cfg.protocol == ProtocolKind::RoundRobin {
            let visit: Vec<AircraftState> = self.order.iter().map(|&i| self.aircraft[i].clone()).collect();
            let traffic = gather_round_robin_requests(&visit, &airspace, cfg.d_comm);
            for (ctrl, t) in self.controllers.iter_mut().zip(&traffic) {
                for (id, cmd) in ctrl.controller_step(&t.requests, &t.occupants) {
                    let slot = &mut commands[id.0 as usize];
                    if *slot != Some(Command::Wait) {
                        *slot = Some(cmd);
                    }
                }
            }
        }
        for &i in &self.order {
            let Some(obs) = &observations[i] else {
                continue;
            };
            let cmd = match (&mut self.agents[i], cfg.protocol) {
                (_, ProtocolKind::RoundRobin) => commands[i].unwrap_or(Command::Go),
                (Agent::Csma(st), _) => decide_csma(obs, st, &airspace, cfg.d_comm),
                (Agent::Srtf(st), _) => decide_srtf(obs, st, &airspace, cfg.d_comm),
                (Agent::Baseline, _) => decide_baseline(obs),
            };
            commands[i] = Some(compliance_gate(cmd, obs.self_state.compliant));
        }

        let params = PolicyParams {
            limits: cfg.limits,
            dt: cfg.dt,
            follow_gap: cfg.follow_gap,
        };
        let landing_time = (self.clock + 1) as f64 * cfg.dt;
        for &i in &self.order {
            let (Some(obs), Some(cmd)) = (&observations[i], commands[i]) else {
                continue;
            };
            let action = baseline_policy(obs, cmd, &airspace, params);
            let moved = apply_action(&self.aircraft[i], action, cfg.limits, cfg.dt)
                .expect("observed aircraft are airborne");
            self.airborne_steps[i] += 1;
            if moved.velocity == 0.0 {
                self.halted_steps[i] += 1;
            }
            self.aircraft[i] = step_kinematics(&moved, &airspace, cfg.dt, landing_time);
        }
        self.last_commands = commands;

        let active = detect_los(&self.aircraft, &airspace, cfg.d_los);
        let compliant: Vec<bool> = self.aircraft.iter().map(|a| a.compliant).collect();
        self.tracker.observe(self.clock, &active, &compliant);
        if !mutual_exclusion_audit(&self.aircraft, &airspace, cfg.d_los) {
            self.exclusion_violations += 1;
        }
        self.clock += 1;
    }

    /// Step until everyone has landed or the step budget runs out.
    pub fn run(mut self) -> MetricsReport {
        while !self.finished() && self.clock < self.config.max_steps {
            self.step();
        }
        self.into_report()
    }

    pub fn into_report(self) -> MetricsReport {
        let timeout = self.timed_out();
        build_report(ReportInputs {
            protocol: self.config.protocol,
            seed: self.config.seed,
            noncompliance: self.config.noncompliance,
            steps: self.clock,
            dt: self.config.dt,
            timeout,
            exclusion_violations: self.exclusion_violations,
            fleet: &self.aircraft,
            airborne_steps: &self.airborne_steps,
            halted_steps: &self.halted_steps,
            episodes: self.tracker.finish(),
        })
    }
}

pub fn run_episode(airspace: Arc<Airspace>, per_route: &[usize], config: EngineConfig) -> MetricsReport {
    World::new(airspace, per_route, config).run()
}

/// No intersection holds two moving aircraft on cross-route member
/// corridors closer than `d_los`.
pub fn mutual_exclusion_audit(fleet: &[AircraftState], airspace: &Airspace, d_los: f64) -> bool {
    let moving: Vec<&AircraftState> = fleet
        .iter()
        .filter(|a| a.is_airborne() && a.velocity != 0.0 && near_intersection(a, airspace))
        .collect();
    for inter in airspace.intersections() {
        let inside: Vec<&&AircraftState> = moving
            .iter()
            .filter(|a| locate(a.position, a.corridor, inter).inside)
            .collect();
        for (k, a) in inside.iter().enumerate() {
            for b in &inside[k + 1..] {
                if a.position.distance(b.position) < d_los
                    && categorize(a, b, airspace) == LosCategory::CrossCorridor
                {
                    return false;
                }
            }
        }
    }
    true
}
