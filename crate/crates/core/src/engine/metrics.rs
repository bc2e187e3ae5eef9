use super::los::{CompliancePairing, LosCategory, LosEpisode};
use crate::aircraft::{AircraftId, AircraftState};
use crate::airspace::RouteId;
use crate::protocols::ProtocolKind;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AircraftRecord {
    pub id: AircraftId,
    pub route: RouteId,
    pub compliant: bool,
    pub takeoff_s: Option<f64>,
    pub landing_s: Option<f64>,
    pub airborne_steps: u64,
    pub halted_steps: u64,
}

impl AircraftRecord {
    pub fn halt_pct(&self) -> Option<f64> {
        (self.airborne_steps > 0).then(|| 100.0 * self.halted_steps as f64 / self.airborne_steps as f64)
    }

    pub fn flight_time_s(&self) -> Option<f64> {
        Some(self.landing_s? - self.takeoff_s?)
    }
}

/// Everything measured in one episode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub protocol: ProtocolKind,
    pub seed: u64,
    pub noncompliance: f64,
    pub aircraft: usize,
    pub compliant_aircraft: usize,
    pub steps: u64,
    /// LOS episodes between aircraft on different routes.
    pub cross_corridor_los: u64,
    pub same_route_los: u64,
    /// Cross-corridor episodes at an intersection, by compliance pairing.
    pub compliant_compliant_los: u64,
    pub compliant_noncompliant_los: u64,
    pub noncompliant_noncompliant_los: u64,
    pub los_per_compliant_aircraft: f64,
    pub max_flight_time_s: f64,
    pub mean_halt_pct: f64,
    pub timeout: bool,
    /// Steps on which the mutual-exclusion audit failed.
    pub exclusion_violations: u64,
    pub episodes: Vec<LosEpisode>,
    pub records: Vec<AircraftRecord>,
}

pub(crate) struct ReportInputs<'a> {
    pub protocol: ProtocolKind,
    pub seed: u64,
    pub noncompliance: f64,
    pub steps: u64,
    pub dt: f64,
    pub timeout: bool,
    pub exclusion_violations: u64,
    pub fleet: &'a [AircraftState],
    pub airborne_steps: &'a [u64],
    pub halted_steps: &'a [u64],
    pub episodes: Vec<LosEpisode>,
}

pub(crate) fn build_report(inp: ReportInputs<'_>) -> MetricsReport {
    let records: Vec<AircraftRecord> = inp
        .fleet
        .iter()
        .map(|a| AircraftRecord {
            id: a.id,
            route: a.route,
            compliant: a.compliant,
            takeoff_s: a.takeoff_time,
            landing_s: a.landing_time,
            airborne_steps: inp.airborne_steps[a.id.0 as usize],
            halted_steps: inp.halted_steps[a.id.0 as usize],
        })
        .collect();

    let count = |f: &dyn Fn(&LosEpisode) -> bool| inp.episodes.iter().filter(|e| f(e)).count() as u64;
    let cross = |e: &LosEpisode| e.category == LosCategory::CrossCorridor;
    let at_pairing = |p: CompliancePairing| move |e: &LosEpisode| cross(e) && e.at_intersection && e.pairing == p;

    let compliant_aircraft = records.iter().filter(|r| r.compliant).count();
    let compliant_noncompliant_los = count(&at_pairing(CompliancePairing::CompliantNoncompliant));
    let end_s = inp.steps as f64 * inp.dt;
    let max_flight_time_s = records
        .iter()
        .filter_map(|r| Some(r.landing_s.unwrap_or(end_s) - r.takeoff_s?))
        .fold(0.0, f64::max);
    let halts: Vec<f64> = records.iter().filter_map(AircraftRecord::halt_pct).collect();
    let mean_halt_pct = if halts.is_empty() {
        0.0
    } else {
        halts.iter().sum::<f64>() / halts.len() as f64
    };

    MetricsReport {
        protocol: inp.protocol,
        seed: inp.seed,
        noncompliance: inp.noncompliance,
        aircraft: records.len(),
        compliant_aircraft,
        steps: inp.steps,
        cross_corridor_los: count(&cross),
        same_route_los: count(&|e| !cross(e)),
        compliant_compliant_los: count(&at_pairing(CompliancePairing::CompliantCompliant)),
        compliant_noncompliant_los,
        noncompliant_noncompliant_los: count(&at_pairing(CompliancePairing::NoncompliantNoncompliant)),
        los_per_compliant_aircraft: if compliant_aircraft == 0 {
            0.0
        } else {
            compliant_noncompliant_los as f64 / compliant_aircraft as f64
        },
        max_flight_time_s,
        mean_halt_pct,
        timeout: inp.timeout,
        exclusion_violations: inp.exclusion_violations,
        episodes: inp.episodes,
        records,
    }
}
