use crate::aircraft::{AircraftId, AircraftState};
use crate::airspace::Airspace;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LosCategory {
    CrossCorridor,
    SameRoute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompliancePairing {
    CompliantCompliant,
    CompliantNoncompliant,
    NoncompliantNoncompliant,
}

impl CompliancePairing {
    pub fn of(a: bool, b: bool) -> Self {
        match (a, b) {
            (true, true) => CompliancePairing::CompliantCompliant,
            (false, false) => CompliancePairing::NoncompliantNoncompliant,
            _ => CompliancePairing::CompliantNoncompliant,
        }
    }
}

/// One maximal run of consecutive steps in which a pair stays closer than
/// the separation minimum. Steps are inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LosEpisode {
    pub pair: (AircraftId, AircraftId),
    pub start: u64,
    pub end: u64,
    /// Cross-corridor if any step of the run was.
    pub category: LosCategory,
    pub pairing: CompliancePairing,
    /// Either aircraft was within an intersection radius at some step.
    pub at_intersection: bool,
}

/// A pair currently violating separation, as seen on one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosPair {
    pub pair: (AircraftId, AircraftId),
    pub distance: f64,
    pub category: LosCategory,
    pub at_intersection: bool,
}

/// Same-route iff both current corridors lie on one of the two routes.
pub fn categorize(a: &AircraftState, b: &AircraftState, airspace: &Airspace) -> LosCategory {
    let ra = airspace.route(a.route);
    let rb = airspace.route(b.route);
    if (ra.contains(a.corridor) && ra.contains(b.corridor)) || (rb.contains(a.corridor) && rb.contains(b.corridor)) {
        LosCategory::SameRoute
    } else {
        LosCategory::CrossCorridor
    }
}

pub(crate) fn near_intersection(a: &AircraftState, airspace: &Airspace) -> bool {
    airspace
        .intersections()
        .iter()
        .any(|i| a.position.distance(i.center) <= i.radius)
}

/// Every unordered airborne pair strictly closer than `d_los`, ordered by
/// pair ids.
pub fn detect_los(fleet: &[AircraftState], airspace: &Airspace, d_los: f64) -> Vec<LosPair> {
    let mut airborne: Vec<&AircraftState> = fleet.iter().filter(|a| a.is_airborne()).collect();
    airborne.sort_by(|a, b| a.position.x.total_cmp(&b.position.x).then(a.id.cmp(&b.id)));
    let mut out = Vec::new();
    for (k, a) in airborne.iter().enumerate() {
        for b in &airborne[k + 1..] {
            if b.position.x - a.position.x >= d_los {
                break;
            }
            let distance = a.position.distance(b.position);
            if distance < d_los {
                let pair = if a.id < b.id { (a.id, b.id) } else { (b.id, a.id) };
                out.push(LosPair {
                    pair,
                    distance,
                    category: categorize(a, b, airspace),
                    at_intersection: near_intersection(a, airspace) || near_intersection(b, airspace),
                });
            }
        }
    }
    out.sort_by_key(|p| p.pair);
    out
}

/// Merges per-step violations into episodes.
#[derive(Debug, Clone, Default)]
pub struct LosTracker {
    open: BTreeMap<(AircraftId, AircraftId), LosEpisode>,
    closed: Vec<LosEpisode>,
}

impl LosTracker {
    /// Record the violations seen at `step`. `compliant` is indexed by id.
    pub fn observe(&mut self, step: u64, active: &[LosPair], compliant: &[bool]) {
        let mut still = BTreeMap::new();
        for p in active {
            let ep = match self.open.remove(&p.pair) {
                Some(mut ep) => {
                    ep.end = step;
                    if p.category == LosCategory::CrossCorridor {
                        ep.category = LosCategory::CrossCorridor;
                    }
                    ep.at_intersection |= p.at_intersection;
                    ep
                }
                None => LosEpisode {
                    pair: p.pair,
                    start: step,
                    end: step,
                    category: p.category,
                    pairing: CompliancePairing::of(
                        compliant[p.pair.0 .0 as usize],
                        compliant[p.pair.1 .0 as usize],
                    ),
                    at_intersection: p.at_intersection,
                },
            };
            still.insert(p.pair, ep);
        }
        self.closed.extend(std::mem::replace(&mut self.open, still).into_values());
    }

    pub fn open_count(&self) -> usize {
        self.open.len()
    }

    /// Close everything and return all episodes ordered by start step, then
    /// pair.
    pub fn finish(mut self) -> Vec<LosEpisode> {
        self.closed.extend(std::mem::take(&mut self.open).into_values());
        self.closed.sort_by_key(|e| (e.start, e.pair));
        self.closed
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{cross_airspace, place};

    #[test]
    fn crossing_pair_at_100m_is_cross_corridor() {
        let airspace = cross_airspace();
        let a = place(&airspace, 0, 0, 3600.0 - 70.0, 30.0);
        let b = place(&airspace, 1, 1, 3600.0 - 70.0, 30.0);
        let hits = detect_los(&[a, b], &airspace, 150.0);
        assert_eq!(hits.len(), 1);
        assert!((hits[0].distance - 70.0 * 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(hits[0].category, LosCategory::CrossCorridor);
        assert!(hits[0].at_intersection);
    }

    #[test]
    fn leader_and_follower_are_same_route() {
        let airspace = cross_airspace();
        let a = place(&airspace, 0, 0, 2950.0, 30.0);
        let b = place(&airspace, 1, 0, 3050.0, 30.0);
        let hits = detect_los(&[a, b], &airspace, 150.0);
        assert_eq!(hits[0].category, LosCategory::SameRoute);
    }

    #[test]
    fn boundary_is_strict() {
        let airspace = cross_airspace();
        let a = place(&airspace, 0, 0, 100.0, 30.0);
        let b = place(&airspace, 1, 0, 250.0, 30.0);
        assert!(detect_los(&[a, b], &airspace, 150.0).is_empty());
    }

    #[test]
    fn contiguous_run_is_one_episode() {
        let active = [LosPair {
            pair: (AircraftId(0), AircraftId(1)),
            distance: 10.0,
            category: LosCategory::CrossCorridor,
            at_intersection: true,
        }];
        let mut t = LosTracker::default();
        let trace: Vec<bool> = (0..20).map(|s| (3..13).contains(&s) || s == 15).collect();
        for (s, &on) in trace.iter().enumerate() {
            t.observe(s as u64, if on { &active } else { &[] }, &[true, false]);
        }
        let eps = t.finish();
        let spans: Vec<(u64, u64)> = eps.iter().map(|e| (e.start, e.end)).collect();
        assert_eq!(spans, vec![(3, 12), (15, 15)]);
        assert_eq!(eps[0].pairing, CompliancePairing::CompliantNoncompliant);
    }
}
