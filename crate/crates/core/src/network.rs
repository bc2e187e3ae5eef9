//! Parameterized hub-and-spoke network used by the experiments.
//!
//! Each hub is crossed by `legs_per_hub` straight lines through its center at
//! evenly spaced headings. Every line carries one route, which owns the
//! crossing segment on that line. Up to two routes fly through both hubs;
//! the rest visit a single hub. Hub-B-only routes start farther out so that
//! their first arrivals coincide with the through traffic.

use crate::airspace::Point;
use crate::scenario::{CorridorDef, RouteDef, Scenario};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("network configuration error: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// 1 or 2.
    pub hubs: usize,
    pub legs_per_hub: usize,
    /// Routes through both hubs, 0 to 2. Ignored with one hub.
    pub through_routes: usize,
    /// Approach and departure length for hub A routes.
    pub leg_length: f64,
    /// Distance between hub centers.
    pub hub_spacing: f64,
    /// Half-length of each crossing segment.
    pub inner_half_length: f64,
    pub half_width: f64,
    /// How far the second through route continues past hub A before turning.
    pub turn_run: f64,
    /// Extra approach length added per route, in route order, so that
    /// near-simultaneous arrivals are not exactly equidistant.
    pub stagger: f64,
    pub d_comm: f64,
    /// Written into the scenario as its spawn gap.
    pub spawn_gap: f64,
}

impl Default for NetworkParams {
    fn default() -> Self {
        Self {
            hubs: 2,
            legs_per_hub: 4,
            through_routes: 2,
            leg_length: 10_000.0,
            hub_spacing: 30_000.0,
            inner_half_length: 600.0,
            half_width: 50.0,
            turn_run: 500.0,
            stagger: 700.0,
            d_comm: 1350.0,
            spawn_gap: 450.0,
        }
    }
}

/// The default two-hub network with the given leg count and length.
pub fn generate_default_network(legs_per_hub: usize, leg_length: f64) -> Result<Scenario, NetworkError> {
    generate_network(&NetworkParams {
        legs_per_hub,
        leg_length,
        ..NetworkParams::default()
    })
}

struct Builder {
    half_width: f64,
    corridors: Vec<CorridorDef>,
    routes: Vec<RouteDef>,
}

impl Builder {
    fn corridor(&mut self, id: String, points: &[Point]) -> String {
        self.corridors.push(CorridorDef {
            id: id.clone(),
            half_width: self.half_width,
            waypoints: points.iter().map(|p| [p.x, p.y]).collect(),
        });
        id
    }

    fn route(&mut self, id: String, corridors: Vec<String>) {
        self.routes.push(RouteDef {
            id,
            corridors,
            aircraft: None,
        });
    }
}

pub fn generate_network(p: &NetworkParams) -> Result<Scenario, NetworkError> {
    let fail = |m: String| Err(NetworkError::Config(m));
    if !(1..=2).contains(&p.hubs) {
        return fail(format!("hubs must be 1 or 2, got {}", p.hubs));
    }
    if p.legs_per_hub < 2 {
        return fail(format!("legs_per_hub must be at least 2, got {}", p.legs_per_hub));
    }
    let through = if p.hubs == 2 { p.through_routes } else { 0 };
    if through > 2 {
        return fail(format!("through_routes must be at most 2, got {through}"));
    }
    for (name, v) in [
        ("leg_length", p.leg_length),
        ("inner_half_length", p.inner_half_length),
        ("half_width", p.half_width),
        ("turn_run", p.turn_run),
        ("d_comm", p.d_comm),
        ("spawn_gap", p.spawn_gap),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return fail(format!("{name} must be positive and finite, got {v}"));
        }
    }
    if !(p.stagger.is_finite() && p.stagger >= 0.0) {
        return fail(format!("stagger must be non-negative, got {}", p.stagger));
    }
    if p.inner_half_length >= p.d_comm {
        return fail("crossing segments must end inside communication range".into());
    }
    let radius = p.d_comm;
    if p.hubs == 2 && p.hub_spacing <= 2.0 * (radius + p.d_comm) {
        return fail(format!(
            "hub spacing {} must exceed {}",
            p.hub_spacing,
            2.0 * (radius + p.d_comm)
        ));
    }

    let h = p.inner_half_length;
    let l = p.leg_length;
    let s = p.hub_spacing;
    let dir = |k: usize| Point::from_polar(1.0, PI * k as f64 / p.legs_per_hub as f64);
    let hub_a = Point::new(0.0, 0.0);
    let hub_b = Point::new(s, 0.0);
    let mut b = Builder {
        half_width: p.half_width,
        corridors: Vec::new(),
        routes: Vec::new(),
    };

    let extra = |route: usize| p.stagger * route as f64;
    let mut used_a = vec![false; p.legs_per_hub];
    let mut used_b = vec![false; p.legs_per_hub];

    if through >= 1 {
        let u = dir(0);
        let ids = vec![
            b.corridor("t0_approach".into(), &[hub_a - u * (h + l + extra(0)), hub_a - u * h]),
            b.corridor("t0_cross_a".into(), &[hub_a - u * h, hub_a + u * h]),
            b.corridor("t0_connector".into(), &[hub_a + u * h, hub_b - u * h]),
            b.corridor("t0_cross_b".into(), &[hub_b - u * h, hub_b + u * h]),
            b.corridor("t0_departure".into(), &[hub_b + u * h, hub_b + u * (h + l)]),
        ];
        b.route("through_0".into(), ids);
        used_a[0] = true;
        used_b[0] = true;
    }
    if through == 2 {
        let ka = 1;
        let kb = p.legs_per_hub - 1;
        let ua = dir(ka);
        // Enter hub B travelling away from its upper ray.
        let ub = dir(kb);
        let turn = hub_a + ua * (h + p.turn_run);
        let rejoin = hub_b + ub * (turn.y / ub.y);
        let ids = vec![
            b.corridor("t1_approach".into(), &[hub_a - ua * (h + l + extra(1)), hub_a - ua * h]),
            b.corridor("t1_cross_a".into(), &[hub_a - ua * h, hub_a + ua * h]),
            b.corridor("t1_connector".into(), &[hub_a + ua * h, turn, rejoin, hub_b + ub * h]),
            b.corridor("t1_cross_b".into(), &[hub_b + ub * h, hub_b - ub * h]),
            b.corridor("t1_departure".into(), &[hub_b - ub * h, hub_b - ub * (h + l)]),
        ];
        b.route("through_1".into(), ids);
        used_a[ka] = true;
        used_b[kb] = true;
    }

    let single = |b: &mut Builder, tag: &str, hub: Point, k: usize, approach: f64| {
        let u = dir(k);
        let approach = approach + extra(b.routes.len());
        let ids = vec![
            b.corridor(format!("{tag}{k}_approach"), &[hub - u * (h + approach), hub - u * h]),
            b.corridor(format!("{tag}{k}_cross"), &[hub - u * h, hub + u * h]),
            b.corridor(format!("{tag}{k}_departure"), &[hub + u * h, hub + u * (h + l)]),
        ];
        b.route(format!("{tag}{k}"), ids);
    };
    for k in (0..p.legs_per_hub).filter(|&k| !used_a[k]) {
        single(&mut b, "a", hub_a, k, l);
    }
    if p.hubs == 2 {
        for k in (0..p.legs_per_hub).filter(|&k| !used_b[k]) {
            single(&mut b, "b", hub_b, k, l + s);
        }
    }

    let scenario = Scenario {
        d_comm: p.d_comm,
        spawn_gap: p.spawn_gap,
        corridors: b.corridors,
        routes: b.routes,
        ..Scenario::default()
    };
    let airspace = scenario
        .airspace()
        .map_err(|e| NetworkError::Config(e.to_string()))?;
    let found = airspace.intersections();
    let expected_centers: Vec<Point> = [hub_a, hub_b][..p.hubs].to_vec();
    let members_ok = found.iter().all(|i| i.members.len() == p.legs_per_hub);
    let centers_ok = found.len() == p.hubs
        && found
            .iter()
            .zip(&expected_centers)
            .all(|(i, c)| i.center.distance(*c) < 1.0);
    if !(members_ok && centers_ok) {
        return fail(format!(
            "corridors overlap outside the hubs: expected {} intersections of {} corridors, found {:?}",
            p.hubs,
            p.legs_per_hub,
            found.iter().map(|i| i.members.len()).collect::<Vec<_>>()
        ));
    }
    Ok(scenario)
}
