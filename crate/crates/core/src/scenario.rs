//! Scenario files: network geometry plus run parameters, as TOML.
//!
//! ```toml
//! protocol = "csma"
//! aircraft_per_route = 10
//!
//! [[corridors]]
//! id = "west"
//! waypoints = [[-3000.0, 0.0], [0.0, 0.0]]
//!
//! [[routes]]
//! id = "r0"
//! corridors = ["west"]
//! ```
//!
//! Every other field has a default; unknown keys are rejected.

use crate::aircraft::SpeedLimits;
use crate::airspace::{Airspace, AirspaceError, CorridorSpec, Point, RouteSpec};
use crate::engine::{EngineConfig, ProcessingOrder};
use crate::protocols::ProtocolKind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("invalid scenario: {0}")]
    Airspace(#[from] AirspaceError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorridorDef {
    pub id: String,
    #[serde(default = "defaults::half_width")]
    pub half_width: f64,
    pub waypoints: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteDef {
    pub id: String,
    pub corridors: Vec<String>,
    /// Overrides `aircraft_per_route` for this route.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aircraft: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "defaults::protocol")]
    pub protocol: ProtocolKind,
    #[serde(default = "defaults::aircraft_per_route")]
    pub aircraft_per_route: usize,
    #[serde(default)]
    pub seed: u64,
    /// Probability that an aircraft ignores protocol commands.
    #[serde(default)]
    pub noncompliance: f64,
    #[serde(default = "defaults::d_los")]
    pub d_los: f64,
    #[serde(default = "defaults::d_comm")]
    pub d_comm: f64,
    /// Defaults to `d_comm`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection_radius: Option<f64>,
    #[serde(default = "defaults::dt")]
    pub dt: f64,
    #[serde(default = "defaults::v_min_kt")]
    pub v_min_kt: f64,
    #[serde(default = "defaults::v_max_kt")]
    pub v_max_kt: f64,
    #[serde(default = "defaults::gap")]
    pub follow_gap: f64,
    #[serde(default = "defaults::gap")]
    pub spawn_gap: f64,
    #[serde(default = "defaults::max_steps")]
    pub max_steps: u64,
    #[serde(default)]
    pub corridors: Vec<CorridorDef>,
    #[serde(default)]
    pub routes: Vec<RouteDef>,
}

mod defaults {
    use crate::protocols::ProtocolKind;

    pub fn protocol() -> ProtocolKind {
        ProtocolKind::None
    }
    pub fn aircraft_per_route() -> usize {
        10
    }
    pub fn half_width() -> f64 {
        50.0
    }
    pub fn d_los() -> f64 {
        150.0
    }
    pub fn d_comm() -> f64 {
        1350.0
    }
    pub fn dt() -> f64 {
        4.0
    }
    pub fn v_min_kt() -> f64 {
        5.0
    }
    pub fn v_max_kt() -> f64 {
        60.0
    }
    pub fn gap() -> f64 {
        300.0
    }
    pub fn max_steps() -> u64 {
        10_000
    }
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            protocol: defaults::protocol(),
            aircraft_per_route: defaults::aircraft_per_route(),
            seed: 0,
            noncompliance: 0.0,
            d_los: defaults::d_los(),
            d_comm: defaults::d_comm(),
            intersection_radius: None,
            dt: defaults::dt(),
            v_min_kt: defaults::v_min_kt(),
            v_max_kt: defaults::v_max_kt(),
            follow_gap: defaults::gap(),
            spawn_gap: defaults::gap(),
            max_steps: defaults::max_steps(),
            corridors: Vec::new(),
            routes: Vec::new(),
        }
    }
}

/// Parse and fully validate a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1),
        message: e.message().to_string(),
    })?;
    scenario.validate()?;
    Ok(scenario)
}

impl Scenario {
    /// Fails only for values TOML cannot hold, such as seeds above
    /// `i64::MAX`.
    pub fn to_toml(&self) -> Result<String, ScenarioError> {
        toml::to_string(self).map_err(|e| ScenarioError::Validation(e.to_string()))
    }

    pub fn radius(&self) -> f64 {
        self.intersection_radius.unwrap_or(self.d_comm)
    }

    /// Check every parameter invariant, then build the airspace.
    pub fn validate(&self) -> Result<Airspace, ScenarioError> {
        let fail = |msg: String| Err(ScenarioError::Validation(msg));
        let positive = [
            ("d_los", self.d_los),
            ("d_comm", self.d_comm),
            ("intersection_radius", self.radius()),
            ("dt", self.dt),
            ("v_min_kt", self.v_min_kt),
            ("follow_gap", self.follow_gap),
            ("spawn_gap", self.spawn_gap),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return fail(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.d_comm <= self.d_los {
            return fail(format!("d_comm ({}) must exceed d_los ({})", self.d_comm, self.d_los));
        }
        if self.radius() > self.d_comm {
            return fail(format!(
                "intersection_radius ({}) must not exceed d_comm ({})",
                self.radius(),
                self.d_comm
            ));
        }
        if !(self.v_max_kt.is_finite() && self.v_max_kt > self.v_min_kt) {
            return fail(format!("v_max_kt ({}) must exceed v_min_kt ({})", self.v_max_kt, self.v_min_kt));
        }
        if !(0.0..=1.0).contains(&self.noncompliance) {
            return fail(format!("noncompliance must lie in [0, 1], got {}", self.noncompliance));
        }
        if self.max_steps == 0 {
            return fail("max_steps must be at least 1".into());
        }
        if self.routes.is_empty() {
            return fail("at least one route is required".into());
        }
        self.airspace()
    }

    pub fn airspace(&self) -> Result<Airspace, ScenarioError> {
        let corridors: Vec<CorridorSpec> = self
            .corridors
            .iter()
            .map(|c| CorridorSpec {
                name: c.id.clone(),
                waypoints: c.waypoints.iter().map(|&p| Point::from(p)).collect(),
                half_width: c.half_width,
            })
            .collect();
        let routes: Vec<RouteSpec> = self
            .routes
            .iter()
            .map(|r| RouteSpec {
                name: r.id.clone(),
                corridors: r.corridors.clone(),
            })
            .collect();
        Ok(Airspace::new(&corridors, &routes, self.radius())?)
    }

    /// Aircraft count for each route, in route order.
    pub fn per_route(&self) -> Vec<usize> {
        self.routes
            .iter()
            .map(|r| r.aircraft.unwrap_or(self.aircraft_per_route))
            .collect()
    }

    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            protocol: self.protocol,
            d_los: self.d_los,
            d_comm: self.d_comm,
            dt: self.dt,
            limits: SpeedLimits::from_knots(self.v_min_kt, self.v_max_kt),
            follow_gap: self.follow_gap,
            spawn_gap: self.spawn_gap,
            max_steps: self.max_steps,
            noncompliance: self.noncompliance,
            seed: self.seed,
            order: ProcessingOrder::Ascending,
        }
    }
}
