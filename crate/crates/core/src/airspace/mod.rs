//! Corridor-network geometry, intersection discovery, and the
//! critical-resource / blocking / bottleneck formalism built on it.
//!
//! Everything here is immutable once constructed. An [`Airspace`] is shared
//! behind an `Arc` by every episode that runs on the same network.

mod bottleneck;
mod corridor;
pub mod geometry;

pub use bottleneck::{
    blocking, collection_of_bottlenecks, critical_resources, pairwise_bottlenecks, BottleneckSet,
};
pub use corridor::{corridors_intersect, overlap_regions, Corridor, CorridorId};
pub use geometry::Point;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// End-to-start gap tolerated between consecutive corridors of a route.
pub const ROUTE_JOIN_TOLERANCE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AirspaceError {
    #[error("corridor {corridor:?} is degenerate: {reason}")]
    DegenerateCorridor { corridor: String, reason: String },
    #[error("route {route:?} is invalid: {reason}")]
    InvalidRoute { route: String, reason: String },
    #[error("intersection radius {0} must be positive")]
    InvalidRadius(f64),
    #[error(
        "intersection of {members:?} has overlap extending {extent:.1} m from its center, beyond radius {radius}"
    )]
    OverlapOutsideRadius {
        members: Vec<String>,
        extent: f64,
        radius: f64,
    },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RouteId(pub usize);

impl fmt::Display for RouteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "route#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntersectionId(pub usize);

/// An ordered chain of spatially connected corridors. Aircraft take off at
/// the start of the first corridor and land at the end of the last.
#[derive(Debug, Clone)]
pub struct Route {
    pub id: RouteId,
    pub name: String,
    corridors: Vec<CorridorId>,
    offsets: Vec<f64>,
    length: f64,
}

impl Route {
    pub fn corridors(&self) -> &[CorridorId] {
        &self.corridors
    }

    pub fn contains(&self, corridor: CorridorId) -> bool {
        self.corridors.contains(&corridor)
    }

    pub fn index_of(&self, corridor: CorridorId) -> Option<usize> {
        self.corridors.iter().position(|&c| c == corridor)
    }

    /// Route arc length at which corridor `index` begins.
    pub fn offset(&self, index: usize) -> f64 {
        self.offsets[index]
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// A maximal set of corridors closed under pairwise overlap.
#[derive(Debug, Clone, PartialEq)]
pub struct Intersection {
    pub id: IntersectionId,
    /// Sorted ascending.
    pub members: Vec<CorridorId>,
    pub center: Point,
    pub radius: f64,
}

impl Intersection {
    pub fn has_member(&self, corridor: CorridorId) -> bool {
        self.members.binary_search(&corridor).is_ok()
    }
}

/// Where a point sits relative to one intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    pub inside: bool,
    pub d_center: f64,
}

/// Inside iff the current corridor is a member and the point lies within
/// the intersection radius of its center.
pub fn locate(position: Point, corridor: CorridorId, intersection: &Intersection) -> Location {
    let d_center = position.distance(intersection.center);
    Location {
        inside: intersection.has_member(corridor) && d_center <= intersection.radius,
        d_center,
    }
}

/// Group every corridor that overlaps at least one other corridor into the
/// connected components of the overlap graph.
///
/// Components are ordered (and numbered) by their smallest member id. The
/// center of each is the mean of the centroids of its pairwise overlap
/// regions; every overlap region must fit inside `radius` of that center.
pub fn build_intersections(
    corridors: &[Corridor],
    radius: f64,
) -> Result<Vec<Intersection>, AirspaceError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(AirspaceError::InvalidRadius(radius));
    }
    let n = corridors.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut overlapping = vec![false; n];
    let mut regions: Vec<(usize, Vec<geometry::ConvexPolygon>)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let shared = overlap_regions(&corridors[i], &corridors[j]);
            if shared.is_empty() {
                continue;
            }
            overlapping[i] = true;
            overlapping[j] = true;
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri.max(rj)] = ri.min(rj);
            }
            regions.push((i, shared));
        }
    }

    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in (0..n).filter(|&i| overlapping[i]) {
        components.entry(roots[i]).or_default().push(i);
    }
    let mut grouped: Vec<Vec<usize>> = components.into_values().collect();
    grouped.sort_by_key(|m| corridors[m[0]].id);

    let mut out = Vec::with_capacity(grouped.len());
    for (k, members) in grouped.into_iter().enumerate() {
        let root = roots[members[0]];
        let pieces: Vec<&Vec<geometry::ConvexPolygon>> = regions
            .iter()
            .filter(|(i, _)| roots[*i] == root)
            .map(|(_, r)| r)
            .collect();
        let midpoints: Vec<Point> = pieces.iter().map(|r| area_centroid(r)).collect();
        let center = midpoints.iter().fold(Point::default(), |a, p| a + *p)
            * (1.0 / midpoints.len() as f64);
        let extent = pieces
            .iter()
            .flat_map(|r| r.iter())
            .flat_map(|p| p.vertices().iter())
            .map(|v| v.distance(center))
            .fold(0.0, f64::max);
        let mut ids: Vec<CorridorId> = members.iter().map(|&i| corridors[i].id).collect();
        ids.sort();
        if extent > radius + 1e-9 {
            return Err(AirspaceError::OverlapOutsideRadius {
                members: members.iter().map(|&i| corridors[i].name.clone()).collect(),
                extent,
                radius,
            });
        }
        out.push(Intersection {
            id: IntersectionId(k),
            members: ids,
            center,
            radius,
        });
    }
    Ok(out)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn area_centroid(pieces: &[geometry::ConvexPolygon]) -> Point {
    let total: f64 = pieces.iter().map(|p| p.area()).sum();
    pieces
        .iter()
        .fold(Point::default(), |acc, p| acc + p.centroid() * (p.area() / total))
}

/// Corridor geometry as supplied by a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct CorridorSpec {
    pub name: String,
    pub waypoints: Vec<Point>,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteSpec {
    pub name: String,
    pub corridors: Vec<String>,
}

/// The immutable flight network: corridors, routes, and the intersections
/// derived from them.
#[derive(Debug, Clone)]
pub struct Airspace {
    corridors: Vec<Corridor>,
    routes: Vec<Route>,
    intersections: Vec<Intersection>,
    intersection_of: Vec<Option<IntersectionId>>,
    overlaps: Vec<Vec<bool>>,
}

impl Airspace {
    pub fn new(
        corridors: &[CorridorSpec],
        routes: &[RouteSpec],
        radius: f64,
    ) -> Result<Self, AirspaceError> {
        let mut by_name = BTreeMap::new();
        let mut built = Vec::with_capacity(corridors.len());
        for (i, spec) in corridors.iter().enumerate() {
            if by_name.insert(spec.name.clone(), CorridorId(i)).is_some() {
                return Err(AirspaceError::DuplicateId(spec.name.clone()));
            }
            built.push(Corridor::new(
                CorridorId(i),
                spec.name.clone(),
                spec.waypoints.clone(),
                spec.half_width,
            )?);
        }

        let mut route_names = BTreeMap::new();
        let mut built_routes = Vec::with_capacity(routes.len());
        for (r, spec) in routes.iter().enumerate() {
            if route_names.insert(spec.name.clone(), r).is_some() {
                return Err(AirspaceError::DuplicateId(spec.name.clone()));
            }
            let invalid = |reason: String| AirspaceError::InvalidRoute {
                route: spec.name.clone(),
                reason,
            };
            if spec.corridors.is_empty() {
                return Err(invalid("no corridors".into()));
            }
            let ids = spec
                .corridors
                .iter()
                .map(|name| {
                    by_name
                        .get(name)
                        .copied()
                        .ok_or_else(|| invalid(format!("unknown corridor {name:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut offsets = Vec::with_capacity(ids.len());
            let mut acc = 0.0;
            for (k, id) in ids.iter().enumerate() {
                if k > 0 {
                    let gap = built[ids[k - 1].0].end().distance(built[id.0].start());
                    if gap > ROUTE_JOIN_TOLERANCE {
                        return Err(invalid(format!(
                            "corridor {:?} starts {gap:.3} m from the end of {:?}",
                            built[id.0].name,
                            built[ids[k - 1].0].name
                        )));
                    }
                }
                if ids[..k].contains(id) {
                    return Err(invalid(format!("corridor {:?} repeated", built[id.0].name)));
                }
                offsets.push(acc);
                acc += built[id.0].length();
            }
            built_routes.push(Route {
                id: RouteId(r),
                name: spec.name.clone(),
                corridors: ids,
                offsets,
                length: acc,
            });
        }

        let intersections = build_intersections(&built, radius)?;
        let mut intersection_of = vec![None; built.len()];
        for inter in &intersections {
            for m in &inter.members {
                intersection_of[m.0] = Some(inter.id);
            }
        }
        let n = built.len();
        let mut overlaps = vec![vec![false; n]; n];
        for inter in &intersections {
            for &a in &inter.members {
                for &b in &inter.members {
                    overlaps[a.0][b.0] = a == b || corridors_intersect(&built[a.0], &built[b.0]);
                }
            }
        }
        for (i, row) in overlaps.iter_mut().enumerate() {
            row[i] = true;
        }

        Ok(Self {
            corridors: built,
            routes: built_routes,
            intersections,
            intersection_of,
            overlaps,
        })
    }

    pub fn corridors(&self) -> &[Corridor] {
        &self.corridors
    }

    pub fn corridor(&self, id: CorridorId) -> &Corridor {
        &self.corridors[id.0]
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn route(&self, id: RouteId) -> &Route {
        &self.routes[id.0]
    }

    pub fn intersections(&self) -> &[Intersection] {
        &self.intersections
    }

    pub fn intersection(&self, id: IntersectionId) -> &Intersection {
        &self.intersections[id.0]
    }

    /// The intersection a corridor belongs to, if any.
    pub fn intersection_of(&self, corridor: CorridorId) -> Option<IntersectionId> {
        self.intersection_of[corridor.0]
    }

    /// Cached [`corridors_intersect`].
    pub fn overlap(&self, a: CorridorId, b: CorridorId) -> bool {
        self.overlaps[a.0][b.0]
    }

    pub fn corridor_by_name(&self, name: &str) -> Option<CorridorId> {
        self.corridors.iter().find(|c| c.name == name).map(|c| c.id)
    }
}
