use super::geometry::{closest_on_segment, union_overlap, ConvexPolygon, Point};
use super::AirspaceError;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Sides of the polygon that fills the gap at an interior bend.
const JOINT_SIDES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CorridorId(pub usize);

impl fmt::Display for CorridorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "corridor#{}", self.0)
    }
}

/// A unidirectional flight corridor: a widened polyline traversed in
/// waypoint order.
///
/// The volume is the union of flat-ended rectangles around each centerline
/// segment plus a filler polygon at every interior bend. Ends are flat, so
/// two corridors joined collinearly end-to-start only touch and do not
/// overlap.
#[derive(Debug, Clone)]
pub struct Corridor {
    pub id: CorridorId,
    pub name: String,
    waypoints: Vec<Point>,
    half_width: f64,
    cumulative: Vec<f64>,
    pieces: Vec<ConvexPolygon>,
}

impl Corridor {
    pub fn new(
        id: CorridorId,
        name: impl Into<String>,
        waypoints: Vec<Point>,
        half_width: f64,
    ) -> Result<Self, AirspaceError> {
        let name = name.into();
        if waypoints.len() < 2 {
            return Err(AirspaceError::DegenerateCorridor {
                corridor: name,
                reason: "fewer than two waypoints".into(),
            });
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(AirspaceError::DegenerateCorridor {
                corridor: name,
                reason: format!("half-width {half_width} must be positive"),
            });
        }
        if waypoints.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(AirspaceError::DegenerateCorridor {
                corridor: name,
                reason: "non-finite waypoint".into(),
            });
        }
        let mut cumulative = Vec::with_capacity(waypoints.len());
        cumulative.push(0.0);
        for w in waypoints.windows(2) {
            let len = w[0].distance(w[1]);
            if len <= 0.0 {
                return Err(AirspaceError::DegenerateCorridor {
                    corridor: name,
                    reason: "consecutive waypoints coincide".into(),
                });
            }
            cumulative.push(cumulative.last().unwrap() + len);
        }
        let mut pieces: Vec<ConvexPolygon> = waypoints
            .windows(2)
            .map(|w| ConvexPolygon::swept_segment(w[0], w[1], half_width))
            .collect();
        for joint in &waypoints[1..waypoints.len() - 1] {
            pieces.push(ConvexPolygon::regular(*joint, half_width, JOINT_SIDES));
        }
        Ok(Self {
            id,
            name,
            waypoints,
            half_width,
            cumulative,
            pieces,
        })
    }

    pub fn waypoints(&self) -> &[Point] {
        &self.waypoints
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn start(&self) -> Point {
        self.waypoints[0]
    }

    pub fn end(&self) -> Point {
        *self.waypoints.last().unwrap()
    }

    /// Convex pieces whose union is the corridor volume.
    pub fn pieces(&self) -> &[ConvexPolygon] {
        &self.pieces
    }

    fn segment_at(&self, arc: f64) -> usize {
        let seg = self.cumulative.partition_point(|&c| c <= arc);
        seg.clamp(1, self.waypoints.len() - 1) - 1
    }

    /// Centerline point at arc length `arc` (clamped to the corridor).
    pub fn point_at(&self, arc: f64) -> Point {
        let arc = arc.clamp(0.0, self.length());
        let seg = self.segment_at(arc);
        let a = self.waypoints[seg];
        let b = self.waypoints[seg + 1];
        let t = (arc - self.cumulative[seg]) / (self.cumulative[seg + 1] - self.cumulative[seg]);
        a + (b - a) * t
    }

    /// Tangent heading (radians, counter-clockwise from east) at `arc`.
    pub fn heading_at(&self, arc: f64) -> f64 {
        let arc = arc.clamp(0.0, self.length());
        let seg = self.segment_at(arc);
        let d = self.waypoints[seg + 1] - self.waypoints[seg];
        d.y.atan2(d.x)
    }

    /// Arc length of the centerline point closest to `p`.
    pub fn project(&self, p: Point) -> f64 {
        let mut best = (f64::INFINITY, 0.0);
        for (seg, w) in self.waypoints.windows(2).enumerate() {
            let (q, t) = closest_on_segment(p, w[0], w[1]);
            let d = p.distance(q);
            if d < best.0 {
                let arc = self.cumulative[seg] + t * (self.cumulative[seg + 1] - self.cumulative[seg]);
                best = (d, arc);
            }
        }
        best.1
    }

    /// Whether `p` lies inside the corridor volume (closed).
    pub fn contains(&self, p: Point) -> bool {
        self.pieces.iter().any(|piece| piece.contains(p))
    }
}

/// Shared region of two corridor volumes as convex pieces (empty when the
/// corridors do not overlap).
pub fn overlap_regions(a: &Corridor, b: &Corridor) -> Vec<ConvexPolygon> {
    union_overlap(a.pieces(), b.pieces())
}

/// True iff the two corridor volumes share a region of positive area.
/// Symmetric; a corridor always intersects itself.
pub fn corridors_intersect(a: &Corridor, b: &Corridor) -> bool {
    !overlap_regions(a, b).is_empty()
}
