//! Independent brute-force oracles shared by the integration targets.

#![allow(dead_code)]

use rand::Rng;
use std::collections::BTreeSet;
use uam_sched::aircraft::{AircraftId, AircraftState};
use uam_sched::airspace::{
    blocking, build_intersections, pairwise_bottlenecks, Airspace, Corridor, CorridorId, CorridorSpec, Point,
    RouteId, RouteSpec,
};

/// Penetration depths closer to zero than this are treated as ambiguous
/// touching contacts and discarded.
pub const CONTACT_SLACK: f64 = 1e-3;

pub type Segment = (Point, Point, f64);

/// Corners of the flat-ended rectangle swept by one segment.
fn rectangle(a: Point, b: Point, half_width: f64) -> [Point; 4] {
    let len = a.distance(b);
    let (ux, uy) = ((b.x - a.x) / len, (b.y - a.y) / len);
    let (nx, ny) = (-uy * half_width, ux * half_width);
    [
        Point { x: a.x + nx, y: a.y + ny },
        Point { x: b.x + nx, y: b.y + ny },
        Point { x: b.x - nx, y: b.y - ny },
        Point { x: a.x - nx, y: a.y - ny },
    ]
}

/// Smallest overlap of the projections over all separating-axis candidates.
/// Positive means the rectangles share interior, negative means a gap.
fn penetration(p: &[Point; 4], q: &[Point; 4]) -> f64 {
    let mut depth = f64::INFINITY;
    for poly in [p, q] {
        for k in 0..2 {
            let (e0, e1) = (poly[k], poly[k + 1]);
            let (ax, ay) = (-(e1.y - e0.y), e1.x - e0.x);
            let n = (ax * ax + ay * ay).sqrt();
            let proj = |v: &Point| (v.x * ax + v.y * ay) / n;
            let (pmin, pmax) = p.iter().map(proj).fold((f64::MAX, f64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
            let (qmin, qmax) = q.iter().map(proj).fold((f64::MAX, f64::MIN), |(lo, hi), x| (lo.min(x), hi.max(x)));
            depth = depth.min(pmax.min(qmax) - pmin.max(qmin));
        }
    }
    depth
}

/// All pairs among single-segment corridors, with their overlap depth.
fn depths(segments: &[Segment]) -> Vec<(usize, usize, f64)> {
    let rects: Vec<_> = segments.iter().map(|&(a, b, w)| rectangle(a, b, w)).collect();
    let mut out = Vec::new();
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            out.push((i, j, penetration(&rects[i], &rects[j])));
        }
    }
    out
}

fn unambiguous(pairs: &[(usize, usize, f64)]) -> bool {
    pairs.iter().all(|&(_, _, d)| d.abs() > CONTACT_SLACK)
}

/// Components of the overlap graph by repeated depth-first search.
fn components(n: usize, edges: &[(usize, usize)]) -> BTreeSet<BTreeSet<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut out = BTreeSet::new();
    for s in 0..n {
        if seen[s] || adj[s].is_empty() {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            comp.insert(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.insert(comp);
    }
    out
}

fn corridor(i: usize, (a, b, w): Segment) -> Corridor {
    Corridor::new(CorridorId(i), format!("c{i}"), vec![a, b], w).unwrap()
}

/// What an oracle comparison concluded about one instance.
#[derive(Debug, PartialEq)]
pub enum Verdict {
    Agree,
    /// Some pair only touches, so the oracle cannot decide.
    Ambiguous,
    Disagree(String),
}

/// Compare `build_intersections` with overlap-graph components.
pub fn check_intersections(segs: &[Segment]) -> Verdict {
    let pairs = depths(segs);
    if !unambiguous(&pairs) {
        return Verdict::Ambiguous;
    }
    let edges: Vec<(usize, usize)> = pairs.iter().filter(|p| p.2 > 0.0).map(|p| (p.0, p.1)).collect();
    let expected = components(segs.len(), &edges);

    let corridors: Vec<Corridor> = segs.iter().enumerate().map(|(i, &s)| corridor(i, s)).collect();
    let built = match build_intersections(&corridors, 1e9) {
        Ok(b) => b,
        Err(e) => return Verdict::Disagree(e.to_string()),
    };
    let got: BTreeSet<BTreeSet<usize>> = built.iter().map(|x| x.members.iter().map(|c| c.0).collect()).collect();
    if got != expected {
        return Verdict::Disagree(format!("components {got:?}, expected {expected:?}"));
    }
    if built.windows(2).any(|w| w[0].members[0] >= w[1].members[0]) {
        return Verdict::Disagree("intersections not ordered by lowest member".into());
    }
    if built.iter().enumerate().any(|(k, x)| x.id.0 != k) {
        return Verdict::Disagree("intersection ids are not their positions".into());
    }
    Verdict::Agree
}

/// Compare `pairwise_bottlenecks` with a direct enumeration of the
/// remaining corridors of every ordered pair of aircraft. `walks` holds one
/// route per entry; `picks[r]` selects the corridor the aircraft on route
/// `r` is flying.
pub fn check_pairwise(walks: &[Vec<Segment>], picks: &[usize]) -> Verdict {
    let segs: Vec<Segment> = walks.iter().flatten().copied().collect();
    let pairs = depths(&segs);
    if !unambiguous(&pairs) {
        return Verdict::Ambiguous;
    }
    let overlaps = |a: usize, b: usize| pairs.iter().any(|&(i, j, d)| d > 0.0 && ((i, j) == (a, b) || (i, j) == (b, a)));

    let specs: Vec<CorridorSpec> = segs
        .iter()
        .enumerate()
        .map(|(i, &(a, b, w))| CorridorSpec { name: format!("c{i}"), waypoints: vec![a, b], half_width: w })
        .collect();
    let mut ids = Vec::new();
    let mut next = 0;
    for walk in walks {
        ids.push((next..next + walk.len()).collect::<Vec<_>>());
        next += walk.len();
    }
    let route_specs: Vec<RouteSpec> = ids
        .iter()
        .enumerate()
        .map(|(r, cs)| RouteSpec { name: format!("r{r}"), corridors: cs.iter().map(|c| format!("c{c}")).collect() })
        .collect();
    let airspace = match Airspace::new(&specs, &route_specs, 1e9) {
        Ok(a) => a,
        Err(e) => return Verdict::Disagree(e.to_string()),
    };

    let states: Vec<AircraftState> = ids
        .iter()
        .enumerate()
        .map(|(r, cs)| {
            let mut s = AircraftState::pending(AircraftId(r as u32), RouteId(r), &airspace);
            s.corridor_index = picks[r] % cs.len();
            s.corridor = CorridorId(cs[s.corridor_index]);
            s
        })
        .collect();
    for (i, si) in states.iter().enumerate() {
        for (j, sj) in states.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut expected = BTreeSet::new();
            for &a in &ids[i][si.corridor_index + 1..] {
                for &b in &ids[j][sj.corridor_index + 1..] {
                    if a != b && overlaps(a, b) {
                        expected.insert((CorridorId(a), CorridorId(b)));
                    }
                }
            }
            let got = match pairwise_bottlenecks(si, sj, &airspace) {
                Ok(g) => g,
                Err(e) => return Verdict::Disagree(e.to_string()),
            };
            if got != expected {
                return Verdict::Disagree(format!("aircraft {i},{j}: {got:?}, expected {expected:?}"));
            }
            let grouped = got
                .iter()
                .all(|&(a, b)| airspace.intersections().iter().any(|x| x.has_member(a) && x.has_member(b)));
            if !grouped {
                return Verdict::Disagree("a bottleneck pair spans two intersections".into());
            }
        }
    }
    Verdict::Agree
}

/// Evaluate `blocking` against the direct definition on `n` random state
/// pairs. Returns how many pairs were blocking, or the first mismatch.
pub fn check_blocking<R: Rng>(rng: &mut R, n: u32) -> Result<usize, String> {
    let specs: Vec<CorridorSpec> = (0..3)
        .map(|i| CorridorSpec {
            name: format!("c{i}"),
            waypoints: vec![Point { x: -500.0, y: 100.0 * i as f64 }, Point { x: 500.0, y: 100.0 * i as f64 }],
            half_width: 50.0,
        })
        .collect();
    let routes: Vec<RouteSpec> = (0..3)
        .map(|i| RouteSpec { name: format!("r{i}"), corridors: vec![format!("c{i}")] })
        .collect();
    let airspace = Airspace::new(&specs, &routes, 1000.0).map_err(|e| e.to_string())?;
    let d_los = 150.0;
    let mut hits = 0;
    for k in 0..n {
        let mut draw = |id: u32| {
            let r = rng.gen_range(0..3);
            let mut s = AircraftState::pending(AircraftId(id), RouteId(r), &airspace);
            s.position = Point { x: rng.gen_range(-200.0..200.0), y: rng.gen_range(-200.0..200.0) };
            s.velocity = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(2.5..31.0) };
            s
        };
        let (si, sj) = (draw(2 * k), draw(2 * k + 1));
        let dx = si.position.x - sj.position.x;
        let dy = si.position.y - sj.position.y;
        let expected = (dx * dx + dy * dy).sqrt() < d_los && si.corridor.0 != sj.corridor.0 && si.velocity != 0.0;
        if blocking(&si, &sj, d_los) != expected {
            return Err(format!("pair {k}: {si:?} {sj:?}"));
        }
        hits += expected as usize;
    }
    Ok(hits)
}

/// A random point in a 4 km square around the origin.
pub fn random_point<R: Rng>(rng: &mut R) -> Point {
    Point { x: rng.gen_range(-2000.0..2000.0), y: rng.gen_range(-2000.0..2000.0) }
}

/// A random segment of useful length.
pub fn random_segment<R: Rng>(rng: &mut R) -> Segment {
    loop {
        let (a, b) = (random_point(rng), random_point(rng));
        if a.distance(b) > 50.0 {
            return (a, b, rng.gen_range(20.0..120.0));
        }
    }
}

/// A random route of 1 to 3 joined straight corridors.
pub fn random_walk<R: Rng>(rng: &mut R) -> Vec<Segment> {
    loop {
        let mut at = random_point(rng);
        let legs = rng.gen_range(1..=3);
        let walk: Vec<Segment> = (0..legs)
            .map(|_| {
                let to = random_point(rng);
                let seg = (at, to, rng.gen_range(20.0..120.0));
                at = to;
                seg
            })
            .collect();
        if walk.iter().all(|(a, b, _)| a.distance(*b) > 50.0) {
            return walk;
        }
    }
}
