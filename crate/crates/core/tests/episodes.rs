//! Whole-episode behavior checked against independent oracles and invariants.

use proptest::prelude::*;
use rand::Rng;
use std::collections::BTreeSet;
use std::sync::Arc;
use uam_sched::aircraft::Phase;
use uam_sched::airspace::{
    collection_of_bottlenecks, corridors_intersect, Airspace, CorridorId, CorridorSpec, Point, RouteSpec,
};
use uam_sched::engine::{EngineConfig, World};
use uam_sched::network::{generate_network, NetworkParams};
use uam_sched::protocols::ProtocolKind;
use uam_sched::rng::stream;

/// Two single-corridor routes crossing at the origin, both starting
/// `reach` meters out so their aircraft arrive together.
fn crossing(reach: f64) -> Arc<Airspace> {
    let corridor = |name: &str, a: Point, b: Point| CorridorSpec {
        name: name.into(),
        waypoints: vec![a, b],
        half_width: 50.0,
    };
    let corridors = [
        corridor("we", Point { x: -reach, y: 0.0 }, Point { x: reach, y: 0.0 }),
        corridor("sn", Point { x: 0.0, y: -reach }, Point { x: 0.0, y: reach }),
    ];
    let routes = [
        RouteSpec { name: "east".into(), corridors: vec!["we".into()] },
        RouteSpec { name: "north".into(), corridors: vec!["sn".into()] },
    ];
    Arc::new(Airspace::new(&corridors, &routes, 1350.0).unwrap())
}

struct Frame {
    inside: [bool; 2],
    moving: [bool; 2],
    /// Signed coordinate along each corridor, zero at the crossing.
    along: [f64; 2],
}

#[test]
fn simultaneous_entry_backs_off_and_one_aircraft_crosses_first() {
    let airspace = crossing(3600.0);
    let center = airspace.intersections()[0].center;
    for seed in 0..12u64 {
        let config = EngineConfig {
            protocol: ProtocolKind::Csma,
            seed,
            ..EngineConfig::default()
        };
        let mut world = World::new(Arc::clone(&airspace), &[1, 1], config);
        let mut trace = Vec::new();
        while !world.finished() {
            world.step();
            let a = world.aircraft();
            let d = |k: usize| a[k].position.distance(center);
            let airborne = |k: usize| a[k].phase == Phase::Airborne;
            trace.push(Frame {
                inside: [airborne(0) && d(0) <= 1350.0, airborne(1) && d(1) <= 1350.0],
                moving: [a[0].velocity != 0.0, a[1].velocity != 0.0],
                along: [a[0].position.x, a[1].position.y],
            });
            assert!(world.clock() < 2000, "seed {seed}: episode did not finish");
        }
        let report = world.into_report();
        assert_eq!(report.cross_corridor_los, 0, "seed {seed}");
        assert!(!report.timeout);

        let entry = trace.iter().position(|f| f.inside[0] || f.inside[1]).unwrap();
        assert!(trace[entry].inside[0] && trace[entry].inside[1], "seed {seed}: entries were not simultaneous");
        assert!(
            trace[entry..].iter().any(|f| f.inside == [true, true] && f.moving == [false, false]),
            "seed {seed}: the conflict should halt both aircraft"
        );

        // Which aircraft reaches the center first, and whether the other is
        // held still at that moment.
        let passes = |k: usize| trace.iter().position(|f| f.along[k] >= 0.0).unwrap();
        let (p0, p1) = (passes(0), passes(1));
        assert_ne!(p0, p1, "seed {seed}: both reached the center together");
        let (first, second) = if p0 < p1 { (0, 1) } else { (1, 0) };
        assert!(!trace[passes(first)].moving[second] || !trace[passes(first)].inside[second]);

        // The backoffs come from each aircraft's own stream; when they
        // differ, the shorter one crosses first.
        let draw = |route: u64| stream(seed, "csma", route, 0).gen_range(1..=100u32);
        let (w0, w1) = (draw(0), draw(1));
        if w0 != w1 {
            assert_eq!(first, if w0 < w1 { 0 } else { 1 }, "seed {seed}: backoffs {w0} and {w1}");
        }
    }
}

#[test]
fn default_network_bottlenecks_are_the_intersection_member_pairs() {
    let scenario = generate_network(&NetworkParams::default()).unwrap();
    let airspace = scenario.validate().unwrap();
    let n = airspace.corridors().len();
    let routes_of = |c: usize| -> BTreeSet<usize> {
        (0..airspace.routes().len())
            .filter(|&r| airspace.routes()[r].contains(CorridorId(c)))
            .collect()
    };
    let mut oracle = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            let distinct_routes = routes_of(a).iter().any(|ra| routes_of(b).iter().any(|rb| ra != rb));
            if a != b
                && distinct_routes
                && corridors_intersect(&airspace.corridors()[a], &airspace.corridors()[b])
            {
                oracle.insert((CorridorId(a), CorridorId(b)));
            }
        }
    }
    let members: BTreeSet<(CorridorId, CorridorId)> = airspace
        .intersections()
        .iter()
        .flat_map(|x| {
            x.members
                .iter()
                .flat_map(move |&a| x.members.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
        })
        .collect();
    assert_eq!(oracle, members);

    let world = World::new(
        Arc::new(airspace.clone()),
        &vec![1; airspace.routes().len()],
        EngineConfig::default(),
    );
    let union = collection_of_bottlenecks(world.aircraft(), &airspace).unwrap();
    assert_eq!(union.pairs, oracle);
    assert_eq!(airspace.intersections().len(), 2);
    assert_eq!(airspace.routes().len(), 6);
}

fn small_network() -> Arc<Airspace> {
    let scenario = generate_network(&NetworkParams {
        leg_length: 2500.0,
        ..NetworkParams::default()
    })
    .unwrap();
    Arc::new(scenario.validate().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn same_route_order_and_spacing_hold_every_step(
        protocol in prop::sample::select(ProtocolKind::ALL.to_vec()),
        density in 1usize..=6,
        p in 0.0..=1.0f64,
        seed in any::<u64>(),
    ) {
        let airspace = small_network();
        let config = EngineConfig { protocol, noncompliance: p, seed, ..EngineConfig::default() };
        let routes = airspace.routes().len();
        let mut world = World::new(Arc::clone(&airspace), &vec![density; routes], config);
        let mut last_arc = vec![0.0f64; routes * density];
        while !world.finished() && world.clock() < 4000 {
            world.step();
            let fleet = world.aircraft();
            for r in 0..routes {
                let ids: Vec<usize> = (r * density..(r + 1) * density).collect();
                let arcs: Vec<Option<f64>> = ids
                    .iter()
                    .map(|&i| fleet[i].is_airborne().then(|| fleet[i].route_arc(&airspace)))
                    .collect();
                for (k, arc) in arcs.iter().enumerate() {
                    if let Some(a) = arc {
                        prop_assert!(*a >= last_arc[ids[k]] - 1e-9, "aircraft moved backwards");
                        last_arc[ids[k]] = *a;
                    }
                }
                for w in arcs.windows(2) {
                    if let [Some(lead), Some(follow)] = w {
                        prop_assert!(lead - follow >= 150.0, "same-route gap {} at step {}", lead - follow, world.clock());
                    }
                }
            }
        }
        prop_assert!(world.finished(), "episode did not finish");
    }
}
