//! Brute-force oracles for the airspace formalism on small random networks.

mod common;

use common::{check_blocking, check_intersections, check_pairwise, Segment, Verdict};
use proptest::prelude::*;
use rand::SeedableRng;
use uam_sched::airspace::Point;

fn point() -> impl Strategy<Value = Point> {
    (-2000.0..2000.0f64, -2000.0..2000.0f64).prop_map(|(x, y)| Point { x, y })
}

fn segment() -> impl Strategy<Value = Segment> {
    (point(), point(), 20.0..120.0f64).prop_filter("segment too short", |(a, b, _)| a.distance(*b) > 50.0)
}

/// Two or three routes of up to three straight corridors each, built as
/// random walks so consecutive corridors join end to start.
fn routes() -> impl Strategy<Value = Vec<Vec<Segment>>> {
    let walk = (point(), prop::collection::vec((point(), 20.0..120.0f64), 1..=3)).prop_map(|(start, legs)| {
        let mut at = start;
        legs.into_iter()
            .map(|(to, w)| {
                let seg = (at, to, w);
                at = to;
                seg
            })
            .collect::<Vec<_>>()
    });
    prop::collection::vec(walk, 2..=3).prop_filter("degenerate leg", |rs| {
        rs.iter().flatten().all(|(a, b, _)| a.distance(*b) > 50.0)
    })
}

fn settle(verdict: Verdict) -> Result<(), TestCaseError> {
    match verdict {
        Verdict::Agree => Ok(()),
        Verdict::Ambiguous => Err(TestCaseError::reject("touching contact")),
        Verdict::Disagree(why) => Err(TestCaseError::fail(why)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn intersections_match_brute_force_components(segs in prop::collection::vec(segment(), 1..=10)) {
        settle(check_intersections(&segs))?;
    }

    #[test]
    fn pairwise_bottlenecks_match_brute_force(walks in routes(), picks in prop::collection::vec(0usize..3, 3)) {
        settle(check_pairwise(&walks, &picks))?;
    }
}

#[test]
fn blocking_matches_direct_evaluation_on_random_pairs() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let hits = check_blocking(&mut rng, 1000).unwrap();
    assert!(hits > 50, "random pairs should exercise the positive case, got {hits}");
}
