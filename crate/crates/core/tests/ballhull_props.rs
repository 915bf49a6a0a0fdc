mod common;

use normclust::ballhull::{ball_hull, bh_contains, build_tree};
use normclust::clustering::min_enclosing_ball;
use normclust::{NormedPlane, Point};
use proptest::prelude::*;

fn plane(i: usize) -> NormedPlane {
    match i {
        0 => NormedPlane::euclidean(),
        1 => NormedPlane::l1(),
        2 => NormedPlane::linf(),
        _ => common::lens(),
    }
}

fn points(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y)| Point::new(x, y)), 1..max)
}

fn probe() -> impl Strategy<Value = Point> {
    (-1.0..2.0f64, -1.0..2.0f64).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hull_holds_points_and_shrinks_as_radius_grows(
        n in 0usize..4,
        pts in points(16),
        scale in 1.0..3.0f64,
        probes in prop::collection::vec(probe(), 20),
    ) {
        let plane = plane(n);
        let d = min_enclosing_ball(&plane, &pts).unwrap().radius.max(0.05) * scale;
        let hull = ball_hull(&plane, &pts, d).unwrap();
        let wide = ball_hull(&plane, &pts, 1.5 * d).unwrap();
        for &p in &pts {
            prop_assert!(bh_contains(&plane, &hull, p));
        }
        for &x in &probes {
            prop_assert!(!bh_contains(&plane, &wide, x) || bh_contains(&plane, &hull, x));
        }
        // every arc lies in every ball of radius d about a centre
        for arc in &hull.arcs {
            for z in arc.polyline(&plane, 8) {
                for &c in &hull.centers {
                    prop_assert!(plane.dist(c, z) <= d * (1.0 + 1e-7) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn tree_answers_like_a_linear_scan(
        n in 0usize..4,
        pts in points(60),
        ops in prop::collection::vec((any::<bool>(), any::<prop::sample::Index>(), probe()), 1..60),
    ) {
        let plane = plane(n);
        let d = min_enclosing_ball(&plane, &pts).unwrap().radius.max(0.05) * 1.2;
        let mut tree = build_tree(&plane, &pts, d).unwrap();
        let root = ball_hull(&plane, &pts, d).unwrap();
        prop_assert_eq!(tree.root().map(|h| h.vertices.len()), Some(root.vertices.len()));
        let mut live = pts.clone();
        for (delete, idx, u) in ops {
            if delete && !live.is_empty() {
                let p = live.swap_remove(idx.index(live.len()));
                prop_assert!(tree.delete_point(p).is_ok());
            } else {
                let far = tree.query_far_point(u);
                prop_assert_eq!(far.is_some(), live.iter().any(|&p| plane.dist(u, p) >= d));
                if let Some(v) = far {
                    prop_assert!(plane.dist(u, v) >= d && live.contains(&v));
                }
            }
        }
        prop_assert_eq!(tree.len(), live.len());
    }
}

#[test]
fn thousand_point_root_matches_direct_hull() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
    let plane = common::random_polygon_norm(&mut rng, 5);
    let pts: Vec<Point> = (0..1000)
        .map(|_| Point::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)))
        .collect();
    let d = min_enclosing_ball(&plane, &pts).unwrap().radius * 1.3;
    let direct = ball_hull(&plane, &pts, d).unwrap();
    let tree = build_tree(&plane, &pts, d).unwrap();
    let root = tree.root().unwrap();
    assert_eq!(root.vertices, direct.vertices);
    for _ in 0..2000 {
        let x = Point::new(rng.random_range(-1.0..2.0), rng.random_range(-1.0..2.0));
        assert_eq!(bh_contains(&plane, root, x), bh_contains(&plane, &direct, x), "{x:?}");
    }
}
