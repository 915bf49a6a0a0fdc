//! Ball hulls: the intersection of all radius-`d` balls containing a set,
//! and a tree of them supporting far-point queries under deletions.

mod centers;
mod tree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, OrientedLine, Side};
use crate::norm::{spheres_intersection, NormedPlane, Point};

use centers::{center_set, CenterSet};

pub use tree::{build_tree, BallHullTree};

/// Portion of the sphere `S(center, radius)` from `start` to `end`,
/// counterclockwise around `center` when `ccw` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: Point,
    pub radius: f64,
    pub start: Point,
    pub end: Point,
    pub ccw: bool,
}

impl Arc {
    /// Points along the arc, endpoints included. Polygon spheres are
    /// returned exactly (their corners in range); curved ones are sampled
    /// at `samples` interior angles.
    pub fn polyline(&self, plane: &NormedPlane, samples: usize) -> Vec<Point> {
        let (from, to) = if self.ccw { (self.start, self.end) } else { (self.end, self.start) };
        let a0 = angle(from - self.center);
        let sweep = (angle(to - self.center) - a0).rem_euclid(std::f64::consts::TAU);
        let mut inner: Vec<(f64, Point)> = match plane.ball_polygon(self.center, self.radius) {
            Some(corners) => corners
                .into_iter()
                .map(|c| ((angle(c - self.center) - a0).rem_euclid(std::f64::consts::TAU), c))
                .filter(|&(t, _)| t > 1e-12 && t < sweep - 1e-12)
                .collect(),
            None => (1..=samples)
                .map(|i| {
                    let t = sweep * i as f64 / (samples + 1) as f64;
                    let dir = Point::new((a0 + t).cos(), (a0 + t).sin());
                    let unit = plane.boundary_point(dir).expect("nonzero direction");
                    (t, self.center + unit * self.radius)
                })
                .collect(),
        };
        inner.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out = vec![from];
        out.extend(inner.into_iter().map(|(_, p)| p));
        out.push(to);
        if !self.ccw {
            out.reverse();
        }
        out
    }
}

fn angle(v: Point) -> f64 {
    v.y.atan2(v.x)
}

/// Boundary representation of `bh(S, d)`.
///
/// `arcs[i]` joins `vertices[i]` to `vertices[i + 1]`. `centers` are the
/// corners of the set of centres of radius-`d` balls containing `S`; the
/// hull is the intersection of the balls around them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallHull {
    pub radius: f64,
    pub vertices: Vec<Point>,
    pub arcs: Vec<Arc>,
    pub centers: Vec<Point>,
}

impl BallHull {
    fn single(p: Point, radius: f64) -> Self {
        Self {
            radius,
            vertices: vec![p],
            arcs: Vec::new(),
            centers: Vec::new(),
        }
    }
}

fn arc_bulge(plane: &NormedPlane, arc: &Arc, chord: &OrientedLine) -> f64 {
    arc.polyline(plane, 8)
        .iter()
        .map(|&x| chord.signed_distance(x).abs())
        .fold(0.0, f64::max)
}

/// The `d`-minimal arcs meeting `p` and `q`: one on each side of the line
/// through them, or a single one when both coincide with the segment.
pub fn minimal_arcs(plane: &NormedPlane, p: Point, q: Point, d: f64) -> Result<Vec<Arc>> {
    if plane.dist(p, q) > 2.0 * d * (1.0 + plane.tolerance()) {
        return Err(Error::TooFarApart);
    }
    if p == q {
        return Ok(vec![Arc { center: p, radius: d, start: p, end: q, ccw: true }]);
    }
    let chord = OrientedLine::through(p, q);
    let components = spheres_intersection(plane, p, d, q, d).components;
    let extremes: Vec<Point> = components.iter().flat_map(|s| [s.a, s.b]).collect();
    let mut arcs = Vec::new();
    // centres left of p→q carry the arc on the right side, which runs
    // counterclockwise from p to q
    for (side, start, end) in [(Side::Left, p, q), (Side::Right, q, p)] {
        let best = extremes
            .iter()
            .filter(|&&c| chord.side(c) != side.opposite())
            .map(|&c| Arc { center: c, radius: d, start, end, ccw: true })
            .min_by(|x, y| arc_bulge(plane, x, &chord).total_cmp(&arc_bulge(plane, y, &chord)));
        arcs.extend(best);
    }
    let flat_tol = 1e-9 * d.max(1.0);
    if arcs.len() == 2 && arcs.iter().all(|a| arc_bulge(plane, a, &chord) <= flat_tol) {
        arcs.truncate(1);
    }
    Ok(arcs)
}

trait Opposite {
    fn opposite(self) -> Self;
}

impl Opposite for Side {
    fn opposite(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            Side::On => Side::On,
        }
    }
}

/// `bh(S, d)`: vertices are points of `S` in convex position, joined by
/// `d`-minimal arcs centred at the corners of the centre set.
pub fn ball_hull(plane: &NormedPlane, points: &[Point], d: f64) -> Result<BallHull> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if points.iter().any(|p| !p.is_finite()) || !d.is_finite() {
        return Err(Error::NonFinite);
    }
    let hull = convex_hull(points)?.vertices;
    if hull.len() == 1 {
        return Ok(BallHull::single(hull[0], d));
    }
    match center_set(plane, &hull, d) {
        CenterSet::Empty => Err(Error::NoBallContainsS),
        CenterSet::Disc { owner } => Ok(BallHull::single(hull[owner], d)),
        CenterSet::Region { corners, owners } => {
            let m = corners.len();
            let mut vertices = Vec::new();
            let mut arcs = Vec::new();
            for i in 0..m {
                let prev = owners[(i + m - 1) % m];
                if prev != owners[i] {
                    vertices.push(hull[owners[i]]);
                    arcs.push(Arc {
                        center: corners[i],
                        radius: d,
                        start: hull[prev],
                        end: hull[owners[i]],
                        ccw: true,
                    });
                }
            }
            if vertices.is_empty() {
                return Ok(BallHull {
                    centers: corners,
                    ..BallHull::single(hull[owners[0]], d)
                });
            }
            // arcs[i] currently ends at vertices[i]; shift so it starts there
            arcs.rotate_left(1);
            // start at the lexicographically smallest vertex
            let first = (0..vertices.len())
                .min_by(|&i, &j| vertices[i].lex_cmp(&vertices[j]))
                .unwrap_or(0);
            vertices.rotate_left(first);
            arcs.rotate_left(first);
            Ok(BallHull { radius: d, vertices, arcs, centers: corners })
        }
    }
}

/// Whether `x` lies in the hull, with a relative boundary band of 1e-9.
pub fn bh_contains(plane: &NormedPlane, hull: &BallHull, x: Point) -> bool {
    let band = 1e-9 * hull.radius.max(1.0);
    if hull.vertices.len() == 1 {
        return plane.dist(x, hull.vertices[0]) <= band;
    }
    hull.centers
        .iter()
        .all(|&c| plane.gauge(x - c) <= hull.radius + band)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::norm::NormDescriptor;
    use crate::testutil::random_polygon_norm;

    fn close(p: Point, q: Point) -> bool {
        (p - q).euclid() < 1e-9
    }

    #[test]
    fn euclidean_minimal_arcs() {
        let plane = NormedPlane::euclidean();
        let (p, q) = (Point::new(0.0, 0.0), Point::new(2.0, 0.0));
        let arcs = minimal_arcs(&plane, p, q, 2.0).unwrap();
        assert_eq!(arcs.len(), 2);
        let s3 = 3f64.sqrt();
        assert!(close(arcs[0].center, Point::new(1.0, s3)));
        assert!(close(arcs[1].center, Point::new(1.0, -s3)));
        // the arc centred above bulges below the chord
        let lowest = arcs[0].polyline(&plane, 16).iter().map(|x| x.y).fold(0.0, f64::min);
        assert!((lowest - (s3 - 2.0)).abs() < 0.01);

        let arcs = minimal_arcs(&plane, p, q, 1.0).unwrap();
        assert_eq!(arcs.len(), 2);
        assert!(arcs.iter().all(|a| close(a.center, Point::new(1.0, 0.0))));
        assert_eq!(
            minimal_arcs(&plane, p, Point::new(3.0, 0.0), 1.0),
            Err(Error::TooFarApart)
        );
    }

    #[test]
    fn flat_arcs_collapse() {
        let plane = NormedPlane::linf();
        let arcs = minimal_arcs(&plane, Point::new(0.0, 0.0), Point::new(2.0, 0.0), 1.0).unwrap();
        assert_eq!(arcs.len(), 1);
    }

    #[test]
    fn single_point_hull() {
        for plane in [NormedPlane::euclidean(), NormedPlane::l1(), NormedPlane::new(NormDescriptor::two_arc_reference()).unwrap()] {
            let p = Point::new(0.3, -1.0);
            let h = ball_hull(&plane, &[p, p], 1.5).unwrap();
            assert_eq!(h.vertices, vec![p]);
            assert!(bh_contains(&plane, &h, p));
            assert!(!bh_contains(&plane, &h, Point::new(0.31, -1.0)));
        }
    }

    #[test]
    fn two_point_hull() {
        let plane = NormedPlane::euclidean();
        let (p, q) = (Point::new(0.0, 0.0), Point::new(2.0, 0.0));
        let h = ball_hull(&plane, &[p, q], 2.0).unwrap();
        assert_eq!(h.vertices.len(), 2);
        let s3 = 3f64.sqrt();
        let mut centers: Vec<Point> = h.arcs.iter().map(|a| a.center).collect();
        centers.sort_by(|a, b| a.lex_cmp(b));
        assert!(close(centers[0], Point::new(1.0, -s3)));
        assert!(close(centers[1], Point::new(1.0, s3)));
        for (i, a) in h.arcs.iter().enumerate() {
            assert_eq!(a.start, h.vertices[i]);
            assert_eq!(a.end, h.vertices[(i + 1) % 2]);
        }
        assert!(bh_contains(&plane, &h, Point::new(1.0, 0.0)));
        assert!(!bh_contains(&plane, &h, Point::new(1.0, 5.0)));
        assert!(h.vertices.iter().all(|&v| bh_contains(&plane, &h, v)));
    }

    #[test]
    fn no_containing_ball() {
        let plane = NormedPlane::euclidean();
        let pts = [Point::new(0.0, 0.0), Point::new(5.0, 0.0)];
        assert_eq!(ball_hull(&plane, &pts, 1.0), Err(Error::NoBallContainsS));
    }

    #[test]
    fn hull_contains_its_points_and_shrinks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let planes = [
            NormedPlane::euclidean(),
            NormedPlane::new(NormDescriptor::two_arc_reference()).unwrap(),
            random_polygon_norm(&mut rng, 4),
        ];
        for plane in &planes {
            for _ in 0..20 {
                let pts: Vec<Point> = (0..12)
                    .map(|_| Point::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)))
                    .collect();
                let h = ball_hull(plane, &pts, 2.0).unwrap();
                let wide = ball_hull(plane, &pts, 4.0).unwrap();
                assert!(pts.iter().all(|&p| bh_contains(plane, &h, p)));
                for _ in 0..50 {
                    let x = Point::new(rng.random_range(-0.5..1.5), rng.random_range(-0.5..1.5));
                    if bh_contains(plane, &wide, x) {
                        assert!(bh_contains(plane, &h, x));
                    }
                }
            }
        }
    }
}
