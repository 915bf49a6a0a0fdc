use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::convex_hull;
use crate::norm::{spheres_intersection, Body, NormedPlane, Point};

/// Smallest ball containing a point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnclosingBall {
    pub center: Point,
    pub radius: f64,
}

/// Minimal enclosing ball.
///
/// Polygon norms: `r >= h_f - a_f·c` for every facet normal `a_f`, with
/// `h_f = max_s a_f·s`, is a three-variable linear program whose optimum
/// sits where three constraints are tight. Curved norms: the ball is
/// determined by two or three of the points, so pair midpoints and
/// three-point equidistant centres are tried, smallest first.
pub fn min_enclosing_ball(plane: &NormedPlane, points: &[Point]) -> Result<EnclosingBall> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() == 1 {
        return Ok(EnclosingBall {
            center: pts[0],
            radius: 0.0,
        });
    }
    match &plane.body {
        Body::Polygon { facets, .. } => Ok(polygon_ball(plane, facets, &pts)),
        _ => Ok(curved_active_set(plane, &convex_hull(&pts)?.vertices)),
    }
}

/// Grows a working set by the farthest uncovered point until its ball
/// covers everything; the working set's optimum never exceeds the full one.
fn curved_active_set(plane: &NormedPlane, pts: &[Point]) -> EnclosingBall {
    if pts.len() <= 4 {
        return curved_ball(plane, pts);
    }
    let scale = crate::norm::magnitude(pts);
    let mut work: Vec<Point> = pts[..4].to_vec();
    loop {
        let ball = curved_ball(plane, &work);
        let far = pts
            .iter()
            .map(|&p| (plane.dist(ball.center, p), p))
            .filter(|(d, p)| *d > ball.radius + 1e-10 * scale.max(ball.radius) && !work.contains(p))
            .max_by(|a, b| a.0.total_cmp(&b.0));
        match far {
            Some((_, p)) => work.push(p),
            None => {
                return EnclosingBall {
                    center: ball.center,
                    radius: radius_at(plane, pts, ball.center),
                }
            }
        }
    }
}

fn radius_at(plane: &NormedPlane, pts: &[Point], c: Point) -> f64 {
    pts.iter().fold(0.0_f64, |m, &p| m.max(plane.dist(c, p)))
}

fn polygon_ball(plane: &NormedPlane, facets: &[Point], pts: &[Point]) -> EnclosingBall {
    let h: Vec<f64> = facets
        .iter()
        .map(|a| pts.iter().fold(f64::MIN, |m, p| m.max(a.dot(*p))))
        .collect();
    let f = facets.len();
    let mut best: Option<EnclosingBall> = None;
    for i in 0..f {
        for j in i + 1..f {
            for k in j + 1..f {
                let Some(c) = solve3([i, j, k].map(|t| (facets[t], h[t]))) else {
                    continue;
                };
                let r = radius_at(plane, pts, c);
                if best.is_none_or(|b| r < b.radius) {
                    best = Some(EnclosingBall {
                        center: c,
                        radius: r,
                    });
                }
            }
        }
    }
    best.expect("a centrally symmetric polygon has three independent facets")
}

/// Solves `a·c + r = h` for three facets; returns `c`.
fn solve3(rows: [(Point, f64); 3]) -> Option<Point> {
    let [(a0, h0), (a1, h1), (a2, h2)] = rows;
    // subtract the first row to eliminate r
    let (u, hu) = (a1 - a0, h1 - h0);
    let (v, hv) = (a2 - a0, h2 - h0);
    let det = u.cross(v);
    let scale = u.euclid() * v.euclid();
    if det.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return None;
    }
    Some(Point::new(
        (hu * v.y - hv * u.y) / det,
        (u.x * hv - v.x * hu) / det,
    ))
}

fn curved_ball(plane: &NormedPlane, pts: &[Point]) -> EnclosingBall {
    let n = pts.len();
    let scale = crate::norm::magnitude(pts);
    let accept = |c: Point, r: f64| {
        pts.iter()
            .all(|&p| plane.dist(c, p) <= r + 1e-10 * scale.max(r))
    };

    // the diametral pair gives a lower bound and often the answer
    let mut diam = (0.0, 0, 1);
    for i in 0..n {
        for j in i + 1..n {
            let d = plane.dist(pts[i], pts[j]);
            if d > diam.0 {
                diam = (d, i, j);
            }
        }
    }
    let mid = pts[diam.1].midpoint(pts[diam.2]);
    if accept(mid, diam.0 / 2.0) {
        return EnclosingBall {
            center: mid,
            radius: radius_at(plane, pts, mid),
        };
    }

    // triples ordered by their own lower bound
    let mut triples: Vec<(f64, [usize; 3])> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let lb = plane
                    .dist(pts[i], pts[j])
                    .max(plane.dist(pts[i], pts[k]))
                    .max(plane.dist(pts[j], pts[k]))
                    / 2.0;
                triples.push((lb, [i, j, k]));
            }
        }
    }
    triples.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut best: Option<EnclosingBall> = None;
    for (lb, [i, j, k]) in triples {
        if best.is_some_and(|b| lb >= b.radius) {
            break;
        }
        for (c, r) in equidistant_centers(plane, pts[i], pts[j], pts[k]) {
            if best.is_some_and(|b| r >= b.radius) || !accept(c, r) {
                continue;
            }
            best = Some(EnclosingBall {
                center: c,
                radius: radius_at(plane, pts, c),
            });
        }
    }
    // pair balls other than the diametral one cannot contain everything, so
    // some triple must succeed; the pairwise scan is a numerical safety net
    best.unwrap_or_else(|| {
        let mut b = EnclosingBall {
            center: mid,
            radius: radius_at(plane, pts, mid),
        };
        for &p in pts {
            for &q in pts {
                let c = p.midpoint(q);
                let r = radius_at(plane, pts, c);
                if r < b.radius {
                    b = EnclosingBall {
                        center: c,
                        radius: r,
                    };
                }
            }
        }
        b
    })
}

/// Centres equidistant from `p`, `q`, `s`, with the common distance.
pub(crate) fn equidistant_centers(
    plane: &NormedPlane,
    p: Point,
    q: Point,
    s: Point,
) -> Vec<(Point, f64)> {
    if (q - p).cross(s - p).abs() <= 1e-12 * (q - p).euclid() * (s - p).euclid() {
        return Vec::new();
    }
    if matches!(plane.body, Body::Euclidean) {
        return circumcenter(p, q, s)
            .map(|c| vec![(c, (c - p).euclid())])
            .unwrap_or_default();
    }
    // walk both branches of the p,q bisector, parametrised by the radius,
    // until the distance to s crosses the radius
    let r0 = plane.dist(p, q) / 2.0;
    let branch = |r: f64, side: usize| -> Option<Point> {
        let inter = spheres_intersection(plane, p, r, q, r);
        let comps = &inter.components;
        match comps.len() {
            0 => None,
            1 => Some(comps[0].a.midpoint(comps[0].b)),
            _ => Some(comps[side].a.midpoint(comps[side].b)),
        }
    };
    let mut out = Vec::new();
    for side in 0..2 {
        let h = |r: f64| branch(r, side).map(|z| plane.dist(s, z) - r);
        let mut prev: Option<(f64, f64)> = None;
        let mut t = -30.0_f64;
        while t <= 20.0 {
            let r = r0 * (1.0 + t.exp());
            if let Some(v) = h(r) {
                if let Some((rp, vp)) = prev {
                    if vp.signum() != v.signum() {
                        let (mut lo, mut hi) = (rp, r);
                        let mut vlo = vp;
                        for _ in 0..200 {
                            let m = 0.5 * (lo + hi);
                            if m <= lo || m >= hi {
                                break;
                            }
                            match h(m) {
                                Some(vm) if vm.signum() == vlo.signum() => {
                                    lo = m;
                                    vlo = vm;
                                }
                                Some(_) => hi = m,
                                None => break,
                            }
                        }
                        let rr = 0.5 * (lo + hi);
                        if let Some(z) = branch(rr, side) {
                            out.push((z, rr));
                        }
                    }
                }
                prev = Some((r, v));
            }
            t += 0.05;
        }
    }
    out
}

fn circumcenter(a: Point, b: Point, c: Point) -> Option<Point> {
    let (ab, ac) = (b - a, c - a);
    let d = 2.0 * ab.cross(ac);
    if d == 0.0 {
        return None;
    }
    let (l1, l2) = (ab.norm2(), ac.norm2());
    Some(a + Point::new(ac.y * l1 - ab.y * l2, ab.x * l2 - ac.x * l1) / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let b = min_enclosing_ball(
            &NormedPlane::euclidean(),
            &[Point::new(0.0, 0.0), Point::new(2.0, 0.0)],
        )
        .unwrap();
        assert_eq!(b.center, Point::new(1.0, 0.0));
        assert_eq!(b.radius, 1.0);
        let b = min_enclosing_ball(
            &NormedPlane::linf(),
            &[
                Point::new(0.0, 0.0),
                Point::new(2.0, 0.0),
                Point::new(0.0, 2.0),
            ],
        )
        .unwrap();
        assert!((b.radius - 1.0).abs() < 1e-12);
        assert!((b.center - Point::new(1.0, 1.0)).euclid() < 1e-12);
        assert_eq!(
            min_enclosing_ball(&NormedPlane::euclidean(), &[]),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn equilateral_triangle() {
        let s3 = 3f64.sqrt();
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, s3),
        ];
        let b = min_enclosing_ball(&NormedPlane::euclidean(), &pts).unwrap();
        assert!((b.radius - 2.0 / s3).abs() < 1e-12);
    }

    #[test]
    fn two_arc_triple_center_is_equidistant() {
        let lens = NormedPlane::two_arc(10.0, 5.0 * 13f64.sqrt()).unwrap();
        let (p, q, s) = (
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.5),
            Point::new(1.0, 4.0),
        );
        let cs = equidistant_centers(&lens, p, q, s);
        assert!(!cs.is_empty());
        for (c, r) in cs {
            for x in [p, q, s] {
                assert!((lens.dist(c, x) - r).abs() < 1e-9 * r.max(1.0));
            }
        }
    }

    #[test]
    fn working_set_matches_full_search() {
        use rand::{Rng, SeedableRng};
        let lens = NormedPlane::two_arc(10.0, 5.0 * 13f64.sqrt()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let pts: Vec<Point> = (0..12)
                .map(|_| Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let full = curved_ball(&lens, &pts);
            let fast = min_enclosing_ball(&lens, &pts).unwrap();
            assert!((full.radius - fast.radius).abs() < 1e-9, "{full:?} {fast:?}");
        }
    }
}
