use super::circle::{circle_circle, Circle};
use super::point::Point;
use super::{Body, NormedPlane};
use crate::geometry::Segment;

/// `S(p, d) ∩ S(q, d)` as at most two connected components.
///
/// Each component is reported by its two extreme points; a point component
/// has `a == b`. Interior points of segment components are not enumerated.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereIntersection {
    pub components: Vec<Segment>,
}

impl SphereIntersection {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Endpoints of every component, deduplicated for point components.
    pub fn extreme_points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for s in &self.components {
            out.push(s.a);
            if s.a != s.b {
                out.push(s.b);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    /// Circle restricted to `y >= y0` (upper), `y <= y0` (lower) or all.
    Arc {
        circle: Circle,
        half: Half,
        y0: f64,
    },
    Seg(Point, Point),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Half {
    Full,
    Upper,
    Lower,
}

fn sphere_pieces(plane: &NormedPlane, center: Point, d: f64) -> Vec<Piece> {
    match &plane.body {
        Body::Euclidean => vec![Piece::Arc {
            circle: Circle::new(center, d),
            half: Half::Full,
            y0: center.y,
        }],
        Body::TwoArc { c, r, .. } => vec![
            Piece::Arc {
                circle: Circle::new(center - Point::new(0.0, c * d), r * d),
                half: Half::Upper,
                y0: center.y,
            },
            Piece::Arc {
                circle: Circle::new(center + Point::new(0.0, c * d), r * d),
                half: Half::Lower,
                y0: center.y,
            },
        ],
        Body::Polygon { vertices, .. } => {
            let n = vertices.len();
            (0..n)
                .map(|i| Piece::Seg(center + vertices[i] * d, center + vertices[(i + 1) % n] * d))
                .collect()
        }
    }
}

fn on_half(p: Point, half: Half, y0: f64, tol: f64) -> bool {
    match half {
        Half::Full => true,
        Half::Upper => p.y >= y0 - tol,
        Half::Lower => p.y <= y0 + tol,
    }
}

/// Intersection of two closed segments: nothing, a point, or an overlap.
pub(crate) fn segment_intersection(
    a: Point,
    b: Point,
    c: Point,
    d: Point,
    tol: f64,
) -> Option<(Point, Point)> {
    let r = b - a;
    let s = d - c;
    if r.euclid() <= tol {
        return (point_segment_distance(a, c, d) <= tol).then_some((a, a));
    }
    if s.euclid() <= tol {
        return (point_segment_distance(c, a, b) <= tol).then_some((c, c));
    }
    let denom = r.cross(s);
    let rl = r.euclid().max(tol);
    let sl = s.euclid().max(tol);
    if denom.abs() <= tol * rl * sl.max(1.0) {
        // parallel: overlap only when collinear
        if (c - a).cross(r).abs() > tol * rl {
            return None;
        }
        let rr = r.norm2().max(tol * tol);
        let t0 = (c - a).dot(r) / rr;
        let t1 = (d - a).dot(r) / rr;
        let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
        let slack = tol / rl;
        if lo > hi + slack {
            return None;
        }
        let hi = hi.max(lo);
        return Some((a + r * lo, a + r * hi));
    }
    let t = (c - a).cross(s) / denom;
    let u = (c - a).cross(r) / denom;
    let (st, su) = (tol / rl, tol / sl);
    if t < -st || t > 1.0 + st || u < -su || u > 1.0 + su {
        return None;
    }
    let p = a + r * t.clamp(0.0, 1.0);
    Some((p, p))
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return (p - a).euclid();
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).euclid()
}

fn pieces_touch(x: (Point, Point), y: (Point, Point), tol: f64) -> bool {
    point_segment_distance(x.0, y.0, y.1) <= tol
        || point_segment_distance(x.1, y.0, y.1) <= tol
        || point_segment_distance(y.0, x.0, x.1) <= tol
        || point_segment_distance(y.1, x.0, x.1) <= tol
        || segment_intersection(x.0, x.1, y.0, y.1, tol).is_some()
}

/// Computes the components of `S(p, d) ∩ S(q, d)`.
///
/// Empty when `‖p - q‖ > 2d`. For strictly convex norms every component is
/// a single point.
pub fn sphere_sphere_intersection(
    plane: &NormedPlane,
    p: Point,
    q: Point,
    d: f64,
) -> SphereIntersection {
    spheres_intersection(plane, p, d, q, d)
}

/// `S(p, rp) ∩ S(q, rq)` for possibly different radii.
pub fn spheres_intersection(
    plane: &NormedPlane,
    p: Point,
    rp: f64,
    q: Point,
    rq: f64,
) -> SphereIntersection {
    let scale = p.max_abs().max(q.max_abs()).max(rp).max(rq).max(1.0);
    let tol = plane.tolerance() * scale;
    if plane.dist(p, q) > (rp + rq) * (1.0 + plane.tolerance()) || p == q {
        return SphereIntersection {
            components: Vec::new(),
        };
    }
    let sp = sphere_pieces(plane, p, rp);
    let sq = sphere_pieces(plane, q, rq);
    let mut raw: Vec<(Point, Point)> = Vec::new();
    for x in &sp {
        for y in &sq {
            match (x, y) {
                (
                    Piece::Arc {
                        circle: c1,
                        half: h1,
                        y0: y1,
                    },
                    Piece::Arc {
                        circle: c2,
                        half: h2,
                        y0: y2,
                    },
                ) => {
                    for z in circle_circle(c1, c2, tol) {
                        if on_half(z, *h1, *y1, tol) && on_half(z, *h2, *y2, tol) {
                            raw.push((z, z));
                        }
                    }
                }
                (Piece::Seg(a, b), Piece::Seg(c, d)) => {
                    if let Some(s) = segment_intersection(*a, *b, *c, *d, tol) {
                        raw.push(s);
                    }
                }
                _ => unreachable!("both spheres come from the same body"),
            }
        }
    }

    // union touching pieces into connected components
    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let merge_tol = tol * 10.0;
    for i in 0..n {
        for j in i + 1..n {
            if pieces_touch(raw[i], raw[j], merge_tol) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<Point>> = Vec::new();
    let mut root_index: Vec<Option<usize>> = vec![None; n];
    for (i, &(a, b)) in raw.iter().enumerate() {
        let r = find(&mut parent, i);
        let g = *root_index[r].get_or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(a);
        groups[g].push(b);
    }
    let mut components: Vec<Segment> = groups
        .into_iter()
        .map(|pts| {
            let mut best = (pts[0], pts[0], 0.0);
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    let l = (pts[i] - pts[j]).euclid();
                    if l > best.2 {
                        best = (pts[i], pts[j], l);
                    }
                }
            }
            if best.2 <= merge_tol {
                let m = best.0.midpoint(best.1);
                Segment::new(m, m)
            } else if best.0.lex_cmp(&best.1).is_le() {
                Segment::new(best.0, best.1)
            } else {
                Segment::new(best.1, best.0)
            }
        })
        .collect();
    // left of p→q first
    let dir = q - p;
    components.sort_by(|s, t| {
        let ks = dir.cross(s.a.midpoint(s.b) - p);
        let kt = dir.cross(t.a.midpoint(t.b) - p);
        kt.total_cmp(&ks)
    });
    SphereIntersection { components }
}
