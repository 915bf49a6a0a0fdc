use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::{magnitude, NormedPlane, Point};

/// Convex polygon with counterclockwise vertices and no collinear triples.
///
/// Degenerate hulls are kept as-is: one vertex for a single point, two for
/// collinear input.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConvexPolygon {
    pub vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Fewer than three vertices.
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Edges as `(start, end)`; a two-vertex polygon has its segment twice.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        let count = if n < 2 { 0 } else { n };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Twice the signed area.
    pub fn area2(&self) -> f64 {
        self.edges().map(|(a, b)| a.cross(b)).sum()
    }

    /// Point-in-polygon including the boundary band.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => (p - self.vertices[0]).euclid() <= tol,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                let ab = b - a;
                let t = ((p - a).dot(ab) / ab.norm2()).clamp(0.0, 1.0);
                (p - (a + ab * t)).euclid() <= tol
            }
            _ => self.edges().all(|(a, b)| {
                let e = b - a;
                e.cross(p - a) >= -tol * e.euclid()
            }),
        }
    }

    /// Strictly inside (beyond the tolerance band).
    pub fn contains_strictly(&self, p: Point, tol: f64) -> bool {
        self.vertices.len() >= 3
            && self.edges().all(|(a, b)| {
                let e = b - a;
                e.cross(p - a) > tol * e.euclid()
            })
    }

    /// Intersection with another convex polygon (Sutherland-Hodgman).
    ///
    /// Only meaningful when `other` is non-degenerate.
    pub fn intersection(&self, other: &ConvexPolygon) -> ConvexPolygon {
        let mut out = self.vertices.clone();
        for (a, b) in other.edges() {
            if out.is_empty() {
                break;
            }
            let e = b - a;
            let input = std::mem::take(&mut out);
            let m = input.len();
            for i in 0..m {
                let (p, q) = (input[i], input[(i + 1) % m]);
                let (sp, sq) = (e.cross(p - a), e.cross(q - a));
                if sp >= 0.0 {
                    out.push(p);
                }
                if (sp >= 0.0) != (sq >= 0.0) {
                    out.push(p + (q - p) * (sp / (sp - sq)));
                }
            }
        }
        ConvexPolygon { vertices: out }
    }

    /// Vertices in clockwise order.
    pub fn clockwise(&self) -> Vec<Point> {
        let mut v = self.vertices.clone();
        v.reverse();
        v
    }
}

/// Convex hull by Andrew's monotone chain.
pub fn convex_hull(points: &[Point]) -> Result<ConvexPolygon> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() == 1 {
        return Ok(ConvexPolygon { vertices: pts });
    }
    let tol = 1e-12 * magnitude(&pts).powi(2);
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);

    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // collinear: keep the two extremes
        let (a, b) = (pts[0], pts[pts.len() - 1]);
        return Ok(ConvexPolygon {
            vertices: vec![a, b],
        });
    }
    Ok(ConvexPolygon { vertices: lower })
}

/// Sum of the normed lengths of the polygon's edges.
///
/// A two-vertex polygon is walked out and back.
pub fn norm_perimeter(plane: &NormedPlane, polygon: &ConvexPolygon) -> f64 {
    match polygon.vertices.len() {
        0 | 1 => 0.0,
        2 => 2.0 * plane.dist(polygon.vertices[0], polygon.vertices[1]),
        _ => polygon.edges().map(|(a, b)| plane.gauge(b - a)).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_hull() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(0.1, 0.1),
        ];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(
            h.vertices,
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0)
            ]
        );
        assert!(h.area2() > 0.0);
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(convex_hull(&[]), Err(Error::EmptyInput));
        let one = convex_hull(&[Point::new(2.0, 3.0)]).unwrap();
        assert_eq!(one.vertices, vec![Point::new(2.0, 3.0)]);
        let line = convex_hull(&[
            Point::new(0.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(1.0, 1.0),
        ])
        .unwrap();
        assert_eq!(
            line.vertices,
            vec![Point::new(0.0, 0.0), Point::new(2.0, 2.0)]
        );
    }

    #[test]
    fn clipped_squares() {
        let sq = |o: f64| {
            convex_hull(&[
                Point::new(o, o),
                Point::new(o + 2.0, o),
                Point::new(o + 2.0, o + 2.0),
                Point::new(o, o + 2.0),
            ])
            .unwrap()
        };
        let i = sq(0.0).intersection(&sq(1.0));
        assert!((i.area2() - 2.0).abs() < 1e-12);
        assert!(sq(0.0).intersection(&sq(5.0)).area2().abs() < 1e-12);
    }

    #[test]
    fn perimeters() {
        let sq = convex_hull(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap();
        assert!((norm_perimeter(&NormedPlane::euclidean(), &sq) - 4.0).abs() < 1e-12);
        assert!((norm_perimeter(&NormedPlane::l1(), &sq) - 4.0).abs() < 1e-12);
        let big = convex_hull(&[
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
        ])
        .unwrap();
        assert!((norm_perimeter(&NormedPlane::l1(), &big) - 8.0).abs() < 1e-12);
        let seg = ConvexPolygon {
            vertices: vec![Point::new(0.0, 0.0), Point::new(3.0, 4.0)],
        };
        assert!((norm_perimeter(&NormedPlane::euclidean(), &seg) - 10.0).abs() < 1e-12);
    }
}
