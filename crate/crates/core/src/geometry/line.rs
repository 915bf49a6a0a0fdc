use serde::{Deserialize, Serialize};

use crate::norm::{Point, Vector};

/// Closed segment between two points; `a == b` is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    On,
    Right,
}

/// Where points lying on a splitting line go.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OnRule {
    ToLeft,
    ToRight,
}

/// Line through `anchor` with a nonzero `direction`; "left" is the side of
/// positive orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub anchor: Point,
    pub direction: Vector,
}

/// Relative width of the `On` band.
pub const SIDE_TOLERANCE: f64 = 1e-9;

impl OrientedLine {
    pub fn new(anchor: Point, direction: Vector) -> Self {
        debug_assert!(direction != Point::ORIGIN, "zero direction");
        Self { anchor, direction }
    }

    pub fn through(p: Point, q: Point) -> Self {
        Self::new(p, q - p)
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.anchor, -self.direction)
    }

    /// Signed orientation determinant; positive on the left.
    #[inline]
    pub fn signed(&self, p: Point) -> f64 {
        self.direction.cross(p - self.anchor)
    }

    /// Euclidean signed distance, positive on the left.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.signed(p) / self.direction.euclid()
    }

    pub fn point_at(&self, t: f64) -> Point {
        self.anchor + self.direction * t
    }

    pub fn side(&self, p: Point) -> Side {
        side_of(self, p)
    }

    /// Whether the line meets the closed segment.
    pub fn meets(&self, s: &Segment) -> bool {
        let (x, y) = (self.side(s.a), self.side(s.b));
        !(x == y && x != Side::On)
    }
}

/// Sign of the orientation determinant, with a tolerance band for `On`
/// scaled by the magnitude of the inputs.
pub fn side_of(line: &OrientedLine, p: Point) -> Side {
    let s = line.signed(p);
    let scale = 1.0_f64.max(line.anchor.max_abs()).max(p.max_abs());
    let band = SIDE_TOLERANCE * scale * line.direction.euclid();
    if s > band {
        Side::Left
    } else if s < -band {
        Side::Right
    } else {
        Side::On
    }
}

/// Splits `points` by `line`; points on the line follow `rule`.
pub fn split_by_line(
    points: &[Point],
    line: &OrientedLine,
    rule: OnRule,
) -> (Vec<Point>, Vec<Point>) {
    let (l, r) = split_indices_by_line(points, line, rule);
    (
        l.into_iter().map(|i| points[i]).collect(),
        r.into_iter().map(|i| points[i]).collect(),
    )
}

/// Index form of [`split_by_line`].
pub fn split_indices_by_line(
    points: &[Point],
    line: &OrientedLine,
    rule: OnRule,
) -> (Vec<usize>, Vec<usize>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        match (side_of(line, p), rule) {
            (Side::Left, _) | (Side::On, OnRule::ToLeft) => left.push(i),
            _ => right.push(i),
        }
    }
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_axis() -> OrientedLine {
        OrientedLine::new(Point::ORIGIN, Point::new(1.0, 0.0))
    }

    #[test]
    fn sides() {
        let l = x_axis();
        assert_eq!(side_of(&l, Point::new(0.0, 1.0)), Side::Left);
        assert_eq!(side_of(&l, Point::new(5.0, 0.0)), Side::On);
        assert_eq!(side_of(&l, Point::new(0.0, -1.0)), Side::Right);
    }

    #[test]
    fn split() {
        let l = x_axis();
        let pts = [Point::new(0.0, 1.0), Point::new(0.0, -1.0)];
        let (a, b) = split_by_line(&pts, &l, OnRule::ToLeft);
        assert_eq!(a, vec![pts[0]]);
        assert_eq!(b, vec![pts[1]]);
        let on = [Point::new(3.0, 0.0)];
        let (a, b) = split_by_line(&on, &l, OnRule::ToLeft);
        assert_eq!((a.len(), b.len()), (1, 0));
        let (a, b) = split_by_line(&[], &l, OnRule::ToRight);
        assert!(a.is_empty() && b.is_empty());
    }
}
