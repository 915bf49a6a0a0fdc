use super::point::Point;

/// Euclidean circle; the curved unit balls are intersections of these.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub const fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        (p - self.center).euclid() <= self.radius + tol
    }

    pub fn point_at(&self, angle: f64) -> Point {
        self.center + Point::new(angle.cos(), angle.sin()) * self.radius
    }

    pub fn angle_of(&self, p: Point) -> f64 {
        let v = p - self.center;
        v.y.atan2(v.x)
    }
}

/// Intersection points of two circles, ordered so that the first one lies to
/// the left of the directed line from `a.center` to `b.center`.
///
/// Tangent circles (within `tol`) yield one point; coincident or nested
/// circles yield none.
pub fn circle_circle(a: &Circle, b: &Circle, tol: f64) -> Vec<Point> {
    let delta = b.center - a.center;
    let dist = delta.euclid();
    if dist <= tol {
        return Vec::new();
    }
    if dist > a.radius + b.radius + tol || dist < (a.radius - b.radius).abs() - tol {
        return Vec::new();
    }
    let along = (dist * dist + a.radius * a.radius - b.radius * b.radius) / (2.0 * dist);
    let h2 = a.radius * a.radius - along * along;
    let unit = delta / dist;
    let foot = a.center + unit * along;
    let h = h2.max(0.0).sqrt();
    if h <= tol {
        return vec![foot];
    }
    let off = unit.perp() * h;
    vec![foot + off, foot - off]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_and_tangency() {
        let a = Circle::new(Point::new(0.0, 0.0), 2.0);
        let b = Circle::new(Point::new(2.0, 0.0), 2.0);
        let pts = circle_circle(&a, &b, 1e-12);
        assert_eq!(pts.len(), 2);
        assert!((pts[0] - Point::new(1.0, 3f64.sqrt())).euclid() < 1e-12);
        assert!((pts[1] - Point::new(1.0, -(3f64.sqrt()))).euclid() < 1e-12);
        let c = Circle::new(Point::new(4.0, 0.0), 2.0);
        assert_eq!(circle_circle(&a, &c, 1e-12).len(), 1);
        let far = Circle::new(Point::new(5.0, 0.0), 2.0);
        assert!(circle_circle(&a, &far, 1e-12).is_empty());
    }
}
