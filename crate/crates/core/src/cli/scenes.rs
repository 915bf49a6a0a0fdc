use crate::error::{Error, Result};
use crate::norm::{spheres_intersection, NormDescriptor, NormedPlane, Point};

use super::svg::{Curve, Layer, Scene};

/// Four points on `S(a, 1)` in the lens norm that admit no split into
/// clusters of diameters at most 1.1 and 1, although `‖a − b‖ ≥ 1.1` and
/// `p, q ∈ S(b, 1.1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensCounterexample {
    pub a: Point,
    pub b: Point,
    pub p: Point,
    pub q: Point,
    pub r: Point,
    pub s: Point,
}

impl LensCounterexample {
    pub fn plane() -> NormedPlane {
        NormedPlane::new(NormDescriptor::two_arc_reference()).expect("reference lens is valid")
    }

    pub fn build() -> Result<Self> {
        let plane = Self::plane();
        let NormDescriptor::TwoArc { center_height: h, radius } = *plane.descriptor() else {
            unreachable!("reference descriptor is a lens");
        };
        // upper unit arc: circle of the lower centre
        let upper = |x: f64| Point::new(x, -h + (radius * radius - x * x).sqrt());
        let (a, b) = (Point::ORIGIN, Point::new(-9.81, 6.24));
        let (r, s) = (upper(-9.39), upper(-8.24));
        let mut pq = spheres_intersection(&plane, a, 1.0, b, 1.1).extreme_points();
        if pq.len() != 2 {
            return Err(Error::DegenerateArrangement);
        }
        // p comes just before r clockwise, so it has the smaller
        // counterclockwise offset from r
        let offset = |u: &Point| (polar(*u) - polar(r)).rem_euclid(std::f64::consts::TAU);
        pq.sort_by(|u, v| offset(u).total_cmp(&offset(v)));
        Ok(Self { a, b, p: pq[0], q: pq[1], r, s })
    }

    pub fn points(&self) -> [Point; 4] {
        [self.p, self.q, self.r, self.s]
    }

    /// The four points with the spheres `S(a, 1)` and `S(b, 1.1)`.
    pub fn scene(&self, samples: usize) -> Scene {
        let plane = Self::plane();
        let sphere = |c: Point, rad: f64| Curve {
            class: "sphere".into(),
            points: (0..samples)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / samples as f64;
                    let u = plane
                        .boundary_point(Point::new(t.cos(), t.sin()))
                        .expect("nonzero direction");
                    c + u * rad
                })
                .collect(),
            closed: true,
        };
        Scene {
            layers: vec![Layer {
                name: "S".into(),
                points: self.points().to_vec(),
            }],
            curves: vec![sphere(self.a, 1.0), sphere(self.b, 1.1)],
            ..Scene::default()
        }
    }
}

fn polar(u: Point) -> f64 {
    u.y.atan2(u.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_lie_on_their_spheres() {
        let plane = LensCounterexample::plane();
        let c = LensCounterexample::build().unwrap();
        for x in c.points() {
            assert!((plane.dist(c.a, x) - 1.0).abs() < 1e-9);
        }
        assert!((plane.dist(c.b, c.p) - 1.1).abs() < 1e-9);
        assert!((plane.dist(c.b, c.q) - 1.1).abs() < 1e-9);
        let cw = |u: Point| (polar(c.p) - polar(u)).rem_euclid(std::f64::consts::TAU);
        assert!(cw(c.r) < cw(c.s) && cw(c.s) < cw(c.q));
        assert!(c.r.y > 0.0 && c.s.y > 0.0);
    }

    #[test]
    fn scene_has_four_glyphs_and_two_spheres() {
        let svg = super::super::svg::render_svg(&LensCounterexample::build().unwrap().scene(64));
        assert_eq!(svg.matches("<circle").count(), 4);
        assert_eq!(svg.matches("class=\"sphere\"").count(), 2);
    }
}
