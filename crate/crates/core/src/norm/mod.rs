//! Normed planes given by a centrally symmetric convex unit ball.
//!
//! Three unit-ball families are supported:
//!
//! * `Euclidean`: the round disc.
//! * `Polygon`: a centrally symmetric convex polygon. Any norm can be
//!   approximated this way, and all predicates stay piecewise linear.
//! * `TwoArc`: the lens bounded by two circular arcs of radius `R` centred at
//!   `(0, c)` and `(0, -c)`. It is strictly convex but not smooth at the two
//!   corners `(±sqrt(R² - c²), 0)`.
//!
//! A [`NormedPlane`] is immutable after validation and cheap to clone.

mod circle;
mod point;
mod sphere;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use circle::{circle_circle, Circle};
pub use point::{magnitude, Point, Vector};
pub use sphere::{sphere_sphere_intersection, spheres_intersection, SphereIntersection};

/// Default absolute tolerance; scaled by coordinate magnitude where used.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Raw description of a unit ball, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "DescriptorWire", into = "DescriptorWire")]
pub enum NormDescriptor {
    Euclidean,
    /// Vertices of the unit ball, counterclockwise.
    Polygon {
        vertices: Vec<Point>,
    },
    /// Lens with arc radius `radius` and arc centres `(0, ±center_height)`.
    TwoArc {
        center_height: f64,
        radius: f64,
    },
}

impl NormDescriptor {
    /// The ℓ1 norm (diamond-shaped ball).
    pub fn l1() -> Self {
        NormDescriptor::Polygon {
            vertices: vec![
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
                Point::new(-1.0, 0.0),
                Point::new(0.0, -1.0),
            ],
        }
    }

    /// The ℓ∞ norm (square ball).
    pub fn linf() -> Self {
        NormDescriptor::Polygon {
            vertices: vec![
                Point::new(1.0, 1.0),
                Point::new(-1.0, 1.0),
                Point::new(-1.0, -1.0),
                Point::new(1.0, -1.0),
            ],
        }
    }

    /// The lens norm with arc centres `(0, ±10)` and radius `5·sqrt(13)`.
    pub fn two_arc_reference() -> Self {
        NormDescriptor::TwoArc {
            center_height: 10.0,
            radius: 5.0 * 13f64.sqrt(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum DescriptorWire {
    Euclidean,
    Polygon { vertices: Vec<[f64; 2]> },
    TwoArc { center: f64, radius: f64 },
}

impl From<DescriptorWire> for NormDescriptor {
    fn from(w: DescriptorWire) -> Self {
        match w {
            DescriptorWire::Euclidean => NormDescriptor::Euclidean,
            DescriptorWire::Polygon { vertices } => NormDescriptor::Polygon {
                vertices: vertices.into_iter().map(Point::from).collect(),
            },
            DescriptorWire::TwoArc { center, radius } => NormDescriptor::TwoArc {
                center_height: center,
                radius,
            },
        }
    }
}

impl From<NormDescriptor> for DescriptorWire {
    fn from(d: NormDescriptor) -> Self {
        match d {
            NormDescriptor::Euclidean => DescriptorWire::Euclidean,
            NormDescriptor::Polygon { vertices } => DescriptorWire::Polygon {
                vertices: vertices.iter().map(|p| [p.x, p.y]).collect(),
            },
            NormDescriptor::TwoArc {
                center_height,
                radius,
            } => DescriptorWire::TwoArc {
                center: center_height,
                radius,
            },
        }
    }
}

/// Validated unit ball with precomputed data for gauge evaluation.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Body {
    Euclidean,
    Polygon {
        /// Counterclockwise, no collinear vertices.
        vertices: Vec<Point>,
        /// `facets[i]` satisfies `facets[i]·v = 1` on the edge from
        /// `vertices[i]` to `vertices[i + 1]`; the ball is `{v : facets·v <= 1}`.
        facets: Vec<Vector>,
    },
    TwoArc {
        c: f64,
        r: f64,
        /// `r² - c²`, the squared half-width of the lens.
        k: f64,
    },
}

/// A plane with a validated symmetric convex distance function.
#[derive(Debug, Clone, PartialEq)]
pub struct NormedPlane {
    descriptor: NormDescriptor,
    pub(crate) body: Body,
    tolerance: f64,
}

/// Builds a [`NormedPlane`] from a descriptor, rejecting invalid unit balls.
pub fn validate_norm(descriptor: NormDescriptor) -> Result<NormedPlane> {
    NormedPlane::new(descriptor)
}

impl NormedPlane {
    pub fn new(descriptor: NormDescriptor) -> Result<Self> {
        let body = match &descriptor {
            NormDescriptor::Euclidean => Body::Euclidean,
            NormDescriptor::Polygon { vertices } => validate_polygon(vertices)?,
            NormDescriptor::TwoArc {
                center_height: c,
                radius: r,
            } => {
                let (c, r) = (*c, *r);
                if !(c.is_finite() && r.is_finite()) {
                    return Err(Error::NonFinite);
                }
                if c <= 0.0 || r <= c {
                    return Err(Error::DegenerateBody(format!(
                        "two-arc body needs 0 < center ({c}) < radius ({r})"
                    )));
                }
                Body::TwoArc {
                    c,
                    r,
                    k: r * r - c * c,
                }
            }
        };
        let descriptor = match &body {
            Body::Polygon { vertices, .. } => NormDescriptor::Polygon {
                vertices: vertices.clone(),
            },
            _ => descriptor,
        };
        Ok(Self {
            descriptor,
            body,
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    pub fn euclidean() -> Self {
        Self::new(NormDescriptor::Euclidean).expect("euclidean norm is valid")
    }

    pub fn l1() -> Self {
        Self::new(NormDescriptor::l1()).expect("l1 norm is valid")
    }

    pub fn linf() -> Self {
        Self::new(NormDescriptor::linf()).expect("linf norm is valid")
    }

    pub fn two_arc(center_height: f64, radius: f64) -> Result<Self> {
        Self::new(NormDescriptor::TwoArc {
            center_height,
            radius,
        })
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn descriptor(&self) -> &NormDescriptor {
        &self.descriptor
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Strictly convex unit sphere (no segments on the boundary).
    pub fn is_strictly_convex(&self) -> bool {
        !matches!(self.body, Body::Polygon { .. })
    }

    /// Minkowski functional of the unit ball.
    #[inline]
    pub fn gauge(&self, v: Vector) -> f64 {
        match &self.body {
            Body::Euclidean => v.x.hypot(v.y),
            Body::Polygon { facets, .. } => facets.iter().fold(0.0_f64, |m, a| m.max(a.dot(v))),
            Body::TwoArc { c, k, .. } => {
                // smallest t with |v ∓ t(0,c)| <= tR for both signs
                let cy = c * v.y.abs();
                (cy + (cy * cy + k * v.norm2()).sqrt()) / k
            }
        }
    }

    /// `gauge(q - p)`, evaluated in a fixed argument order so that
    /// `dist(p, q) == dist(q, p)` bit for bit.
    #[inline]
    pub fn dist(&self, p: Point, q: Point) -> f64 {
        if p.lex_cmp(&q).is_le() {
            self.gauge(q - p)
        } else {
            self.gauge(p - q)
        }
    }

    /// The point of the unit sphere on the ray through `direction`.
    pub fn boundary_point(&self, direction: Vector) -> Result<Point> {
        let g = self.gauge(direction);
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::ZeroDirection);
        }
        Ok(direction / g)
    }

    /// Outward normals spanning the normal cone of the unit ball at the
    /// boundary point `p`. One normal at smooth points, two at corners.
    pub(crate) fn normal_cone(&self, p: Point) -> Vec<Vector> {
        let tol = 1e-9;
        match &self.body {
            Body::Euclidean => vec![p],
            Body::TwoArc { c, k, .. } => {
                // p.y = 0 exactly at the corners (±sqrt k, 0)
                let corner = p.y.abs() <= tol * k.sqrt().max(1.0);
                let upper = p + Point::new(0.0, *c);
                let lower = p - Point::new(0.0, *c);
                if corner {
                    vec![lower, upper]
                } else if p.y > 0.0 {
                    vec![upper]
                } else {
                    vec![lower]
                }
            }
            Body::Polygon { facets, .. } => {
                let vals: Vec<f64> = facets.iter().map(|a| a.dot(p)).collect();
                let best = vals.iter().cloned().fold(f64::MIN, f64::max);
                let n = facets.len();
                let active: Vec<usize> = (0..n).filter(|&i| vals[i] >= best - 1e-9).collect();
                match active.len() {
                    1 => vec![facets[active[0]]],
                    _ => {
                        // consecutive facets around a vertex: order them ccw
                        let i = active[0];
                        let j = active[active.len() - 1];
                        if (i + 1) % n == j || active.len() == 2 && j == i + 1 {
                            vec![facets[i], facets[j]]
                        } else {
                            vec![facets[j], facets[i]]
                        }
                    }
                }
            }
        }
    }

    /// A unit-gauge vector `y` with `‖x‖ <= ‖x + λy‖` for every real `λ`.
    ///
    /// `y` directs a support line of the unit ball at `x / ‖x‖`. At corners
    /// the horizontal normal is used when it lies in the normal cone
    /// (making `y` vertical); otherwise the bisector of the cone.
    pub fn birkhoff_orthogonal(&self, x: Vector) -> Result<Vector> {
        let p = self.boundary_point(x)?;
        let cone = self.normal_cone(p);
        let normal = if cone.len() == 1 {
            cone[0]
        } else {
            let n1 = cone[0] / cone[0].euclid();
            let n2 = cone[1] / cone[1].euclid();
            let h = Point::new(p.x.signum(), 0.0);
            let span = n1.cross(n2);
            let inside = p.x != 0.0 && n1.cross(h) * span >= -1e-15 && h.cross(n2) * span >= -1e-15;
            if inside {
                h
            } else {
                n1 + n2
            }
        };
        let dir = normal.perp();
        self.boundary_point(dir)
    }

    /// `(cx, cy, radius)` discs whose intersection is the ball `B(center, r)`
    /// for the curved bodies; `None` for polygons.
    pub(crate) fn ball_discs(&self, center: Point, r: f64) -> Option<Vec<Circle>> {
        match &self.body {
            Body::Euclidean => Some(vec![Circle::new(center, r)]),
            Body::TwoArc { c, r: big_r, .. } => Some(vec![
                // upper boundary arc is centred below, lower arc above
                Circle::new(center - Point::new(0.0, c * r), big_r * r),
                Circle::new(center + Point::new(0.0, c * r), big_r * r),
            ]),
            Body::Polygon { .. } => None,
        }
    }

    /// Vertices (ccw) of the ball `B(center, r)` for polygon bodies.
    pub(crate) fn ball_polygon(&self, center: Point, r: f64) -> Option<Vec<Point>> {
        match &self.body {
            Body::Polygon { vertices, .. } => {
                Some(vertices.iter().map(|&v| center + v * r).collect())
            }
            _ => None,
        }
    }
}

fn validate_polygon(raw: &[Point]) -> Result<Body> {
    if raw.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = raw.len();
    if n % 2 == 1 {
        return Err(Error::NotSymmetric);
    }
    if n < 4 {
        return Err(Error::DegenerateBody(format!("{n} vertices")));
    }
    let scale = magnitude(raw);
    let tol = 1e-9 * scale;

    // central symmetry: v[i + n/2] = -v[i]
    let half = n / 2;
    if (0..half).any(|i| (raw[i] + raw[i + half]).max_abs() > tol) {
        return Err(Error::NotSymmetric);
    }

    let area2: f64 = (0..n).map(|i| raw[i].cross(raw[(i + 1) % n])).sum();
    if area2.abs() <= tol * scale {
        return Err(Error::DegenerateBody("zero area".into()));
    }
    let mut verts: Vec<Point> = raw.to_vec();
    if area2 < 0.0 {
        verts.reverse();
    }

    // weak convexity: every turn is left or straight
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let c = verts[(i + 2) % n];
        if (b - a).cross(c - b) < -tol * scale {
            return Err(Error::NotConvex);
        }
    }
    // drop collinear vertices
    let mut strict = Vec::with_capacity(n);
    for i in 0..n {
        let a = verts[(i + n - 1) % n];
        let b = verts[i];
        let c = verts[(i + 1) % n];
        if (b - a).cross(c - b) > tol * scale {
            strict.push(b);
        }
    }
    if strict.len() < 4 {
        return Err(Error::DegenerateBody("fewer than 4 corners".into()));
    }
    // total turning of 2π rules out self-winding polygons
    let mut turning = 0.0;
    for i in 0..strict.len() {
        let a = strict[i];
        let b = strict[(i + 1) % strict.len()];
        let c = strict[(i + 2) % strict.len()];
        turning += (b - a).cross(c - b).atan2((b - a).dot(c - b));
    }
    if (turning - std::f64::consts::TAU).abs() > 1e-6 {
        return Err(Error::NotConvex);
    }

    let m = strict.len();
    let mut facets = Vec::with_capacity(m);
    for i in 0..m {
        let a = strict[i];
        let b = strict[(i + 1) % m];
        let outward = Point::new(b.y - a.y, a.x - b.x);
        let offset = outward.dot(a);
        if offset <= tol * scale {
            return Err(Error::OriginNotInterior);
        }
        facets.push(outward / offset);
    }
    Ok(Body::Polygon {
        vertices: strict,
        facets,
    })
}
