use rand::Rng;

use crate::norm::{NormDescriptor, NormedPlane, Point};

/// Random centrally symmetric polygon norm with `2 * half` vertices.
pub fn random_polygon_norm<R: Rng>(rng: &mut R, half: usize) -> NormedPlane {
    loop {
        let mut angles: Vec<f64> = (0..half)
            .map(|_| rng.random_range(0.0..std::f64::consts::PI))
            .collect();
        angles.sort_by(f64::total_cmp);
        let mut verts: Vec<Point> = angles
            .iter()
            .map(|&t| {
                let r = rng.random_range(0.5..2.0);
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        let neg: Vec<Point> = verts.iter().map(|&p| -p).collect();
        verts.extend(neg);
        if let Ok(p) = NormedPlane::new(NormDescriptor::Polygon { vertices: verts }) {
            return p;
        }
    }
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize, span: f64) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.random_range(-span..span), rng.random_range(-span..span)))
        .collect()
}
