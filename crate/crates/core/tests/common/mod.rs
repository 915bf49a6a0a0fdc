#![allow(dead_code)]

use normclust::{NormDescriptor, NormedPlane, Point};
use rand::Rng;

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

pub fn lens() -> NormedPlane {
    NormedPlane::two_arc(10.0, 5.0 * 13f64.sqrt()).unwrap()
}

/// Euclidean, L1, L∞, three random polygon norms and the lens norm.
pub fn norm_suite<R: Rng>(rng: &mut R) -> Vec<(String, NormedPlane)> {
    let mut v = vec![
        ("euclidean".to_string(), NormedPlane::euclidean()),
        ("l1".to_string(), NormedPlane::l1()),
        ("linf".to_string(), NormedPlane::linf()),
    ];
    for i in 0..3 {
        let half = rng.random_range(3..=6);
        v.push((format!("polygon{i}"), random_polygon_norm(rng, half)));
    }
    v.push(("two_arc".to_string(), lens()));
    v
}

pub fn random_points<R: Rng>(rng: &mut R, n: usize, span: f64) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.random_range(-span..span), rng.random_range(-span..span)))
        .collect()
}

/// Points around a few random centres, so clusterings are not trivial.
pub fn blobs<R: Rng>(rng: &mut R, n: usize, span: f64) -> Vec<Point> {
    let k = rng.random_range(1..=4);
    let centres = random_points(rng, k, span * 0.7);
    let spread = rng.random_range(0.05..0.5) * span;
    (0..n)
        .map(|i| {
            let c = centres[i % k];
            Point::new(
                (c.x + rng.random_range(-spread..spread)).clamp(-span, span),
                (c.y + rng.random_range(-spread..spread)).clamp(-span, span),
            )
        })
        .collect()
}

pub fn mixed_points<R: Rng>(rng: &mut R, n: usize, span: f64) -> Vec<Point> {
    if rng.random_bool(0.5) {
        random_points(rng, n, span)
    } else {
        blobs(rng, n, span)
    }
}
