use serde::{Deserialize, Serialize};

use super::hull::convex_hull;
use crate::error::{Error, Result};
use crate::norm::{NormedPlane, Point};

/// Normed diameter with an attaining pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diameter {
    pub value: f64,
    pub pair: (Point, Point),
}

/// Antipodal vertex pairs of a counterclockwise convex polygon.
///
/// For every edge the farthest vertex is tracked by a monotone pointer;
/// both edge endpoints are paired with it and with its neighbours, which
/// covers every pair admitting parallel support lines.
pub fn antipodal_pairs(hull: &[Point]) -> Vec<(usize, usize)> {
    let m = hull.len();
    match m {
        0 | 1 => return Vec::new(),
        2 => return vec![(0, 1)],
        _ => {}
    }
    let height = |i: usize, j: usize| {
        let a = hull[i];
        let b = hull[(i + 1) % m];
        (b - a).cross(hull[j % m] - a)
    };
    let mut pairs = Vec::with_capacity(4 * m);
    let mut j = 1;
    for i in 0..m {
        if j % m == i {
            j += 1;
        }
        while height(i, j + 1) > height(i, j) {
            j += 1;
        }
        for dj in [m - 1, 0, 1] {
            let jj = (j + dj) % m;
            pairs.push((i, jj));
            pairs.push(((i + 1) % m, jj));
        }
    }
    pairs
}

/// Maximum normed distance over `points` via rotating calipers.
pub fn diameter(plane: &NormedPlane, points: &[Point]) -> Result<Diameter> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if points.len() <= 3 {
        return Ok(brute_diameter(plane, points));
    }
    let hull = convex_hull(points)?.vertices;
    if hull.len() == 1 {
        return Ok(Diameter {
            value: 0.0,
            pair: (hull[0], hull[0]),
        });
    }
    let mut best = Diameter {
        value: f64::MIN,
        pair: (hull[0], hull[0]),
    };
    for (i, j) in antipodal_pairs(&hull) {
        let v = plane.dist(hull[i], hull[j]);
        if v > best.value {
            best = Diameter {
                value: v,
                pair: (hull[i], hull[j]),
            };
        }
    }
    Ok(best)
}

/// Diameter value only; zero for empty input.
pub fn diameter_value(plane: &NormedPlane, points: &[Point]) -> f64 {
    diameter(plane, points).map(|d| d.value).unwrap_or(0.0)
}

fn brute_diameter(plane: &NormedPlane, points: &[Point]) -> Diameter {
    let mut best = Diameter {
        value: 0.0,
        pair: (points[0], points[0]),
    };
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let v = plane.dist(points[i], points[j]);
            if v > best.value {
                best = Diameter {
                    value: v,
                    pair: (points[i], points[j]),
                };
            }
        }
    }
    best
}
