use crate::error::{Error, Result};
use crate::norm::{NormedPlane, Point};

/// A pairwise distance and the index pair `(i, j)` with `i < j`.
pub type DistanceEntry = (f64, (usize, usize));

/// All `n(n-1)/2` pairwise distances in ascending order; ties broken by the
/// index pair.
pub fn sorted_pairwise_distances(
    plane: &NormedPlane,
    points: &[Point],
) -> Result<Vec<DistanceEntry>> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let rows = crate::par::map_range(n, |i| {
        (i + 1..n)
            .map(|j| (plane.dist(points[i], points[j]), (i, j)))
            .collect::<Vec<_>>()
    });
    let mut out: Vec<DistanceEntry> = rows.into_iter().flatten().collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// Symmetric matrix of pairwise distances.
pub fn distance_matrix(plane: &NormedPlane, points: &[Point]) -> Vec<Vec<f64>> {
    let n = points.len();
    crate::par::map_range(n, |i| {
        (0..n)
            .map(|j| {
                if i == j {
                    0.0
                } else {
                    plane.dist(points[i], points[j])
                }
            })
            .collect()
    })
}
