use crate::error::{Error, Result};
use crate::norm::{NormedPlane, Point};
use crate::par;

use super::{ball_hull, BallHull};

/// Complete binary tree over the x-sorted points; every node holds the ball
/// hull of the live leaves beneath it.
///
/// Nodes are stored heap-style: the root is `nodes[1]`, the children of
/// `i` are `2i` and `2i + 1`, and leaf `j` sits at `width + j`.
#[derive(Debug, Clone)]
pub struct BallHullTree {
    plane: NormedPlane,
    radius: f64,
    leaves: Vec<Point>,
    live: Vec<bool>,
    width: usize,
    nodes: Vec<Option<BallHull>>,
}

impl BallHullTree {
    pub fn build(plane: &NormedPlane, points: &[Point], d: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if points.iter().any(|p| !p.is_finite()) || !d.is_finite() {
            return Err(Error::NonFinite);
        }
        let mut leaves = points.to_vec();
        leaves.sort_by(Point::lex_cmp);
        let width = leaves.len().next_power_of_two();
        let mut nodes: Vec<Option<BallHull>> = vec![None; 2 * width];
        for (j, &p) in leaves.iter().enumerate() {
            nodes[width + j] = Some(BallHull::single(p, d));
        }
        let mut lo = width / 2;
        while lo >= 1 {
            let level = par::map_range(lo, |k| merge(plane, d, &nodes[2 * (lo + k)], &nodes[2 * (lo + k) + 1]));
            for (k, hull) in level.into_iter().enumerate() {
                nodes[lo + k] = hull?;
            }
            lo /= 2;
        }
        Ok(Self {
            plane: plane.clone(),
            radius: d,
            live: vec![true; leaves.len()],
            leaves,
            width,
            nodes,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Hull of all live points, `None` once every point is deleted.
    pub fn root(&self) -> Option<&BallHull> {
        self.nodes[1].as_ref()
    }

    pub fn live_points(&self) -> impl Iterator<Item = Point> + '_ {
        self.leaves.iter().zip(&self.live).filter(|(_, &l)| l).map(|(&p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.live.iter().filter(|&&l| l).count()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes[1].is_none()
    }

    /// A node can be skipped when all its hull vertices are closer than
    /// `d` to `u`; then every point beneath it is.
    fn prunable(&self, node: usize, u: Point) -> bool {
        match &self.nodes[node] {
            None => true,
            Some(h) => h.vertices.iter().all(|&v| self.plane.dist(u, v) < self.radius),
        }
    }

    /// Some live point at distance at least `d` from `u`, if any.
    pub fn query_far_point(&self, u: Point) -> Option<Point> {
        let mut node = 1;
        if self.prunable(node, u) {
            return None;
        }
        while node < self.width {
            node = if !self.prunable(2 * node, u) {
                2 * node
            } else if !self.prunable(2 * node + 1, u) {
                2 * node + 1
            } else {
                // only reachable through rounding at the boundary
                return self.nodes[node]
                    .as_ref()
                    .and_then(|h| h.vertices.iter().copied().find(|&v| self.plane.dist(u, v) >= self.radius));
            };
        }
        Some(self.leaves[node - self.width])
    }

    /// Marks one live copy of `p` dead and rebuilds the hulls above it.
    pub fn delete_point(&mut self, p: Point) -> Result<()> {
        let start = self.leaves.partition_point(|q| q.lex_cmp(&p).is_lt());
        let j = (start..self.leaves.len())
            .take_while(|&j| self.leaves[j] == p)
            .find(|&j| self.live[j])
            .ok_or(Error::NotPresent)?;
        self.live[j] = false;
        let mut node = self.width + j;
        self.nodes[node] = None;
        while node > 1 {
            node /= 2;
            self.nodes[node] = merge(
                &self.plane,
                self.radius,
                &self.nodes[2 * node],
                &self.nodes[2 * node + 1],
            )?;
        }
        Ok(())
    }
}

fn merge(
    plane: &NormedPlane,
    d: f64,
    left: &Option<BallHull>,
    right: &Option<BallHull>,
) -> Result<Option<BallHull>> {
    match (left, right) {
        (None, None) => Ok(None),
        (Some(h), None) | (None, Some(h)) => Ok(Some(h.clone())),
        (Some(a), Some(b)) => {
            let pts: Vec<Point> = a.vertices.iter().chain(&b.vertices).copied().collect();
            ball_hull(plane, &pts, d).map(Some)
        }
    }
}

/// Builds the tree; fails with `NoBallContainsS` when no radius-`d` ball
/// holds all of `points`.
pub fn build_tree(plane: &NormedPlane, points: &[Point], d: f64) -> Result<BallHullTree> {
    BallHullTree::build(plane, points, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::norm::NormDescriptor;
    use crate::testutil::{random_points, random_polygon_norm};

    fn far_exists(plane: &NormedPlane, pts: &[Point], u: Point, d: f64) -> bool {
        pts.iter().any(|&p| plane.dist(u, p) >= d)
    }

    #[test]
    fn single_leaf() {
        let plane = NormedPlane::euclidean();
        let p = Point::new(1.0, 2.0);
        let mut t = build_tree(&plane, &[p], 1.0).unwrap();
        assert_eq!(t.root().unwrap().vertices, vec![p]);
        assert_eq!(t.query_far_point(Point::new(5.0, 2.0)), Some(p));
        t.delete_point(p).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.query_far_point(Point::new(5.0, 2.0)), None);
        assert_eq!(t.delete_point(p), Err(Error::NotPresent));
    }

    #[test]
    fn far_pair() {
        let plane = NormedPlane::euclidean();
        let pts = [Point::new(0.0, 0.0), Point::new(10.0, 0.0)];
        let t = build_tree(&plane, &pts, 6.0).unwrap();
        assert_eq!(t.query_far_point(Point::new(0.0, 0.0)), Some(pts[1]));
        assert_eq!(t.query_far_point(Point::new(5.0, 0.0)), None);
    }

    #[test]
    fn root_matches_direct_hull() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let polygon = random_polygon_norm(&mut rng, 5);
        let cases = [
            (NormedPlane::euclidean(), 8),
            (polygon, 200),
            (NormedPlane::new(NormDescriptor::two_arc_reference()).unwrap(), 60),
        ];
        for (plane, n) in cases {
            let pts = random_points(&mut rng, n, 1.0);
            let t = build_tree(&plane, &pts, 3.0).unwrap();
            let direct = ball_hull(&plane, &pts, 3.0).unwrap();
            let root = t.root().unwrap();
            assert_eq!(root.vertices, direct.vertices);
        }
    }

    #[test]
    fn replay_matches_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let planes = [
            NormedPlane::euclidean(),
            NormedPlane::l1(),
            NormedPlane::new(NormDescriptor::two_arc_reference()).unwrap(),
        ];
        for plane in &planes {
            let mut pts = random_points(&mut rng, 40, 0.5);
            pts.push(pts[3]);
            let d = 1.2;
            let mut t = build_tree(plane, &pts, d).unwrap();
            let mut live = pts.clone();
            for _ in 0..400 {
                if rng.random_bool(0.1) && !live.is_empty() {
                    let p = live.swap_remove(rng.random_range(0..live.len()));
                    t.delete_point(p).unwrap();
                } else {
                    let u = Point::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
                    let got = t.query_far_point(u);
                    assert_eq!(got.is_some(), far_exists(plane, &live, u, d));
                    if let Some(v) = got {
                        assert!(plane.dist(u, v) >= d && live.contains(&v));
                    }
                }
            }
        }
    }

    #[test]
    fn pruning_is_exact_on_small_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let plane = random_polygon_norm(&mut rng, 3);
        let pts = random_points(&mut rng, 13, 1.0);
        let t = build_tree(&plane, &pts, 1.5).unwrap();
        for _ in 0..300 {
            let u = Point::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            for node in 1..2 * t.width {
                let lo = node.leading_zeros() - t.width.leading_zeros();
                let (first, count) = (node << lo, 1usize << lo);
                let below: Vec<Point> = (first..first + count)
                    .filter(|&l| l - t.width < t.leaves.len())
                    .map(|l| t.leaves[l - t.width])
                    .collect();
                assert_eq!(t.prunable(node, u), !far_exists(&plane, &below, u, 1.5));
            }
        }
    }
}
