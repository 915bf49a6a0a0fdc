use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::twocluster::feasible_2cluster_labels;
use super::twosat::TwoSat;
use super::{search_threshold, threshold_candidates, Measure, Partition};
use crate::error::{Error, Result};
use crate::geometry::distance_matrix;
use crate::norm::{magnitude, NormedPlane, Point, Vector};

/// Basis `{x, y}` with `x` Birkhoff orthogonal to `y`, in which all input
/// points have pairwise distinct coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HrBasis {
    pub x: Vector,
    pub y: Vector,
    /// Direction angle of `x`.
    pub angle: f64,
}

impl HrBasis {
    pub fn at_angle(plane: &NormedPlane, angle: f64) -> Result<Self> {
        let x = Point::new(angle.cos(), angle.sin());
        let y = plane.birkhoff_orthogonal(x)?;
        if x.cross(y).abs() < 1e-12 {
            return Err(Error::DegenerateBasis);
        }
        Ok(Self { x, y, angle })
    }

    /// Coordinates `(ξ, η)` with `p = ξ x + η y`.
    pub fn coords(&self, p: Point) -> (f64, f64) {
        let det = self.x.cross(self.y);
        (p.cross(self.y) / det, self.x.cross(p) / det)
    }

    fn distinct(&self, points: &[Point]) -> bool {
        let gap = 1e-9 * magnitude(points);
        let (mut xs, mut ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&p| self.coords(p)).unzip();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        xs.windows(2).all(|w| w[1] - w[0] > gap) && ys.windows(2).all(|w| w[1] - w[0] > gap)
    }

    /// Angle zero if it works, otherwise seeded random angles.
    pub fn choose(plane: &NormedPlane, points: &[Point], seed: u64) -> Result<Self> {
        let b = Self::at_angle(plane, 0.0)?;
        if b.distinct(points) {
            return Ok(b);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..64 {
            let b = Self::at_angle(plane, rng.random_range(0.0..std::f64::consts::PI))?;
            if b.distinct(points) {
                return Ok(b);
            }
        }
        Err(Error::DegenerateBasis)
    }
}

/// Three-zone split of the points around the segment from `a` to `a'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zones {
    pub a: usize,
    pub a_prime: usize,
    /// `a`, `a'` and every point on the segment between them.
    pub seed: Vec<usize>,
    pub north: Vec<usize>,
    pub south: Vec<usize>,
    pub east: Vec<usize>,
}

/// Forced assignments and two-way candidates for the case where neither
/// zone lies inside the cluster of `a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HrState {
    pub a0: Vec<usize>,
    pub b0: Vec<usize>,
    pub c0: Vec<usize>,
    pub ab_cand: Vec<usize>,
    pub ca_cand: Vec<usize>,
    pub bc_cand: Vec<usize>,
    pub d: f64,
}

/// Zone-diameter bookkeeping gathered while testing thresholds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HrTrace {
    /// `(a, a', d)` triples examined.
    pub triples: usize,
    /// Triples where a zone's share of `B(a,d) ∩ B(a',d)` has diameter
    /// above `d`.
    pub violations: usize,
    pub basis_angle: f64,
}

fn zones_in(coords: &[(f64, f64)], a: usize, a_prime: usize, scale: f64) -> Zones {
    let (xa, ya) = coords[a];
    let (xb, yb) = coords[a_prime];
    let mut z = Zones {
        a,
        a_prime,
        seed: if a == a_prime {
            vec![a]
        } else {
            vec![a, a_prime]
        },
        north: Vec::new(),
        south: Vec::new(),
        east: Vec::new(),
    };
    let band = 1e-9 * scale;
    for (u, &(xu, yu)) in coords.iter().enumerate() {
        if u == a || u == a_prime {
            continue;
        }
        if a == a_prime || xu > xb {
            z.east.push(u);
            continue;
        }
        // u = a' + s (a - a') + β y
        let s = (xu - xb) / (xa - xb);
        let beta = yu - yb - s * (ya - yb);
        if beta > band {
            z.north.push(u);
        } else if beta < -band {
            z.south.push(u);
        } else {
            z.seed.push(u);
        }
    }
    z.seed.sort_unstable();
    z
}

/// Zones of `points` for the pair `a`, `a'` in the basis at angle zero.
///
/// `a` must have the strictly smallest first coordinate.
pub fn hr_zones(plane: &NormedPlane, points: &[Point], a: Point, a_prime: Point) -> Result<Zones> {
    let basis = HrBasis::at_angle(plane, 0.0)?;
    let ia = points
        .iter()
        .position(|&p| p == a)
        .ok_or(Error::NotPresent)?;
    let ib = points
        .iter()
        .position(|&p| p == a_prime)
        .ok_or(Error::NotPresent)?;
    let coords: Vec<(f64, f64)> = points.iter().map(|&p| basis.coords(p)).collect();
    if coords
        .iter()
        .enumerate()
        .any(|(i, c)| i != ia && c.0 <= coords[ia].0)
    {
        return Err(Error::DegenerateBasis);
    }
    Ok(zones_in(&coords, ia, ib, magnitude(points)))
}

/// Distinct points with the original-to-unique index map.
struct Solver {
    uniq: Vec<Point>,
    map: Vec<usize>,
    dm: Vec<Vec<f64>>,
    coords: Vec<(f64, f64)>,
    basis: HrBasis,
    a: usize,
    scale: f64,
}

impl Solver {
    fn new(plane: &NormedPlane, points: &[Point], seed: u64) -> Result<Self> {
        let n = points.len();
        if n < 3 {
            return Err(Error::TooFewPoints { needed: 3, got: n });
        }
        let mut uniq: Vec<Point> = Vec::new();
        let mut map = Vec::with_capacity(n);
        for &p in points {
            match uniq.iter().position(|&q| q == p) {
                Some(i) => map.push(i),
                None => {
                    map.push(uniq.len());
                    uniq.push(p);
                }
            }
        }
        let basis = HrBasis::choose(plane, &uniq, seed)?;
        let coords: Vec<(f64, f64)> = uniq.iter().map(|&p| basis.coords(p)).collect();
        let a = (0..uniq.len())
            .min_by(|&i, &j| coords[i].0.total_cmp(&coords[j].0))
            .expect("nonempty");
        Ok(Self {
            dm: distance_matrix(plane, &uniq),
            scale: magnitude(&uniq),
            uniq,
            map,
            coords,
            basis,
            a,
        })
    }

    fn far(&self, i: usize, j: usize, d: f64) -> bool {
        self.dm[i][j] > d
    }

    fn fits(&self, set: &[usize], d: f64) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &i)| set[k + 1..].iter().all(|&j| !self.far(i, j, d)))
    }

    fn a_primes(&self, d: f64) -> Vec<usize> {
        (0..self.uniq.len())
            .filter(|&j| !self.far(self.a, j, d))
            .collect()
    }

    /// Labels 0, 1, 2 over the unique points.
    fn feasible(&self, d: f64) -> Option<Vec<usize>> {
        if d < 0.0 {
            return None;
        }
        let m = self.uniq.len();
        if m <= 3 {
            return Some((0..m).collect());
        }
        let cands = self.a_primes(d);
        crate::par::find_map_first(cands.len(), |k| {
            let labels = self.try_a_prime(cands[k], d)?;
            // every answer is re-verified
            let ok =
                (0..m).all(|i| (i + 1..m).all(|j| labels[i] != labels[j] || !self.far(i, j, d)));
            ok.then_some(labels)
        })
    }

    fn try_a_prime(&self, a_prime: usize, d: f64) -> Option<Vec<usize>> {
        let z = zones_in(&self.coords, self.a, a_prime, self.scale);
        if let Some(l) = self.zone_in_a(&z, &z.north, &z.south, d) {
            return Some(l);
        }
        if let Some(l) = self.zone_in_a(&z, &z.south, &z.north, d) {
            return Some(l);
        }
        let state = self.state(&z, d);
        self.distribute(&state, d)
    }

    /// `inside` is wholly in the cluster of `a`, which then takes every
    /// point of `other` compatible with it; the rest is 2-clustered.
    fn zone_in_a(
        &self,
        z: &Zones,
        inside: &[usize],
        other: &[usize],
        d: f64,
    ) -> Option<Vec<usize>> {
        let mut h: Vec<usize> = z.seed.iter().chain(inside).copied().collect();
        if !self.fits(&h, d) {
            return None;
        }
        let extra: Vec<usize> = other
            .iter()
            .copied()
            .filter(|&u| h.iter().all(|&x| !self.far(u, x, d)))
            .collect();
        h.extend(extra);
        let m = self.uniq.len();
        let mut in_a = vec![false; m];
        for &i in &h {
            in_a[i] = true;
        }
        let rest: Vec<usize> = (0..m).filter(|&i| !in_a[i]).collect();
        let pts: Vec<Point> = rest.iter().map(|&i| self.uniq[i]).collect();
        let sub: Vec<Vec<f64>> = rest
            .iter()
            .map(|&i| rest.iter().map(|&j| self.dm[i][j]).collect())
            .collect();
        let sub_labels = feasible_2cluster_labels(&pts, &sub, d)?;
        let mut labels = vec![0; m];
        for (k, &i) in rest.iter().enumerate() {
            labels[i] = 1 + sub_labels[k];
        }
        Some(labels)
    }

    fn state(&self, z: &Zones, d: f64) -> HrState {
        let (a, b) = (z.a, z.a_prime);
        let near_both = |u: usize| !self.far(u, a, d) && !self.far(u, b, d);
        let eta = |u: usize| self.coords[u].1;
        let east_far = |u: usize, above: bool| {
            z.east.iter().any(|&v| {
                self.far(u, v, d)
                    && if above {
                        eta(u) > eta(v)
                    } else {
                        eta(u) < eta(v)
                    }
            })
        };
        let mut b0: Vec<usize> = z.north.iter().copied().filter(|&u| !near_both(u)).collect();
        b0.extend(z.east.iter().copied().filter(|&u| east_far(u, true)));
        let mut c0: Vec<usize> = z.south.iter().copied().filter(|&u| !near_both(u)).collect();
        c0.extend(z.east.iter().copied().filter(|&u| east_far(u, false)));
        b0.sort_unstable();
        c0.sort_unstable();
        let ab_cand = z
            .north
            .iter()
            .copied()
            .filter(|u| !b0.contains(u))
            .collect();
        let ca_cand = z
            .south
            .iter()
            .copied()
            .filter(|u| !c0.contains(u))
            .collect();
        let bc_cand = z
            .east
            .iter()
            .copied()
            .filter(|u| !b0.contains(u) && !c0.contains(u))
            .collect();
        HrState {
            a0: z.seed.clone(),
            b0,
            c0,
            ab_cand,
            ca_cand,
            bc_cand,
            d,
        }
    }

    /// Resolves the candidates: each has two admissible clusters and every
    /// pair farther than `d` must be split, which is a 2-SAT instance.
    fn distribute(&self, s: &HrState, d: f64) -> Option<Vec<usize>> {
        if s.b0.iter().any(|u| s.c0.contains(u)) {
            return None;
        }
        let m = self.uniq.len();
        #[derive(Clone, Copy)]
        enum Slot {
            Fixed(usize),
            Choice(usize, [usize; 2]),
        }
        let mut slot = vec![Slot::Fixed(usize::MAX); m];
        for (set, c) in [(&s.a0, 0), (&s.b0, 1), (&s.c0, 2)] {
            for &u in set {
                slot[u] = Slot::Fixed(c);
            }
        }
        let mut nvars = 0;
        for (set, opts) in [
            (&s.ab_cand, [0, 1]),
            (&s.ca_cand, [2, 0]),
            (&s.bc_cand, [1, 2]),
        ] {
            for &u in set {
                slot[u] = Slot::Choice(nvars, opts);
                nvars += 1;
            }
        }
        let mut sat = TwoSat::new(nvars);
        for u in 0..m {
            for v in u + 1..m {
                if !self.far(u, v, d) {
                    continue;
                }
                match (slot[u], slot[v]) {
                    (Slot::Fixed(x), Slot::Fixed(y)) => {
                        if x == y {
                            return None;
                        }
                    }
                    (Slot::Fixed(x), Slot::Choice(var, o))
                    | (Slot::Choice(var, o), Slot::Fixed(x)) => {
                        if o[0] == x {
                            sat.set(var, false);
                        }
                        if o[1] == x {
                            sat.set(var, true);
                        }
                    }
                    (Slot::Choice(p, op), Slot::Choice(q, oq)) => {
                        for (bp, cp) in [(true, op[0]), (false, op[1])] {
                            for (bq, cq) in [(true, oq[0]), (false, oq[1])] {
                                if cp == cq {
                                    sat.not_both(p, bp, q, bq);
                                }
                            }
                        }
                    }
                }
            }
        }
        let x = sat.solve()?;
        Some(
            slot.iter()
                .map(|s| match *s {
                    Slot::Fixed(c) => c,
                    Slot::Choice(var, o) => {
                        if x[var] {
                            o[0]
                        } else {
                            o[1]
                        }
                    }
                })
                .collect(),
        )
    }

    /// Checks the zone-diameter lemma for every admissible `a'`.
    fn lemma_check(&self, d: f64, trace: &mut HrTrace) {
        let slack = 1e-9 * d.max(1.0);
        for a_prime in self.a_primes(d) {
            let z = zones_in(&self.coords, self.a, a_prime, self.scale);
            trace.triples += 1;
            let near = |u: &usize| !self.far(*u, z.a, d) && !self.far(*u, z.a_prime, d);
            for zone in [&z.north, &z.south] {
                let inside: Vec<usize> = zone.iter().copied().filter(near).collect();
                if !self.fits(&inside, d + slack) {
                    trace.violations += 1;
                }
            }
        }
    }

    fn partition(&self, plane: &NormedPlane, points: &[Point], labels: &[usize]) -> Partition {
        let full: Vec<usize> = self.map.iter().map(|&u| labels[u]).collect();
        Partition::from_labels(&full, 3)
            .measured(plane, points, Measure::Diameter)
            .canonical()
    }
}

/// A partition into three clusters of diameter at most `d`, if one exists.
pub fn hr_feasible_3cluster(
    plane: &NormedPlane,
    points: &[Point],
    d: f64,
) -> Result<Option<Partition>> {
    Ok(hr_feasible_3cluster_traced(plane, points, d, 0)?.0)
}

/// [`hr_feasible_3cluster`] with an explicit rotation seed, also reporting
/// the zone-diameter lemma check for every `a'` examined.
pub fn hr_feasible_3cluster_traced(
    plane: &NormedPlane,
    points: &[Point],
    d: f64,
    seed: u64,
) -> Result<(Option<Partition>, HrTrace)> {
    let solver = Solver::new(plane, points, seed)?;
    let mut trace = HrTrace {
        basis_angle: solver.basis.angle,
        ..HrTrace::default()
    };
    solver.lemma_check(d, &mut trace);
    let p = solver
        .feasible(d)
        .map(|labels| solver.partition(plane, points, &labels));
    Ok((p, trace))
}

/// Smallest `d` admitting three clusters of diameter at most `d`.
pub fn min_max_3cluster(plane: &NormedPlane, points: &[Point]) -> Result<(f64, Partition)> {
    let solver = Solver::new(plane, points, 0)?;
    let candidates = threshold_candidates(plane, &solver.uniq);
    let (d, labels) = search_threshold(&candidates, |d| solver.feasible(d))
        .expect("the diameter is always feasible");
    Ok((d, solver.partition(plane, points, &labels)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zone_example() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(2.0, -1.0),
            Point::new(5.0, 7.0),
            Point::new(1.0, 0.0),
        ];
        let z = hr_zones(&NormedPlane::euclidean(), &pts, pts[0], pts[1]).unwrap();
        assert_eq!(z.north, vec![2]);
        assert_eq!(z.south, vec![3]);
        assert_eq!(z.east, vec![4]);
        assert_eq!(z.seed, vec![0, 1, 5]);
    }

    #[test]
    fn three_pairs_and_singletons() {
        let e = NormedPlane::euclidean();
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(0.1, 0.05),
            Point::new(10.0, 0.3),
            Point::new(10.1, 0.2),
            Point::new(0.2, 10.0),
            Point::new(0.3, 10.1),
        ];
        let gap = (0..3)
            .map(|i| e.dist(pts[2 * i], pts[2 * i + 1]))
            .fold(0.0, f64::max);
        let p = hr_feasible_3cluster(&e, &pts, gap).unwrap().unwrap();
        assert_eq!(p.clusters, vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
        let (d, _) = min_max_3cluster(&e, &pts).unwrap();
        assert_eq!(d, gap);

        let tri = [
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 3f64.sqrt()),
        ];
        assert!(hr_feasible_3cluster(&e, &tri, 1.0).unwrap().is_some());
        let line = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(3.0, 0.0),
        ];
        assert_eq!(min_max_3cluster(&e, &line).unwrap().0, 0.0);
    }
}
