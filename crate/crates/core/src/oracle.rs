//! Brute-force references. Nothing here calls the algorithms it checks;
//! the only shared code is the norm's gauge.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::clustering::{Combiner, Measure, Objective, Partition};
use crate::error::{Error, Result};
use crate::norm::{NormDescriptor, NormedPlane, Point};

/// Limits checked before (and during) enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub max_points: usize,
    pub max_partitions: u64,
    pub time_cap: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_points: 16,
            max_partitions: 50_000_000,
            time_cap: Duration::from_secs(120),
        }
    }
}

impl OracleBudget {
    fn check_points(&self, n: usize) -> Result<()> {
        if n > self.max_points {
            return Err(Error::BudgetExceeded(format!(
                "{n} points exceeds the budget of {}",
                self.max_points
            )));
        }
        Ok(())
    }
}

/// Maximum pairwise distance by checking every pair.
pub fn diameter_all_pairs(plane: &NormedPlane, points: &[Point]) -> f64 {
    let mut d = 0.0_f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.max(plane.dist(points[i], points[j]));
        }
    }
    d
}

/// Golden-section minimum of a unimodal function on `[lo, hi]`.
fn golden_min(mut lo: f64, mut hi: f64, iters: usize, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimal enclosing radius by nested golden-section search over the
/// centre. The enclosing radius is convex in the centre, so both levels are
/// unimodal.
pub fn radius_golden(plane: &NormedPlane, points: &[Point]) -> f64 {
    if points.len() <= 1 {
        return 0.0;
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let w = (x1 - x0).max(y1 - y0).max(1e-12);
    let f = |c: Point| points.iter().fold(0.0_f64, |m, &p| m.max(plane.dist(c, p)));
    let inner = |x: f64| golden_min(y0 - w, y1 + w, 90, |y| f(Point::new(x, y))).1;
    golden_min(x0 - w, x1 + w, 90, inner).1
}

fn measure_of(plane: &NormedPlane, points: &[Point], m: Measure) -> f64 {
    match m {
        Measure::Diameter => diameter_all_pairs(plane, points),
        Measure::Radius => radius_golden(plane, points),
    }
}

fn combine(c: Combiner, vals: &[f64]) -> f64 {
    match c {
        Combiner::Max => vals.iter().cloned().fold(0.0, f64::max),
        Combiner::Sum => vals.iter().sum(),
        Combiner::SumSquares => vals.iter().map(|v| v * v).sum(),
    }
}

/// Exact optimum over every assignment of the points to `k` clusters
/// (empty clusters allowed), enumerated up to relabelling.
pub fn brute_force_k_partition(
    plane: &NormedPlane,
    points: &[Point],
    k: usize,
    objective: Objective,
    budget: &OracleBudget,
) -> Result<(f64, Partition)> {
    let n = points.len();
    if k == 0 {
        return Err(Error::InvalidK(k));
    }
    budget.check_points(n)?;
    let estimate = (k as f64).powi(n as i32) / (1..=k).map(|i| i as f64).product::<f64>();
    if estimate > budget.max_partitions as f64 {
        return Err(Error::BudgetExceeded(format!(
            "about {estimate:.0} labelings exceeds {}",
            budget.max_partitions
        )));
    }
    let start = Instant::now();
    let mut cache: HashMap<u64, f64> = HashMap::new();
    let mut labels = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut count: u64 = 0;
    // restricted growth strings: label[i] <= 1 + max(label[..i])
    fn rec(
        i: usize,
        used: usize,
        k: usize,
        labels: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if i == labels.len() {
            return visit(labels);
        }
        for l in 0..(used + 1).min(k) {
            labels[i] = l;
            rec(i + 1, used.max(l + 1), k, labels, visit)?;
        }
        Ok(())
    }
    let mut visit = |lab: &[usize]| -> Result<()> {
        count += 1;
        if count.is_multiple_of(4096) && start.elapsed() > budget.time_cap {
            return Err(Error::BudgetExceeded("time cap reached".into()));
        }
        let mut vals = Vec::with_capacity(k);
        for c in 0..k {
            let mask = lab
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == c)
                .fold(0u64, |m, (i, _)| m | 1 << i);
            let v = match cache.get(&mask) {
                Some(&v) => v,
                None => {
                    let pts: Vec<Point> = (0..n)
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| points[i])
                        .collect();
                    let v = measure_of(plane, &pts, objective.measure);
                    cache.insert(mask, v);
                    v
                }
            };
            vals.push(v);
        }
        let v = combine(objective.combiner, &vals);
        if best.as_ref().is_none_or(|b| v < b.0) {
            best = Some((v, lab.to_vec()));
        }
        Ok(())
    };
    if n == 0 {
        visit(&[])?;
    } else {
        rec(0, 0, k, &mut labels, &mut visit)?;
    }
    let (v, lab) = best.expect("at least one labeling");
    let mut p = Partition::from_labels(&lab, k);
    p.measures = (0..k)
        .map(|c| measure_of(plane, &p.cluster_points(points, c), objective.measure))
        .collect();
    Ok((v, p))
}

fn orient(a: Point, b: Point, p: Point) -> i8 {
    let v = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    let scale = [a, b, p]
        .iter()
        .fold(1.0_f64, |m, q| m.max(q.x.abs()).max(q.y.abs()));
    let band = 1e-9 * scale * ((b.x - a.x).hypot(b.y - a.y));
    if v > band {
        1
    } else if v < -band {
        -1
    } else {
        0
    }
}

/// Separable 2-clustering `(X, Y)` with `diam(X) <= d1`, `diam(Y) <= d2`,
/// both nonempty, found by trying every line through two points, every
/// split of the points on it, and both roles.
pub fn exhaustive_separable_2cluster(
    plane: &NormedPlane,
    points: &[Point],
    d1: f64,
    d2: f64,
    budget: &OracleBudget,
) -> Result<Option<Partition>> {
    let n = points.len();
    budget.check_points(n)?;
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n == 1 {
        return Ok((0.0 <= d1).then(|| Partition::from_clusters(vec![vec![0], vec![]])));
    }
    let diam_ok = |set: &[usize], d: f64| {
        set.iter().all(|&i| {
            set.iter()
                .all(|&j| i >= j || plane.dist(points[i], points[j]) <= d)
        })
    };
    for i in 0..n {
        for j in i + 1..n {
            if points[i] == points[j] {
                continue;
            }
            let (mut left, mut right, mut on) = (Vec::new(), Vec::new(), Vec::new());
            for u in 0..n {
                match orient(points[i], points[j], points[u]) {
                    1 => left.push(u),
                    -1 => right.push(u),
                    _ => on.push(u),
                }
            }
            let splits: Vec<Vec<bool>> = if on.len() <= 10 {
                (0..1usize << on.len())
                    .map(|bits| (0..on.len()).map(|b| bits >> b & 1 == 1).collect())
                    .collect()
            } else {
                let dir = points[j] - points[i];
                on.sort_by(|&a, &b| {
                    (points[a] - points[i])
                        .dot(dir)
                        .total_cmp(&(points[b] - points[i]).dot(dir))
                });
                (0..=on.len())
                    .flat_map(|t| {
                        let pre: Vec<bool> = (0..on.len()).map(|b| b < t).collect();
                        let suf: Vec<bool> = pre.iter().map(|x| !x).collect();
                        [pre, suf]
                    })
                    .collect()
            };
            for split in splits {
                let mut x = left.clone();
                let mut y = right.clone();
                for (b, &u) in on.iter().enumerate() {
                    if split[b] {
                        x.push(u);
                    } else {
                        y.push(u);
                    }
                }
                if x.is_empty() || y.is_empty() {
                    continue;
                }
                for (big, small) in [(&x, &y), (&y, &x)] {
                    if diam_ok(big, d1) && diam_ok(small, d2) {
                        let mut p = Partition::from_clusters(vec![big.clone(), small.clone()]);
                        p.measures = p
                            .clusters
                            .iter()
                            .map(|c| {
                                diameter_all_pairs(
                                    plane,
                                    &c.iter().map(|&u| points[u]).collect::<Vec<_>>(),
                                )
                            })
                            .collect();
                        return Ok(Some(p));
                    }
                }
            }
        }
    }
    Ok(None)
}

// ---- ball hull membership through the centre set ----

/// Convex polygon clipped by the half-plane left of `a -> b`.
fn clip(poly: &[Point], a: Point, b: Point) -> Vec<Point> {
    let side = |p: Point| (b - a).cross(p - a);
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            out.push(p + (q - p) * (sp / (sp - sq)));
        }
    }
    out
}

fn intersect_all(polys: &[Vec<Point>]) -> Vec<Point> {
    let mut acc = polys[0].clone();
    for poly in &polys[1..] {
        for i in 0..poly.len() {
            if acc.is_empty() {
                return acc;
            }
            acc = clip(&acc, poly[i], poly[(i + 1) % poly.len()]);
        }
    }
    acc
}

/// Unit-sphere points in `m` equally spaced directions (ccw).
fn sphere_samples(plane: &NormedPlane, m: usize) -> Vec<Point> {
    (0..m)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / m as f64;
            let u = Point::new(t.cos(), t.sin());
            u / plane.gauge(u)
        })
        .collect()
}

/// Polygon containing the convex curve through `p` (ccw samples): each
/// boundary arc between consecutive samples lies in the triangle cut off by
/// the chord and the extensions of the neighbouring chords.
fn circumscribed(p: &[Point]) -> Vec<Point> {
    let m = p.len();
    (0..m)
        .map(|i| {
            let (a0, a1) = (p[(i + m - 1) % m], p[i]);
            let (b0, b1) = (p[(i + 1) % m], p[(i + 2) % m]);
            let (r, s) = (a1 - a0, b1 - b0);
            let den = r.cross(s);
            if den.abs() < 1e-300 {
                a1.midpoint(b0)
            } else {
                a0 + r * ((b0 - a0).cross(s) / den)
            }
        })
        .collect()
}

/// Lazily refined membership oracle for `bh(S, d)`.
pub struct BhOracle<'a> {
    plane: &'a NormedPlane,
    points: Vec<Point>,
    d: f64,
    exact: Option<Vec<Point>>,
    levels: Vec<(Vec<Point>, Vec<Point>)>,
    max_level: usize,
}

impl<'a> BhOracle<'a> {
    pub fn new(plane: &'a NormedPlane, points: &[Point], d: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut o = Self {
            plane,
            points: points.to_vec(),
            d,
            exact: None,
            levels: Vec::new(),
            max_level: 5,
        };
        if let NormDescriptor::Polygon { vertices } = plane.descriptor() {
            let balls: Vec<Vec<Point>> = o
                .points
                .iter()
                .map(|&s| vertices.iter().map(|&v| s + v * d).collect())
                .collect();
            let c = intersect_all(&balls);
            if c.is_empty() {
                return Err(Error::NoBallContainsS);
            }
            o.exact = Some(c);
        } else {
            o.level(0)?;
        }
        Ok(o)
    }

    /// Inner and outer approximations of the centre set with `64 * 4^l`
    /// samples per sphere.
    fn level(&mut self, l: usize) -> Result<&(Vec<Point>, Vec<Point>)> {
        while self.levels.len() <= l {
            let m = 64usize << (2 * self.levels.len());
            let unit = sphere_samples(self.plane, m);
            let outer_unit = circumscribed(&unit);
            let place = |shape: &[Point], s: Point| -> Vec<Point> {
                shape.iter().map(|&v| s + v * self.d).collect()
            };
            let inner: Vec<Vec<Point>> = self.points.iter().map(|&s| place(&unit, s)).collect();
            let outer: Vec<Vec<Point>> =
                self.points.iter().map(|&s| place(&outer_unit, s)).collect();
            let cin = intersect_all(&inner);
            let cout = intersect_all(&outer);
            if cout.is_empty() {
                return Err(Error::NoBallContainsS);
            }
            self.levels.push((cin, cout));
        }
        Ok(&self.levels[l])
    }

    fn farthest(&self, x: Point, c: &[Point]) -> f64 {
        c.iter().fold(0.0_f64, |m, &v| m.max(self.plane.dist(x, v)))
    }

    /// Whether `x` lies in every radius-`d` ball containing the points, up
    /// to a relative band of `1e-8`.
    pub fn contains(&mut self, x: Point) -> Result<bool> {
        let band = 1e-8 * self.d.max(1.0);
        if let Some(c) = &self.exact {
            return Ok(self.farthest(x, c) <= self.d + band);
        }
        for l in 0..=self.max_level {
            let (cin, cout) = self.level(l)?.clone();
            let hi = self.farthest(x, &cout);
            if hi <= self.d + band {
                return Ok(true);
            }
            if !cin.is_empty() && self.farthest(x, &cin) > self.d + band {
                return Ok(false);
            }
        }
        Err(Error::Undecidable)
    }
}

/// One-shot form of [`BhOracle::contains`].
pub fn bh_membership_oracle(
    plane: &NormedPlane,
    points: &[Point],
    d: f64,
    x: Point,
) -> Result<bool> {
    BhOracle::new(plane, points, d)?.contains(x)
}
