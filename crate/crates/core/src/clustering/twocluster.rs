use super::twosat::TwoSat;
use super::{search_threshold, threshold_candidates, Measure, Partition};
use crate::error::{Error, Result};
use crate::geometry::{distance_matrix, OrientedLine, Side};
use crate::norm::{NormedPlane, Point};

/// Index pairs `(i, j)`, `i < j`, of distinct points; each defines a line.
pub(crate) fn line_pairs(points: &[Point]) -> Vec<(usize, usize)> {
    let n = points.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            if points[i] != points[j] {
                out.push((i, j));
            }
        }
    }
    out
}

pub(crate) fn sides_of(points: &[Point], line: &OrientedLine) -> Vec<Side> {
    points.iter().map(|&p| line.side(p)).collect()
}

/// Proper 2-coloring of the graph of pairs farther apart than `d`.
struct LongGraph {
    color: Vec<u8>,
    /// Vertices of components with at least one edge, component by
    /// component, largest component first.
    order: Vec<usize>,
    /// Start of each component in `order`.
    starts: Vec<usize>,
}

/// `None` when the long-edge graph has an odd cycle.
fn long_graph(dm: &[Vec<f64>], d: f64) -> Option<LongGraph> {
    let n = dm.len();
    let mut color = vec![u8::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if color[s] != u8::MAX || !(0..n).any(|j| dm[s][j] > d) {
            continue;
        }
        color[s] = 0;
        let (mut comp, mut stack) = (vec![s], vec![s]);
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if dm[u][v] <= d {
                    continue;
                }
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    comp.push(v);
                    stack.push(v);
                } else if color[v] == color[u] {
                    return None;
                }
            }
        }
        // far-reaching vertices first: they reject most lines
        let reach = |v: usize| dm[v].iter().fold(0.0_f64, |m, &x| m.max(x));
        comp.sort_by(|&x, &y| reach(y).total_cmp(&reach(x)).then(x.cmp(&y)));
        comps.push(comp);
    }
    comps.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut order = Vec::with_capacity(n);
    let mut starts = Vec::with_capacity(comps.len());
    for c in comps {
        starts.push(order.len());
        order.extend(c);
    }
    Some(LongGraph { color, order, starts })
}

impl LongGraph {
    /// Labels (0 = left, 1 = right) for `line` when every component's points
    /// strictly off the line follow one orientation of its coloring; points
    /// on the line then take their component's labels, so no long edge stays
    /// inside a label.
    fn labels(&self, sides: impl Fn(usize) -> Side, n: usize) -> Option<Vec<usize>> {
        let comps = || {
            self.starts.iter().enumerate().map(|(c, &start)| {
                let end = self.starts.get(c + 1).copied().unwrap_or(self.order.len());
                &self.order[start..end]
            })
        };
        // orientation of one component, `Some(None)` when all of it is on the line
        let orient = |comp: &[usize]| -> Option<Option<u8>> {
            let mut seen = None;
            for &v in comp {
                let right = match sides(v) {
                    Side::On => continue,
                    Side::Right => 1,
                    Side::Left => 0,
                };
                let want = right ^ self.color[v];
                match seen {
                    None => seen = Some(want),
                    Some(w) if w != want => return None,
                    Some(_) => {}
                }
            }
            Some(seen)
        };
        if !comps().all(|comp| orient(comp).is_some()) {
            return None;
        }
        let mut label: Vec<usize> = (0..n).map(|v| usize::from(sides(v) == Side::Right)).collect();
        for comp in comps() {
            let flip = orient(comp).flatten().unwrap_or(0);
            for &v in comp {
                label[v] = usize::from(self.color[v] ^ flip);
            }
        }
        Some(label)
    }
}

/// Labels of a 2-clustering with both diameters `<= d`, from the distance
/// matrix: the first line through two points that stabs every segment
/// longer than `d`.
pub(crate) fn feasible_2cluster_labels(
    points: &[Point],
    dm: &[Vec<f64>],
    d: f64,
) -> Option<Vec<usize>> {
    let n = points.len();
    let graph = long_graph(dm, d)?;
    if graph.order.is_empty() {
        return Some(vec![0; n]);
    }
    let pairs = line_pairs(points);
    crate::par::find_map_first(pairs.len(), |k| {
        let (i, j) = pairs[k];
        let line = OrientedLine::through(points[i], points[j]);
        graph.labels(|v| line.side(points[v]), n)
    })
}

/// A 2-clustering with both diameters at most `d`, found through a line
/// that stabs every segment longer than `d`; `None` when none exists.
pub fn feasible_2cluster(plane: &NormedPlane, points: &[Point], d: f64) -> Option<Partition> {
    let dm = distance_matrix(plane, points);
    feasible_2cluster_labels(points, &dm, d).map(|labels| {
        Partition::from_labels(&labels, 2)
            .measured(plane, points, Measure::Diameter)
            .canonical()
    })
}

/// Minimum over 2-clusterings of the larger diameter, by binary search over
/// the sorted pairwise distances.
pub fn avis_min_max_2cluster(plane: &NormedPlane, points: &[Point]) -> Result<(f64, Partition)> {
    let n = points.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let dm = distance_matrix(plane, points);
    let candidates = threshold_candidates(plane, points);
    let (d, labels) = search_threshold(&candidates, |d| feasible_2cluster_labels(points, &dm, d))
        .expect("the largest distance is always feasible");
    let p = Partition::from_labels(&labels, 2)
        .measured(plane, points, Measure::Diameter)
        .canonical();
    Ok((d, p))
}

/// A 2-clustering `(X, Y)` with `diam(X) <= d1` and `diam(Y) <= d2`, both
/// nonempty when there are at least two points. Clusters are returned in
/// that order.
pub fn constrained_2cluster(
    plane: &NormedPlane,
    points: &[Point],
    d1: f64,
    d2: f64,
) -> Result<Option<Partition>> {
    if !(d2 <= d1) || d2 < 0.0 {
        return Err(Error::BadBounds { d1, d2 });
    }
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let finish = |big: Vec<usize>, small: Vec<usize>| {
        Partition::from_clusters(vec![big, small]).measured(plane, points, Measure::Diameter)
    };
    if n == 1 {
        return Ok(Some(finish(vec![0], vec![])));
    }
    let dm = distance_matrix(plane, points);

    // a stabbing line of the d1-long edges, if one side also fits d2
    if let Some(labels) = feasible_2cluster_labels(points, &dm, d1) {
        let sides: [Vec<usize>; 2] = [0, 1].map(|l| (0..n).filter(|&i| labels[i] == l).collect());
        if sides.iter().all(|s| !s.is_empty()) {
            let fits = |s: &[usize]| s.iter().all(|&i| s.iter().all(|&j| dm[i][j] <= d2));
            if fits(&sides[1]) {
                return Ok(Some(finish(sides[0].clone(), sides[1].clone())));
            }
            if fits(&sides[0]) {
                return Ok(Some(finish(sides[1].clone(), sides[0].clone())));
            }
        }
    }

    // every line through two points, both roles, points on it solved exactly
    let pairs = line_pairs(points);
    let found = crate::par::find_map_first(2 * pairs.len(), |k| {
        let (i, j) = pairs[k / 2];
        let big_side = if k % 2 == 0 { Side::Left } else { Side::Right };
        let line = OrientedLine::through(points[i], points[j]);
        let sides = sides_of(points, &line);
        assign_with_line(&sides, big_side, &dm, d1, d2)
    });
    Ok(found.map(|labels| {
        let big = (0..n).filter(|&i| labels[i]).collect();
        let small = (0..n).filter(|&i| !labels[i]).collect();
        finish(big, small)
    }))
}

/// `true` = big cluster. Strict sides are fixed; the points on the line are
/// assigned by 2-SAT under the two diameter bounds.
fn assign_with_line(
    sides: &[Side],
    big_side: Side,
    dm: &[Vec<f64>],
    d1: f64,
    d2: f64,
) -> Option<Vec<bool>> {
    let n = sides.len();
    let fixed: Vec<Option<bool>> = sides
        .iter()
        .map(|&s| (s != Side::On).then_some(s == big_side))
        .collect();
    let limit = |b: bool| if b { d1 } else { d2 };
    for i in 0..n {
        for j in i + 1..n {
            if let (Some(a), Some(b)) = (fixed[i], fixed[j]) {
                if a == b && dm[i][j] > limit(a) {
                    return None;
                }
            }
        }
    }
    let on: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
    let mut sat = TwoSat::new(on.len());
    for (vi, &u) in on.iter().enumerate() {
        for x in 0..n {
            if let Some(b) = fixed[x] {
                if dm[u][x] > limit(b) {
                    sat.set(vi, !b);
                }
            }
        }
        for (vj, &v) in on.iter().enumerate().skip(vi + 1) {
            for b in [true, false] {
                if dm[u][v] > limit(b) {
                    sat.not_both(vi, b, vj, b);
                }
            }
        }
    }
    let has = |b: bool| fixed.contains(&Some(b));
    // both clusters must be nonempty; seed an empty one with each on-point
    let seeds = |b: bool| -> Vec<Option<usize>> {
        if has(b) {
            vec![None]
        } else {
            (0..on.len()).map(Some).collect()
        }
    };
    for sb in seeds(true) {
        for ss in seeds(false) {
            if sb.is_some() && sb == ss {
                continue;
            }
            let mut s = sat.clone();
            if let Some(v) = sb {
                s.set(v, true);
            }
            if let Some(v) = ss {
                s.set(v, false);
            }
            if let Some(x) = s.solve() {
                let mut out: Vec<bool> = fixed.iter().map(|f| f.unwrap_or(false)).collect();
                for (vi, &u) in on.iter().enumerate() {
                    out[u] = x[vi];
                }
                return Some(out);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point> {
        vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ]
    }

    #[test]
    fn square_feasibility() {
        let e = NormedPlane::euclidean();
        let p = feasible_2cluster(&e, &square(), 1.0).unwrap();
        assert!(p.is_partition_of(4));
        assert!(p.max_measure() <= 1.0);
        assert_eq!(
            p.clusters.iter().map(Vec::len).collect::<Vec<_>>(),
            vec![2, 2]
        );
        assert!(feasible_2cluster(&e, &square(), 0.9).is_none());
    }

    #[test]
    fn avis_examples() {
        let e = NormedPlane::euclidean();
        let (d, _) = avis_min_max_2cluster(&e, &square()).unwrap();
        assert_eq!(d, 1.0);
        let line = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(3.0, 0.0),
        ];
        let (d, p) = avis_min_max_2cluster(&e, &line).unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(p.clusters, vec![vec![0, 1], vec![2]]);
        let (d, _) = avis_min_max_2cluster(&e, &line[..2]).unwrap();
        assert_eq!(d, 0.0);
        assert!(matches!(
            avis_min_max_2cluster(&e, &line[..1]),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn constrained_examples() {
        let e = NormedPlane::euclidean();
        let p = constrained_2cluster(&e, &square(), 2f64.sqrt(), 0.0)
            .unwrap()
            .unwrap();
        assert_eq!(p.clusters[0].len(), 3);
        assert_eq!(p.clusters[1].len(), 1);
        assert!(constrained_2cluster(&e, &square(), 1.0, 0.9)
            .unwrap()
            .is_none());
        assert_eq!(
            constrained_2cluster(&e, &square(), 1.0, 2.0),
            Err(Error::BadBounds { d1: 1.0, d2: 2.0 })
        );
    }

    #[test]
    fn collinear_points_split_on_the_line() {
        let e = NormedPlane::euclidean();
        let pts: Vec<Point> = (0..6).map(|i| Point::new(i as f64, 0.0)).collect();
        let (d, p) = avis_min_max_2cluster(&e, &pts).unwrap();
        assert_eq!(d, 2.0);
        assert_eq!(p.clusters, vec![vec![0, 1, 2], vec![3, 4, 5]]);
    }
}
