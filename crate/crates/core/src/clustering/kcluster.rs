use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use super::twocluster::{line_pairs, sides_of};
use super::{min_enclosing_ball, Measure, Objective, Partition};
use crate::error::{Error, Result};
use crate::geometry::{distance_matrix, OrientedLine, Side};
use crate::norm::{NormedPlane, Point};

/// Tuning for [`k_cluster_minimize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KClusterOptions {
    /// Points on a candidate line are split in every possible way up to
    /// this count; beyond it only prefix/suffix splits along the line.
    pub max_on_subsets: usize,
}

impl Default for KClusterOptions {
    fn default() -> Self {
        Self { max_on_subsets: 6 }
    }
}

/// Largest supported input.
pub const MAX_POINTS: usize = 128;

type Mask = u128;

/// Edge lists of the connected graphs on `k` vertices, one per isomorphism
/// class. Adjacent clusters get a separating line.
fn region_graphs(k: usize) -> Vec<Vec<(usize, usize)>> {
    match k {
        2 => vec![vec![(0, 1)]],
        3 => vec![vec![(0, 1), (1, 2)], vec![(0, 1), (0, 2), (1, 2)]],
        4 => vec![
            // path, star, cycle, paw, diamond, complete
            vec![(0, 1), (1, 2), (2, 3)],
            vec![(0, 1), (0, 2), (0, 3)],
            vec![(0, 1), (1, 2), (2, 3), (0, 3)],
            vec![(0, 1), (0, 2), (1, 2), (2, 3)],
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        ],
        _ => Vec::new(),
    }
}

/// Point sets cut off by candidate lines: for each line through two points,
/// each strict side together with each admissible subset of the points on
/// the line; plus the empty and the full set.
fn halfplane_masks(points: &[Point], opts: KClusterOptions) -> Vec<Mask> {
    let n = points.len();
    let full: Mask = if n == 128 { !0 } else { (1 << n) - 1 };
    let pairs = line_pairs(points);
    let per_line: Vec<Vec<Mask>> = crate::par::map(&pairs, |&(i, j)| {
        let line = OrientedLine::through(points[i], points[j]);
        let sides = sides_of(points, &line);
        let (mut left, mut right) = (0 as Mask, 0 as Mask);
        let mut on: Vec<usize> = Vec::new();
        for (p, s) in sides.iter().enumerate() {
            match s {
                Side::Left => left |= 1 << p,
                Side::Right => right |= 1 << p,
                Side::On => on.push(p),
            }
        }
        let subsets: Vec<Mask> = if on.len() <= opts.max_on_subsets {
            (0..1usize << on.len())
                .map(|bits| {
                    on.iter()
                        .enumerate()
                        .filter(|(b, _)| bits >> b & 1 == 1)
                        .fold(0, |m, (_, &p)| m | 1 << p)
                })
                .collect()
        } else {
            on.sort_by(|&a, &b| {
                let ta = (points[a] - line.anchor).dot(line.direction);
                let tb = (points[b] - line.anchor).dot(line.direction);
                ta.total_cmp(&tb)
            });
            let mut v = Vec::new();
            for t in 0..=on.len() {
                let prefix = on[..t].iter().fold(0 as Mask, |m, &p| m | 1 << p);
                let suffix = on[t..].iter().fold(0 as Mask, |m, &p| m | 1 << p);
                v.push(prefix);
                v.push(suffix);
            }
            v
        };
        subsets
            .into_iter()
            .flat_map(|t| [left | t, right | t])
            .collect()
    });
    let mut masks: Vec<Mask> = per_line.into_iter().flatten().collect();
    masks.push(0);
    masks.push(full);
    masks.sort_unstable();
    masks.dedup();
    masks
}

struct Search<'a> {
    full: Mask,
    masks: &'a [Mask],
    edges: &'a [(usize, usize)],
    k: usize,
    complete: bool,
    score: &'a Score<'a>,
}

type Score<'a> = dyn Fn(&[Mask]) -> (f64, Vec<usize>) + Sync + 'a;
type Best = Option<(f64, Vec<usize>)>;

fn better(a: &(f64, Vec<usize>), b: &Best) -> bool {
    match b {
        None => true,
        Some(b) => a.0 < b.0 || (a.0 == b.0 && a.1 < b.1),
    }
}

impl Search<'_> {
    fn covered(&self, alive: &[Mask]) -> bool {
        alive[..self.k].iter().fold(0, |m, a| m | a) == self.full
    }

    fn leaf(&self, alive: &[Mask], best: &mut Best, seen: &mut HashSet<Vec<Mask>>) {
        let regions = &alive[..self.k];
        if !self.complete {
            let total: u32 = regions.iter().map(|m| m.count_ones()).sum();
            if total != self.full.count_ones() {
                return;
            }
        }
        let mut key = regions.to_vec();
        key.sort_unstable();
        if !seen.insert(key) {
            return;
        }
        let cand = (self.score)(regions);
        if better(&cand, best) {
            *best = Some(cand);
        }
    }

    fn dfs(
        &self,
        depth: usize,
        alive: [Mask; 4],
        best: &mut Best,
        visited: &mut [HashSet<[Mask; 4]>],
        seen: &mut HashSet<Vec<Mask>>,
    ) {
        let (u, v) = self.edges[depth];
        if depth + 1 == self.edges.len() {
            // last line: only the points no other region covers constrain it
            let others = (0..self.k)
                .filter(|&w| w != u && w != v)
                .fold(0, |m, w| m | alive[w]);
            let rest = self.full & !others;
            if rest & !alive[u] & !alive[v] != 0 {
                return;
            }
            let must_in = rest & alive[u] & !alive[v];
            let must_out = rest & alive[v] & !alive[u];
            for &m in self.masks {
                if m & must_in != must_in || m & must_out != 0 {
                    continue;
                }
                let mut next = alive;
                next[u] &= m;
                next[v] &= !m & self.full;
                self.leaf(&next, best, seen);
            }
            return;
        }
        for &m in self.masks {
            let mut next = alive;
            next[u] &= m;
            next[v] &= !m & self.full;
            if !self.covered(&next) || !visited[depth].insert(next) {
                continue;
            }
            self.dfs(depth + 1, next, best, visited, seen);
        }
    }

    /// Parallel over the first line's choices; deterministic reduction.
    fn run(&self) -> Best {
        let first = self.edges[0];
        let init = [self.full; 4];
        let results: Vec<Best> = crate::par::map(self.masks, |&m| {
            let mut alive = init;
            alive[first.0] &= m;
            alive[first.1] &= !m & self.full;
            let mut best = None;
            if self.edges.len() == 1 {
                self.leaf(&alive, &mut best, &mut HashSet::new());
                return best;
            }
            if !self.covered(&alive) {
                return None;
            }
            let mut visited = vec![HashSet::new(); self.edges.len()];
            self.dfs(1, alive, &mut best, &mut visited, &mut HashSet::new());
            best
        });
        results.into_iter().fold(None, |acc, r| match r {
            Some(r) if better(&r, &acc) => Some(r),
            _ => acc,
        })
    }
}

/// Canonical labels: clusters numbered by their smallest member.
fn canonical_labels(regions: &[Mask], n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..regions.len()).collect();
    order.sort_by_key(|&r| {
        if regions[r] == 0 {
            u32::MAX
        } else {
            regions[r].trailing_zeros()
        }
    });
    let mut labels = vec![0; n];
    for (l, &r) in order.iter().enumerate() {
        for (i, label) in labels.iter_mut().enumerate() {
            if regions[r] >> i & 1 == 1 {
                *label = l;
            }
        }
    }
    labels
}

/// Minimises a monotone objective over k-clusterings whose clusters are
/// cut out by separating lines, one per edge of a connected region graph.
///
/// Optimal partitions with pairwise linearly separable clusters always
/// exist for these objectives, so the search over lines through two input
/// points returns the global optimum.
pub fn k_cluster_minimize(
    plane: &NormedPlane,
    points: &[Point],
    k: usize,
    objective: Objective,
) -> Result<(f64, Partition)> {
    k_cluster_minimize_with(plane, points, k, objective, KClusterOptions::default())
}

pub fn k_cluster_minimize_with(
    plane: &NormedPlane,
    points: &[Point],
    k: usize,
    objective: Objective,
    opts: KClusterOptions,
) -> Result<(f64, Partition)> {
    if !(2..=4).contains(&k) {
        return Err(Error::InvalidK(k));
    }
    let n = points.len();
    if n < k {
        return Err(Error::TooFewPoints { needed: k, got: n });
    }
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints {
            got: n,
            max: MAX_POINTS,
        });
    }
    let full: Mask = if n == 128 { !0 } else { (1 << n) - 1 };
    let masks = halfplane_masks(points, opts);
    let dm = distance_matrix(plane, points);
    let cache: Mutex<HashMap<Mask, f64>> = Mutex::new(HashMap::new());
    let measure = |m: Mask| -> f64 {
        if m.count_ones() <= 1 {
            return 0.0;
        }
        if let Some(&v) = cache.lock().expect("cache poisoned").get(&m) {
            return v;
        }
        let idx: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
        let v = match objective.measure {
            Measure::Diameter => {
                let mut d = 0.0_f64;
                for (a, &i) in idx.iter().enumerate() {
                    for &j in &idx[a + 1..] {
                        d = d.max(dm[i][j]);
                    }
                }
                d
            }
            Measure::Radius => {
                let pts: Vec<Point> = idx.iter().map(|&i| points[i]).collect();
                min_enclosing_ball(plane, &pts)
                    .map(|b| b.radius)
                    .unwrap_or(0.0)
            }
        };
        cache.lock().expect("cache poisoned").insert(m, v);
        v
    };
    let score = |regions: &[Mask]| -> (f64, Vec<usize>) {
        let labels = canonical_labels(regions, n);
        let mut by_label = vec![0 as Mask; k];
        for (i, &l) in labels.iter().enumerate() {
            by_label[l] |= 1 << i;
        }
        let vals: Vec<f64> = by_label.iter().map(|&m| measure(m)).collect();
        (objective.combiner.combine(&vals), labels)
    };
    let mut best: Best = None;
    for edges in region_graphs(k) {
        let complete = edges.len() == k * (k - 1) / 2;
        let search = Search {
            full,
            masks: &masks,
            edges: &edges,
            k,
            complete,
            score: &score,
        };
        if let Some(r) = search.run() {
            if better(&r, &best) {
                best = Some(r);
            }
        }
    }
    let (value, labels) = best.expect("the complete region graph always yields a partition");
    let partition = Partition::from_labels(&labels, k).measured(plane, points, objective.measure);
    Ok((value, partition))
}
