//! Min-max and monotone-objective clustering: 2-clustering, constrained
//! 2-clustering, k-clustering over separable partitions, minimal enclosing
//! balls and the three-zone 3-clustering feasibility test.

mod hr;
mod kcluster;
mod meb;
mod twocluster;
mod twosat;

use serde::{Deserialize, Serialize};

use crate::geometry::diameter_value;
use crate::norm::{NormedPlane, Point};

pub use hr::{
    hr_feasible_3cluster, hr_feasible_3cluster_traced, hr_zones, min_max_3cluster, HrBasis,
    HrState, HrTrace, Zones,
};
pub use kcluster::{k_cluster_minimize, k_cluster_minimize_with, KClusterOptions, MAX_POINTS};
pub use meb::{min_enclosing_ball, EnclosingBall};
pub use twocluster::{avis_min_max_2cluster, constrained_2cluster, feasible_2cluster};
pub use twosat::TwoSat;

/// Assignment of point indices to clusters, with one measure per cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub clusters: Vec<Vec<usize>>,
    pub measures: Vec<f64>,
}

impl Partition {
    /// Builds clusters from a label per point; `k` clusters, possibly empty.
    pub fn from_labels(labels: &[usize], k: usize) -> Self {
        let mut clusters = vec![Vec::new(); k];
        for (i, &l) in labels.iter().enumerate() {
            clusters[l].push(i);
        }
        Self {
            measures: vec![0.0; k],
            clusters,
        }
    }

    pub fn from_clusters(clusters: Vec<Vec<usize>>) -> Self {
        let mut clusters = clusters;
        for c in &mut clusters {
            c.sort_unstable();
        }
        Self {
            measures: vec![0.0; clusters.len()],
            clusters,
        }
    }

    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    /// Label of each of `n` points; `usize::MAX` for unassigned points.
    pub fn labels(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (l, c) in self.clusters.iter().enumerate() {
            for &i in c {
                out[i] = l;
            }
        }
        out
    }

    /// Every index in `0..n` appears in exactly one cluster.
    pub fn is_partition_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for c in &self.clusters {
            for &i in c {
                if i >= n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn cluster_points(&self, points: &[Point], cluster: usize) -> Vec<Point> {
        self.clusters[cluster].iter().map(|&i| points[i]).collect()
    }

    /// Recomputes `measures` with the given measure.
    pub fn measured(mut self, plane: &NormedPlane, points: &[Point], measure: Measure) -> Self {
        self.measures = (0..self.clusters.len())
            .map(|c| measure.of(plane, &self.cluster_points(points, c)))
            .collect();
        self
    }

    /// Reorders clusters by smallest member, empty clusters last.
    pub fn canonical(mut self) -> Self {
        let mut order: Vec<usize> = (0..self.clusters.len()).collect();
        order.sort_by_key(|&c| self.clusters[c].first().copied().unwrap_or(usize::MAX));
        self.clusters = order
            .iter()
            .map(|&c| std::mem::take(&mut self.clusters[c]))
            .collect();
        self.measures = order.iter().map(|&c| self.measures[c]).collect();
        self
    }

    /// Largest cluster measure.
    pub fn max_measure(&self) -> f64 {
        self.measures.iter().cloned().fold(0.0, f64::max)
    }
}

/// How clusters are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Diameter,
    Radius,
}

impl Measure {
    /// Measure of a point set; zero when empty.
    pub fn of(self, plane: &NormedPlane, points: &[Point]) -> f64 {
        if points.is_empty() {
            return 0.0;
        }
        match self {
            Measure::Diameter => diameter_value(plane, points),
            Measure::Radius => min_enclosing_ball(plane, points)
                .map(|b| b.radius)
                .unwrap_or(0.0),
        }
    }
}

/// How per-cluster measures are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combiner {
    Max,
    Sum,
    SumSquares,
}

impl Combiner {
    pub fn combine(self, values: &[f64]) -> f64 {
        match self {
            Combiner::Max => values.iter().cloned().fold(0.0, f64::max),
            Combiner::Sum => values.iter().sum(),
            Combiner::SumSquares => values.iter().map(|v| v * v).sum(),
        }
    }
}

/// A monotone objective over cluster measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Objective {
    pub combiner: Combiner,
    pub measure: Measure,
}

impl Objective {
    pub const MAX_DIAMETER: Objective = Objective {
        combiner: Combiner::Max,
        measure: Measure::Diameter,
    };

    pub const fn new(combiner: Combiner, measure: Measure) -> Self {
        Self { combiner, measure }
    }

    /// Objective value of a partition, recomputing every measure.
    pub fn evaluate(&self, plane: &NormedPlane, points: &[Point], p: &Partition) -> f64 {
        let vals: Vec<f64> = (0..p.k())
            .map(|c| self.measure.of(plane, &p.cluster_points(points, c)))
            .collect();
        self.combiner.combine(&vals)
    }
}

/// Ascending candidate thresholds: zero followed by the distinct pairwise
/// distances.
pub(crate) fn threshold_candidates(plane: &NormedPlane, points: &[Point]) -> Vec<f64> {
    let mut vals = vec![0.0];
    if points.len() >= 2 {
        if let Ok(d) = crate::geometry::sorted_pairwise_distances(plane, points) {
            vals.extend(d.into_iter().map(|e| e.0));
        }
    }
    vals.dedup();
    vals
}

/// Smallest candidate accepted by a monotone `feasible`, with its witness.
/// The last candidate must be feasible.
pub(crate) fn search_threshold<T>(
    candidates: &[f64],
    mut feasible: impl FnMut(f64) -> Option<T>,
) -> Option<(f64, T)> {
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    let mut best = feasible(candidates[hi]).map(|w| (candidates[hi], w))?;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match feasible(candidates[mid]) {
            Some(w) => {
                best = (candidates[mid], w);
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    Some(best)
}
