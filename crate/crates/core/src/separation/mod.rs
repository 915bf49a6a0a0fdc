//! Re-splitting two clusters into linearly separable ones without
//! increasing either diameter.

mod arrangement;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, diameter_value, norm_perimeter, OrientedLine, Side};
use crate::norm::{magnitude, NormedPlane, Point};
use crate::par;

pub use arrangement::{
    boundary_crossings, decompose_pieces, find_bad_structure, BadPairRecord, Crossing,
    CrossingSequence, GroupDecomposition, Owner, Piece,
};

/// Which branch produced a [`SeparationResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationWitness {
    /// The hulls were already separable; nothing moved.
    DisjointHulls,
    /// No cross pair is longer than the larger diameter; everything joins
    /// the larger cluster.
    NoBadPairs,
    /// The line through the crossings bounding the chosen bad groups.
    GroupSplit,
    /// Search over lines through two input points.
    CandidateSearch,
}

/// Separable re-split of `A ∪ B`: `a_prime` lies in the closed left
/// half-plane of `line`, `b_prime` in the closed right one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationResult {
    pub a_prime: Vec<Point>,
    pub b_prime: Vec<Point>,
    pub line: OrientedLine,
    pub witness: SeparationWitness,
}

impl SeparationResult {
    fn swapped(self) -> Self {
        Self {
            a_prime: self.b_prime,
            b_prime: self.a_prime,
            line: self.line.reversed(),
            witness: self.witness,
        }
    }
}

/// Normed perimeter of the hull of `points` (0 when empty).
pub fn hull_perimeter(plane: &NormedPlane, points: &[Point]) -> f64 {
    convex_hull(points)
        .map(|h| norm_perimeter(plane, &h))
        .unwrap_or(0.0)
}

/// Hull perimeters before and after the re-split.
pub fn perimeter_check(
    plane: &NormedPlane,
    a: &[Point],
    b: &[Point],
    result: &SeparationResult,
) -> (f64, f64) {
    let before = hull_perimeter(plane, a) + hull_perimeter(plane, b);
    let after = hull_perimeter(plane, &result.a_prime) + hull_perimeter(plane, &result.b_prime);
    (before, after)
}

/// Splits `A ∪ B` into separable `A′, B′` with `diam(A′) ≤ diam(A)` and
/// `diam(B′) ≤ diam(B)`.
pub fn separate_clusters(
    plane: &NormedPlane,
    a: &[Point],
    b: &[Point],
) -> Result<SeparationResult> {
    if a.is_empty() {
        return Err(Error::EmptyCluster("A"));
    }
    if b.is_empty() {
        return Err(Error::EmptyCluster("B"));
    }
    let (diam_a, diam_b) = (diameter_value(plane, a), diameter_value(plane, b));
    if diam_b > diam_a {
        return separate_larger_first(plane, b, a, diam_b, diam_a).map(SeparationResult::swapped);
    }
    separate_larger_first(plane, a, b, diam_a, diam_b)
}

fn separate_larger_first(
    plane: &NormedPlane,
    a: &[Point],
    b: &[Point],
    diam_a: f64,
    diam_b: f64,
) -> Result<SeparationResult> {
    if let Some(line) = separating_line(a, b) {
        return Ok(SeparationResult {
            a_prime: a.to_vec(),
            b_prime: b.to_vec(),
            line,
            witness: SeparationWitness::DisjointHulls,
        });
    }
    let tol = 1e-11 * diam_a.max(1.0);
    let all: Vec<Point> = a.iter().chain(b).copied().collect();
    let cross_max = a
        .iter()
        .flat_map(|&p| b.iter().map(move |&q| (p, q)))
        .fold(0.0_f64, |m, (p, q)| m.max(plane.dist(p, q)));
    if cross_max <= diam_a + tol {
        return Ok(SeparationResult {
            line: tangent_line(&all),
            a_prime: all,
            b_prime: Vec::new(),
            witness: SeparationWitness::NoBadPairs,
        });
    }

    let before = hull_perimeter(plane, a) + hull_perimeter(plane, b);
    let overlap = interiors_overlap(a, b);
    let perimeter_of = |in_b: &[bool]| {
        let (ap, bp) = split(&all, in_b);
        let fits = diameter_value(plane, &ap) <= diam_a + tol
            && diameter_value(plane, &bp) <= diam_b + tol;
        fits.then(|| hull_perimeter(plane, &ap) + hull_perimeter(plane, &bp))
    };
    let mut chosen = None;
    // points on the line join A′ unless only the other closed side works
    'lines: for line in group_split_lines(plane, a, b, diam_a) {
        for on_to_b in [false, true] {
            let in_b: Vec<bool> = all
                .iter()
                .map(|&p| match line.side(p) {
                    Side::Right => true,
                    Side::On => on_to_b,
                    Side::Left => false,
                })
                .collect();
            if let Some(after) = perimeter_of(&in_b) {
                if after <= before + tol {
                    chosen = Some((line, in_b, after, SeparationWitness::GroupSplit));
                    break 'lines;
                }
            }
        }
    }
    let strict = before - STRICT_MARGIN;
    let needs_search = match &chosen {
        None => true,
        Some((.., after, _)) => overlap && *after >= strict,
    };
    if needs_search {
        let cap = if chosen.is_some() {
            strict
        } else {
            before + tol
        };
        if let Some((line, in_b)) = candidate_search(plane, &all, diam_a + tol, diam_b + tol, cap) {
            chosen = Some((line, in_b, 0.0, SeparationWitness::CandidateSearch));
        }
    }
    let (line, in_b, _, witness) = chosen.ok_or(Error::DegenerateArrangement)?;
    let (a_prime, b_prime) = split(&all, &in_b);
    Ok(SeparationResult {
        a_prime,
        b_prime,
        line,
        witness,
    })
}

/// Perimeter decrease sought when the hull interiors overlap.
const STRICT_MARGIN: f64 = 1e-9;

fn interiors_overlap(a: &[Point], b: &[Point]) -> bool {
    let (Ok(ha), Ok(hb)) = (convex_hull(a), convex_hull(b)) else {
        return false;
    };
    if ha.is_degenerate() || hb.is_degenerate() {
        return false;
    }
    let scale = magnitude(&ha.vertices).max(magnitude(&hb.vertices));
    ha.intersection(&hb).area2() > 1e-12 * scale * scale
}

fn split(points: &[Point], in_b: &[bool]) -> (Vec<Point>, Vec<Point>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (&p, &x) in points.iter().zip(in_b) {
        if x {
            b.push(p);
        } else {
            a.push(p);
        }
    }
    (a, b)
}

fn all_on_closed(points: &[Point], line: &OrientedLine, forbidden: Side) -> bool {
    points.iter().all(|&p| line.side(p) != forbidden)
}

/// A line with `a` on its closed left and `b` on its closed right side,
/// tried through hull edges and through hull vertex pairs.
fn separating_line(a: &[Point], b: &[Point]) -> Option<OrientedLine> {
    let ha = convex_hull(a).ok()?.vertices;
    let hb = convex_hull(b).ok()?.vertices;
    let mut lines = Vec::new();
    for h in [&ha, &hb] {
        for i in 0..h.len() {
            let q = h[(i + 1) % h.len()];
            if q != h[i] {
                lines.push(OrientedLine::through(h[i], q));
            }
        }
    }
    for &p in &ha {
        for &q in &hb {
            if p != q {
                lines.push(OrientedLine::through(p, q));
            }
        }
    }
    if lines.is_empty() {
        // every point coincides
        lines.push(OrientedLine::new(ha[0], Point::new(1.0, 0.0)));
    }
    lines.into_iter().find_map(|l| {
        [l, l.reversed()]
            .into_iter()
            .find(|l| all_on_closed(a, l, Side::Right) && all_on_closed(b, l, Side::Left))
    })
}

/// A supporting line with every point on its closed left side.
fn tangent_line(points: &[Point]) -> OrientedLine {
    let h = convex_hull(points).map(|h| h.vertices).unwrap_or_default();
    match h.len() {
        0 => OrientedLine::new(Point::ORIGIN, Point::new(1.0, 0.0)),
        1 => OrientedLine::new(h[0], Point::new(1.0, 0.0)),
        _ => OrientedLine::through(h[0], h[1]),
    }
}

/// Splitting lines from the bad-group rule, one per `A` group, oriented
/// with the cut-off `B` pieces on the right.
fn group_split_lines(
    plane: &NormedPlane,
    a: &[Point],
    b: &[Point],
    diam_a: f64,
) -> Vec<OrientedLine> {
    let (Ok(ha), Ok(hb)) = (convex_hull(a), convex_hull(b)) else {
        return Vec::new();
    };
    let crossings = boundary_crossings(&ha, &hb);
    let Ok(pieces) = decompose_pieces(&ha, &hb, &crossings) else {
        return Vec::new();
    };
    let (records, groups) = find_bad_structure(plane, &pieces, diam_a);
    let k = crossings.k();
    let x = crossings.points();
    let mut lines = Vec::new();
    for group in &groups.groups_a {
        let Some(&i) = group.last() else { continue };
        let after = |j: usize| (j + k - i) % k;
        let Some(first_bad) = records.iter().map(|r| r.j).min_by_key(|&j| after(j)) else {
            continue;
        };
        let Some(last_partner) = records
            .iter()
            .filter(|r| r.i == i)
            .map(|r| r.j)
            .max_by_key(|&j| after(j))
        else {
            continue;
        };
        let (p, q) = (x[2 * first_bad + 1], x[(2 * last_partner + 2) % (2 * k)]);
        if p == q {
            continue;
        }
        let line = OrientedLine::through(p, q);
        let piece = pieces
            .iter()
            .find(|pc| pc.owner == Owner::B && pc.index == first_bad)
            .expect("piece exists for every index");
        let far = piece
            .boundary
            .iter()
            .map(|&v| line.signed(v))
            .max_by(|s, t| s.abs().total_cmp(&t.abs()))
            .unwrap_or(0.0);
        lines.push(if far > 0.0 { line.reversed() } else { line });
    }
    lines
}

/// On-line point splits for a candidate line: every subset for up to ten
/// points, otherwise prefixes and suffixes along the line.
fn on_splits(on: &[usize], points: &[Point], line: &OrientedLine) -> Vec<Vec<usize>> {
    if on.len() <= 10 {
        return (0..1usize << on.len())
            .map(|m| {
                (0..on.len())
                    .filter(|&t| m >> t & 1 == 1)
                    .map(|t| on[t])
                    .collect()
            })
            .collect();
    }
    let mut sorted = on.to_vec();
    sorted.sort_by(|&i, &j| {
        line.direction
            .dot(points[i])
            .total_cmp(&line.direction.dot(points[j]))
    });
    let mut out = Vec::new();
    for c in 0..=sorted.len() {
        out.push(sorted[..c].to_vec());
        out.push(sorted[c..].to_vec());
    }
    out
}

/// Smallest-perimeter separable split within the bounds, over lines
/// through two input points. `in_b` marks the right side of the line.
fn candidate_search(
    plane: &NormedPlane,
    points: &[Point],
    max_a: f64,
    max_b: f64,
    max_perimeter: f64,
) -> Option<(OrientedLine, Vec<bool>)> {
    let n = points.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| points[i] != points[j])
        .collect();
    let best_per_line = par::map(&pairs, |&(i, j)| {
        let base = OrientedLine::through(points[i], points[j]);
        let sides: Vec<Side> = points.iter().map(|&p| base.side(p)).collect();
        let on: Vec<usize> = (0..n).filter(|&t| sides[t] == Side::On).collect();
        let mut best: Option<(f64, OrientedLine, Vec<bool>)> = None;
        for chosen in on_splits(&on, points, &base) {
            let mut right: Vec<bool> = sides.iter().map(|&s| s == Side::Right).collect();
            for &t in &chosen {
                right[t] = true;
            }
            for line in [base, base.reversed()] {
                let in_b: Vec<bool> = if line == base {
                    right.clone()
                } else {
                    right.iter().map(|&r| !r).collect()
                };
                let (ap, bp) = split(points, &in_b);
                if diameter_value(plane, &ap) > max_a || diameter_value(plane, &bp) > max_b {
                    continue;
                }
                let perimeter = hull_perimeter(plane, &ap) + hull_perimeter(plane, &bp);
                if perimeter <= max_perimeter && best.as_ref().is_none_or(|b| perimeter < b.0) {
                    best = Some((perimeter, line, in_b));
                }
            }
        }
        best
    });
    best_per_line
        .into_iter()
        .flatten()
        .fold(
            None,
            |acc: Option<(f64, OrientedLine, Vec<bool>)>, c| match acc {
                Some(a) if a.0 <= c.0 => Some(a),
                _ => Some(c),
            },
        )
        .map(|(_, l, in_b)| (l, in_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::testutil::{random_points, random_polygon_norm};

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn assert_valid(plane: &NormedPlane, a: &[Point], b: &[Point], r: &SeparationResult) {
        let mut union: Vec<Point> = a.iter().chain(b).copied().collect();
        let mut got: Vec<Point> = r.a_prime.iter().chain(&r.b_prime).copied().collect();
        union.sort_by(|p, q| p.lex_cmp(q));
        got.sort_by(|p, q| p.lex_cmp(q));
        assert_eq!(union, got);
        assert!(r.a_prime.iter().all(|&p| r.line.side(p) != Side::Right));
        assert!(r.b_prime.iter().all(|&p| r.line.side(p) != Side::Left));
        assert!(diameter_value(plane, &r.a_prime) <= diameter_value(plane, a) + 1e-9);
        assert!(diameter_value(plane, &r.b_prime) <= diameter_value(plane, b) + 1e-9);
        let (before, after) = perimeter_check(plane, a, b, r);
        assert!(after <= before + 1e-9);
    }

    #[test]
    fn disjoint_hulls_keep_clusters() {
        let plane = NormedPlane::euclidean();
        let a = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        let b = pts(&[(0.0, 3.0), (1.0, 3.0)]);
        let r = separate_clusters(&plane, &a, &b).unwrap();
        assert_eq!(r.witness, SeparationWitness::DisjointHulls);
        assert_eq!(
            (r.a_prime.clone(), r.b_prime.clone()),
            (a.clone(), b.clone())
        );
        let (before, after) = perimeter_check(&plane, &a, &b, &r);
        assert_eq!(before, after);
    }

    #[test]
    fn small_overlap_merges() {
        let plane = NormedPlane::l1();
        let a = pts(&[(0.0, 0.0), (4.0, 0.0), (4.0, 4.0), (0.0, 4.0)]);
        let b = pts(&[(1.0, 1.0), (5.0, 2.0)]);
        let r = separate_clusters(&plane, &a, &b).unwrap();
        assert_eq!(r.witness, SeparationWitness::NoBadPairs);
        assert!(r.b_prime.is_empty());
        assert_valid(&plane, &a, &b, &r);
    }

    #[test]
    fn interlocked_clusters_are_split() {
        let plane = NormedPlane::euclidean();
        let a = pts(&[(-4.0, 0.0), (2.0, 0.0), (0.0, 0.2), (0.0, -0.2)]);
        let b = pts(&[(1.0, -1.0), (1.0, 4.5), (1.2, 0.0), (0.8, 0.0)]);
        let r = separate_clusters(&plane, &a, &b).unwrap();
        assert_eq!(r.witness, SeparationWitness::GroupSplit);
        assert_valid(&plane, &a, &b, &r);
        let (before, after) = perimeter_check(&plane, &a, &b, &r);
        assert!(after < before - 1e-9);
    }

    #[test]
    fn roles_swap_back() {
        let plane = NormedPlane::euclidean();
        let a = pts(&[(1.0, -1.0), (1.0, 4.5), (1.2, 0.0), (0.8, 0.0)]);
        let b = pts(&[(-6.0, 0.0), (2.0, 0.0), (0.0, 0.2), (0.0, -0.2)]);
        let r = separate_clusters(&plane, &a, &b).unwrap();
        assert_valid(&plane, &a, &b, &r);
    }

    #[test]
    fn empty_cluster_is_an_error() {
        let plane = NormedPlane::euclidean();
        let a = pts(&[(0.0, 0.0)]);
        assert_eq!(
            separate_clusters(&plane, &[], &a),
            Err(Error::EmptyCluster("A"))
        );
        assert_eq!(
            separate_clusters(&plane, &a, &[]),
            Err(Error::EmptyCluster("B"))
        );
    }

    #[test]
    fn coincident_points() {
        let plane = NormedPlane::linf();
        let a = pts(&[(1.0, 1.0)]);
        let r = separate_clusters(&plane, &a, &a).unwrap();
        assert_valid(&plane, &a, &a, &r);
    }

    #[test]
    fn random_instances_hold_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for round in 0..60 {
            let plane = if round % 2 == 0 {
                NormedPlane::euclidean()
            } else {
                random_polygon_norm(&mut rng, 5)
            };
            let a = random_points(&mut rng, 2 + round % 9, 10.0);
            let b = random_points(&mut rng, 1 + round % 7, 10.0);
            let r = separate_clusters(&plane, &a, &b).unwrap();
            assert_valid(&plane, &a, &b, &r);
        }
    }
}
