use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Segment};
use crate::norm::{magnitude, NormedPlane, Point};

/// A transversal crossing of the two hull boundaries.
///
/// Edge `e` of a hull runs from clockwise vertex `e` to `e + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub point: Point,
    pub edge_a: usize,
    pub edge_b: usize,
}

/// Boundary crossings in clockwise order, starting where the boundary of
/// `conv(A)` leaves `conv(B)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CrossingSequence {
    pub crossings: Vec<Crossing>,
    /// Some boundary contact was not a clean transversal crossing.
    pub degenerate: bool,
}

impl CrossingSequence {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn points(&self) -> Vec<Point> {
        self.crossings.iter().map(|c| c.point).collect()
    }

    /// Number of pieces per cluster.
    pub fn k(&self) -> usize {
        self.crossings.len() / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Owner {
    A,
    B,
}

/// One component of `conv(A) \ conv(B)` or `conv(B) \ conv(A)`.
///
/// `boundary` runs clockwise: the owner's outer hull arc from crossing
/// `entry` to crossing `exit`, then back along the other hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub owner: Owner,
    pub index: usize,
    pub boundary: Vec<Point>,
    pub entry: usize,
    pub exit: usize,
}

impl Piece {
    /// Twice the signed area (negative: clockwise).
    pub fn area2(&self) -> f64 {
        let n = self.boundary.len();
        (0..n)
            .map(|i| self.boundary[i].cross(self.boundary[(i + 1) % n]))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BadPairRecord {
    /// Index of the `A` piece.
    pub i: usize,
    /// Index of the `B` piece.
    pub j: usize,
    /// From the `A` piece to the `B` piece.
    pub witness: Segment,
    pub length: f64,
}

/// Maximal cyclic runs of bad pieces, each listed clockwise.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GroupDecomposition {
    pub groups_a: Vec<Vec<usize>>,
    pub groups_b: Vec<Vec<usize>>,
}

const ORIENT_BAND: f64 = 1e-12;
const CONTACT_BAND: f64 = 1e-9;

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let l = ab.norm2();
    let t = if l == 0.0 {
        0.0
    } else {
        ((p - a).dot(ab) / l).clamp(0.0, 1.0)
    };
    (p - (a + ab * t)).euclid()
}

enum Contact {
    None,
    Cross { t_a: f64, point: Point },
    Touch,
}

fn contact(p1: Point, p2: Point, q1: Point, q2: Point, scale: f64) -> Contact {
    let (dp, dq) = (p2 - p1, q2 - q1);
    let o1 = dq.cross(p1 - q1);
    let o2 = dq.cross(p2 - q1);
    let o3 = dp.cross(q1 - p1);
    let o4 = dp.cross(q2 - p1);
    let band = ORIENT_BAND * scale * scale;
    if [o1, o2, o3, o4].iter().all(|o| o.abs() > band) {
        if (o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0) {
            let t_a = o1 / (o1 - o2);
            return Contact::Cross {
                t_a,
                point: p1 + dp * t_a,
            };
        }
        return Contact::None;
    }
    let tol = CONTACT_BAND * scale;
    let near = point_segment_distance(p1, q1, q2) <= tol
        || point_segment_distance(p2, q1, q2) <= tol
        || point_segment_distance(q1, p1, p2) <= tol
        || point_segment_distance(q2, p1, p2) <= tol;
    if near {
        Contact::Touch
    } else {
        Contact::None
    }
}

/// Transversal crossings of the two hull boundaries, clockwise.
///
/// Empty for disjoint or nested hulls and for degenerate input polygons.
pub fn boundary_crossings(conv_a: &ConvexPolygon, conv_b: &ConvexPolygon) -> CrossingSequence {
    if conv_a.is_degenerate() || conv_b.is_degenerate() {
        return CrossingSequence::default();
    }
    let (ca, cb) = (conv_a.clockwise(), conv_b.clockwise());
    let scale = magnitude(&ca).max(magnitude(&cb));
    let (na, nb) = (ca.len(), cb.len());
    let mut degenerate = false;
    // (t along edge_a, exits B, crossing)
    let mut found: Vec<(f64, bool, Crossing)> = Vec::new();
    for ea in 0..na {
        let (p1, p2) = (ca[ea], ca[(ea + 1) % na]);
        let mut on_edge: Vec<(f64, bool, Crossing)> = Vec::new();
        for eb in 0..nb {
            let (q1, q2) = (cb[eb], cb[(eb + 1) % nb]);
            match contact(p1, p2, q1, q2, scale) {
                Contact::None => {}
                Contact::Touch => degenerate = true,
                Contact::Cross { t_a, point } => {
                    // B's interior is right of its clockwise edges
                    let exits = (q2 - q1).cross(p2 - p1) > 0.0;
                    on_edge.push((
                        t_a,
                        exits,
                        Crossing {
                            point,
                            edge_a: ea,
                            edge_b: eb,
                        },
                    ));
                }
            }
        }
        on_edge.sort_by(|x, y| x.0.total_cmp(&y.0));
        found.extend(on_edge);
    }
    let m = found.len();
    let alternates = m.is_multiple_of(2) && (0..m).all(|i| found[i].1 != found[(i + 1) % m].1);
    if !alternates {
        degenerate = true;
    }
    let start = found.iter().position(|f| f.1).unwrap_or(0);
    let crossings = (0..m).map(|i| found[(start + i) % m].2).collect();
    CrossingSequence {
        crossings,
        degenerate,
    }
}

enum Event {
    Vertex(Point),
    Crossing(usize),
}

/// Walk of a clockwise boundary with crossings interleaved, rotated to
/// start at crossing 0.
fn walk(
    cw: &[Point],
    crossings: &CrossingSequence,
    edge_of: impl Fn(&Crossing) -> usize,
) -> Vec<Event> {
    let n = cw.len();
    let mut events = Vec::with_capacity(n + crossings.len());
    for e in 0..n {
        events.push(Event::Vertex(cw[e]));
        let (p, d) = (cw[e], cw[(e + 1) % n] - cw[e]);
        let mut here: Vec<(f64, usize)> = crossings
            .crossings
            .iter()
            .enumerate()
            .filter(|(_, c)| edge_of(c) == e)
            .map(|(id, c)| ((c.point - p).dot(d), id))
            .collect();
        here.sort_by(|x, y| x.0.total_cmp(&y.0));
        events.extend(here.into_iter().map(|(_, id)| Event::Crossing(id)));
    }
    let start = events
        .iter()
        .position(|e| matches!(e, Event::Crossing(0)))
        .unwrap_or(0);
    events.rotate_left(start);
    events
}

/// Vertices between consecutive crossings: `arcs[c]` holds the hull
/// vertices strictly between crossing `c` and `c + 1`.
fn arcs(events: &[Event], m: usize) -> Result<Vec<Vec<Point>>> {
    let mut out = vec![Vec::new(); m];
    let mut expected = 0;
    let mut current = None;
    for ev in events {
        match *ev {
            Event::Crossing(id) => {
                if id != expected {
                    return Err(Error::DegenerateArrangement);
                }
                current = Some(id);
                expected += 1;
            }
            Event::Vertex(p) => {
                let c = current.ok_or(Error::DegenerateArrangement)?;
                out[c].push(p);
            }
        }
    }
    if expected != m {
        return Err(Error::DegenerateArrangement);
    }
    Ok(out)
}

/// Splits the symmetric difference of the hulls into interlacing pieces
/// `A_0, B_0, A_1, B_1, ...`; `A_i` spans crossings `2i..2i+1` and
/// `B_i` spans `2i+1..2i+2`.
pub fn decompose_pieces(
    conv_a: &ConvexPolygon,
    conv_b: &ConvexPolygon,
    crossings: &CrossingSequence,
) -> Result<Vec<Piece>> {
    if crossings.is_empty() {
        return Err(Error::NoOverlap);
    }
    if crossings.degenerate || !crossings.len().is_multiple_of(2) {
        return Err(Error::DegenerateArrangement);
    }
    let m = crossings.len();
    let k = m / 2;
    let arcs_a = arcs(&walk(&conv_a.clockwise(), crossings, |c| c.edge_a), m)?;
    let arcs_b = arcs(&walk(&conv_b.clockwise(), crossings, |c| c.edge_b), m)?;
    let x = |c: usize| crossings.crossings[c % m].point;

    let mut pieces = Vec::with_capacity(m);
    for i in 0..k {
        let (e, f) = (2 * i, 2 * i + 1);
        let mut boundary = vec![x(e)];
        boundary.extend(&arcs_a[e]);
        boundary.push(x(f));
        boundary.extend(arcs_b[e].iter().rev());
        pieces.push(Piece {
            owner: Owner::A,
            index: i,
            boundary,
            entry: e,
            exit: f,
        });

        let (e, f) = (2 * i + 1, (2 * i + 2) % m);
        let mut boundary = vec![x(e)];
        boundary.extend(&arcs_b[e]);
        boundary.push(x(f));
        boundary.extend(arcs_a[e].iter().rev());
        pieces.push(Piece {
            owner: Owner::B,
            index: i,
            boundary,
            entry: e,
            exit: f,
        });
    }
    Ok(pieces)
}

fn runs(bad: &[bool]) -> Vec<Vec<usize>> {
    let k = bad.len();
    if bad.iter().all(|&b| b) {
        return if k == 0 {
            Vec::new()
        } else {
            vec![(0..k).collect()]
        };
    }
    let mut out = Vec::new();
    for s in 0..k {
        if bad[s] && !bad[(s + k - 1) % k] {
            let mut run = vec![s];
            let mut t = (s + 1) % k;
            while bad[t] {
                run.push(t);
                t = (t + 1) % k;
            }
            out.push(run);
        }
    }
    out
}

/// Bad pairs (largest cross vertex distance above `diam_a`) and the
/// maximal cyclic groups of bad pieces.
pub fn find_bad_structure(
    plane: &NormedPlane,
    pieces: &[Piece],
    diam_a: f64,
) -> (Vec<BadPairRecord>, GroupDecomposition) {
    let a: Vec<&Piece> = pieces.iter().filter(|p| p.owner == Owner::A).collect();
    let b: Vec<&Piece> = pieces.iter().filter(|p| p.owner == Owner::B).collect();
    let limit = diam_a + 1e-12 * diam_a.max(1.0);
    let mut records = Vec::new();
    for pa in &a {
        for pb in &b {
            let mut best: Option<(f64, Point, Point)> = None;
            for &u in &pa.boundary {
                for &v in &pb.boundary {
                    let d = plane.dist(u, v);
                    if best.is_none_or(|(bd, _, _)| d > bd) {
                        best = Some((d, u, v));
                    }
                }
            }
            if let Some((d, u, v)) = best {
                if d > limit {
                    records.push(BadPairRecord {
                        i: pa.index,
                        j: pb.index,
                        witness: Segment::new(u, v),
                        length: d,
                    });
                }
            }
        }
    }
    let mut bad_a = vec![false; a.len()];
    let mut bad_b = vec![false; b.len()];
    for r in &records {
        bad_a[r.i] = true;
        bad_b[r.j] = true;
    }
    let groups = GroupDecomposition {
        groups_a: runs(&bad_a),
        groups_b: runs(&bad_b),
    };
    (records, groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::convex_hull;

    fn hull(pts: &[(f64, f64)]) -> ConvexPolygon {
        let v: Vec<Point> = pts.iter().map(|&p| p.into()).collect();
        convex_hull(&v).unwrap()
    }

    fn square(x: f64, y: f64, w: f64, h: f64) -> ConvexPolygon {
        hull(&[(x, y), (x + w, y), (x + w, y + h), (x, y + h)])
    }

    fn star_of_david() -> (ConvexPolygon, ConvexPolygon) {
        let tri = |phase: f64| {
            let v: Vec<(f64, f64)> = (0..3)
                .map(|i| {
                    let t = phase + i as f64 * 2.0 * std::f64::consts::PI / 3.0;
                    (t.cos(), t.sin())
                })
                .collect();
            hull(&v)
        };
        (tri(0.1), tri(0.1 + std::f64::consts::PI / 3.0))
    }

    fn edge_pair_count(a: &ConvexPolygon, b: &ConvexPolygon) -> usize {
        // direct count of properly crossing edge pairs
        let orient = |o: Point, p: Point, q: Point| (p - o).cross(q - o);
        let mut n = 0;
        for (p1, p2) in a.edges() {
            for (q1, q2) in b.edges() {
                let s1 = orient(q1, q2, p1) * orient(q1, q2, p2);
                let s2 = orient(p1, p2, q1) * orient(p1, p2, q2);
                if s1 < 0.0 && s2 < 0.0 {
                    n += 1;
                }
            }
        }
        n
    }

    fn assert_tiles(a: &ConvexPolygon, b: &ConvexPolygon, pieces: &[Piece]) {
        let inter = a.intersection(b).area2();
        let sum = |o: Owner| -> f64 {
            pieces
                .iter()
                .filter(|p| p.owner == o)
                .map(|p| -p.area2())
                .sum()
        };
        assert!((sum(Owner::A) - (a.area2() - inter)).abs() < 1e-9);
        assert!((sum(Owner::B) - (b.area2() - inter)).abs() < 1e-9);
        assert!(pieces.iter().all(|p| p.area2() < 0.0));
    }

    #[test]
    fn offset_squares() {
        let (a, b) = (square(0.0, 0.0, 2.0, 2.0), square(1.0, 1.0, 2.0, 2.0));
        let x = boundary_crossings(&a, &b);
        assert_eq!(x.len(), 2);
        assert!(!x.degenerate);
        let pieces = decompose_pieces(&a, &b, &x).unwrap();
        assert_eq!(pieces.len(), 2);
        assert_tiles(&a, &b, &pieces);
    }

    #[test]
    fn disjoint_and_nested() {
        let a = square(0.0, 0.0, 1.0, 1.0);
        assert!(boundary_crossings(&a, &square(3.0, 0.0, 1.0, 1.0)).is_empty());
        let inner = square(0.25, 0.25, 0.5, 0.5);
        let x = boundary_crossings(&a, &inner);
        assert!(x.is_empty());
        assert_eq!(decompose_pieces(&a, &inner, &x), Err(Error::NoOverlap));
    }

    #[test]
    fn star_of_david_has_three_pieces_each() {
        let (a, b) = star_of_david();
        let x = boundary_crossings(&a, &b);
        assert_eq!(x.len(), edge_pair_count(&a, &b));
        assert_eq!(x.len(), 6);
        let pieces = decompose_pieces(&a, &b, &x).unwrap();
        assert_eq!(x.k(), 3);
        assert_eq!(pieces.iter().filter(|p| p.owner == Owner::A).count(), 3);
        assert_tiles(&a, &b, &pieces);
    }

    #[test]
    fn square_crossed_by_rectangle() {
        let (a, b) = (square(0.0, 0.0, 2.0, 2.0), square(-3.0, 0.5, 8.0, 1.0));
        let x = boundary_crossings(&a, &b);
        assert_eq!(x.len(), 4);
        assert_eq!(x.k(), 2);
        let pieces = decompose_pieces(&a, &b, &x).unwrap();
        assert_tiles(&a, &b, &pieces);
        // A pieces touch their B successor at the exit crossing
        for w in pieces.chunks(2) {
            assert_eq!(w[0].exit, w[1].entry);
        }
    }

    #[test]
    fn bad_structure_examples() {
        let plane = NormedPlane::euclidean();
        let (a, b) = (square(0.0, 0.0, 2.0, 2.0), square(1.0, 1.0, 2.0, 2.0));
        let pieces = decompose_pieces(&a, &b, &boundary_crossings(&a, &b)).unwrap();
        let (records, groups) = find_bad_structure(&plane, &pieces, 8f64.sqrt() * 1.5);
        assert!(records.is_empty());
        assert!(groups.groups_a.is_empty() && groups.groups_b.is_empty());

        // flat clusters crossing at right angles; only the far tips are bad
        let a = hull(&[(-4.0, 0.0), (2.0, 0.0), (0.0, 0.2), (0.0, -0.2)]);
        let b = hull(&[(1.0, -1.0), (1.0, 4.5), (1.2, 0.0), (0.8, 0.0)]);
        let x = boundary_crossings(&a, &b);
        let pieces = decompose_pieces(&a, &b, &x).unwrap();
        let (records, groups) = find_bad_structure(&plane, &pieces, 6.0);
        assert_eq!(records.len(), 1);
        assert!(records[0].length > 6.0);
        assert_eq!(groups.groups_a.len(), 1);
        assert_eq!(groups.groups_b.len(), 1);
    }

    #[test]
    fn cyclic_runs() {
        assert_eq!(runs(&[true, false, true, true]), vec![vec![2, 3, 0]]);
        assert_eq!(runs(&[true, true]), vec![vec![0, 1]]);
        assert_eq!(runs(&[false, true, false, true]), vec![vec![1], vec![3]]);
        assert!(runs(&[false, false]).is_empty());
    }
}
