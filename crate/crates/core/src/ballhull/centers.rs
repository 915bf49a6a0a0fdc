use std::f64::consts::TAU;

use crate::norm::{circle_circle, magnitude, Circle, NormedPlane, Point};

/// Boundary of `∩ B(s, d)`.
///
/// `owners[i]` is the index of the point whose sphere carries the edge
/// from `corners[i]` to `corners[i + 1]`; corners run counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum CenterSet {
    Empty,
    /// A single round ball without corners.
    Disc { owner: usize },
    Region {
        corners: Vec<Point>,
        owners: Vec<usize>,
    },
}

pub(crate) fn center_set(plane: &NormedPlane, points: &[Point], d: f64) -> CenterSet {
    if points.is_empty() {
        return CenterSet::Empty;
    }
    let scale = magnitude(points).max(d);
    if plane.ball_polygon(points[0], d).is_some() {
        polygon_center_set(plane, points, d, scale)
    } else {
        disc_center_set(plane, points, d, scale)
    }
}

fn dedupe(v: &mut Vec<(Point, usize)>, tol: f64) {
    let mut out: Vec<(Point, usize)> = Vec::with_capacity(v.len());
    for &(p, l) in v.iter() {
        if out.last().is_some_and(|&(q, _)| (p - q).euclid() <= tol) {
            continue;
        }
        out.push((p, l));
    }
    while out.len() > 1 && (out[0].0 - out[out.len() - 1].0).euclid() <= tol {
        out.pop();
    }
    *v = out;
}

fn finish(region: Vec<(Point, usize)>) -> CenterSet {
    if region.len() < 2 {
        return CenterSet::Empty;
    }
    let (corners, owners) = region.into_iter().unzip();
    CenterSet::Region { corners, owners }
}

fn polygon_center_set(plane: &NormedPlane, points: &[Point], d: f64, scale: f64) -> CenterSet {
    let tol = 1e-12 * scale;
    let ball = |i: usize| plane.ball_polygon(points[i], d).expect("polygon body");
    let mut region: Vec<(Point, usize)> = ball(0).into_iter().map(|v| (v, 0)).collect();
    for s in 1..points.len() {
        let b = ball(s);
        for k in 0..b.len() {
            let (a, e) = (b[k], b[(k + 1) % b.len()] - b[k]);
            let input = std::mem::take(&mut region);
            let m = input.len();
            for i in 0..m {
                let ((p, l), (q, _)) = (input[i], input[(i + 1) % m]);
                let (sp, sq) = (e.cross(p - a), e.cross(q - a));
                if sp >= 0.0 {
                    region.push((p, l));
                    if sq < 0.0 {
                        region.push((p + (q - p) * (sp / (sp - sq)), s));
                    }
                } else if sq >= 0.0 {
                    region.push((p + (q - p) * (sp / (sp - sq)), l));
                }
            }
            dedupe(&mut region, tol);
            if region.len() < 2 {
                return CenterSet::Empty;
            }
        }
    }
    finish(region)
}

/// Counterclockwise angular offset from `a0` to `a`, in `[0, 2π)`.
fn offset(a0: f64, a: f64) -> f64 {
    (a - a0).rem_euclid(TAU)
}

enum State {
    /// The whole disc with this index.
    Whole(usize),
    Arcs(Vec<(Point, usize)>),
}

fn disc_center_set(plane: &NormedPlane, points: &[Point], d: f64, scale: f64) -> CenterSet {
    let tol = 1e-12 * scale;
    let discs: Vec<(Circle, usize)> = points
        .iter()
        .enumerate()
        .flat_map(|(s, &p)| {
            plane
                .ball_discs(p, d)
                .expect("curved body")
                .into_iter()
                .map(move |c| (c, s))
        })
        .collect();
    let inside_all = |x: Point, upto: usize| {
        discs[..upto]
            .iter()
            .all(|(c, _)| (x - c.center).euclid() <= c.radius + tol)
    };

    let mut state = State::Whole(0);
    for k in 1..discs.len() {
        let dk = discs[k].0;
        state = match state {
            State::Whole(e) => {
                let c = discs[e].0;
                let gap = (dk.center - c.center).euclid();
                if gap + dk.radius <= c.radius + tol {
                    State::Whole(k)
                } else if gap + c.radius <= dk.radius + tol {
                    State::Whole(e)
                } else {
                    let x = circle_circle(&c, &dk, tol);
                    if x.len() < 2 {
                        return CenterSet::Empty;
                    }
                    // x[0] is left of c→dk, so the arc of c inside dk runs
                    // counterclockwise from x[1] to x[0]
                    State::Arcs(vec![(x[1], e), (x[0], k)])
                }
            }
            State::Arcs(current) => match clip_arcs(&discs, &current, k, tol) {
                Clip::Unchanged => State::Arcs(current),
                Clip::Disjoint if inside_all(dk.point_at(0.0), k) => State::Whole(k),
                Clip::Disjoint => return CenterSet::Empty,
                Clip::Cut(next) if next.len() < 2 => return CenterSet::Empty,
                Clip::Cut(next) => State::Arcs(next),
            },
        };
    }
    match state {
        State::Whole(e) => CenterSet::Disc { owner: discs[e].1 },
        State::Arcs(r) => finish(r.into_iter().map(|(p, l)| (p, discs[l].1)).collect()),
    }
}

enum Clip {
    /// The region lies inside the new disc.
    Unchanged,
    /// No boundary point of the region lies inside the new disc.
    Disjoint,
    Cut(Vec<(Point, usize)>),
}

fn clip_arcs(discs: &[(Circle, usize)], current: &[(Point, usize)], k: usize, tol: f64) -> Clip {
    let dk = discs[k].0;
    let m = current.len();
    // sub-arcs as (start, disc, inside the new disc)
    let mut subs: Vec<(Point, usize, bool)> = Vec::with_capacity(m + 4);
    for i in 0..m {
        let (start, l) = current[i];
        let end = current[(i + 1) % m].0;
        let circle = discs[l].0;
        let a0 = circle.angle_of(start);
        let sweep = offset(a0, circle.angle_of(end));
        let mut cuts: Vec<f64> = circle_circle(&circle, &dk, tol)
            .into_iter()
            .map(|z| offset(a0, circle.angle_of(z)))
            .filter(|&t| t > 1e-12 && t < sweep - 1e-12)
            .collect();
        cuts.sort_by(f64::total_cmp);
        let mut bounds = vec![0.0];
        bounds.extend(cuts);
        bounds.push(sweep);
        for (j, w) in bounds.windows(2).enumerate() {
            let mid = circle.point_at(a0 + 0.5 * (w[0] + w[1]));
            let inside = (mid - dk.center).euclid() <= dk.radius + tol;
            let p = if j == 0 { start } else { circle.point_at(a0 + w[0]) };
            subs.push((p, l, inside));
        }
    }
    if subs.iter().all(|s| s.2) {
        return Clip::Unchanged;
    }
    if subs.iter().all(|s| !s.2) {
        return Clip::Disjoint;
    }
    let n = subs.len();
    let mut next: Vec<(Point, usize)> = Vec::with_capacity(n);
    for i in 0..n {
        let (p, l, inside) = subs[i];
        if inside {
            next.push((p, l));
            let after = subs[(i + 1) % n];
            if !after.2 {
                next.push((after.0, k));
            }
        }
    }
    dedupe(&mut next, tol);
    Clip::Cut(next)
}
