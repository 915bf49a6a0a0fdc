use super::line::{OrientedLine, Segment};
use crate::norm::Point;

/// Candidate transversals: lines through two distinct segment endpoints and
/// lines through an endpoint parallel to a segment. If any stabbing line
/// exists, one of these does, since a transversal can be translated and
/// rotated until it rests on two endpoints (or on one endpoint, parallel to
/// a segment it contains).
pub fn stabbing_candidates(segments: &[Segment]) -> Vec<OrientedLine> {
    let mut endpoints: Vec<Point> = segments.iter().flat_map(|s| [s.a, s.b]).collect();
    endpoints.sort_by(|a, b| a.lex_cmp(b));
    endpoints.dedup();
    let mut out = Vec::new();
    for i in 0..endpoints.len() {
        for j in i + 1..endpoints.len() {
            out.push(OrientedLine::through(endpoints[i], endpoints[j]));
        }
    }
    for &p in &endpoints {
        for s in segments {
            if s.a != s.b {
                out.push(OrientedLine::new(p, s.b - s.a));
            }
        }
    }
    out
}

/// A line meeting every segment, if one exists.
pub fn stabbing_line(segments: &[Segment]) -> Option<OrientedLine> {
    if segments.is_empty() {
        return Some(OrientedLine::new(Point::ORIGIN, Point::new(1.0, 0.0)));
    }
    if segments.len() == 1 {
        let s = segments[0];
        let dir = if s.a == s.b {
            Point::new(1.0, 0.0)
        } else {
            s.b - s.a
        };
        return Some(OrientedLine::new(s.a, dir));
    }
    let candidates = stabbing_candidates(segments);
    crate::par::find_map_first(candidates.len(), |i| {
        let line = candidates[i];
        segments.iter().all(|s| line.meets(s)).then_some(line)
    })
}
