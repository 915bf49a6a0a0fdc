//! Planar primitives: convex hulls, normed diameter and perimeter, oriented
//! lines and stabbing lines.

mod diameter;
mod distances;
mod hull;
mod line;
mod stabbing;

pub use diameter::{antipodal_pairs, diameter, diameter_value, Diameter};
pub use distances::{distance_matrix, sorted_pairwise_distances, DistanceEntry};
pub use hull::{convex_hull, norm_perimeter, ConvexPolygon};
pub use line::{
    side_of, split_by_line, split_indices_by_line, OnRule, OrientedLine, Segment, Side,
    SIDE_TOLERANCE,
};
pub use stabbing::{stabbing_candidates, stabbing_line};
