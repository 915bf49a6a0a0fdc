//! Clustering, cluster separation and ball hulls in normed planes.

pub mod ballhull;
pub mod cli;
pub mod clustering;
pub mod error;
pub mod geometry;
pub mod norm;
pub mod oracle;
pub(crate) mod par;
pub mod separation;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use norm::{NormDescriptor, NormedPlane, Point, Vector};
