//! Crossings of uniform random labelled trees drawn with straight edges on
//! planar point sets.
//!
//! * [`tree`]: Prüfer codes, enumeration, sampling, and forest containment
//!   counts.
//! * [`geometry`]: exact integer predicates, tree crossing counts, and the
//!   rectilinear crossing number of a point set.
//! * [`stats`]: exact crossing distributions, moments, cumulants, closed
//!   forms, and exact Laurent-polynomial fits.
//! * [`montecarlo`]: seeded sampling experiments and normality diagnostics.
//! * [`verify`]: regression checks against reference tables.

pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod stats;
pub mod tree;
pub mod verify;

pub use error::{Error, ErrorClass, Result};
pub use geometry::{ConfigKind, CrossingCount, Point, PointConfig, PointSet};
pub use stats::Rational;
pub use tree::{Edge, Forest, LabeledTree, PruferCode};
