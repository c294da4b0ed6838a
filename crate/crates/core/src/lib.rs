//! Antichains, weak antichains and their projections.
//!
//! * [`lattice`]: points of `Z^n`, product orders, projections.
//! * [`partition`]: the greedy split behind the discrete projection
//!   inequality and projection-gap scans.
//! * [`extremal`]: middle layers, zero-coordinate sets and exact widths.
//! * [`grid`]: cube covers of subsets of the unit cube and the bounds built
//!   from them.
//! * [`measure`]: graphs of order-reversing functions and their surface and
//!   projection measures, the shear map, skewed projections in the plane.

pub mod error;
pub mod extremal;
pub mod grid;
pub mod lattice;
pub mod measure;
pub mod partition;

pub use error::{Error, Result};
