//! Fair partitions of convex polygons.
//!
//! A *fair partition* divides a convex polygon into N convex pieces that all
//! have the same area **and** the same perimeter. This crate computes fair
//! partitions for N = 2, 4 and, recursively, any power of two, together with
//! the machinery the construction rests on:
//!
//! - [`geom`] — convex polygons with arc-length boundary parameterization,
//!   chord cuts, and partition verification.
//! - [`bisect`] — the area-imbalance function α along antipodal chords, its
//!   exact piecewise-quadratic profile, fair ranges (zero set of α), and
//!   rotating area bisectors.
//! - [`curves`] — perimeter-vs-angle branch curves traced while the area
//!   bisector rotates, tangency events, and phase-shifted curve
//!   intersections.
//! - [`partition`] — the solvers: `fair_partition_2`, `fair_partition_4`,
//!   `fair_partition_pow2`, and the (deliberately failing) naive recursive
//!   scheme.
//! - [`gen`], [`io`], [`svg`], [`ensemble`] — seeded polygon generation,
//!   JSON/SVG serialization, and batch runs backing the CLI.

pub mod bisect;
pub mod curves;
mod error;
pub mod ensemble;
pub mod gen;
pub mod geom;
pub mod io;
pub mod partition;
pub mod svg;

pub use error::{Error, Result};
pub use geom::{Chord, PartitionReport, Point, Polygon};
pub use partition::{
    fair_partition, fair_partition_2, fair_partition_4, fair_partition_pow2, naive_recursive_4,
    CutTree, FairPartitionResult, SolverConfig,
};
