//! Radio k-labelings of integer distance graphs `D(1..t)`, `D(1,t)` and
//! `D(t-1,t)`: exact distances, analytic bounds, certified periodic
//! patterns and exhaustive searches.

pub mod bounds;
pub mod cli;
pub mod document;
pub mod error;
pub mod graph;
pub mod pattern;
pub mod report;
pub mod search;

pub use error::{Error, Result};
pub use graph::{DistanceFamily, FamilyKind};
