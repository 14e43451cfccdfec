//! Dimer quivers on the two-torus.
//!
//! The crate decides cancellativity of dimer algebras through the
//! simple-matching criterion, produces explicit non-cancellative pairs and
//! nonnoetherian witnesses, and compares vertex corner rings, the cycle
//! algebra `S` and the homotopy center `R` up to a degree bound.

pub mod algebras;
pub mod contraction;
pub mod corpus;
pub mod criteria;
pub mod draw;
pub mod matchings;
pub mod model;
pub mod paths;

#[cfg(test)]
pub(crate) mod testutil;

pub use matchings::{MatchingTable, PerfectMatching};
pub use model::{ArrowId, DimerQuiver, FaceId, FaceSign, VertexId, Winding};
pub use paths::{DimerAlgebra, Equality, PathWord, Weight};
