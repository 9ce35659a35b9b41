//! Exact computations on plane curve singularities.
//!
//! Branches are given by Newton-Puiseux polynomials relative to the smooth
//! branch `L = Z(x)`. From them this crate builds the Eggers-Wall tree with its
//! exponent, index and contact-complexity functions, re-roots the tree at
//! another smooth branch, converts it to a splice diagram, and evaluates the
//! semivaluations and observer coordinates attached to its points.
//!
//! All arithmetic is exact: rationals are arbitrary precision and Puiseux
//! coefficients live in a cyclotomic field `Q(ζ_N)`.
#![no_std]

extern crate alloc;

pub mod arith;
mod error;
#[cfg(test)]
mod fixtures;
pub mod inversion;
pub mod puiseux;
pub mod splice;
pub mod tree;
pub mod valuation;

pub use arith::cyclotomic::{cyclotomic_polynomial, embed_root, CyclotomicNumber, RingOp};
pub use arith::{Ext, Rational};
pub use error::{Error, Result};
pub use puiseux::{parse_branch, Branch, BranchRecord, PuiseuxSeries};
pub use splice::{SpliceDiagram, SpliceReport, SpliceVertex};
pub use tree::{BranchId, EwTree, Location, TreePoint, Vertex, VertexId};
pub use valuation::{Coordinates, Divisor, Observer};
