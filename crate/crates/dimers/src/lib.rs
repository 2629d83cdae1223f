//! Dimer models on the two-torus.
//!
//! The crate reads doubly periodic bipartite tilings, derives the dual
//! quiver with its superpotential and F-term relations, and decides the
//! ladder of consistency conditions: existence and non-degeneracy of perfect
//! matchings, existence of (anomaly-free) R-symmetries, geometric
//! consistency through zig-zag paths, and algebraic consistency of the
//! superpotential algebra up to a degree bound.  Along the way it builds the
//! toric data: the perfect-matching polygon with multiplicities, zig-zag
//! fans, extremal and external perfect matchings, lattice-point bases of
//! the toric algebra and graded pieces of the one-sided Calabi–Yau complex.

pub mod algebra;
pub mod error;
pub mod fans;

pub mod fixtures;
pub mod lattice;

pub mod linalg;
pub mod lp;
mod map;
pub mod matchings;
pub mod polygen;
pub mod polygon;

pub mod surface;
pub mod symmetry;
pub mod zigzag;

pub use error::DimerError;
pub use surface::{dualize, load, Color, Quiver, TorusGraph};
