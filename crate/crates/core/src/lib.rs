//! Lattice width and lattice size of lattice polytopes, computed exactly.
//!
//! * [`geometry`] holds the integer primitives: widths, the `l₁` functional,
//!   unimodular maps, lattice points, emptiness and lattice width.
//! * [`search`] computes the lattice sizes `ls_Δ` and `ls_□` of small
//!   polytopes by exhaustive, pruned assembly of unimodular matrices.
//! * [`family`] covers the simplices `T_{p₁…p_d}`: constructors, closed-form
//!   lattice sizes and their witness matrices.
//! * [`oracle`] is a deliberately naive brute force used to cross-check
//!   the search.

pub mod family;
pub mod geometry;
pub mod oracle;
pub mod search;

pub use geometry::{
    AffineUnimodularMap, Direction, GeometryError, IntMatrix, LatticePoint, LatticePolytope,
};
