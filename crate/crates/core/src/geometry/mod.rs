//! Exact integer geometry: points, polytopes, directional widths, the `l₁`
//! functional, unimodular maps, lattice points and lattice width.
//!
//! Everything is arbitrary-precision integer arithmetic; no operation here
//! touches floating point.

mod hull;
mod map;
mod matrix;
mod point;
mod polytope;
mod width;

use num_bigint::BigInt;
use thiserror::Error;

pub use hull::{
    affine_dimension, is_empty_polytope, is_full_dimensional, lattice_length, lattice_points,
    vertices, ConvexHull, DEFAULT_BOX_BUDGET,
};
pub use map::{apply_map, pullback_direction, AffineUnimodularMap};
pub use matrix::IntMatrix;

pub(crate) use hull::Combinations;
pub use point::{is_primitive, Direction, LatticePoint};
pub use polytope::{l1, max_coordinate_width, width_in_direction, LatticePolytope};
pub use width::{
    directions_within_width, lattice_width, lattice_width_with_budget, width_minimizers,
    DEFAULT_ENUMERATION_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lattice points need at least one coordinate")]
    ZeroDimension,
    #[error("a polytope needs at least one point")]
    EmptyPointSet,
    #[error("direction must be a nonzero vector")]
    ZeroDirection,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has determinant {det}, expected ±1")]
    NotUnimodular { det: BigInt },
    #[error("polytope is not full-dimensional")]
    Degenerate,
    #[error("{what} exceeds its budget of {limit} cells")]
    BudgetExceeded { what: &'static str, limit: u64 },
}
