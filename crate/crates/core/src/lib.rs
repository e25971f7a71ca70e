//! Magnitude of finite metric spaces and of convex polytopes in l1^N.
//!
//! - [`metric`]: distance matrices, similarity matrices, positive
//!   definiteness and the magnitude of finite spaces.
//! - [`geometry`]: polytopes, coordinate projections, exact hull volumes,
//!   l1 intrinsic volumes and the convex magnitude formula
//!   `Σ_i V'_i(A) / 2^i`, plus the inequalities that bound it.
//! - [`approximation`]: finite-sample lower bounds, the coordinate-simplex
//!   divergence table and the small-scale sweep.
//! - [`io`]: JSON/CSV file formats.

pub mod approximation;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metric;
pub mod numeric;

pub use error::{Error, Result};
