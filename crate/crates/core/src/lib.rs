//! Rigorous bounds and infeasibility certificates for linear conic programs.
//!
//! Given a problem over a product of semidefinite, second-order and
//! nonnegative-orthant cones, and approximate primal/dual solutions from any
//! solver, this crate computes lower and upper bounds on the optimal value
//! that hold despite floating-point rounding, and verifies approximate rays
//! as certificates of primal or dual infeasibility.

pub mod bounds;
pub mod certificates;
pub mod cones;
pub mod equicut;
mod error;
pub mod interval;
pub mod io;
pub mod linalg;
pub mod probgen;
pub mod problem;
pub mod sdpmat;

pub use bounds::{lower_bound, upper_bound, weak_duality_check, BoundKind, BoundReport};
pub use cones::{BlockVector, ConeSpec, UpperBoundX, UpperBoundY};
pub use error::{Error, Result};
pub use interval::Interval;
pub use problem::ConicProblem;
pub use sdpmat::SymMatrix;
