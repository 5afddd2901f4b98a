//! Verified linear algebra: eigenvalue enclosures and linear-system enclosures.
//!
//! Approximate factorizations come from `nalgebra`; nothing they return is
//! trusted. Every result here is re-derived in interval arithmetic.

mod eig;
mod exact;
mod solve;

pub use eig::{eig_approx, eig_enclose, psd_shift, ApproxEigen, EigEnclosure};
pub use exact::is_psd_exact;
pub use solve::{enclose_square, enclose_underdetermined};
