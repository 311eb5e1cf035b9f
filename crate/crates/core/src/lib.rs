//! Exact arithmetic for finite reflection groups acting on weight lattices:
//! orbit sums, the truncated characteristic map from the group ring to the
//! symmetric algebra, invariant lattices, and the exponents comparing them.

pub mod error;
pub mod exponents;
pub mod lattice;
pub mod phi;
pub mod polyring;
pub mod rootsys;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
