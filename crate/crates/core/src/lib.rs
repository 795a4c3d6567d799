//! Exact search and certification of projective center subspaces and
//! Tverberg type partitions.
//!
//! Every verdict is decided over the rationals. Searches may run in floating
//! point, but nothing is reported as passing unless an exact certificate
//! re-verifies.

pub mod arrangement;
pub mod centerpoint;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod partition;
pub mod pieces;
pub mod scalar;
pub mod topology;
pub mod tverberg;

pub use error::{Error, Result};
pub use scalar::{Scalar, Sign};
