//! Integers that are not `x^2 + y^2 + z^k` although no congruence forbids it.
//!
//! The crate generates three families of such exceptional targets, extracts a
//! per-`z` certificate of non-representability for each, checks the claims by
//! exhaustive search, and confirms local solvability at every prime by Hensel
//! lifting.

pub mod arith;
pub mod cli;
pub mod dec;
pub mod error;
pub mod families;
pub mod local;
pub mod search;
pub mod two_squares;

pub use error::{Error, Result};
pub use search::{ResidueClass, SearchSpec};
