//! Independence numbers of de Bruijn graphs `B(k, q)`.
//!
//! The crate computes exact values for small instances, evaluates the
//! closed-form bounds, builds the `k = 4` dyadic lower-bound construction and
//! checks phase certificates for binary graphs of odd prime length.

pub mod bounds;
pub mod certificate;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod mis;
pub mod prefix;
pub mod report;
pub mod words;

pub use error::{Error, Result};
pub use prefix::PrefixSet;
pub use words::Word;
