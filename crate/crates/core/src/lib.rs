//! Exact and asymptotic enumeration of commuting matrix pairs over finite fields.

pub mod analytic;
pub mod arith;
pub mod asymptotics;
pub mod brute;
pub mod cohen_lenstra;
pub mod counts;
pub mod error;
pub mod validation;

pub use arith::{ExactRational, Partition, PrimePower};
pub use error::{Error, Result};
