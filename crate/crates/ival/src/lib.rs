//! Outward-rounded interval arithmetic: real intervals, rectangular complex
//! boxes, interval linear algebra and rigorous elementary functions.
//!
//! The fundamental guarantee is containment: every operation returns an
//! enclosure of the exact mathematical result over all point inputs. All
//! values are immutable and all operations pure, so everything here is safe
//! to use from any number of threads.

pub mod complex;
pub mod elem;
pub mod fmt;
pub mod matrix;
pub mod real;

pub use complex::Complex;
pub use matrix::{linear_solve, IntervalMatrix, IntervalVector};
pub use real::Interval;

/// Errors from partial operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IvError {
    /// Input outside the mathematical domain (division by an interval
    /// containing zero, log touching the branch cut, ...).
    Domain(&'static str),
    /// A preconditioned pivot contained zero: the linear-system enclosure is
    /// inconclusive.
    SingularEnclosure,
}

impl std::fmt::Display for IvError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IvError::Domain(msg) => write!(f, "domain error: {msg}"),
            IvError::SingularEnclosure => write!(f, "singular interval enclosure"),
        }
    }
}

impl std::error::Error for IvError {}
