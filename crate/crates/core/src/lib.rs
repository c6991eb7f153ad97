//! Primitive sequences of probability measures on a compact interval.
//!
//! For a measure on `[a, b]` the primitive sequence is
//! `eps_n = E[(b - X)^n] / n!`, the n-fold antiderivative of the CDF anchored
//! at `a` and evaluated at `b`. This crate converts between moments and
//! primitive coordinates, screens sequences for admissibility, and computes
//! sharp bounds on CDF values and moments given a finite prefix, all in exact
//! rational arithmetic.

pub mod admissibility;
pub mod bounds;
pub mod cli;
pub mod distzoo;
pub mod error;
pub mod exactmath;
pub mod lp;
pub mod seqcore;

pub use error::{Error, Result};
pub use exactmath::{parse_rational, Polynomial, Rational};
