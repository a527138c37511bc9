//! Exact construction and verification of band-limited MSF wavelet sets.
//!
//! All arithmetic is over numbers `(a + b·ρ)·π` with rational `a`, `b` and
//! a bound ratio `ρ = ε/π`, so every partition and dimension count is
//! decided exactly.

pub mod catalog;
pub mod cli;
pub mod construction;
pub mod dimension;
pub mod error;
pub mod exec;
pub mod fold;
pub mod interval;
pub mod io;
pub mod scalar;

pub use error::{ConstructionError, DimensionError, IoError, ScalarError, SetError};
pub use exec::Exec;
pub use fold::{
    fold_dyadic, fold_mod_2pi, wavelet_verdict, wavelet_verdict_with, FoldFailure, FoldReport,
    Sign, Verdict,
};
pub use interval::{BoolOp, Interval, IntervalSet};
pub use scalar::{EpsBinding, Rational, Scalar};
