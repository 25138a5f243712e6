//! Exact-arithmetic continued logarithms of types I, II and III in an
//! integer base, generalized continued fractions, their cylinder
//! intervals, term distributions and logarithmic Khinchine constants.

pub mod distribution;
pub mod error;
pub mod expand;
pub mod gcfpredicates;
pub mod intervals;
pub mod khinchine;
pub mod numtypes;
pub mod output;
pub mod precision;

pub use error::{Error, Result};
pub use numtypes::{Base, BigRational, PrecisionGuard};
