//! Exact intersection lattices and moduli spaces of projective line
//! arrangements.
//!
//! The core is generic over a [`Scalar`] (num-traits based); the concrete
//! instantiations used throughout are re-exported as aliases below.

pub mod exactfield;

pub use exactfield::{FieldValue, Rational, Scalar};
pub mod geometry;
pub mod combinatorics;
pub mod realization;
pub mod arrfile;
pub mod catalog;
