//! Exact scalars: rationals, univariate and small multivariate polynomials
//! over Q, number fields `Q[x]/(m)`, factoring and Sturm root isolation.

mod factor;
mod mpoly;
mod numfield;
mod poly;
mod scalar;
pub mod sturm;

pub use factor::{
    approx_complex_roots, ddf_certifies_irreducible, factor_order, factor_over_q, rational_roots,
    simplest_rational, Factorization,
};
pub use mpoly::{Exp, MPoly, QMPoly, NVARS};
pub use numfield::{alg_arith, ordered_roots, AlgNum, AlgOp, FieldValue, NumberField};
pub use poly::{Poly, QPoly};
pub use scalar::{fmt_rational, int, parse_rational, rat, rational_to_f64, Rational, Scalar};
pub use sturm::Interval;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different number fields")]
    FieldMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}

/// `sturm_real_roots`: distinct real root count and isolating intervals of
/// width at most 2^-40.
pub fn sturm_real_roots(p: &QPoly) -> Result<(usize, Vec<Interval>), ExactError> {
    let ivs = sturm::isolate_real_roots(p, &sturm::default_width())?;
    Ok((ivs.len(), ivs))
}
