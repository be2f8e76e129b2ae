//! Number tower: exact rationals, quadratic irrationals and binary floats.

pub mod bigfloat;
mod exact;
mod parse;
mod quadratic;

pub use bigfloat::{BigFloat, DEFAULT_PREC};
pub use exact::{ExactReal, Kind};
pub use parse::parse_exact;
pub use quadratic::{QuadIrrational, QuadOrRational};
pub use rug::{Integer, Rational};

use crate::real::Real;

/// (⌊x⌋, {x}).
pub fn floor_frac(x: &ExactReal) -> (Integer, ExactReal) {
    x.floor_frac()
}

pub fn invert(x: &ExactReal) -> crate::Result<ExactReal> {
    x.invert()
}

pub fn to_float(x: &ExactReal, prec: u32) -> BigFloat {
    x.to_float(prec)
}

/// Generic conversion used by evaluators.
pub fn to_real<T: Real>(x: &ExactReal, prec: u32) -> T {
    x.to_real(prec)
}
