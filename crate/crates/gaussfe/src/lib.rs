//! Gauss-map series and their functional equations.

pub mod afe;
pub mod autocorr;
pub mod cf;
pub mod chowla;
pub mod error;
pub mod extensions;
pub mod numbers;
pub mod quad;
pub mod real;
pub mod series;
pub mod verify;
pub mod wilton;

pub use error::{Error, Result};
pub use numbers::{BigFloat, ExactReal, Integer, Rational};
pub use real::Real;

pub type Params64 = series::SeriesParams<f64>;
pub type ParamsBig = series::SeriesParams<BigFloat>;
pub type Eval64 = series::EvalResult<f64>;
pub type EvalBig = series::EvalResult<BigFloat>;
pub type Autocorr64 = autocorr::Autocorr<f64>;
pub type AutocorrBig = autocorr::Autocorr<BigFloat>;
