use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted: only {reliable} quotients are reliable")]
    PrecisionExhausted { reliable: usize },
    #[error("depth of a float input is undecidable")]
    Undecidable,
    #[error("depth {depth} is too small (need more than {needed})")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("tolerance {tol:e} unachievable below cutoff cap {cap:e}")]
    ToleranceUnachievable { tol: f64, cap: f64 },
    #[error("evaluation failed at level {index}: {source}")]
    AtLevel { index: usize, source: Box<Error> },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("capacity exceeded: need {need}, capacity {capacity}")]
    Capacity { need: u64, capacity: u64 },
    #[error("pole: n*x is an integer at n = {n}")]
    Pole { n: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn at_level(index: usize, e: Error) -> Error {
        Error::AtLevel { index, source: Box::new(e) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
