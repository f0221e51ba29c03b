use thiserror::Error;

use crate::graph::Graph;
use crate::words::Violation;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Variant names double as the domain error
/// names reported by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("words of different lengths cannot be compared: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("letter {letter} is outside the alphabet of size {alphabet}")]
    InvalidLetter { letter: u32, alphabet: usize },

    #[error("word of length {found} stored at level {level}")]
    BadLength { level: usize, found: usize },

    #[error("the empty word is not allowed here")]
    EmptyWord,

    #[error("not closed under subwords: {0}")]
    NotClosed(Violation),

    #[error("missing injection table entry for ({m},{n}){}", element.as_ref().map(|e| format!(" at element {e:?}")).unwrap_or_default())]
    MissingTable {
        m: usize,
        n: usize,
        element: Option<String>,
    },

    #[error("injection ({m},{n}) maps {element:?} outside the declared levels")]
    RangeError { m: usize, n: usize, element: String },

    #[error("duplicate element {element:?} at level {level}")]
    DuplicateElement { level: usize, element: String },

    #[error("input failed validation: {0}")]
    NotValid(String),

    #[error("horizon {horizon} is too small for overlap {k}; need at least {}", k + 1)]
    HorizonTooSmall { horizon: usize, k: usize },

    #[error("shape error: {0}")]
    ShapeError(String),

    #[error("product ({m},{n}) is not a coisometry")]
    NotCoisometric { m: usize, n: usize },

    #[error("products are not associative at ({m},{n},{l})")]
    NotAssociative { m: usize, n: usize, l: usize },

    #[error("{base}^{exponent} coordinates exceed the limit of 2^20")]
    SizeLimit { base: usize, exponent: usize },

    #[error("vertex {vertex} is outside a graph with {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("nested-block condition fails at m = {0}")]
    PreconditionViolated(usize),

    #[error("search budget exceeded; best lower bound {lower_bound}")]
    BudgetExceeded {
        lower_bound: u64,
        witness: Option<Graph>,
    },
}

impl Error {
    /// Short stable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::InvalidLetter { .. } => "InvalidLetter",
            Error::BadLength { .. } => "BadLength",
            Error::EmptyWord => "EmptyWord",
            Error::NotClosed(_) => "NotClosed",
            Error::MissingTable { .. } => "MissingTable",
            Error::RangeError { .. } => "RangeError",
            Error::DuplicateElement { .. } => "DuplicateElement",
            Error::NotValid(_) => "NotValid",
            Error::HorizonTooSmall { .. } => "HorizonTooSmall",
            Error::ShapeError(_) => "ShapeError",
            Error::NotCoisometric { .. } => "NotCoisometric",
            Error::NotAssociative { .. } => "NotAssociative",
            Error::SizeLimit { .. } => "SizeLimit",
            Error::VertexOutOfRange { .. } => "VertexOutOfRange",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
        }
    }
}
