use thiserror::Error;

use crate::ring::Monomial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient variable counts differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{divisor} does not divide {dividend}")]
    NotDivisible { dividend: String, divisor: String },

    #[error("empty input")]
    EmptyInput,

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// `step` is 1-based; `colon_generator` is the first non-linear
    /// minimal generator of the colon ideal at that step.
    #[error("no linear quotients: colon ideal at step {step} has generator {colon_generator}")]
    NotLinearQuotients { step: usize, colon_generator: Monomial },

    #[error("{count} generators exceed the exhaustive search bound {bound}")]
    BoundExceeded { count: usize, bound: usize },

    #[error("ideal is not of class {0}")]
    WrongClass(&'static str),

    #[error("{0} is not in the ideal")]
    NotInIdeal(Monomial),

    #[error("decomposition function is not regular: set(g(x{s}*{generator})) = {found:?} is not contained in set({generator})")]
    NotRegular {
        generator: Monomial,
        s: usize,
        found: Vec<usize>,
    },

    #[error("generator degrees are not nondecreasing at position {position}")]
    DegreeOrderViolation { position: usize },

    #[error("map does not commute with the differentials in homological degree {degree}")]
    NonCommuting { degree: usize },

    #[error("duplicate basis label in homological degree {degree}")]
    DuplicateLabel { degree: usize },

    #[error("not a DG homomorphism: {0}")]
    NotDgHomomorphism(String),

    #[error("pairing into the top degree is singular in degree {degree}")]
    SingularPairing { degree: usize },

    #[error("entry is not divisible: {0}")]
    DivisibilityFailure(String),

    #[error("relation f = A g fails in row {row}")]
    RelationViolation { row: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("generator on line {divisor_line} divides generator on line {multiple_line}")]
    NonMinimal {
        divisor_line: usize,
        multiple_line: usize,
    },

    #[error("not a matroid: no exchange for element {element} of basis {first:?} against {second:?}")]
    NotAMatroid {
        first: Vec<usize>,
        second: Vec<usize>,
        element: usize,
    },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// True for errors that report a mathematical property of a well-formed
    /// input (the input was understood, the construction does not apply).
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::NotLinearQuotients { .. }
                | Error::NotRegular { .. }
                | Error::DegreeOrderViolation { .. }
                | Error::WrongClass(_)
                | Error::NotInIdeal(_)
                | Error::NotAMatroid { .. }
                | Error::NotDgHomomorphism(_)
                | Error::SingularPairing { .. }
                | Error::DivisibilityFailure(_)
                | Error::RelationViolation { .. }
                | Error::BoundExceeded { .. }
        )
    }
}
