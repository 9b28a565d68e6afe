use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Syntax error in an expression, located by byte offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    /// The offending token text, empty at end of input.
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.found.is_empty() {
            write!(f, "unexpected end of input at offset {}", self.offset)?;
        } else {
            write!(f, "unexpected `{}` at offset {}", self.found, self.offset)?;
        }
        if !self.expected.is_empty() {
            write!(f, "; expected one of: {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(ParseError),
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("overflow: non-finite intermediate value")]
    Overflow,
    #[error("point ({u}, {v}) lies outside the parameter domain")]
    OutOfDomain { u: f64, v: f64 },
    #[error("degenerate metric at ({u}, {v}): det g = {det}")]
    DegenerateMetric { u: f64, v: f64, det: f64 },
    #[error("fundamental forms have a degenerate metric: det g = {det}")]
    SingularForms { det: f64 },
    #[error("invalid affine isometry: {0}")]
    InvalidIsometry(&'static str),
    #[error("quadrature did not converge after {subdivisions} subdivisions")]
    QuadratureNonConvergence { subdivisions: usize },
    #[error("phi data violate phi1^2 + phi2^2 = 0 at {re}+{im}i (residual {residual})")]
    Data2Violation { re: f64, im: f64, residual: f64 },
    #[error("|F| = {abs} is too close to zero at {re}+{im}i")]
    NearZeroF { re: f64, im: f64, abs: f64 },
    #[error("contour passes through a zero (|F| = {abs})")]
    ContourThroughZero { abs: f64 },
    #[error("winding number {value} is not close to an integer")]
    NonIntegerWinding { value: f64 },
    #[error("internal consistency: {0}")]
    InternalConsistency(String),
    #[error("Codazzi check failed: max residual {residual} > tol {tol}")]
    CodazziFailure { residual: f64, tol: f64 },
    #[error("L-path orders disagree by {discrepancy} (limit {limit})")]
    Compatibility { discrepancy: f64, limit: f64 },
    #[error("point ({u}, {v}) is not spacelike")]
    NonSpacelike { u: f64, v: f64 },
    #[error("surface leaves the slice x1 = x4: |x1 - x4| = {gap} at ({u}, {v})")]
    NotInSlice { u: f64, v: f64, gap: f64 },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("interval [{0}, {1}] must lie in (0, inf)")]
    RangeCrossesZero(f64, f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Syntax(e)
    }
}
