use alloc::string::String;

use thiserror::Error;

/// Failure to turn potential source text into an expression tree.
///
/// Positions are 1-based character columns; a position one past the last
/// character means "end of input".
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("non-ASCII character at position {pos}")]
    NonAscii { pos: usize },
    #[error("unexpected character '{found}' at position {pos}")]
    UnexpectedChar { found: char, pos: usize },
    #[error("unknown identifier '{name}' at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("invalid number '{text}' at position {pos}")]
    InvalidNumber { text: String, pos: usize },
    #[error("unbalanced parenthesis at position {pos}")]
    UnbalancedParen { pos: usize },
    #[error("dangling operator '{op}' at position {pos}")]
    DanglingOperator { op: char, pos: usize },
    #[error("unexpected {found} at position {pos}")]
    UnexpectedToken { found: String, pos: usize },
    #[error("function '{name}' requires parentheses at position {pos}")]
    MissingCallParens { name: &'static str, pos: usize },
    #[error("function '{name}' takes 1 argument but {given} were supplied at position {pos}")]
    Arity {
        name: &'static str,
        given: usize,
        pos: usize,
    },
}

impl ParseError {
    /// Column the error points at, if it has one.
    pub fn position(&self) -> Option<usize> {
        match *self {
            ParseError::Empty => None,
            ParseError::NonAscii { pos }
            | ParseError::UnexpectedChar { pos, .. }
            | ParseError::UnknownIdentifier { pos, .. }
            | ParseError::InvalidNumber { pos, .. }
            | ParseError::UnbalancedParen { pos }
            | ParseError::DanglingOperator { pos, .. }
            | ParseError::UnexpectedToken { pos, .. }
            | ParseError::MissingCallParens { pos, .. }
            | ParseError::Arity { pos, .. } => Some(pos),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The propagated state overflowed the guard or stopped being finite.
    #[error("non-finite or overflowing state at x = {x} (E = {energy})")]
    NonFinite { energy: f64, x: f64 },
    #[error("transfer records were computed at different energies ({0} vs {1})")]
    EnergyMismatch(f64, f64),
    #[error("transfer record has no midpoint values; enable record_midpoint")]
    MissingMidpoint,
    #[error("discriminant is not real at E = {energy}: |Im Δ| = {imag:e}")]
    NonRealDiscriminant { energy: f64, imag: f64 },
    #[error("e^(ikπ) is not an eigenvalue of the monodromy matrix (relative residual {residual:e})")]
    NotEigenvalue { residual: f64 },
    #[error(
        "eigenvalue iteration did not converge: dimension {dimension}, {iterations} sweeps, \
         ‖A‖_F = {frobenius:e}, unconverged subdiagonal {subdiagonal:e}"
    )]
    NoConvergence {
        dimension: usize,
        iterations: usize,
        frobenius: f64,
        subdiagonal: f64,
    },
}
