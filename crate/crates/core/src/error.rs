//! Error types shared across the crate.

use thiserror::Error;

/// Errors arising from scalar arithmetic and elementary functions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{func}: argument outside the function's domain")]
    Domain { func: &'static str },
    #[error("{func}: derivative singular at this argument")]
    DerivativeSingularity { func: &'static str },
    #[error("{func}: not differentiable over this scalar type")]
    NotDifferentiable { func: &'static str },
    #[error("the imaginary unit `i` is only available under complex evaluation")]
    ImaginaryUnitInRealContext,
    #[error("0 raised to a non-positive power")]
    ZeroToNonPositivePower,
}

/// A byte range into an expression source string.
pub type Span = (usize, usize);

/// An evaluation failure, annotated with the offending subexpression.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("evaluation error in `{snippet}` at byte {}: {source}", span.0)]
pub struct EvalError {
    #[source]
    pub source: MathError,
    pub span: Span,
    pub snippet: String,
}

impl EvalError {
    /// An unbound parameter is reported against the whole expression.
    pub fn unbound_param(name: &str, source_text: &str) -> Self {
        EvalError {
            source: MathError::Domain { func: "parameter binding" },
            span: (0, source_text.len()),
            snippet: format!("unbound parameter `{name}` in `{source_text}`"),
        }
    }
}

/// Parse-time failures for the expression language.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: found {found}, expected {}", expected.join(" | "))]
    Syntax {
        pos: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown function `{name}` at byte {pos}")]
    UnknownFunction { name: String, pos: usize },
    #[error("function `{name}` takes {expected} argument(s), got {got} (byte {pos})")]
    WrongArity {
        name: String,
        expected: usize,
        got: usize,
        pos: usize,
    },
    #[error("unknown identifier `{name}` at byte {pos}{hint}")]
    UnknownIdentifier {
        name: String,
        pos: usize,
        hint: String,
    },
    #[error("`{name}` is reserved and cannot be used as a variable name")]
    ReservedName { name: String },
    #[error("variable list must have one or two distinct names")]
    BadVariableList,
    #[error("unexpected character `{ch}` at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },
}
