//! The coefficient DSL: users write `g(u)` and `h(u)` as small expressions in
//! the single variable `u` (see the grammar in [`parser`]).

mod antideriv;
mod ast;
mod diff;
mod eval;
mod field;
mod parser;
mod render;

pub use antideriv::{antiderivative, as_poly, Antiderivative, Poly};
pub use ast::{BinOp, Expr, Func};
pub use diff::differentiate;
pub use eval::{evaluate, DomainError, DomainKind};
pub use field::ScalarField;
pub use parser::parse;
pub use render::{format_number, render};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: found {found}, expected one of: {}", expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("unknown identifier `{name}` at byte {offset} (the only variable is `u`)")]
    UnknownIdentifier { name: String, offset: usize },
}

/// Central difference `(f(u+h) - f(u-h)) / 2h`.
pub fn central_difference(e: &Expr, u: f64, h: f64) -> Result<f64, DomainError> {
    Ok((evaluate(e, u + h)? - evaluate(e, u - h)?) / (2.0 * h))
}

#[cfg(test)]
mod tests;
