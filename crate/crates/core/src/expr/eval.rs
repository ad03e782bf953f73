use super::ast::{BinOp, Expr, Func};
use crate::numeric::quad;

/// Why an evaluation produced no real value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    DivisionByZero,
    NegativeSqrt,
    NonPositiveLog,
    /// NaN or overflow, e.g. a negative base under a fractional power.
    Undefined,
    /// The antiderivative quadrature of an `integral(..)` node did not converge.
    Quadrature,
}

impl std::fmt::Display for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::NegativeSqrt => "square root of a negative number",
            DomainKind::NonPositiveLog => "logarithm of a non-positive number",
            DomainKind::Undefined => "undefined or non-finite value",
            DomainKind::Quadrature => "antiderivative quadrature failed",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{kind} in `{subexpr}` at u = {at}")]
pub struct DomainError {
    pub kind: DomainKind,
    pub subexpr: Expr,
    pub at: f64,
}

/// Raw kind-only failure used below the tree walk; the walker attaches the node.
pub(crate) fn apply_func(f: Func, x: f64) -> Result<f64, DomainKind> {
    let v = match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Sqrt => {
            if x < 0.0 {
                return Err(DomainKind::NegativeSqrt);
            }
            x.sqrt()
        }
        Func::Exp => x.exp(),
        Func::Ln => {
            if x <= 0.0 {
                return Err(DomainKind::NonPositiveLog);
            }
            x.ln()
        }
        Func::Abs => x.abs(),
        Func::Sech => 1.0 / x.cosh(),
        Func::Tanh => x.tanh(),
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(DomainKind::Undefined)
    }
}

fn fail(kind: DomainKind, e: &Expr, u: f64) -> DomainError {
    DomainError {
        kind,
        subexpr: e.clone(),
        at: u,
    }
}

pub fn evaluate(e: &Expr, u: f64) -> Result<f64, DomainError> {
    let v = match e {
        Expr::Number(x) => *x,
        Expr::Var => u,
        Expr::Neg(a) => -evaluate(a, u)?,
        Expr::Call(f, a) => {
            let x = evaluate(a, u)?;
            apply_func(*f, x).map_err(|k| fail(k, e, u))?
        }
        Expr::Binary(op, a, b) => {
            let x = evaluate(a, u)?;
            let y = evaluate(b, u)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == 0.0 {
                        return Err(fail(DomainKind::DivisionByZero, e, u));
                    }
                    x / y
                }
                BinOp::Pow => {
                    if y.fract() == 0.0 && y.abs() <= 64.0 {
                        x.powi(y as i32)
                    } else {
                        x.powf(y)
                    }
                }
            }
        }
        Expr::Integral { body, base } => {
            let mut inner_err = None;
            let r = quad::gauss_kronrod(
                |r| match evaluate(body, r) {
                    Ok(v) => Some(v),
                    Err(err) => {
                        inner_err.get_or_insert(err);
                        None
                    }
                },
                *base,
                u,
                1e-13,
            );
            match r {
                Ok(q) => q.value,
                Err(_) => {
                    return Err(inner_err.unwrap_or_else(|| fail(DomainKind::Quadrature, e, u)));
                }
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(fail(DomainKind::Undefined, e, u))
    }
}
