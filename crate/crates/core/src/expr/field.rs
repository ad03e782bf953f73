use super::{differentiate, evaluate, parse, DomainError, Expr, ExprError};

/// A real function of `u` together with its exact symbolic derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    expr: Expr,
    derivative: Expr,
}

impl ScalarField {
    pub fn new(expr: Expr) -> ScalarField {
        let derivative = differentiate(&expr);
        ScalarField { expr, derivative }
    }

    pub fn parse(text: &str) -> Result<ScalarField, ExprError> {
        Ok(ScalarField::new(parse(text)?))
    }

    pub fn constant(c: f64) -> ScalarField {
        ScalarField::new(Expr::num(c))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.derivative
    }

    pub fn value(&self, u: f64) -> Result<f64, DomainError> {
        evaluate(&self.expr, u)
    }

    pub fn derivative(&self, u: f64) -> Result<f64, DomainError> {
        evaluate(&self.derivative, u)
    }

    pub fn render(&self) -> String {
        self.expr.to_string()
    }

    /// Pointwise quotient `self / other` as a new field.
    pub fn quotient(&self, other: &ScalarField) -> ScalarField {
        ScalarField::new(Expr::div(self.expr.clone(), other.expr.clone()))
    }

    pub fn scaled(&self, c: f64) -> ScalarField {
        ScalarField::new(Expr::mul(Expr::num(c), self.expr.clone()))
    }
}

impl From<Expr> for ScalarField {
    fn from(e: Expr) -> Self {
        ScalarField::new(e)
    }
}

impl std::fmt::Display for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.expr.fmt(f)
    }
}
