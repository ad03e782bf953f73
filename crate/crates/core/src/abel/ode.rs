use crate::expr::{DomainError, ExprError, ScalarField};

/// `u'' + g(u) u' + h(u) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipativeODE {
    pub g: ScalarField,
    pub h: ScalarField,
}

impl DissipativeODE {
    pub fn new(g: ScalarField, h: ScalarField) -> DissipativeODE {
        DissipativeODE { g, h }
    }

    pub fn parse(g: &str, h: &str) -> Result<DissipativeODE, ExprError> {
        Ok(DissipativeODE {
            g: ScalarField::parse(g)?,
            h: ScalarField::parse(h)?,
        })
    }

    /// `u'' + g(u)u' + h(u)`.
    pub fn residual(&self, u: f64, du: f64, ddu: f64) -> Result<f64, DomainError> {
        Ok(ddu + self.g.value(u)? * du + self.h.value(u)?)
    }

    /// Right-hand side of the first-order system `(u, v)' = (v, -g v - h)`.
    pub fn acceleration(&self, u: f64, v: f64) -> Result<f64, DomainError> {
        Ok(-self.g.value(u)? * v - self.h.value(u)?)
    }
}

/// `η η' + g η + h = 0`, where `u' = η(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelSecondKind {
    pub g: ScalarField,
    pub h: ScalarField,
}

impl AbelSecondKind {
    pub fn residual(&self, u: f64, eta: f64, deta: f64) -> Result<f64, DomainError> {
        Ok(eta * deta + self.g.value(u)? * eta + self.h.value(u)?)
    }
}

/// `y' = cubic(u) y³ + quadratic(u) y²`, with `y = 1/η`.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelFirstKind {
    pub cubic: ScalarField,
    pub quadratic: ScalarField,
}

impl AbelFirstKind {
    pub fn rhs(&self, u: f64, y: f64) -> Result<f64, DomainError> {
        Ok(self.cubic.value(u)? * y * y * y + self.quadratic.value(u)? * y * y)
    }
}

pub fn reduce_to_abel(ode: &DissipativeODE) -> AbelSecondKind {
    AbelSecondKind {
        g: ode.g.clone(),
        h: ode.h.clone(),
    }
}

pub fn to_first_kind(abel: &AbelSecondKind) -> AbelFirstKind {
    AbelFirstKind {
        cubic: abel.h.clone(),
        quadratic: abel.g.clone(),
    }
}
