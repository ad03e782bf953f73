use super::{DissipativeODE, EtaField};
use crate::expr::{DomainError, Expr, ScalarField};

/// `φ1 = η/u`, `φ2 = h/η`: the factor pair with `φ1 φ2 = h/u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub phi1: ScalarField,
    pub phi2: ScalarField,
}

pub fn factorize(ode: &DissipativeODE, eta: &EtaField) -> Factorization {
    Factorization {
        phi1: ScalarField::new(Expr::div(eta.eta.expr().clone(), Expr::var())),
        phi2: ScalarField::new(Expr::div(ode.h.expr().clone(), eta.eta.expr().clone())),
    }
}

impl Factorization {
    /// `φ1 (φ1 + φ1' u) + g φ1 + h/u`.
    pub fn first_order_residual(&self, ode: &DissipativeODE, u: f64) -> Result<f64, DomainError> {
        let p = self.phi1.value(u)?;
        let dp = self.phi1.derivative(u)?;
        Ok(p * (p + dp * u) + ode.g.value(u)? * p + ode.h.value(u)? / u)
    }

    /// `φ1 φ2 - h/u`.
    pub fn product_residual(&self, ode: &DissipativeODE, u: f64) -> Result<f64, DomainError> {
        Ok(self.phi1.value(u)? * self.phi2.value(u)? - ode.h.value(u)? / u)
    }

    /// `φ1 + φ2 + φ1' u + g`.
    pub fn sum_residual(&self, ode: &DissipativeODE, u: f64) -> Result<f64, DomainError> {
        Ok(self.phi1.value(u)?
            + self.phi2.value(u)?
            + self.phi1.derivative(u)? * u
            + ode.g.value(u)?)
    }
}
