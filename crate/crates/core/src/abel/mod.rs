//! The Abel-equation side of `u'' + g(u)u' + h(u) = 0`.
//!
//! Writing `u' = η(u)` turns the ODE into the second-kind Abel equation
//! `η η' + g η + h = 0`; `y = 1/η` gives the first-kind form
//! `y' = h y³ + g y²`. When `(h/g)' = k g` for a constant `k` the equation
//! is solved by `η = c h/g` with `k c² + c + 1 = 0`.

mod chiellini;
mod eta;
mod factor;
mod implicit;
mod ode;

pub use chiellini::{ck_root, ck_roots, classify_chiellini, ChielliniReport, RootBranch, Verdict};
pub use eta::{eta_from_g, eta_from_h, lemma2_eta, EtaField, Provenance, Sign};
pub use factor::{factorize, Factorization};
pub use implicit::{abel_implicit_residual, implicit_antiderivative, z_rhs};
pub use ode::{reduce_to_abel, to_first_kind, AbelFirstKind, AbelSecondKind, DissipativeODE};

use crate::expr::DomainError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AbelError {
    #[error("classification needs at least 16 grid points, got {0}")]
    TooFewPoints(usize),
    #[error("interval [{0}, {1}] has no positive length")]
    EmptyInterval(f64, f64),
    #[error("|g| is below the singular threshold (or a coefficient is undefined) at every grid point")]
    AllPointsSingular,
    #[error("k c² + c + 1 = 0 has no real root for k = {0}")]
    NoRealRoot(f64),
    #[error("radicand c1 + 2k∫h is negative on all of [{0}, {1}]")]
    EmptyDomain(f64, f64),
    #[error("antiderivative quadrature failed: {0}")]
    QuadratureFailure(DomainError),
    #[error("z = {0} is a pole of 1/(z(z²+z+k))")]
    Pole(f64),
    #[error("the implicit solution needs k ≠ 0 (the right-hand side carries 1/k)")]
    ZeroK,
    #[error("h/g must be nonzero in the implicit solution")]
    ZeroQuotient,
}
