//! Recovering `u(ζ)` from `u' = η(u)`: the quadrature `ζ - ζ0 = ∫ du/η`, its
//! inversion along monotone branches, and a fixed-step RK4 integrator of the
//! second-order ODE to check against.

mod flow;
mod invert;
mod rk4;

pub use invert::{invert, invert_with, quadrature_map, InvertOptions};
pub use rk4::rk4_reference;

use serde::Serialize;

use crate::expr::DomainError;
use crate::numeric::quad::QuadError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub zeta: f64,
    pub u: f64,
    pub u_prime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EventKind {
    /// `η` vanished with `h ≠ 0`; the curve continues on the reflected branch.
    TurningPoint,
    /// Asymptotic approach to an equilibrium (`η = h = 0`); the curve stops.
    DomainEdge,
    /// The walk stopped early: blow-up or too many turning points.
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub zeta: f64,
    pub u: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionCurve {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    pub base_zeta: f64,
    pub base_u: f64,
}

impl SolutionCurve {
    pub fn sample_at(&self, zeta: f64) -> Option<&Sample> {
        self.samples.iter().find(|s| (s.zeta - zeta).abs() < 1e-9)
    }

    /// Largest `|u_a - u_b|` over samples present in both curves at the same `ζ`,
    /// with the number of matched samples.
    pub fn max_deviation(&self, other: &SolutionCurve) -> (f64, usize) {
        let mut worst = 0.0f64;
        let mut n = 0;
        let mut j = 0;
        for s in &self.samples {
            while j < other.samples.len() && other.samples[j].zeta < s.zeta - 1e-9 {
                j += 1;
            }
            if let Some(o) = other.samples.get(j) {
                if (o.zeta - s.zeta).abs() <= 1e-9 {
                    worst = worst.max((o.u - s.u).abs());
                    n += 1;
                }
            }
        }
        (worst, n)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvertError {
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("η is not defined (or is zero on both sides) at the initial point u0 = {0}")]
    NotAdmissible(f64),
    #[error("η vanishes or changes sign inside the integration range, near u = {0}")]
    InteriorZero(f64),
    #[error("quadrature of 1/η failed: {0}")]
    QuadratureFailure(#[from] QuadError),
    #[error("could not bracket the inverse at ζ = {0}")]
    BracketFailure(f64),
    #[error("coefficient evaluation failed at ζ = {zeta}: {source}")]
    Domain { zeta: f64, source: DomainError },
}

/// Integer lattice indices `j` with `zeta0 + j·step` in `span`.
pub(crate) fn lattice(zeta0: f64, span: (f64, f64), step: f64) -> std::ops::RangeInclusive<i64> {
    let (a, b) = span;
    if !(b > a) {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    }
    let slack = 1e-9;
    let lo = ((a - zeta0) / step - slack).ceil() as i64;
    let hi = ((b - zeta0) / step + slack).floor() as i64;
    lo..=hi
}
