use std::collections::BTreeMap;

use super::{ck_root, AbelError, DissipativeODE, RootBranch};
use crate::expr::{antiderivative, DomainError, DomainKind, Expr, Func, ScalarField};
use crate::numeric::{linspace, roots::bisect_boundary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Provenance {
    /// `η = c h/g` for a Chiellini pair.
    Lemma2,
    /// `η = c (c0 + k∫g)`, with `h = g (c0 + k∫g)`.
    FromG,
    /// `η = ±c √(c1 + 2k∫h)`, with `g = h / (η/c)`.
    FromH,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A solution `η(u)` of the Abel equation of `ode`, so that `u' = η(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaField {
    pub eta: ScalarField,
    pub provenance: Provenance,
    /// `k`, `ck`, and `c0` or `c1`.
    pub constants: BTreeMap<String, f64>,
    /// The ODE this field solves; for the constructions the missing
    /// coefficient is the attached companion.
    pub ode: DissipativeODE,
    /// Where `η` is known to be real, when that was determined.
    pub domain: Option<(f64, f64)>,
}

impl EtaField {
    pub fn value(&self, u: f64) -> Result<f64, DomainError> {
        self.eta.value(u)
    }

    /// `η η' + g η + h` at `u`.
    pub fn abel_residual(&self, u: f64) -> Result<f64, DomainError> {
        let e = self.eta.value(u)?;
        let de = self.eta.derivative(u)?;
        // u'' = η η' along u' = η
        self.ode.residual(u, e, e * de)
    }

    /// `max |η η' + g η + h| / (1 + |h|)` over the points of `grid` where
    /// everything evaluates, with the number of such points.
    pub fn max_relative_residual(&self, grid: &[f64]) -> (f64, usize) {
        let mut worst = 0.0f64;
        let mut used = 0;
        for &u in grid {
            let (Ok(r), Ok(h)) = (self.abel_residual(u), self.ode.h.value(u)) else {
                continue;
            };
            worst = worst.max(r.abs() / (1.0 + h.abs()));
            used += 1;
        }
        (worst, used)
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }
}

fn constants(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(n, v)| (n.to_string(), *v)).collect()
}

/// `η = c_k h/g`. Undefined where `g = 0`.
pub fn lemma2_eta(ode: &DissipativeODE, k: f64, branch: RootBranch) -> Result<EtaField, AbelError> {
    let ck = ck_root(k, branch).ok_or(AbelError::NoRealRoot(k))?;
    let eta = Expr::mul(
        Expr::num(ck),
        Expr::div(ode.h.expr().clone(), ode.g.expr().clone()),
    );
    Ok(EtaField {
        eta: ScalarField::new(eta),
        provenance: Provenance::Lemma2,
        constants: constants(&[("k", k), ("ck", ck)]),
        ode: ode.clone(),
        domain: None,
    })
}

// a quadrature fallback only fails when evaluated, so probe it up front
fn probe_quadrature(e: &Expr, interval: (f64, f64)) -> Result<(), AbelError> {
    for u in linspace(interval.0, interval.1, 17) {
        if let Err(err) = crate::expr::evaluate(e, u) {
            if err.kind == DomainKind::Quadrature {
                return Err(AbelError::QuadratureFailure(err));
            }
        }
    }
    Ok(())
}

/// Given `g`: `η = c_k (c0 + k∫g)` and companion `h = g (c0 + k∫g)`.
///
/// `∫g` is symbolic when `g` is built from polynomials and `sin`, `cos`,
/// `exp` of linear arguments, otherwise a quadrature node based at the left
/// end of `interval`; either way its constant is absorbed into `c0`.
pub fn eta_from_g(
    g: &ScalarField,
    k: f64,
    c0: f64,
    ck: f64,
    interval: (f64, f64),
) -> Result<EtaField, AbelError> {
    let w = antiderivative(g.expr(), interval.0).affine(c0, k);
    probe_quadrature(&w, interval)?;
    let eta = Expr::mul(Expr::num(ck), w.clone());
    let h = Expr::mul(g.expr().clone(), w);
    Ok(EtaField {
        eta: ScalarField::new(eta),
        provenance: Provenance::FromG,
        constants: constants(&[("k", k), ("c0", c0), ("ck", ck)]),
        ode: DissipativeODE::new(g.clone(), ScalarField::new(h)),
        domain: Some(interval),
    })
}

/// Given `h`: `η = ±c_k √(c1 + 2k∫h)` and companion `g = h / (±√(c1 + 2k∫h))`.
///
/// The recorded domain is the longest sub-interval of `interval` on which
/// the radicand is non-negative, located on a grid and refined by bisection.
pub fn eta_from_h(
    h: &ScalarField,
    k: f64,
    c1: f64,
    ck: f64,
    sign: Sign,
    interval: (f64, f64),
) -> Result<EtaField, AbelError> {
    let radicand = antiderivative(h.expr(), interval.0).affine(c1, 2.0 * k);
    probe_quadrature(&radicand, interval)?;
    let domain = nonnegative_run(&radicand, interval)
        .ok_or(AbelError::EmptyDomain(interval.0, interval.1))?;
    let root = Expr::call(Func::Sqrt, radicand);
    let s = sign.value();
    let eta = Expr::mul(Expr::num(s * ck), root.clone());
    let g = Expr::div(h.expr().clone(), Expr::mul(Expr::num(s), root));
    Ok(EtaField {
        eta: ScalarField::new(eta),
        provenance: Provenance::FromH,
        constants: constants(&[("k", k), ("c1", c1), ("ck", ck)]),
        ode: DissipativeODE::new(ScalarField::new(g), h.clone()),
        domain: Some(domain),
    })
}

fn nonnegative_run(r: &Expr, (a, b): (f64, f64)) -> Option<(f64, f64)> {
    let ok = |u: f64| matches!(crate::expr::evaluate(r, u), Ok(v) if v >= 0.0);
    let grid = linspace(a, b, 257);
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (i, &u) in grid.iter().enumerate() {
        match (ok(u), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if best.is_none_or(|(bs, be)| i - 1 - s > be - bs) {
                    best = Some((s, i - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        let e = grid.len() - 1;
        if best.is_none_or(|(bs, be)| e - s > be - bs) {
            best = Some((s, e));
        }
    }
    let (s, e) = best?;
    let lo = if s == 0 {
        a
    } else {
        bisect_boundary(ok, grid[s], grid[s - 1])
    };
    let hi = if e == grid.len() - 1 {
        b
    } else {
        bisect_boundary(ok, grid[e], grid[e + 1])
    };
    Some((lo, hi))
}
