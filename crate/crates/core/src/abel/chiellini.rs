use serde::Serialize;

use super::{AbelError, DissipativeODE};
use crate::numeric::chebyshev_nodes;

const INTEGRABLE_TOL: f64 = 1e-8;
const NOT_INTEGRABLE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Integrable,
    NotIntegrable,
    Indeterminate,
}

/// Which root of `k c² + c + 1 = 0`, named after the sign in
/// `c = (-1 ± √(1-4k)) / 2k`. `Minus` gives `c = 1` at `k = -2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum RootBranch {
    Plus,
    #[default]
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChielliniReport {
    pub k: f64,
    pub residual: f64,
    pub verdict: Verdict,
    pub ck_roots: Vec<f64>,
    pub grid_used: Vec<f64>,
}

/// Real roots of `k c² + c + 1 = 0`, Minus branch first.
///
/// Uses `q = -(1 + √(1-4k))/2`, roots `q/k` and `1/q`, which avoids the
/// cancellation of the textbook formula as `k → 0`.
pub fn ck_roots(k: f64) -> Vec<f64> {
    let disc = 1.0 - 4.0 * k;
    if disc < 0.0 {
        return vec![];
    }
    let q = -0.5 * (1.0 + disc.sqrt());
    if k == 0.0 || disc == 0.0 {
        return vec![1.0 / q];
    }
    vec![q / k, 1.0 / q]
}

/// One root by branch. Where only one root exists both branches return it.
pub fn ck_root(k: f64, branch: RootBranch) -> Option<f64> {
    let roots = ck_roots(k);
    match (roots.as_slice(), branch) {
        ([], _) => None,
        ([c], _) => Some(*c),
        ([minus, _], RootBranch::Minus) => Some(*minus),
        ([_, plus], RootBranch::Plus) => Some(*plus),
        _ => unreachable!(),
    }
}

/// Estimate `k(u) = (h/g)'(u) / g(u)` on `n` Chebyshev nodes of `interval`
/// and decide whether it is constant.
pub fn classify_chiellini(
    ode: &DissipativeODE,
    interval: (f64, f64),
    n: usize,
) -> Result<ChielliniReport, AbelError> {
    if n < 16 {
        return Err(AbelError::TooFewPoints(n));
    }
    let (a, b) = interval;
    if !(b > a) {
        return Err(AbelError::EmptyInterval(a, b));
    }
    let quotient = ode.h.quotient(&ode.g);
    let nodes = chebyshev_nodes(a, b, n);
    let gs: Vec<Option<f64>> = nodes.iter().map(|&u| ode.g.value(u).ok()).collect();
    let gmax = gs.iter().flatten().fold(0.0f64, |m, g| m.max(g.abs()));
    let eps_g = 1e-9 * (1.0 + gmax);

    let mut grid_used = Vec::with_capacity(n);
    let mut ks = Vec::with_capacity(n);
    for (&u, g) in nodes.iter().zip(&gs) {
        let Some(g) = *g else { continue };
        if g.abs() < eps_g {
            continue;
        }
        let Ok(dq) = quotient.derivative(u) else { continue };
        let k = dq / g;
        if k.is_finite() {
            grid_used.push(u);
            ks.push(k);
        }
    }
    if ks.is_empty() {
        return Err(AbelError::AllPointsSingular);
    }
    let k = median(&ks);
    let residual = ks
        .iter()
        .map(|ku| (ku - k).abs() / (1.0 + k.abs()))
        .fold(0.0, f64::max);
    let verdict = if residual <= INTEGRABLE_TOL {
        Verdict::Integrable
    } else if residual > NOT_INTEGRABLE_TOL {
        Verdict::NotIntegrable
    } else {
        Verdict::Indeterminate
    };
    Ok(ChielliniReport {
        k,
        residual,
        verdict,
        ck_roots: ck_roots(k),
        grid_used,
    })
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
