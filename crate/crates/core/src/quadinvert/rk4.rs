use super::{lattice, InvertError, Sample, SolutionCurve};
use crate::abel::DissipativeODE;

/// Classical RK4 on `u' = v`, `v' = -g(u)v - h(u)` with fixed step, sampled
/// on the same lattice `ζ0 + j·step` as [`invert`](super::invert).
pub fn rk4_reference(
    ode: &DissipativeODE,
    zeta0: f64,
    u0: f64,
    u_prime0: f64,
    span: (f64, f64),
    step: f64,
) -> Result<SolutionCurve, InvertError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(InvertError::InvalidStep(step));
    }
    let range = lattice(zeta0, span, step);
    let mut curve = SolutionCurve {
        samples: vec![],
        events: vec![],
        base_zeta: zeta0,
        base_u: u0,
    };
    if range.is_empty() {
        return Ok(curve);
    }
    let (jlo, jhi) = (*range.start(), *range.end());
    let zeta_at = |j: i64| zeta0 + j as f64 * step;

    let mut backward = vec![];
    let (mut u, mut v) = (u0, u_prime0);
    for j in (jlo..0).rev() {
        (u, v) = rk4_step(ode, u, v, -step).map_err(|source| InvertError::Domain {
            zeta: zeta_at(j + 1),
            source,
        })?;
        if j <= jhi {
            backward.push(Sample { zeta: zeta_at(j), u, u_prime: v });
        }
    }
    curve.samples.extend(backward.into_iter().rev());
    if jlo <= 0 && jhi >= 0 {
        curve.samples.push(Sample {
            zeta: zeta0,
            u: u0,
            u_prime: u_prime0,
        });
    }
    let (mut u, mut v) = (u0, u_prime0);
    for j in 1..=jhi {
        (u, v) = rk4_step(ode, u, v, step).map_err(|source| InvertError::Domain {
            zeta: zeta_at(j - 1),
            source,
        })?;
        if j >= jlo {
            curve.samples.push(Sample { zeta: zeta_at(j), u, u_prime: v });
        }
    }
    Ok(curve)
}

fn rk4_step(
    ode: &DissipativeODE,
    u: f64,
    v: f64,
    h: f64,
) -> Result<(f64, f64), crate::expr::DomainError> {
    let f = |u: f64, v: f64| ode.acceleration(u, v);
    let (k1u, k1v) = (v, f(u, v)?);
    let (k2u, k2v) = (v + 0.5 * h * k1v, f(u + 0.5 * h * k1u, v + 0.5 * h * k1v)?);
    let (k3u, k3v) = (v + 0.5 * h * k2v, f(u + 0.5 * h * k2u, v + 0.5 * h * k2v)?);
    let (k4u, k4v) = (v + h * k3v, f(u + h * k3u, v + h * k3v)?);
    Ok((
        u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
        v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    ))
}
