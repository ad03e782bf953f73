//! Incomplete elliptic integral of the first kind and Jacobi elliptic
//! functions in the parameter convention
//!
//! ```text
//! F(φ|m) = ∫₀^φ dθ / sqrt(1 - m sin²θ)
//! ```
//!
//! with `m` allowed to exceed 1. For `m ≤ 1` the integral goes through
//! Carlson's `R_F`; for `m > 1` the defining integral is evaluated directly on
//! the admissible interval `|φ| < asin(1/√m)` with tanh-sinh quadrature.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::numeric::quad;

const QUAD_TOL: f64 = 1e-13;
const INVERSION_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecialError {
    #[error("F(φ|m) undefined: m·sin²φ ≥ 1 on the path of integration (φ = {phi}, m = {m})")]
    OutsideDomain { phi: f64, m: f64 },
    #[error("am(ζ|m) undefined: |ζ| = {zeta} is not below the reach {reach} for m = {m}")]
    OutsideReach { zeta: f64, m: f64, reach: f64 },
    #[error("elliptic quadrature failed: {0}")]
    Quadrature(#[from] quad::QuadError),
    #[error("inversion of F(·|{m}) did not converge at ζ = {zeta}")]
    Inversion { zeta: f64, m: f64 },
}

/// The parameter `m` of `F(φ|m)`, with the admissible range it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParam {
    pub m: f64,
}

impl EllipticParam {
    pub fn new(m: f64) -> EllipticParam {
        EllipticParam { m }
    }

    /// Largest admissible amplitude: `asin(1/√m)` for `m > 1`, `π/2` at
    /// `m = 1` (exclusive in both cases), unbounded otherwise.
    pub fn max_amplitude(&self) -> f64 {
        if self.m > 1.0 {
            (1.0 / self.m.sqrt()).asin()
        } else if self.m == 1.0 {
            FRAC_PI_2
        } else {
            f64::INFINITY
        }
    }

    /// `F` at the maximal amplitude, i.e. the largest `|ζ|` that `am` accepts.
    pub fn reach(&self) -> f64 {
        let m = self.m;
        if m > 1.0 {
            // K(1/m)/√m
            carlson_rf(0.0, 1.0 - 1.0 / m, 1.0) / m.sqrt()
        } else {
            f64::INFINITY
        }
    }

    pub fn contains(&self, phi: f64) -> bool {
        phi.abs() < self.max_amplitude()
    }
}

/// Carlson's symmetric integral `R_F(x, y, z)` by the duplication algorithm.
/// At most one argument may be zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..100 {
        let mu = (x + y + z) / 3.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-3 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0)
                / mu.sqrt();
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
    }
    let mu = (x + y + z) / 3.0;
    1.0 / mu.sqrt()
}

/// Complete integral `K(m) = F(π/2|m)` for `m < 1`.
pub fn complete_k(m: f64) -> f64 {
    carlson_rf(0.0, 1.0 - m, 1.0)
}

fn rf_principal(phi: f64, m: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    s * carlson_rf(c * c, 1.0 - m * s * s, 1.0)
}

/// `F(φ|m)`. Odd in `φ`.
pub fn elliptic_f(phi: f64, m: f64) -> Result<f64, SpecialError> {
    if phi == 0.0 {
        return Ok(0.0);
    }
    if m == 0.0 {
        return Ok(phi);
    }
    let param = EllipticParam::new(m);
    if m >= 1.0 {
        if !param.contains(phi) {
            return Err(SpecialError::OutsideDomain { phi, m });
        }
        if m == 1.0 {
            return Ok(rf_principal(phi, m));
        }
        let a = phi.abs();
        let q = quad::tanh_sinh(
            |t| {
                let s = t.sin();
                let r = 1.0 - m * s * s;
                (r > 0.0).then(|| 1.0 / r.sqrt())
            },
            0.0,
            a,
            QUAD_TOL,
        )?;
        return Ok(q.value.copysign(phi));
    }
    // m < 1: periodic quasi-linear; F(φ + nπ) = F(φ) + 2nK
    let n = (phi / PI).round();
    let reduced = phi - n * PI;
    let base = rf_principal(reduced, m);
    if n == 0.0 {
        Ok(base)
    } else {
        Ok(base + 2.0 * n * complete_k(m))
    }
}

/// Gudermannian `gd(x) = asin(tanh x) = atan(sinh x)`; inverse of `F(·|1)`.
pub fn gudermann(x: f64) -> f64 {
    x.sinh().atan()
}

/// Amplitude `am(ζ|m)`: the `φ` with `F(φ|m) = ζ`.
pub fn jacobi_am(zeta: f64, m: f64) -> Result<f64, SpecialError> {
    if zeta == 0.0 {
        return Ok(0.0);
    }
    if m == 0.0 {
        return Ok(zeta);
    }
    if m == 1.0 {
        return Ok(gudermann(zeta));
    }
    if m > 1.0 {
        let param = EllipticParam::new(m);
        let reach = param.reach();
        if zeta.abs() >= reach {
            return Err(SpecialError::OutsideReach { zeta, m, reach });
        }
        let phi = invert_f(zeta.abs(), m, 0.0, param.max_amplitude())?;
        return Ok(phi.copysign(zeta));
    }
    let k = complete_k(m);
    let n = (zeta / (2.0 * k)).round();
    let r = zeta - 2.0 * n * k;
    let phi = if r == 0.0 {
        0.0
    } else {
        invert_f(r.abs(), m, 0.0, FRAC_PI_2)?.copysign(r)
    };
    Ok(phi + n * PI)
}

/// Safeguarded Newton on `F(φ|m) = target` with `φ` bracketed in `[lo, hi]`,
/// `0 ≤ target < F(hi)`.
fn invert_f(target: f64, m: f64, mut lo: f64, mut hi: f64) -> Result<f64, SpecialError> {
    let slope = |phi: f64| {
        let s = phi.sin();
        (1.0 - m * s * s).max(0.0).sqrt()
    };
    // start from the circular guess, pulled inside the bracket
    let mut phi = target.clamp(lo, hi);
    if phi >= hi {
        phi = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let f = elliptic_f(phi, m)? - target;
        if f == 0.0 {
            return Ok(phi);
        }
        if f > 0.0 {
            hi = phi;
        } else {
            lo = phi;
        }
        let mut next = phi - f * slope(phi);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - phi).abs() <= INVERSION_TOL * phi.abs().max(1.0) || hi - lo <= 4.0 * f64::EPSILON {
            return Ok(next);
        }
        phi = next;
    }
    Err(SpecialError::Inversion { zeta: target, m })
}

/// `(sn, cn, dn)` at `ζ` from the amplitude: `sin am`, `cos am`,
/// `sqrt(1 - m sn²)`.
pub fn jacobi_sn_cn_dn(zeta: f64, m: f64) -> Result<(f64, f64, f64), SpecialError> {
    let phi = jacobi_am(zeta, m)?;
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - m * sn * sn).max(0.0).sqrt();
    Ok((sn, cn, dn))
}

/// `sn(x|m)` on the whole real line, including `m > 1` beyond the reach of
/// `am`, via `sn(x|m) = sn(√m·x | 1/m)/√m`.
pub fn sn_real(x: f64, m: f64) -> Result<f64, SpecialError> {
    if m > 1.0 {
        let r = m.sqrt();
        Ok(jacobi_am(r * x, 1.0 / m)?.sin() / r)
    } else {
        Ok(jacobi_am(x, m)?.sin())
    }
}
