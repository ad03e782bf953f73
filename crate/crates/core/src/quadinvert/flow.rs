//! Travel time `∫ |dr| / |η(r)|` between two points of a monotone branch,
//! with square-root zeros of `η` allowed at either end.

use crate::expr::ScalarField;
use crate::numeric::quad::{self, QuadError};

const TOL: f64 = 1e-13;

pub(crate) struct Flow<'a> {
    pub eta: &'a ScalarField,
    /// Relative error at which an unconverged regular integral is still
    /// accepted; zero means strict. Used next to equilibria, where `η` is
    /// computed with cancellation and cannot meet the tolerance.
    pub accept: f64,
}

impl Flow<'_> {
    pub fn inv(&self, r: f64) -> Option<f64> {
        match self.eta.value(r) {
            Ok(v) if v != 0.0 => Some(1.0 / v.abs()),
            _ => None,
        }
    }

    /// Time between `x` and `y`; `sing_*` marks an end where `η ~ √|r - end|`.
    pub fn time(&self, x: f64, y: f64, sing_x: bool, sing_y: bool) -> Result<f64, QuadError> {
        if x == y {
            return Ok(0.0);
        }
        match (sing_x, sing_y) {
            (false, false) => self.regular(x, y),
            (true, false) => self.edge(x, y),
            (false, true) => self.edge(y, x),
            (true, true) => {
                let mid = 0.5 * (x + y);
                Ok(self.edge(x, mid)? + self.edge(y, mid)?)
            }
        }
    }

    fn regular(&self, x: f64, y: f64) -> Result<f64, QuadError> {
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        let gk = match quad::gauss_kronrod(|r| self.inv(r), a, b, TOL) {
            Ok(q) => return Ok(q.value),
            Err(e) => e,
        };
        let ts = match quad::tanh_sinh(|r| self.inv(r), a, b, TOL) {
            Ok(q) => return Ok(q.value),
            Err(e) => e,
        };
        match (gk, ts) {
            (
                QuadError::NotConverged { value: v1, error: e1 },
                QuadError::NotConverged { value: v2, error: e2 },
            ) => {
                let (value, error) = if e1 <= e2 { (v1, e1) } else { (v2, e2) };
                if error <= self.accept * value.abs().max(1.0) {
                    Ok(value)
                } else {
                    Err(QuadError::NotConverged { value, error })
                }
            }
            (_, e) => Err(e),
        }
    }

    /// Time from the singular end `e` to `x`, with `r = e + dir·s²`, under
    /// which `2s/|η|` is smooth. The first few ulps of `s` are taken as
    /// constant, since `η` cannot be resolved there.
    fn edge(&self, e: f64, x: f64) -> Result<f64, QuadError> {
        let dir = (x - e).signum();
        let big_s = (x - e).abs().sqrt();
        let phi = |s: f64| self.inv(e + dir * s * s).map(|w| 2.0 * s * w);
        let s_min = (64.0 * f64::EPSILON * e.abs().max(1e-3)).sqrt();
        if big_s <= 2.0 * s_min {
            let s = 0.5 * big_s;
            return phi(s).map(|v| v * big_s).ok_or(QuadError::Undefined(e + dir * s * s));
        }
        let head = phi(s_min).ok_or(QuadError::Undefined(e + dir * s_min * s_min))? * s_min;
        let body = match quad::gauss_kronrod(phi, s_min, big_s, TOL) {
            Ok(q) => q.value,
            Err(_) => quad::tanh_sinh(phi, s_min, big_s, TOL)?.value,
        };
        Ok(head + body)
    }
}
