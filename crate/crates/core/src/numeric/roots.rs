//! Bracketed scalar root finding (Brent: inverse quadratic / secant steps
//! safeguarded by bisection).

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RootError {
    #[error("no sign change on [{a}, {b}] (f(a) = {fa}, f(b) = {fb})")]
    NotBracketed { a: f64, b: f64, fa: f64, fb: f64 },
    #[error("function evaluation failed at x = {0}")]
    Evaluation(f64),
    #[error("root finding did not converge within {0} iterations")]
    MaxIterations(usize),
}

const MAX_ITER: usize = 200;

/// Find `x` in `[a, b]` with `f(x) = 0`, given `f(a)` and `f(b)` of opposite
/// sign (or one of them zero). Stops when the bracket is narrower than
/// `xtol` (plus a few ulps of `x`).
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64) -> Result<f64, RootError>
where
    F: FnMut(f64) -> Option<f64>,
{
    let mut eval = |x: f64| f(x).filter(|v| !v.is_nan()).ok_or(RootError::Evaluation(x));
    let (mut a, mut b) = (a, b);
    let mut fa = eval(a)?;
    let mut fb = eval(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NotBracketed { a, b, fa, fb });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = eval(b)?;
    }
    Err(RootError::MaxIterations(MAX_ITER))
}

/// Bisect a predicate: `good(lo)` holds, `good(hi)` does not. Returns the
/// last point known to satisfy it, refined until the bracket cannot shrink.
pub fn bisect_boundary<P>(mut good: P, mut lo: f64, mut hi: f64) -> f64
where
    P: FnMut(f64) -> bool,
{
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if good(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_sqrt2() {
        let r = brent(|x| Some(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn brent_not_bracketed() {
        assert!(matches!(
            brent(|x| Some(x * x + 1.0), -1.0, 1.0, 1e-12),
            Err(RootError::NotBracketed { .. })
        ));
    }

    #[test]
    fn bisect_boundary_reaches_machine_precision() {
        let edge = bisect_boundary(|x| (1.0 - x * x) >= 0.0, 0.0, 2.0);
        assert!(edge <= 1.0 && 1.0 - edge < 4.0 * f64::EPSILON);
    }
}
