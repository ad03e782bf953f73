//! The separable form of the first-kind equation.
//!
//! With `y = 1/η` and `z = y h/g`, a Chiellini pair gives
//! `dz/du = (g²/h)(z³ + z² + k z)`, which separates into
//!
//! ```text
//! L(z) = ∫ dz / (z (z² + z + k)) = (1/k) ln|h/g| + const
//! ```
//!
//! `L` depends on the roots `z1, z2 = (-1 ± √(1-4k))/2` of `z² + z + k`:
//! two real roots, a double root at `k = 1/4`, or a complex pair.

use super::AbelError;

/// `L(z)`, the antiderivative of `1/(z(z²+z+k))`, up to a constant.
pub fn implicit_antiderivative(z: f64, k: f64) -> Result<f64, AbelError> {
    if k == 0.0 {
        return Err(AbelError::ZeroK);
    }
    let near = |r: f64| (z - r).abs() <= 4.0 * f64::EPSILON * (1.0 + r.abs());
    if near(0.0) {
        return Err(AbelError::Pole(z));
    }
    let disc = 1.0 - 4.0 * k;
    let value = if disc > 0.0 {
        let s = disc.sqrt();
        let z1 = 0.5 * (-1.0 + s);
        let z2 = 0.5 * (-1.0 - s);
        if near(z1) || near(z2) {
            return Err(AbelError::Pole(z));
        }
        // 1/(z(z-z1)(z-z2)) = A/z + B/(z-z1) + C/(z-z2), A = 1/(z1 z2) = 1/k
        let b = 1.0 / (z1 * (z1 - z2));
        let c = 1.0 / (z2 * (z2 - z1));
        z.abs().ln() / k + b * (z - z1).abs().ln() + c * (z - z2).abs().ln()
    } else if disc == 0.0 {
        if near(-0.5) {
            return Err(AbelError::Pole(z));
        }
        // 1/(z(z+1/2)²) = 4/z - 4/(z+1/2) - 2/(z+1/2)²
        let w = z + 0.5;
        4.0 * z.abs().ln() - 4.0 * w.abs().ln() + 2.0 / w
    } else {
        let s = (-disc).sqrt();
        let q = z * z + z + k;
        ((z.abs() / q.sqrt()).ln() - ((2.0 * z + 1.0) / s).atan() / s) / k
    };
    Ok(value)
}

/// `L(z) - (1/k) ln|h/g| - d`: zero along solutions of the z-equation for
/// the matching integration constant `d`.
pub fn abel_implicit_residual(
    z: f64,
    k: f64,
    h_over_g: f64,
    branch_constant: f64,
) -> Result<f64, AbelError> {
    if h_over_g == 0.0 {
        return Err(AbelError::ZeroQuotient);
    }
    Ok(implicit_antiderivative(z, k)? - h_over_g.abs().ln() / k - branch_constant)
}

/// `dz/du = (g²/h)(z³ + z² + k z)`.
pub fn z_rhs(z: f64, k: f64, g: f64, h: f64) -> f64 {
    g * g / h * z * (z * z + z + k)
}
