//! Closed-form antiderivatives for polynomials and sin/cos/exp of linear
//! arguments, with an `integral(..)` fallback for everything else.

use super::ast::{BinOp, Expr, Func};

const MAX_DEGREE: usize = 32;

/// Dense polynomial in `u`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Poly {
        Poly(vec![c])
    }

    fn trim(mut self) -> Poly {
        while self.0.len() > 1 && self.0.last() == Some(&0.0) {
            self.0.pop();
        }
        self
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let c = (0..n)
            .map(|i| self.0.get(i).unwrap_or(&0.0) + other.0.get(i).unwrap_or(&0.0))
            .collect();
        Poly(c).trim()
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect()).trim()
    }

    fn mul(&self, other: &Poly) -> Option<Poly> {
        if self.0.len() + other.0.len() > MAX_DEGREE + 2 {
            return None;
        }
        let mut c = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Some(Poly(c).trim())
    }

    pub fn integrate(&self) -> Poly {
        let mut c = vec![0.0];
        c.extend(self.0.iter().enumerate().map(|(i, a)| a / (i as f64 + 1.0)));
        Poly(c).trim()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    /// Sum of monomials, ascending powers.
    pub fn to_expr(&self) -> Expr {
        let mut acc: Option<Expr> = None;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mono = match i {
                0 => Expr::num(c.abs()),
                1 => Expr::mul(Expr::num(c.abs()), Expr::Var),
                _ => Expr::mul(
                    Expr::num(c.abs()),
                    Expr::pow(Expr::Var, Expr::num(i as f64)),
                ),
            };
            acc = Some(match acc {
                None if c < 0.0 => Expr::neg(mono),
                None => mono,
                Some(prev) if c < 0.0 => Expr::sub(prev, mono),
                Some(prev) => Expr::add(prev, mono),
            });
        }
        acc.unwrap_or_else(|| Expr::num(0.0))
    }
}

/// Recognise `e` as a polynomial in `u`.
pub fn as_poly(e: &Expr) -> Option<Poly> {
    match e {
        Expr::Number(x) => Some(Poly::constant(*x)),
        Expr::Var => Some(Poly(vec![0.0, 1.0])),
        Expr::Neg(a) => Some(as_poly(a)?.scale(-1.0)),
        Expr::Binary(op, a, b) => {
            let pa = as_poly(a)?;
            match op {
                BinOp::Add => Some(pa.add(&as_poly(b)?)),
                BinOp::Sub => Some(pa.add(&as_poly(b)?.scale(-1.0))),
                BinOp::Mul => pa.mul(&as_poly(b)?),
                BinOp::Div => {
                    let pb = as_poly(b)?;
                    if pb.degree() == 0 && pb.0[0] != 0.0 {
                        Some(pa.scale(1.0 / pb.0[0]))
                    } else {
                        None
                    }
                }
                BinOp::Pow => {
                    let pb = as_poly(b)?;
                    if pb.degree() != 0 {
                        return None;
                    }
                    let n = pb.0[0];
                    if n < 0.0 || n.fract() != 0.0 || n as usize * pa.degree() > MAX_DEGREE {
                        return None;
                    }
                    let mut out = Poly::constant(1.0);
                    for _ in 0..n as usize {
                        out = out.mul(&pa)?;
                    }
                    Some(out)
                }
            }
        }
        Expr::Call(..) | Expr::Integral { .. } => None,
    }
}

/// An antiderivative split into a polynomial part and a symbolic remainder,
/// so that `c + λ·∫f` can fold the polynomial coefficients exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Antiderivative {
    pub poly: Poly,
    pub rest: Option<Expr>,
}

impl Antiderivative {
    fn scale(self, s: f64) -> Antiderivative {
        Antiderivative {
            poly: self.poly.scale(s),
            rest: self.rest.map(|r| Expr::mul(Expr::num(s), r)),
        }
    }

    fn add(self, other: Antiderivative) -> Antiderivative {
        let rest = match (self.rest, other.rest) {
            (None, r) | (r, None) => r,
            (Some(a), Some(b)) => Some(Expr::add(a, b)),
        };
        Antiderivative {
            poly: self.poly.add(&other.poly),
            rest,
        }
    }

    /// `offset + scale * ∫`, rendered as one expression.
    pub fn affine(&self, offset: f64, scale: f64) -> Expr {
        let poly = self.poly.scale(scale).add(&Poly::constant(offset));
        let p = poly.to_expr();
        match &self.rest {
            None => p,
            Some(r) => Expr::add(p, Expr::mul(Expr::num(scale), r.clone())),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(&self.rest, Some(r) if contains_integral(r))
    }
}

fn contains_integral(e: &Expr) -> bool {
    match e {
        Expr::Integral { .. } => true,
        Expr::Number(_) | Expr::Var => false,
        Expr::Neg(a) | Expr::Call(_, a) => contains_integral(a),
        Expr::Binary(_, a, b) => contains_integral(a) || contains_integral(b),
    }
}

fn constant_value(e: &Expr) -> Option<f64> {
    if e.contains_var() {
        return None;
    }
    super::evaluate(e, 0.0).ok()
}

fn closed(e: &Expr) -> Option<Antiderivative> {
    if let Some(p) = as_poly(e) {
        return Some(Antiderivative {
            poly: p.integrate(),
            rest: None,
        });
    }
    match e {
        Expr::Neg(a) => Some(closed(a)?.scale(-1.0)),
        Expr::Binary(BinOp::Add, a, b) => Some(closed(a)?.add(closed(b)?)),
        Expr::Binary(BinOp::Sub, a, b) => Some(closed(a)?.add(closed(b)?.scale(-1.0))),
        Expr::Binary(BinOp::Mul, a, b) => {
            if let Some(c) = constant_value(a) {
                Some(closed(b)?.scale(c))
            } else if let Some(c) = constant_value(b) {
                Some(closed(a)?.scale(c))
            } else {
                None
            }
        }
        Expr::Binary(BinOp::Div, a, b) => {
            let c = constant_value(b)?;
            if c == 0.0 {
                return None;
            }
            Some(closed(a)?.scale(1.0 / c))
        }
        Expr::Call(f, arg) => {
            let p = as_poly(arg)?;
            if p.degree() != 1 {
                return None;
            }
            let slope = p.0[1];
            let arg = (**arg).clone();
            let rest = match f {
                Func::Sin => Expr::neg(Expr::call(Func::Cos, arg)),
                Func::Cos => Expr::call(Func::Sin, arg),
                Func::Exp => Expr::call(Func::Exp, arg),
                _ => return None,
            };
            Some(Antiderivative {
                poly: Poly::default(),
                rest: Some(Expr::div(rest, Expr::num(slope))),
            })
        }
        _ => None,
    }
}

/// Antiderivative of `e`; falls back to `integral(e, base)` when no closed
/// form is known. The integration constant is arbitrary either way.
pub fn antiderivative(e: &Expr, base: f64) -> Antiderivative {
    closed(e).unwrap_or_else(|| Antiderivative {
        poly: Poly::default(),
        rest: Some(Expr::integral(e.clone(), base)),
    })
}
