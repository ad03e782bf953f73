//! Expression tree for scalar functions of the single variable `u`.

use std::fmt;

/// Named one-argument functions understood by the DSL.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sqrt,
    Exp,
    Ln,
    Abs,
    Sech,
    Tanh,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sqrt,
        Func::Exp,
        Func::Ln,
        Func::Abs,
        Func::Sech,
        Func::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
            Func::Sech => "sech",
            Func::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// A node of the coefficient DSL.
///
/// `Number` literals are always finite and non-negative; a negative constant
/// is `Neg(Number(..))`. The smart constructors below keep that invariant and
/// fold literal arithmetic. The parser builds raw nodes without folding so
/// that rendering and re-parsing reproduces the tree exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    /// `∫_base^u body(r) dr`, the numeric antiderivative fallback.
    Integral { body: Box<Expr>, base: f64 },
}

impl Expr {
    pub fn num(x: f64) -> Expr {
        debug_assert!(x.is_finite());
        if x < 0.0 {
            Expr::Neg(Box::new(Expr::Number(-x)))
        } else {
            // also maps -0.0 to 0.0
            Expr::Number(x + 0.0)
        }
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn raw(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// Value of a literal constant (`Number` or negated `Number`).
    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Number(x) => Some(*x),
            Expr::Neg(inner) => match inner.as_ref() {
                Expr::Number(x) => Some(-*x),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_const(&self, value: f64) -> bool {
        self.as_const() == Some(value)
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Number(_) => false,
            Expr::Var => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.contains_var(),
            Expr::Binary(_, a, b) => a.contains_var() || b.contains_var(),
            Expr::Integral { .. } => true,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Number(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.depth(),
            Expr::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
            Expr::Integral { body, .. } => 1 + body.depth(),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        if let Some(c) = a.as_const() {
            return Expr::num(-c);
        }
        match a {
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if (x + y).is_finite() => return Expr::num(x + y),
            (Some(x), _) if x == 0.0 => return b,
            (_, Some(y)) if y == 0.0 => return a,
            (_, Some(y)) if y < 0.0 => return Expr::raw(BinOp::Sub, a, Expr::num(-y)),
            _ => {}
        }
        match b {
            Expr::Neg(inner) => Expr::raw(BinOp::Sub, a, *inner),
            b => Expr::raw(BinOp::Add, a, b),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if (x - y).is_finite() => return Expr::num(x - y),
            (_, Some(y)) if y == 0.0 => return a,
            (Some(x), _) if x == 0.0 => return Expr::neg(b),
            (_, Some(y)) if y < 0.0 => return Expr::raw(BinOp::Add, a, Expr::num(-y)),
            _ => {}
        }
        match b {
            Expr::Neg(inner) => Expr::raw(BinOp::Add, a, *inner),
            b => Expr::raw(BinOp::Sub, a, b),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if (x * y).is_finite() => return Expr::num(x * y),
            (Some(x), _) if x == 0.0 => return Expr::num(0.0),
            (_, Some(y)) if y == 0.0 => return Expr::num(0.0),
            (Some(x), _) if x == 1.0 => return b,
            (_, Some(y)) if y == 1.0 => return a,
            (Some(x), _) if x == -1.0 => return Expr::neg(b),
            (_, Some(y)) if y == -1.0 => return Expr::neg(a),
            // constants go first
            (None, Some(_)) => return Expr::mul(b, a),
            _ => {}
        }
        if let Some(x) = a.as_const() {
            match b {
                Expr::Neg(inner) => return Expr::mul(Expr::num(-x), *inner),
                Expr::Binary(BinOp::Mul, l, r) if l.as_const().is_some() => {
                    let y = l.as_const().unwrap_or(1.0);
                    if (x * y).is_finite() {
                        return Expr::mul(Expr::num(x * y), *r);
                    }
                    return Expr::raw(BinOp::Mul, a, Expr::Binary(BinOp::Mul, l, r));
                }
                b => return Expr::raw(BinOp::Mul, a, b),
            }
        }
        match (a, b) {
            (Expr::Neg(x), Expr::Neg(y)) => Expr::mul(*x, *y),
            (Expr::Neg(x), y) => Expr::neg(Expr::mul(*x, y)),
            (x, Expr::Neg(y)) => Expr::neg(Expr::mul(x, *y)),
            (x, y) => Expr::raw(BinOp::Mul, x, y),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y != 0.0 && (x / y).is_finite() => return Expr::num(x / y),
            (_, Some(y)) if y == 1.0 => return a,
            (_, Some(y)) if y == -1.0 => return Expr::neg(a),
            (Some(x), Some(y)) if x == 0.0 && y != 0.0 => return Expr::num(0.0),
            (Some(x), None) if x == 0.0 => return Expr::num(0.0),
            _ => {}
        }
        Expr::raw(BinOp::Div, a, b)
    }

    pub fn pow(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => {
                let v = x.powf(y);
                if v.is_finite() {
                    return Expr::num(v);
                }
            }
            (_, Some(y)) if y == 1.0 => return a,
            (_, Some(y)) if y == 0.0 => return Expr::num(1.0),
            _ => {}
        }
        Expr::raw(BinOp::Pow, a, b)
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        if let Some(x) = a.as_const() {
            if let Ok(v) = super::eval::apply_func(f, x) {
                // only fold values that render exactly
                if v.is_finite() && (v == 0.0 || v == 1.0) {
                    return Expr::num(v);
                }
            }
        }
        Expr::Call(f, Box::new(a))
    }

    pub fn integral(body: Expr, base: f64) -> Expr {
        if body.is_const(0.0) {
            return Expr::num(0.0);
        }
        Expr::Integral {
            body: Box::new(body),
            base,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render::render(self))
    }
}
