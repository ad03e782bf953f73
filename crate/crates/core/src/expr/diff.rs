use super::ast::{BinOp, Expr, Func};

/// Symbolic d/du. Literal arithmetic is folded by the smart constructors;
/// nothing else is simplified.
pub fn differentiate(e: &Expr) -> Expr {
    match e {
        Expr::Number(_) => Expr::num(0.0),
        Expr::Var => Expr::num(1.0),
        Expr::Neg(a) => Expr::neg(differentiate(a)),
        Expr::Integral { body, .. } => (**body).clone(),
        Expr::Call(f, a) => {
            let da = differentiate(a);
            if da.is_const(0.0) {
                return Expr::num(0.0);
            }
            let a = (**a).clone();
            let outer = match f {
                Func::Sin => Expr::call(Func::Cos, a),
                Func::Cos => Expr::neg(Expr::call(Func::Sin, a)),
                Func::Tan => Expr::div(
                    Expr::num(1.0),
                    Expr::pow(Expr::call(Func::Cos, a), Expr::num(2.0)),
                ),
                Func::Sqrt => Expr::div(
                    Expr::num(1.0),
                    Expr::mul(Expr::num(2.0), Expr::call(Func::Sqrt, a)),
                ),
                Func::Exp => Expr::call(Func::Exp, a),
                Func::Ln => Expr::div(Expr::num(1.0), a),
                // f/|f|, undefined at f = 0
                Func::Abs => Expr::div(a.clone(), Expr::call(Func::Abs, a)),
                Func::Sech => Expr::neg(Expr::mul(
                    Expr::call(Func::Sech, a.clone()),
                    Expr::call(Func::Tanh, a),
                )),
                Func::Tanh => Expr::pow(Expr::call(Func::Sech, a), Expr::num(2.0)),
            };
            Expr::mul(outer, da)
        }
        Expr::Binary(op, a, b) => {
            let da = differentiate(a);
            let db = differentiate(b);
            let (a, b) = ((**a).clone(), (**b).clone());
            match op {
                BinOp::Add => Expr::add(da, db),
                BinOp::Sub => Expr::sub(da, db),
                BinOp::Mul => Expr::add(Expr::mul(da, b.clone()), Expr::mul(a.clone(), db)),
                BinOp::Div => {
                    if !b.contains_var() {
                        return Expr::div(da, b);
                    }
                    Expr::div(
                        Expr::sub(Expr::mul(da, b.clone()), Expr::mul(a, db)),
                        Expr::pow(b, Expr::num(2.0)),
                    )
                }
                BinOp::Pow => {
                    if !b.contains_var() {
                        // c * a^(c-1) * a'
                        let lowered = Expr::sub(b.clone(), Expr::num(1.0));
                        Expr::mul(Expr::mul(b, Expr::pow(a, lowered)), da)
                    } else if !a.contains_var() {
                        // a^b * ln(a) * b'
                        Expr::mul(
                            Expr::mul(e.clone(), Expr::call(Func::Ln, a)),
                            db,
                        )
                    } else {
                        // a^b * (b' ln a + b a'/a)
                        Expr::mul(
                            e.clone(),
                            Expr::add(
                                Expr::mul(db, Expr::call(Func::Ln, a.clone())),
                                Expr::div(Expr::mul(b, da), a),
                            ),
                        )
                    }
                }
            }
        }
    }
}
