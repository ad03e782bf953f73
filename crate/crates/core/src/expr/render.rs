//! Rendering back into the DSL grammar. Output always re-parses to the same tree.

use super::ast::{BinOp, Expr};

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Number(_) | Expr::Var | Expr::Call(..) | Expr::Integral { .. } => PREC_ATOM,
        Expr::Neg(_) => PREC_NEG,
        Expr::Binary(op, ..) => match op {
            BinOp::Add | BinOp::Sub => PREC_ADD,
            BinOp::Mul | BinOp::Div => PREC_MUL,
            BinOp::Pow => PREC_POW,
        },
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn render(e: &Expr) -> String {
    let mut out = String::new();
    write(e, &mut out);
    out
}

fn write_child(e: &Expr, min_prec: u8, out: &mut String) {
    if prec(e) < min_prec {
        out.push('(');
        write(e, out);
        out.push(')');
    } else {
        write(e, out);
    }
}

fn write(e: &Expr, out: &mut String) {
    match e {
        Expr::Number(x) => out.push_str(&format_number(*x)),
        Expr::Var => out.push('u'),
        Expr::Neg(a) => {
            out.push('-');
            write_child(a, PREC_NEG, out);
        }
        Expr::Call(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write(a, out);
            out.push(')');
        }
        Expr::Integral { body, base } => {
            out.push_str("integral(");
            write(body, out);
            out.push_str(", ");
            if *base < 0.0 {
                out.push('-');
            }
            out.push_str(&format_number(base.abs()));
            out.push(')');
        }
        Expr::Binary(op, a, b) => {
            let p = prec(e);
            match op {
                BinOp::Pow => {
                    write_child(a, PREC_ATOM, out);
                    out.push('^');
                    // the exponent is parsed at unary level; a leading minus there reads badly
                    if matches!(b.as_ref(), Expr::Neg(_)) {
                        out.push('(');
                        write(b, out);
                        out.push(')');
                    } else {
                        write_child(b, PREC_NEG, out);
                    }
                }
                _ => {
                    write_child(a, p, out);
                    out.push(op.symbol());
                    if matches!(b.as_ref(), Expr::Neg(_)) {
                        out.push('(');
                        write(b, out);
                        out.push(')');
                    } else {
                        write_child(b, p + 1, out);
                    }
                }
            }
        }
    }
}
