use super::*;
use proptest::prelude::*;

fn p(s: &str) -> Expr {
    parse(s).unwrap()
}

fn ev(s: &str, u: f64) -> f64 {
    evaluate(&p(s), u).unwrap()
}

#[test]
fn parse_examples() {
    assert_eq!(
        p("u*(1-u)"),
        Expr::raw(
            BinOp::Mul,
            Expr::Var,
            Expr::raw(BinOp::Sub, Expr::Number(1.0), Expr::Var)
        )
    );
    assert_eq!(p("sin(u)"), Expr::Call(Func::Sin, Box::new(Expr::Var)));
    assert_eq!(
        parse("c"),
        Err(ExprError::UnknownIdentifier {
            name: "c".into(),
            offset: 0
        })
    );
}

#[test]
fn parse_errors_carry_offsets() {
    match parse("2u") {
        Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 1),
        other => panic!("{other:?}"),
    }
    match parse("u + foo(u)") {
        Err(ExprError::UnknownFunction { name, offset }) => {
            assert_eq!(name, "foo");
            assert_eq!(offset, 4);
        }
        other => panic!("{other:?}"),
    }
    match parse("(u + 1") {
        Err(ExprError::Syntax {
            offset, expected, ..
        }) => {
            assert_eq!(offset, 6);
            assert!(expected.iter().any(|e| e.contains(')')));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse(""), Err(ExprError::Syntax { offset: 0, .. })));
    assert!(matches!(parse("u $ 2"), Err(ExprError::Syntax { offset: 2, .. })));
}

#[test]
fn precedence_and_associativity() {
    assert_eq!(ev("2+3*4", 0.0), 14.0);
    assert_eq!(ev("2^3^2", 0.0), 512.0);
    assert_eq!(ev("-u^2", 3.0), -9.0);
    assert_eq!(ev("8/4/2", 0.0), 1.0);
    assert_eq!(ev("8-4-2", 0.0), 2.0);
    assert_eq!(ev(" 2 *\t( u + 1 ) ", 1.0), 4.0);
    assert_eq!(ev("2^-1", 0.0), 0.5);
    assert_eq!(ev("1.5e1 + .5", 0.0), 15.5);
}

#[test]
fn evaluate_examples() {
    assert_eq!(ev("u*(1-u)", 0.5), 0.25);
    assert_eq!(ev("sin(u)", 0.0), 0.0);
    let err = evaluate(&p("sqrt(u)"), -1.0).unwrap_err();
    assert_eq!(err.kind, DomainKind::NegativeSqrt);
    assert_eq!(err.subexpr, p("sqrt(u)"));
    assert_eq!(
        evaluate(&p("1/u"), 0.0).unwrap_err().kind,
        DomainKind::DivisionByZero
    );
    assert_eq!(
        evaluate(&p("ln(u)"), 0.0).unwrap_err().kind,
        DomainKind::NonPositiveLog
    );
    assert_eq!(
        evaluate(&p("u^0.5"), -1.0).unwrap_err().kind,
        DomainKind::Undefined
    );
}

#[test]
fn function_table() {
    let u = 0.7;
    assert!((ev("tan(u)", u) - u.tan()).abs() < 1e-15);
    assert!((ev("exp(u)", u) - u.exp()).abs() < 1e-15);
    assert!((ev("abs(-u)", u) - u).abs() < 1e-15);
    assert!((ev("sech(u)", u) - 1.0 / u.cosh()).abs() < 1e-15);
    assert!((ev("tanh(u)", u) - u.tanh()).abs() < 1e-15);
    assert!((ev("cos(u)", u) - u.cos()).abs() < 1e-15);
}

#[test]
fn derivative_examples() {
    assert_eq!(differentiate(&p("u^2")), p("2*u"));
    assert_eq!(differentiate(&p("sin(u)")), p("cos(u)"));
    let d = differentiate(&p("u*(1-u)"));
    let fd = central_difference(&p("u*(1-u)"), 0.25, 1e-6).unwrap();
    assert!((evaluate(&d, 0.25).unwrap() - 0.5).abs() < 1e-14);
    assert!((fd - 0.5).abs() < 1e-9);
}

#[test]
fn derivative_of_abs_undefined_at_zero() {
    let d = differentiate(&p("abs(u)"));
    assert_eq!(evaluate(&d, 2.0).unwrap(), 1.0);
    assert_eq!(evaluate(&d, -2.0).unwrap(), -1.0);
    assert!(evaluate(&d, 0.0).is_err());
}

#[test]
fn integral_node() {
    let e = p("integral(u*sin(u), -0.5)");
    assert_eq!(e.to_string(), "integral(u*sin(u), -0.5)");
    // ∫ r sin r = sin r - r cos r
    let exact = |x: f64| x.sin() - x * x.cos();
    let v = evaluate(&e, 1.2).unwrap();
    assert!((v - (exact(1.2) - exact(-0.5))).abs() < 1e-13);
    assert_eq!(differentiate(&e), p("u*sin(u)"));
}

#[test]
fn folding_constructors() {
    assert_eq!(Expr::num(-2.0), p("-2"));
    assert_eq!(Expr::mul(Expr::num(-2.0), Expr::neg(p("cos(u)"))), p("2*cos(u)"));
    assert_eq!(Expr::add(Expr::num(2.0), Expr::num(3.0)), Expr::Number(5.0));
    assert_eq!(Expr::add(Expr::Var, Expr::num(-1.0)), p("u-1"));
    assert_eq!(Expr::mul(Expr::num(0.0), p("1/u")), Expr::Number(0.0));
}

#[test]
fn polynomial_antiderivative() {
    let a = antiderivative(&p("u*(1-u)"), 0.0);
    assert!(a.rest.is_none());
    assert_eq!(a.poly, Poly(vec![0.0, 0.0, 0.5, -1.0 / 3.0]));
    // c1 + 2k∫h with k = -2
    let radicand = a.affine(0.6, -4.0);
    assert_eq!(radicand.to_string(), "0.6-2*u^2+1.3333333333333333*u^3");
}

#[test]
fn trig_antiderivative() {
    let a = antiderivative(&p("sin(u)"), 0.0);
    assert_eq!(a.affine(1.0, -2.0), p("1+2*cos(u)"));
    let a = antiderivative(&p("3*cos(2*u)+exp(u)"), 0.0);
    let e = a.affine(0.0, 1.0);
    let d = differentiate(&e);
    for u in [-1.0f64, 0.3, 2.0] {
        let want = 3.0 * (2.0 * u).cos() + f64::exp(u);
        assert!((evaluate(&d, u).unwrap() - want).abs() < 1e-13);
    }
}

#[test]
fn antiderivative_fallback() {
    let a = antiderivative(&p("u*sin(u)"), 0.25);
    assert!(!a.is_closed_form());
    assert_eq!(a.rest, Some(p("integral(u*sin(u), 0.25)")));
}

#[test]
fn field_derivative_matches_finite_difference() {
    let fields = [
        "u*(1-u)/sqrt(0.6666666666666666-2*u^2+1.3333333333333333*u^3)",
        "sin(u)/sqrt(4+4*cos(u))",
        "1*sin(u)+sin(2*u)",
        "u*(1-u^2)",
        "sech(u)^2*tanh(u)",
    ];
    for text in fields {
        let f = ScalarField::parse(text).unwrap();
        for u in [0.15, 0.4, 0.8, 1.3] {
            let Ok(d) = f.derivative(u) else { continue };
            let fd = central_difference(f.expr(), u, 1e-6).unwrap();
            assert!(
                (d - fd).abs() <= 1e-6 * d.abs().max(1.0),
                "{text} at {u}: {d} vs {fd}"
            );
        }
    }
}

// Random well-formed trees, restricted to functions whose finite differences
// are numerically meaningful at moderate arguments.
fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Var),
        (1u32..300).prop_map(|n| Expr::Number(n as f64 / 100.0)),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (
                prop::sample::select(Func::ALL.to_vec()),
                inner.clone()
            )
                .prop_map(|(f, a)| Expr::Call(f, Box::new(a))),
            (
                prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div]),
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, a, b)| Expr::raw(op, a, b)),
            (inner.clone(), 1u32..4).prop_map(|(a, n)| Expr::raw(
                BinOp::Pow,
                a,
                Expr::Number(n as f64)
            )),
            (inner, 1u32..30).prop_map(|(a, n)| Expr::raw(
                BinOp::Pow,
                a,
                Expr::Number(n as f64 / 10.0)
            )),
        ]
    })
}

fn well_conditioned(e: &Expr, u: f64) -> bool {
    // stay away from singularities and overflow where the difference
    // quotient itself is unreliable
    [-1e-3, 0.0, 1e-3]
        .iter()
        .all(|dx| matches!(evaluate(e, u + dx), Ok(v) if v.abs() < 1e4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn derivative_agrees_with_central_difference(
        e in arb_expr().prop_filter("depth", |e| e.depth() <= 6),
        us in prop::collection::vec(-2.0f64..2.0, 10),
    ) {
        let d = differentiate(&e);
        for u in us {
            if !well_conditioned(&e, u) {
                continue;
            }
            let (Ok(fd), Ok(dv)) = (central_difference(&e, u, 1e-6), evaluate(&d, u)) else {
                continue;
            };
            // second-scale difference flags kinks and near-poles
            let Ok(fd2) = central_difference(&e, u, 1e-4) else { continue };
            if (fd - fd2).abs() > 1e-4 * (1.0 + fd.abs()) {
                continue;
            }
            prop_assert!(
                (dv - fd).abs() <= 1e-5 * (1.0 + fd.abs()),
                "{} at u={}: symbolic {} vs fd {}", e, u, dv, fd
            );
        }
    }

    #[test]
    fn render_parse_round_trip(e in arb_expr()) {
        let text = render(&e);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(parse(&render(&back)).unwrap(), back);
    }

    #[test]
    fn rendered_derivatives_reparse(e in arb_expr()) {
        let d = differentiate(&e);
        prop_assert_eq!(parse(&render(&d)).unwrap(), d);
    }
}
