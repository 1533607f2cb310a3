use std::f64::consts::PI;

use floquet_core::potential::{BinOp, Expr, Func};
use floquet_core::{
    fourier_coefficients, parse_potential, shift_half_period, validate_potential, Complex64,
    PotentialExpr,
};
use proptest::prelude::*;

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..2000).prop_map(|n| Expr::Real(f64::from(n) / 16.0)),
        Just(Expr::ImagUnit),
        Just(Expr::Pi),
        Just(Expr::Var),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (
                prop_oneof![
                    Just(BinOp::Add),
                    Just(BinOp::Sub),
                    Just(BinOp::Mul),
                    Just(BinOp::Div),
                    Just(BinOp::Pow)
                ],
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (
                prop_oneof![Just(Func::Cos), Just(Func::Sin), Just(Func::Exp)],
                inner
            )
                .prop_map(|(f, e)| Expr::call(f, e)),
        ]
    })
}

fn same(a: Complex64, b: Complex64) -> bool {
    let eq = |x: f64, y: f64| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan());
    eq(a.re, b.re) && eq(a.im, b.im)
}

/// `Σ a_n cos(2nx) + i b_n sin(2nx)` with real `a_n`, `b_n`.
fn pt_text(a: &[f64], b: &[f64]) -> String {
    let mut s = String::from("0");
    for (n, (a, b)) in a.iter().zip(b).enumerate() {
        let m = 2 * (n + 1);
        s.push_str(&format!("+{a}*cos({m}*x)+{b}i*sin({m}*x)"));
    }
    s
}

proptest! {
    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let printed = PotentialExpr::from_expr(e.clone()).to_string();
        let back = parse_potential(&printed).unwrap();
        prop_assert_eq!(back.root(), &e);
        for j in 0..64 {
            let x = j as f64 * PI / 64.0;
            prop_assert!(same(back.eval(x), e.eval(x)));
        }
    }

    #[test]
    fn pt_combinations_validate_and_stay_pt_after_shift(
        a in prop::collection::vec(-2.0f64..2.0, 1..4),
        b in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        let b = &b[..a.len()];
        let p = parse_potential(&pt_text(&a, b)).unwrap();
        prop_assert!(validate_potential(&p, 256, 1e-9).unwrap().passed());
        let q = shift_half_period(&p);
        prop_assert!(validate_potential(&q, 256, 1e-9).unwrap().passed());
    }

    #[test]
    fn fourier_round_trip_on_trigonometric_polynomials(
        a in prop::collection::vec(-2.0f64..2.0, 1..4),
        b in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        let b = &b[..a.len()];
        let p = parse_potential(&pt_text(&a, b)).unwrap();
        let c = fourier_coefficients(&p, 4, 64).unwrap();
        prop_assert!(c.round_trip_error(&p, 200) <= 1e-10);
        for (n, (a, b)) in a.iter().zip(b).enumerate() {
            let n = n as i64 + 1;
            // a cos + i b sin = (a+b)/2 e^{+} + (a-b)/2 e^{-}
            prop_assert!((c.get(n) - Complex64::new((a + b) / 2.0, 0.0)).norm() <= 1e-12);
            prop_assert!((c.get(-n) - Complex64::new((a - b) / 2.0, 0.0)).norm() <= 1e-12);
        }
    }
}

#[test]
fn non_pt_controls_fail_validation() {
    for s in ["cos(2*x)+i*cos(2*x)", "sin(2*x)", "exp(x)", "cos(x)"] {
        let p = parse_potential(s).unwrap();
        assert!(!validate_potential(&p, 256, 1e-9).unwrap().passed(), "{s}");
    }
}
