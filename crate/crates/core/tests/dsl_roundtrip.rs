use proptest::prelude::*;
use proptest::sample::select;
use qzeta_core::dsl::{catalog_text, eval, parse, EvalContext, Expr, Indexed, IntExpr, CATALOG_IDS};
use qzeta_core::catalog::lookup;

fn int_expr(vars: &'static [char]) -> impl Strategy<Value = IntExpr> {
    let leaf = prop_oneof![
        (0i64..40).prop_map(IntExpr::Lit),
        select(vars).prop_map(IntExpr::Var),
        select(vars).prop_map(IntExpr::Parity),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        let pair = (inner.clone(), inner.clone());
        prop_oneof![
            pair.clone().prop_map(|(a, b)| IntExpr::Add(Box::new(a), Box::new(b))),
            pair.clone().prop_map(|(a, b)| IntExpr::Sub(Box::new(a), Box::new(b))),
            pair.clone().prop_map(|(a, b)| IntExpr::Mul(Box::new(a), Box::new(b))),
            pair.clone().prop_map(|(a, b)| IntExpr::Div(Box::new(a), Box::new(b))),
            pair.prop_map(|(a, b)| IntExpr::Pow(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| IntExpr::Neg(Box::new(a))),
            inner.prop_map(|a| IntExpr::Floor(Box::new(a))),
        ]
    })
}

fn series_expr(vars: &'static [char]) -> BoxedStrategy<Expr> {
    let leaf = prop_oneof![int_expr(vars).prop_map(Expr::Const), int_expr(vars).prop_map(Expr::QPow)];
    leaf.prop_recursive(3, 16, 2, move |inner| {
        let pair = (inner.clone(), inner.clone());
        prop_oneof![
            pair.clone().prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            pair.clone().prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            pair.clone().prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            pair.prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner, int_expr(vars)).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
        ]
    })
    .boxed()
}

fn indexed(var: char, body: Expr, infinite: bool) -> Indexed {
    Indexed { var, lower: IntExpr::Lit(0), upper: (!infinite).then_some(IntExpr::Lit(3)), body }
}

// a sum over k whose body may hold one nested sum or product over j
fn program() -> impl Strategy<Value = Expr> {
    let nested = (series_expr(&['k', 'j']), any::<bool>(), any::<bool>()).prop_map(|(body, is_sum, inf)| {
        let ix = Box::new(indexed('j', body, inf));
        if is_sum {
            Expr::Sum(ix)
        } else {
            Expr::Prod(ix)
        }
    });
    let body = prop_oneof![
        series_expr(&['k']),
        (series_expr(&['k']), nested).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
    ];
    body.prop_map(|b| Expr::Sum(Box::new(indexed('k', b, false))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parse_print_parse_is_stable(e in program()) {
        let first = parse(&e.to_string()).unwrap();
        let printed = first.to_string();
        let second = parse(&printed).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(printed, second.to_string());
    }

    #[test]
    fn reparsed_tree_evaluates_identically(e in program()) {
        let first = parse(&e.to_string()).unwrap();
        let second = parse(&first.to_string()).unwrap();
        let ctx = EvalContext::new(12);
        prop_assert_eq!(eval(&first, &ctx), eval(&second, &ctx));
    }
}

#[test]
fn shipped_texts_reproduce_builders_up_to_200() {
    for id in CATALOG_IDS {
        let (l, r) = catalog_text(id).unwrap();
        let (l, r) = (parse(l).unwrap(), parse(r).unwrap());
        let entry = lookup(id).unwrap();
        for order in (1..=200).step_by(19).chain([200]) {
            let (bl, br) = entry.build(order).unwrap();
            let ctx = EvalContext::new(order);
            assert_eq!(eval(&l, &ctx).unwrap(), bl, "{id} lhs at {order}");
            assert_eq!(eval(&r, &ctx).unwrap(), br, "{id} rhs at {order}");
        }
    }
}
