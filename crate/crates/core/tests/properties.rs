mod common;

use common::props::{self, aug, laurent, qt, ratfunc, rational};
use kch::dga::builtin_fixture;
use kch::gencurve::{graph_weight, CurveCatalog};
use kch::parse::{parse_operator_file, parse_polynomial};
use kch::ring::{LaurentPoly, PowerSeries, RatFunc, Rational, VarSet};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in aug(), b in aug(), c in aug()) {
        props::laurent_ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn ratfunc_field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        props::ratfunc_field_axioms(&a, &b, &c)?;
    }

    #[test]
    fn substitution_is_a_ring_map(a in aug(), b in aug(), r in -3i64..=3) {
        let v = VarSet::augmentation();
        let img = &LaurentPoly::var(&v, "ex").unwrap() * &LaurentPoly::var(&v, "ep").unwrap().pow_signed(r).unwrap();
        let sub = |p: &LaurentPoly| p.substitute("ex", &img).unwrap();
        prop_assert_eq!(sub(&(&a * &b)), &sub(&a) * &sub(&b));
        prop_assert_eq!(sub(&(&a + &b)), &sub(&a) + &sub(&b));
    }

    #[test]
    fn evaluation_commutes_with_products(a in aug(), b in aug(), x in 0.3f64..2.0, y in 0.3f64..2.0) {
        let pt = [("ex", Complex64::new(x, 0.1)), ("ep", Complex64::new(y, -0.2)), ("Q", Complex64::new(0.7, 0.3))];
        let lhs = (&a * &b).eval(&pt).unwrap();
        let rhs = a.eval(&pt).unwrap() * b.eval(&pt).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn ratfunc_division_inverts_multiplication(
        a in laurent(VarSet::quantum(), 3),
        b in laurent(VarSet::quantum(), 3),
    ) {
        prop_assume!(!b.is_zero());
        let (fa, fb) = (RatFunc::from_poly(a), RatFunc::from_poly(b));
        let q = fa.checked_div(&fb).unwrap();
        prop_assert_eq!(&q * &fb, fa);
    }

    #[test]
    fn polynomial_display_round_trips(a in aug()) {
        let v = VarSet::augmentation();
        prop_assert_eq!(parse_polynomial(&a.to_string(), &v).unwrap(), a);
    }

    #[test]
    fn qt_associativity_and_classical_limit(a in qt(), b in qt(), c in qt()) {
        props::qt_associative(&a, &b, &c)?;
        props::classical_homomorphism(&a, &b)?;
    }

    #[test]
    fn framing_is_an_automorphism(a in qt(), b in qt(), r in -2i64..=2) {
        prop_assert_eq!(a.mul(&b).frame(r), a.frame(r).mul(&b.frame(r)));
        prop_assert_eq!(a.frame(r).frame(-r), a);
    }

    #[test]
    fn operator_display_round_trips(a in qt()) {
        prop_assert_eq!(parse_operator_file(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), du in 0u32..=2, dv in 0u32..=2) {
        props::leibniz(&builtin_fixture("trefoil").unwrap(), seed, du, dv)?;
    }

    #[test]
    fn exp_turns_sums_into_products(a in prop::collection::vec(rational(), 8), b in prop::collection::vec(rational(), 8)) {
        let nil = |c: &[Rational]| PowerSeries::from_coeffs(7, std::iter::once(Rational::from_integer(0.into())).chain(c[1..].iter().cloned()));
        let (x, y) = (nil(&a), nil(&b));
        let lhs = x.add(&y).unwrap().exp().unwrap();
        let rhs = x.exp().unwrap().mul(&y.exp().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graph_weight_ignores_labels(perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(), mask in 0u8..64) {
        let cat = CurveCatalog::parse(
            "curve a w=2 chi=1 m=1 k=0 slk=1\ncurve b w=-1/3 chi=0 m=0 k=1 slk=0\nlink a b 3",
        ).unwrap();
        let verts = [0usize, 0, 1, 1];
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
        let w = graph_weight(&cat, &verts, &edges).unwrap();
        // vertex i of the relabelled graph is vertex perm[i] of the original
        let mut inv = [0usize; 4];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let verts2: Vec<usize> = perm.iter().map(|&p| verts[p]).collect();
        let edges2: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (inv[a], inv[b])).collect();
        prop_assert_eq!(graph_weight(&cat, &verts2, &edges2).unwrap(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn buchberger_postcondition(seed in any::<u64>()) {
        props::buchberger(seed)?;
    }
}
