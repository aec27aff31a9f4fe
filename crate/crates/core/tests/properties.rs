//! Randomized algebraic properties of the exact kernel: rational text
//! round-trips, polynomial ring laws, and the Lie algebra axioms of the
//! bracket, over proptest-generated inputs.

use proptest::prelude::*;

use projcoh_core::lie::SlElement;
use projcoh_core::poly::MultiPoly;
use projcoh_core::rational::{format_rational, parse_rational, rat, ratio, Rational};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-200i64..=200, 1i64..=40).prop_map(|(n, d)| ratio(n, d))
}

/// A sparse polynomial on R^2 with fiber variables, small exponents, and
/// small rational coefficients.
fn arb_poly() -> impl Strategy<Value = MultiPoly> {
    let term = (
        proptest::collection::vec(0u32..=2, 2),
        proptest::collection::vec(0u32..=2, 2),
        -9i64..=9,
    );
    proptest::collection::vec(term, 0..6).prop_map(|terms| {
        let mut p = MultiPoly::zero(2);
        for (a, b, c) in terms {
            p = &p + &MultiPoly::monomial(2, &a, &b, rat(c));
        }
        p
    })
}

fn arb_sl(m: usize) -> impl Strategy<Value = SlElement> {
    let dim = SlElement::dim(m);
    proptest::collection::vec(-5i64..=5, dim).prop_map(move |c| {
        let coords: Vec<Rational> = c.into_iter().map(rat).collect();
        SlElement::from_coords(m, &coords)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trips(r in arb_rational()) {
        let text = format_rational(&r);
        prop_assert_eq!(parse_rational(&text).unwrap(), r);
    }

    #[test]
    fn polynomial_multiplication_commutes(p in arb_poly(), q in arb_poly()) {
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn polynomial_multiplication_distributes(
        p in arb_poly(),
        q in arb_poly(),
        r in arb_poly(),
    ) {
        let lhs = &p * &(&q + &r);
        let rhs = &(&p * &q) + &(&p * &r);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivations_satisfy_leibniz(p in arb_poly(), q in arb_poly()) {
        for i in 0..2 {
            let lhs = (&p * &q).d_x(i);
            let rhs = &(&p.d_x(i) * &q) + &(&p * &q.d_x(i));
            prop_assert_eq!(lhs, rhs);
            let lhs = (&p * &q).d_xi(i);
            let rhs = &(&p.d_xi(i) * &q) + &(&p * &q.d_xi(i));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bracket_is_antisymmetric(x in arb_sl(2), y in arb_sl(2)) {
        let lhs = x.bracket(&y);
        let rhs = y.bracket(&x).scale(&rat(-1));
        prop_assert_eq!(lhs.coords(), rhs.coords());
    }

    #[test]
    fn bracket_satisfies_jacobi(x in arb_sl(2), y in arb_sl(2), z in arb_sl(2)) {
        let total = x
            .bracket(&y.bracket(&z))
            .add(&y.bracket(&z.bracket(&x)))
            .add(&z.bracket(&x.bracket(&y)));
        prop_assert!(total.is_zero());
    }

    #[test]
    fn embedding_is_linear_and_respects_the_bracket(x in arb_sl(1), y in arb_sl(1)) {
        let sum = x.add(&y).embed();
        let mut expect = x.embed();
        for (c, d) in expect.comps.iter_mut().zip(y.embed().comps.iter()) {
            *c = &*c + d;
        }
        prop_assert_eq!(&sum, &expect);
        prop_assert_eq!(x.bracket(&y).embed(), x.embed().bracket(&y.embed()));
    }
}
