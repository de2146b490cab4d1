use cuspcenter_core::arith::{rat, Rational};
use cuspcenter_core::center::lemma_signs;
use cuspcenter_core::classes::{enumerate_classes, gl_order};
use cuspcenter_core::{reduce_parameters, validate_parameters, CyclotomicNumber, Polynomial};
use num_bigint::BigInt;
use proptest::prelude::*;

fn cyc(conductor: u64, coeffs: &[i64]) -> CyclotomicNumber {
    let terms: Vec<(i64, Rational)> = coeffs.iter().enumerate().map(|(e, &c)| (e as i64, rat(c))).collect();
    CyclotomicNumber::from_exponent_sum(conductor, terms.iter().map(|(e, c)| (*e, c)))
}

fn conductor() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 9, 25])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_is_a_ring_map(n in conductor(), a in prop::collection::vec(-5i64..5, 1..9), b in prop::collection::vec(-5i64..5, 1..9), k in 2u64..4) {
        let (x, y) = (cyc(n, &a), cyc(n, &b));
        let m = n * k;
        prop_assert_eq!((&x * &y).embed(m), &x.embed(m) * &y.embed(m));
        prop_assert_eq!((&x + &y).embed(m), &x.embed(m) + &y.embed(m));
    }

    #[test]
    fn valuation_is_additive(n in conductor(), a in prop::collection::vec(-6i64..6, 1..9), b in prop::collection::vec(-6i64..6, 1..9)) {
        let (x, y) = (cyc(n, &a), cyc(n, &b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let ell = if n % 3 == 0 { 3 } else if n % 5 == 0 { 5 } else { 7 };
        let v = (&x * &y).ell_valuation(ell).unwrap();
        prop_assert_eq!(v, x.ell_valuation(ell).unwrap() + y.ell_valuation(ell).unwrap());
    }

    #[test]
    fn galois_action_is_multiplicative(a in prop::collection::vec(-4i64..4, 1..9), b in prop::collection::vec(-4i64..4, 1..9), k in prop::sample::select(vec![1i64, 2, 4, 5, 7, 8])) {
        let (x, y) = (cyc(9, &a), cyc(9, &b));
        prop_assert_eq!((&x * &y).galois(k), &x.galois(k) * &y.galois(k));
    }

    #[test]
    fn polynomial_division(a in prop::collection::vec(-9i64..9, 1..7), b in prop::collection::vec(-9i64..9, 1..4)) {
        let (p, d) = (Polynomial::from_ints(&a), Polynomial::from_ints(&b));
        prop_assume!(!d.is_zero());
        let (quo, rem) = p.div_rem(&d);
        prop_assert_eq!(&(&quo * &d) + &rem, p);
        prop_assert!(rem.is_zero() || rem.degree() < d.degree());
    }

    #[test]
    fn reduction_preserves_r(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), ell in prop::sample::select(vec![3u64, 5, 7, 11, 13]), n in 2u64..7, d in 1u64..4) {
        if let Ok(ps) = validate_parameters(q, ell, n, d) {
            let red = reduce_parameters(&ps);
            prop_assert_eq!(red.r, ps.r);
            prop_assert_eq!(red.d, 1);
            prop_assert_eq!(red.n * ps.d, ps.n);
            prop_assert!(lemma_signs(&ps).is_ok());
        }
    }
}

#[test]
fn class_equation_holds() {
    for (q, n) in [(2, 2), (3, 2), (2, 3), (4, 2), (3, 3), (2, 4)] {
        let classes = enumerate_classes(q, n, 1 << 20).unwrap();
        let total: BigInt = classes.iter().map(|c| c.class_size.clone()).sum();
        assert_eq!(total, gl_order(q, n), "GL_{n}(F_{q})");
    }
}
