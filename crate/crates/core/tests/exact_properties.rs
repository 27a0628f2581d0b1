use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use yc_core::exact::{partial_fractions, poly_shift, ratfunc_normalize, Rational, RatFunc, UniPoly};

/// Rationals whose numerator and denominator overflow 64 bits.
fn big_rational() -> impl Strategy<Value = Rational> {
    (any::<i64>(), any::<i64>(), 1i64..i64::MAX, 1i64..i64::MAX).prop_map(|(a, b, c, d)| {
        Rational::new(BigInt::from(a) * BigInt::from(b), BigInt::from(c) * BigInt::from(d))
    })
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-20i64..=20, 0..=max_deg + 1).prop_map(|c| UniPoly::from_ints(&c))
}

proptest! {
    #[test]
    fn rational_field_axioms(a in big_rational(), b in big_rational(), c in big_rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.recip()).is_one());
        }
    }

    #[test]
    fn normalize_is_idempotent(num in small_poly(4), den in small_poly(3)) {
        prop_assume!(!den.is_zero());
        let f = ratfunc_normalize(num.clone(), den.clone()).unwrap();
        let g = ratfunc_normalize(f.num().clone(), f.den().clone()).unwrap();
        prop_assert_eq!(&f, &g);
        prop_assert_eq!(f.num(), g.num());
        prop_assert_eq!(f.den(), g.den());
        prop_assert!(f.den().leading_coeff().unwrap().is_one());
        prop_assert_eq!(UniPoly::gcd(f.num(), f.den()).degree(), Some(0));
        // Same function as the input wherever both are defined.
        for x in -5i64..=5 {
            let xr = Rational::from_integer(x.into());
            let dv = den.eval(&xr);
            if !dv.is_zero() {
                prop_assert_eq!(f.eval(&xr).unwrap(), num.eval(&xr) / dv);
            }
        }
    }

    #[test]
    fn poly_shift_is_translation(p in small_poly(6), n0 in -50i64..50, t in -1000i64..1000) {
        let s = poly_shift(&p, n0);
        prop_assert_eq!(
            s.eval_int(&BigInt::from(t)),
            p.eval_int(&BigInt::from(n0 + t))
        );
    }

    #[test]
    fn poly_evaluation_is_a_ring_map(p in small_poly(5), q in small_poly(5), x in -30i64..30) {
        let xr = Rational::from_integer(x.into());
        prop_assert_eq!((&p * &q).eval(&xr), p.eval(&xr) * q.eval(&xr));
        prop_assert_eq!((&p + &q).eval(&xr), p.eval(&xr) + q.eval(&xr));
    }
}

/// Distinct linear factors `a n - b` with multiplicities, and a numerator.
fn pf_input() -> impl Strategy<Value = (Vec<(i64, i64, u32)>, UniPoly)> {
    let factor = (1i64..=4, -12i64..=12, 1u32..=2);
    (prop::collection::vec(factor, 1..=4), small_poly(6)).prop_filter_map("distinct roots", |(fs, num)| {
        let mut roots: Vec<Rational> = Vec::new();
        for (a, b, _) in &fs {
            let r = Rational::new((*b).into(), (*a).into());
            if roots.contains(&r) {
                return None;
            }
            roots.push(r);
        }
        Some((fs, num))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_fractions_round_trip((fs, num) in pf_input()) {
        prop_assume!(!num.is_zero());
        let mut factors = Vec::new();
        let mut den = UniPoly::one();
        for (a, b, m) in &fs {
            let f = UniPoly::from_ints(&[-b, *a]);
            den = &den * &f.pow(*m);
            factors.extend(std::iter::repeat_n(f, *m as usize));
        }
        let f = RatFunc::new(num, den).unwrap();
        let pf = partial_fractions(&f, &factors).unwrap();
        prop_assert_eq!(pf.recombine(), f);
    }
}
