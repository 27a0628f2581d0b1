use proptest::prelude::*;

use yc_core::certify::{certify_intersection, certify_lemma_poly};
use yc_core::exact::{rat, Rational};
use yc_core::oracle::{crosscheck, quad_moment, HpContext};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// `√(p²/q²)` encloses `p/q`, and arithmetic on balls encloses the exact result.
    #[test]
    fn balls_enclose_exact_values(p in 1i64..1_000_000, q in 1i64..1_000_000, r in -1000i64..1000, digits in 30u32..90) {
        let mut ctx = HpContext::new(digits).unwrap();
        let x = rat(p, q);
        let sq = ctx.from_rational(&(&x * &x));
        let root = ctx.sqrt(&sq).unwrap();
        let exact = ctx.from_rational(&x);
        let diff = ctx.sub(&root, &exact);
        prop_assert!(diff.contains_zero());

        let y: Rational = rat(r, 7);
        let hy = ctx.from_rational(&y);
        let prod = ctx.mul(&exact, &hy);
        let want = ctx.from_rational(&(&x * &y));
        let gap = ctx.sub(&prod, &want);
        prop_assert!(gap.contains_zero());
        prop_assert!(gap.error_bound_f64() <= 1e-25 * (1.0 + want.to_f64().abs()));
    }
}

#[test]
fn lemma_and_tail_certificates_agree_numerically() {
    for omega in [3u32, 7, 10, 15] {
        let lemma = certify_lemma_poly(omega).unwrap();
        let inter = certify_intersection(omega, 60, 80, omega / 2).unwrap();
        let certs = lemma.certificates.iter().chain(inter.certificates());
        let r = crosscheck(certs, 60).unwrap();
        assert!(r.agrees(), "omega {omega}: {:?}", r.disagreements);
        assert!(r.evaluations > 0);
    }
}

#[test]
fn moment_leading_term_scales_with_eps() {
    let delta = rat(1, 10);
    let a = quad_moment(0, 2, 8, &rat(1, 1000), &delta, 40).unwrap();
    let b = quad_moment(0, 2, 8, &rat(1, 2000), &delta, 40).unwrap();
    let ratio = b.leading.to_f64() / a.leading.to_f64();
    assert!((ratio - 0.25).abs() < 1e-12, "{ratio}");
    assert!((a.value.to_f64() / a.leading.to_f64() - 1.0).abs() < 1e-3);
    assert!(quad_moment(20, 2, 8, &rat(1, 1000), &delta, 40).is_err());
}
