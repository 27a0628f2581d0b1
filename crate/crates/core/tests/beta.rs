use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use yc_core::beta::{
    integral_exact, leading_constant_check, reduce_to_base, sphere_volume, verify_recurrences, IntegralIndex,
};
use yc_core::exact::{rat, PiScaled, Rational};
use yc_core::oracle::{eval_pi_scaled, integral_numeric, HpContext};
use yc_core::Error;

/// `Γ(h/2)` as `q · √π^s` by stepping `Γ(x + 1) = x Γ(x)` up from `Γ(1/2)` or `Γ(1)`.
fn gamma_half(h: u32) -> (BigRational, u32) {
    let (mut x, s) = if h.is_multiple_of(2) { (rat(1, 1), 0) } else { (rat(1, 2), 1) };
    let mut g = BigRational::one();
    while x < rat(h as i64, 2) {
        g *= &x;
        x += rat(1, 1);
    }
    (g, s)
}

/// `½ Γ((b+1)/2) Γ(a - (b+1)/2) / Γ(a)`.
fn beta_oracle(a: u32, b: u32) -> PiScaled {
    let (g1, s1) = gamma_half(b + 1);
    let (g2, s2) = gamma_half(2 * a - b - 1);
    let (g3, _) = gamma_half(2 * a);
    assert_eq!(s1, s2);
    PiScaled::new(g1 * g2 / g3 / rat(2, 1), s1)
}

fn convergent(a_max: u32) -> impl Iterator<Item = IntegralIndex> {
    (1..=a_max).flat_map(|a| (0..2 * a - 1).map(move |b| IntegralIndex::new(a, b)))
}

#[test]
fn closed_form_matches_gamma_oracle() {
    for idx in convergent(30) {
        assert_eq!(integral_exact(idx).unwrap(), beta_oracle(idx.a, idx.b), "{idx:?}");
    }
}

#[test]
fn pi_appears_exactly_for_even_b() {
    for idx in convergent(30) {
        let v = integral_exact(idx).unwrap();
        assert_eq!(v.pi_power(), u32::from(idx.b % 2 == 0), "{idx:?}");
        assert!(v.coefficient() > &Rational::zero());
    }
}

#[test]
fn recurrences_hold_up_to_thirty() {
    let r = verify_recurrences(30).unwrap();
    assert!(r.passed(), "{:?}", r.first_failure);
    assert!(r.checked > 2000);
    for &(rel, a, b) in &r.skipped {
        assert_eq!(rel, 3, "only the third relation can land on the boundary");
        assert!(2 * a <= b + 3, "({a}, {b})");
    }
}

#[test]
fn boundary_and_divergent_indices_are_refused() {
    for a in 1..=30u32 {
        assert!(matches!(
            integral_exact(IntegralIndex::new(a, 2 * a - 1)),
            Err(Error::LogarithmicIntegral { .. })
        ));
        assert!(matches!(
            integral_exact(IntegralIndex::new(a, 2 * a)),
            Err(Error::DivergentIntegral { .. })
        ));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_ratio_is_consistent(a in 1u32..=20, b in 0u32..40, c in 1u32..=20, d in 0u32..40) {
        let x = IntegralIndex::new(a, b);
        let y = IntegralIndex::new(c, d);
        prop_assume!(x.is_convergent() && y.is_convergent());
        if b % 2 != d % 2 {
            let refused = matches!(reduce_to_base(x, y), Err(Error::NoRationalRatio { .. }));
            prop_assert!(refused);
            return Ok(());
        }
        let r = reduce_to_base(x, y).unwrap();
        let back = reduce_to_base(y, x).unwrap();
        prop_assert!((&r * &back).is_one());
        let ix = integral_exact(x).unwrap();
        let iy = integral_exact(y).unwrap();
        prop_assert_eq!(iy.scale(&r), ix);
    }
}

#[test]
fn quadrature_agrees_with_closed_form() {
    let mut all: Vec<IntegralIndex> = convergent(30).collect();
    all.sort();
    let picks: Vec<IntegralIndex> = (0..50).map(|i| all[i * (all.len() - 1) / 49]).collect();
    for idx in picks {
        let num = integral_numeric(idx, 40).unwrap();
        let mut ctx = HpContext::new(40).unwrap();
        let ex = eval_pi_scaled(&mut ctx, &integral_exact(idx).unwrap());
        let d = ctx.sub(&num, &ex);
        let rel = ctx.div(&d, &ex).unwrap().to_f64().abs();
        assert!(rel < 1e-25, "{idx:?}: relative error {rel:e}");
    }
}

#[test]
fn sphere_volumes() {
    assert_eq!(sphere_volume(1).unwrap(), PiScaled::new(rat(2, 1), 1));
    assert_eq!(sphere_volume(2).unwrap(), PiScaled::new(rat(4, 1), 1));
    assert_eq!(sphere_volume(3).unwrap(), PiScaled::new(rat(2, 1), 2));
    // ω_m = 2π ω_{m-2} / (m - 1)
    for m in 3..=60i64 {
        let w = sphere_volume(m).unwrap();
        let prev = sphere_volume(m - 2).unwrap();
        let step = PiScaled::new(rat(2, m - 1), 1);
        assert_eq!(w.coefficient(), &(prev.coefficient() * step.coefficient()));
        assert_eq!(w.pi_power(), prev.pi_power() + 1);
    }
    assert!(sphere_volume(0).is_err());
}

#[test]
fn leading_constant_identity() {
    for n in 3..=40 {
        let r = leading_constant_check(n, 60).unwrap();
        assert!(r.sphere.residual.to_f64().abs() < 1e-25, "n = {n}");
    }
    let r = leading_constant_check(3, 60).unwrap();
    assert!((r.printed.residual.to_f64() - 0.2467).abs() < 1e-3);
}
