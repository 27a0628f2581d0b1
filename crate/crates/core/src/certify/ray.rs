//! Constant-sign proofs for polynomials and rational functions on a ray
//! `n ≥ n0`.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::cert::{Claim, ClaimKind, Domain, Expr, NRange, RayWitness, Sign, SignCert, Witness};
use crate::error::Error;
use crate::exact::{RatFunc, Rational, UniPoly};

/// Integers checked one by one before giving up on the pointwise fallback.
const POINTWISE_LIMIT: u64 = 1 << 20;

fn uniform_sign(shifted: &UniPoly) -> Option<Sign> {
    let c0 = shifted.coeff(0);
    if c0.is_zero() {
        return None;
    }
    let s = Sign::of(&c0);
    shifted
        .coeffs()
        .iter()
        .all(|c| c.is_zero() || Sign::of(c) == s)
        .then_some(s)
}

/// Canonical Sturm chain, each entry replaced by its primitive part.
pub fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.primitive_part()];
    let dp = p.derivative();
    if dp.is_zero() {
        return chain;
    }
    chain.push(dp.primitive_part());
    loop {
        let len = chain.len();
        let (_, r) = chain[len - 2].div_rem(&chain[len - 1]).expect("nonzero divisor");
        if r.is_zero() {
            break;
        }
        chain.push((-r).primitive_part());
    }
    chain
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let nz: Vec<i8> = signs.filter(|s| *s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

fn variations_at(chain: &[UniPoly], x: &BigInt) -> usize {
    variations(chain.iter().map(|q| crate::exact::rational::sign_of(&q.eval_int(x))))
}

fn variations_at_infinity(chain: &[UniPoly]) -> usize {
    variations(chain.iter().map(|q| q.sign_at_infinity()))
}

/// `1 + max |a_i / a_d|`, an upper bound for every real root.
fn cauchy_bound(p: &UniPoly) -> BigInt {
    let lead = p.leading_coeff().expect("nonzero").abs();
    let d = p.degree().unwrap_or(0);
    let m = p.coeffs()[..d]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    m.ceil().to_integer() + BigInt::one()
}

/// Root-free certificate on `[n0, ∞)`: Descartes shift first, then Sturm.
pub(crate) fn root_free(p: &UniPoly, n0: &BigInt) -> Option<(Sign, RayWitness)> {
    let shifted = p.shift(n0);
    if let Some(s) = uniform_sign(&shifted) {
        return Some((s, RayWitness::DescartesShift { n0: n0.clone(), shifted }));
    }
    let at = p.eval_int(n0);
    if at.is_zero() {
        return None;
    }
    let chain = sturm_chain(p);
    let v0 = variations_at(&chain, n0);
    let vinf = variations_at_infinity(&chain);
    (v0 == vinf).then(|| {
        (
            Sign::of(&at),
            RayWitness::Sturm {
                n0: n0.clone(),
                chain,
                variations_at_n0: v0,
                variations_at_infinity: vinf,
            },
        )
    })
}

/// Sign of `p` on the integers `n ≥ n0` (and on every real `n ≥ n0` unless
/// the pointwise fallback was needed).
pub fn poly_ray_witness(p: &UniPoly, n0: &BigInt) -> Result<(Sign, RayWitness), Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(found) = root_free(p, n0) {
        return Ok(found);
    }
    // Real roots lie in (n0, ∞); check the integers below the root bound.
    let bound = cauchy_bound(p).max(n0 + 1);
    let span = &bound - n0;
    if span > BigInt::from(POINTWISE_LIMIT) {
        return Err(Error::SignChange {
            n0: n0.to_string(),
            detail: format!("real roots present and root bound {bound} is too far for a pointwise check"),
        });
    }
    let s = Sign::of(&p.eval_int(n0));
    let mut n = n0.clone();
    while n < bound {
        let v = Sign::of(&p.eval_int(&n));
        if v != s || v == Sign::Zero {
            return Err(Error::SignChange {
                n0: n0.to_string(),
                detail: format!("p({n0}) is {s} but p({n}) is {v}"),
            });
        }
        n += 1;
    }
    let (ts, tail) = root_free(p, &bound).ok_or_else(|| Error::SignChange {
        n0: n0.to_string(),
        detail: format!("no root-free certificate beyond the root bound {bound}"),
    })?;
    if ts != s {
        return Err(Error::SignChange {
            n0: n0.to_string(),
            detail: format!("sign {s} below {bound} but {ts} beyond"),
        });
    }
    Ok((
        s,
        RayWitness::Pointwise {
            n0: n0.clone(),
            tail_from: bound,
            tail: Box::new(tail),
        },
    ))
}

/// Checks a ray witness against `p`, returning the sign it proves.
pub fn replay_ray(p: &UniPoly, w: &RayWitness) -> Result<Sign, Error> {
    let fail = |m: String| Err(Error::Replay(m));
    match w {
        RayWitness::DescartesShift { n0, shifted } => {
            if &p.shift(n0) != shifted {
                return fail(format!("shifted polynomial does not equal p({n0} + t)"));
            }
            uniform_sign(shifted).ok_or_else(|| Error::Replay("shifted coefficients have mixed signs".into()))
        }
        RayWitness::Sturm {
            n0,
            chain,
            variations_at_n0,
            variations_at_infinity: vinf,
        } => {
            if chain.is_empty() || (chain.len() < 2 && p.degree().unwrap_or(0) > 0) {
                return fail("Sturm chain too short".into());
            }
            let positive_multiple = |a: &UniPoly, b: &UniPoly| -> bool {
                match (a.leading_coeff(), b.leading_coeff()) {
                    (Some(la), Some(lb)) => {
                        let r = la / lb;
                        r.is_positive() && &b.scale(&r) == a
                    }
                    _ => false,
                }
            };
            if !positive_multiple(&chain[0], p) {
                return fail("chain does not start with p".into());
            }
            if chain.len() > 1 && !positive_multiple(&chain[1], &p.derivative()) {
                return fail("second chain entry is not p'".into());
            }
            for i in 2..chain.len() {
                let (_, r) = chain[i - 2].div_rem(&chain[i - 1])?;
                if !positive_multiple(&chain[i], &-r) {
                    return fail(format!("chain entry {i} is not the negated remainder"));
                }
            }
            if chain.len() > 1 {
                let (_, r) = chain[chain.len() - 2].div_rem(&chain[chain.len() - 1])?;
                if !r.is_zero() {
                    return fail("chain is truncated".into());
                }
            }
            let at = p.eval_int(n0);
            if at.is_zero() {
                return fail(format!("p vanishes at {n0}"));
            }
            let v0 = variations_at(chain, n0);
            let v1 = variations_at_infinity(chain);
            if v0 != *variations_at_n0 || v1 != *vinf {
                return fail("recorded sign variations do not match".into());
            }
            if v0 != v1 {
                return fail(format!("{} real roots beyond {n0}", v0 as i64 - v1 as i64));
            }
            Ok(Sign::of(&at))
        }
        RayWitness::Pointwise { n0, tail_from, tail } => {
            if tail.n0() != tail_from || tail_from <= n0 {
                return fail("pointwise tail does not start at the recorded bound".into());
            }
            let s = Sign::of(&p.eval_int(n0));
            if s == Sign::Zero {
                return fail(format!("p vanishes at {n0}"));
            }
            let mut n = n0.clone();
            while &n < tail_from {
                if Sign::of(&p.eval_int(&n)) != s {
                    return fail(format!("sign changes at n = {n}"));
                }
                n += 1;
            }
            let ts = replay_ray(p, tail)?;
            if ts != s {
                return fail("tail sign differs from the pointwise sign".into());
            }
            Ok(s)
        }
    }
}

fn expression_cert(expr: Expr, sign: Sign, n0: u64, witness: Witness, started: Instant) -> SignCert {
    let statement = match &expr {
        Expr::Poly { poly } => format!("sign({poly}) = {sign}"),
        Expr::RatFunc { f } => format!("sign({f}) = {sign}"),
        _ => format!("sign = {sign}"),
    };
    let method = match &witness {
        Witness::Ray(w) => w.method(),
        Witness::RatFunc { num, den, .. } => num.method().max(den.method()),
        _ => unreachable!("ray certificates only"),
    };
    SignCert {
        claim: Claim {
            kind: ClaimKind::Expression,
            statement,
            expression: expr,
            sign,
        },
        domain: Domain {
            omega: None,
            k: None,
            pair: None,
            n_range: NRange::ray(n0),
        },
        method,
        witness,
        verified: true,
        wall_time_ms: started.elapsed().as_millis() as u64,
    }
}

/// Certificate that `p` keeps one sign for `n ≥ n0`.
pub fn poly_sign_on_ray(p: &UniPoly, n0: u64) -> Result<SignCert, Error> {
    let started = Instant::now();
    let (s, w) = poly_ray_witness(p, &BigInt::from(n0))?;
    Ok(expression_cert(
        Expr::Poly { poly: p.clone() },
        s,
        n0,
        Witness::Ray(w),
        started,
    ))
}

/// Witness data for a rational function: denominator root-free on the ray,
/// numerator of constant sign.
pub fn ratfunc_ray_witness(f: &RatFunc, n0: &BigInt) -> Result<(Sign, Witness), Error> {
    let den = f.den();
    let (den_sign, den_w) = match root_free(den, n0) {
        Some(x) => x,
        None => return Err(Error::PoleOnRay(n0.to_string())),
    };
    let (num_sign, num_w) = poly_ray_witness(f.num(), n0)?;
    Ok((
        num_sign * den_sign,
        Witness::RatFunc {
            num_sign,
            num: num_w,
            den_sign,
            den: den_w,
        },
    ))
}

pub fn ratfunc_sign_on_ray(f: &RatFunc, n0: u64) -> Result<SignCert, Error> {
    let started = Instant::now();
    let (s, w) = ratfunc_ray_witness(f, &BigInt::from(n0))?;
    Ok(expression_cert(Expr::RatFunc { f: f.clone() }, s, n0, w, started))
}

/// Replays a rational-function witness; the denominator must be root-free
/// on the whole ray.
pub fn replay_ratfunc(f: &RatFunc, w: &Witness) -> Result<Sign, Error> {
    let Witness::RatFunc {
        num_sign,
        num,
        den_sign,
        den,
    } = w
    else {
        return Err(Error::Replay("expected a rational-function witness".into()));
    };
    if matches!(den, RayWitness::Pointwise { .. }) {
        return Err(Error::Replay("denominator needs a root-free certificate".into()));
    }
    if num.n0() != den.n0() {
        return Err(Error::Replay("numerator and denominator rays differ".into()));
    }
    let ns = replay_ray(f.num(), num)?;
    let ds = replay_ray(f.den(), den)?;
    if ns != *num_sign || ds != *den_sign {
        return Err(Error::Replay("recorded component signs do not match".into()));
    }
    Ok(ns * ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_descartes() {
        let c = poly_sign_on_ray(&UniPoly::from_ints(&[1]), 3).unwrap();
        assert_eq!(c.sign(), Sign::Positive);
        let p = UniPoly::from_ints(&[-2, 5, -3]);
        let c = poly_sign_on_ray(&p, 3).unwrap();
        assert_eq!(c.sign(), Sign::Negative);
        assert_eq!(c.method, super::super::cert::Method::DescartesShift);
        match &c.witness {
            Witness::Ray(RayWitness::DescartesShift { shifted, .. }) => {
                assert_eq!(shifted, &UniPoly::from_ints(&[-14, -13, -3]))
            }
            w => panic!("unexpected witness {w:?}"),
        }
        let lin = poly_sign_on_ray(&UniPoly::from_ints(&[4, 2]), 12).unwrap();
        assert_eq!(lin.sign(), Sign::Positive);
    }

    #[test]
    fn sturm_when_descartes_is_inconclusive() {
        // (n - 5)^2 + 1 = n^2 - 10n + 26: shift at 3 gives t^2 - 4t + 5.
        let p = UniPoly::from_ints(&[26, -10, 1]);
        let (s, w) = poly_ray_witness(&p, &BigInt::from(3)).unwrap();
        assert_eq!(s, Sign::Positive);
        assert!(matches!(w, RayWitness::Sturm { .. }));
        assert_eq!(replay_ray(&p, &w).unwrap(), Sign::Positive);
    }

    #[test]
    fn pointwise_between_integer_roots() {
        // (4n - 21)(4n - 23) has roots 5.25 and 5.75: positive on integers only.
        let p = UniPoly::from_ints(&[483, -176, 16]);
        let (s, w) = poly_ray_witness(&p, &BigInt::from(3)).unwrap();
        assert_eq!(s, Sign::Positive);
        assert!(matches!(w, RayWitness::Pointwise { .. }));
        assert_eq!(replay_ray(&p, &w).unwrap(), Sign::Positive);
    }

    #[test]
    fn sign_change_is_reported() {
        let p = UniPoly::from_ints(&[-10, 1]);
        assert!(matches!(
            poly_ray_witness(&p, &BigInt::from(3)),
            Err(Error::SignChange { .. })
        ));
        assert!(matches!(poly_ray_witness(&UniPoly::zero(), &BigInt::from(3)), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn rational_functions() {
        let f = RatFunc::new(UniPoly::one(), UniPoly::from_ints(&[-2, 1])).unwrap();
        assert_eq!(ratfunc_sign_on_ray(&f, 3).unwrap().sign(), Sign::Positive);
        assert!(matches!(ratfunc_sign_on_ray(&f, 1), Err(Error::PoleOnRay(_))));
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let p = UniPoly::from_ints(&[-2, 5, -3]);
        let (_, w) = poly_ray_witness(&p, &BigInt::from(3)).unwrap();
        let RayWitness::DescartesShift { n0, shifted } = w else { panic!() };
        let bad = RayWitness::DescartesShift {
            n0,
            shifted: &shifted + &UniPoly::one(),
        };
        assert!(replay_ray(&p, &bad).is_err());
    }
}
