//! Helpers around arbitrary-precision rationals.
//!
//! `Rational` is `num_rational::BigRational`, which already keeps the
//! numerator/denominator pair reduced with a positive denominator. This
//! module adds the handful of operations the certificates need on top of
//! it: string (de)serialization, bounded-denominator approximation, the
//! simplest rational in an interval, and rigorous square-root brackets.

use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = num_rational::BigRational;

/// `num / den` as a reduced rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int<T: Into<BigInt>>(v: T) -> Rational {
    Rational::from_integer(v.into())
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    Rational::from_str(t).map_err(|_| Error::Parse(format!("invalid rational `{t}`")))
}

pub fn parse_bigint(s: &str) -> Result<BigInt, Error> {
    let t = s.trim();
    BigInt::from_str(t).map_err(|_| Error::Parse(format!("invalid integer `{t}`")))
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign_of(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Closest rational to `x` whose denominator does not exceed `max_den`.
///
/// Same contract as Python's `Fraction.limit_denominator`.
pub fn limit_denominator(x: &Rational, max_den: &BigInt) -> Rational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (
        BigInt::zero(),
        BigInt::one(),
        BigInt::one(),
        BigInt::zero(),
    );
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    let k = (max_den - &q0).div_floor(&q1);
    let bound1 = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let bound2 = Rational::new(p1, q1);
    if (&bound2 - x).abs() <= (&bound1 - x).abs() {
        bound2
    } else {
        bound1
    }
}

/// The rational with the smallest denominator strictly inside `(lo, hi)`.
///
/// Requires `lo < hi`. Ties between integers go to the one of least magnitude.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    let zero = Rational::zero();
    if lo < &zero && hi > &zero {
        return zero;
    }
    if hi <= &zero {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    let next = &fl + Rational::one();
    if &next < hi {
        return next;
    }
    // Stern-Brocot descent on the reciprocal of the fractional parts.
    let frac_lo = lo - &fl;
    let frac_hi = hi - &fl;
    let y = if frac_lo.is_zero() {
        frac_hi.recip().floor() + Rational::one()
    } else {
        simplest_between(&frac_hi.recip(), &frac_lo.recip())
    };
    fl + y.recip()
}

/// Rigorous bracket `lo <= sqrt(x) <= hi` with `hi - lo <= 2^-bits` (scaled).
///
/// `x` must be nonnegative.
pub fn sqrt_bounds(x: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    // sqrt(p/q) = sqrt(p*q)/q
    let pq = x.numer() * x.denom();
    let scale = BigInt::one() << (2 * bits as usize);
    let s = (&pq * &scale).sqrt();
    let denom = x.denom() * (BigInt::one() << bits as usize);
    let lo = Rational::new(s.clone(), denom.clone());
    let exact = &s * &s == &pq * &scale;
    let hi = if exact {
        lo.clone()
    } else {
        Rational::new(s + 1, denom)
    };
    (lo, hi)
}

/// Exact square root when `x` is the square of a rational.
pub fn exact_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Continued-fraction convergents of `x`, in order.
pub fn convergents(x: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    while !d.is_zero() {
        let a = n.div_floor(&d);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        out.push(Rational::new(h2.clone(), k2.clone()));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    out
}

/// Serde adapters that write rationals and big integers as decimal strings.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&r.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod bigint {
        use super::*;

        pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
            let s = String::deserialize(d)?;
            parse_bigint(&s).map_err(serde::de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_denominator_matches_known_values() {
        let pi_ish = rat(314159265, 100000000);
        assert_eq!(limit_denominator(&pi_ish, &BigInt::from(1000)), rat(355, 113));
        assert_eq!(limit_denominator(&rat(5, 1408), &BigInt::from(1_000_000)), rat(5, 1408));
        assert_eq!(limit_denominator(&rat(-7, 3), &BigInt::from(1)), int(-2));
    }

    #[test]
    fn simplest_between_prefers_small_denominators() {
        assert_eq!(simplest_between(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 3)), int(0));
        assert_eq!(simplest_between(&rat(3, 2), &rat(7, 2)), int(2));
        assert_eq!(simplest_between(&rat(-7, 2), &rat(-3, 2)), int(-2));
        assert_eq!(simplest_between(&int(1), &rat(3, 2)), rat(4, 3));
        let lo = rat(1_000_001, 1_000_000);
        let hi = rat(1_000_002, 1_000_000);
        let s = simplest_between(&lo, &hi);
        assert!(s > lo && s < hi);
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let (lo, hi) = sqrt_bounds(&int(2), 40);
        assert!(&lo * &lo <= int(2) && &hi * &hi >= int(2));
        assert!(&hi - &lo <= Rational::new(BigInt::one(), BigInt::one() << 40));
        let (lo, hi) = sqrt_bounds(&rat(9, 4), 10);
        assert_eq!(lo, rat(3, 2));
        assert_eq!(hi, rat(3, 2));
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(&rat(49, 121)), Some(rat(7, 11)));
        assert_eq!(exact_sqrt(&rat(2, 1)), None);
    }

    #[test]
    fn convergents_of_golden_ratio_are_fibonacci() {
        let phi = rat(1346269, 832040);
        let c = convergents(&phi);
        assert_eq!(c[0], int(1));
        assert_eq!(c[1], int(2));
        assert_eq!(c[2], rat(3, 2));
        assert_eq!(c[3], rat(5, 3));
    }
}
