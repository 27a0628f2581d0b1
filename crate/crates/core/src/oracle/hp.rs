//! Midpoint-radius (ball) arithmetic on top of `astro_float`.
//!
//! Every `HPValue` carries an `error_bound` that encloses the true real.
//! Midpoints are correctly rounded to nearest at the working precision;
//! radii are accumulated at 64 bits with upward rounding, so the enclosure
//! is rigorous as long as the underlying library rounds correctly.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Error;
use crate::exact::Rational;

const RAD_BITS: usize = 64;
const GUARD_BITS: usize = 64;

#[derive(Clone, Debug)]
pub struct HPValue {
    value: BigFloat,
    error_bound: BigFloat,
    digits: u32,
}

impl HPValue {
    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn error_bound(&self) -> &BigFloat {
        &self.error_bound
    }

    pub fn precision_digits(&self) -> u32 {
        self.digits
    }

    /// Sign of the enclosed real, if the ball excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.value.abs().cmp(&self.error_bound) == Some(1) {
            Some(if self.value.is_negative() { -1 } else { 1 })
        } else {
            None
        }
    }

    /// True when the ball contains zero.
    pub fn contains_zero(&self) -> bool {
        self.sign().is_none()
    }

    /// Lossy conversion for display and coarse assertions.
    pub fn to_f64(&self) -> f64 {
        parse_f64(&self.value)
    }

    pub fn error_bound_f64(&self) -> f64 {
        parse_f64(&self.error_bound)
    }

    /// Definitely-less comparison: `Some(true)` iff `self < other` holds for
    /// every pair of points in the two balls, `Some(false)` iff `self > other`
    /// everywhere, `None` if the balls overlap.
    pub fn definitely_lt(&self, other: &HPValue, ctx: &mut HpContext) -> Option<bool> {
        let diff = ctx.sub(other, self);
        diff.sign().map(|s| s > 0)
    }
}

impl fmt::Display for HPValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.value, self.error_bound_f64())
    }
}

fn parse_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

/// Working precision plus the constants cache `astro_float` needs.
pub struct HpContext {
    bits: usize,
    digits: u32,
    cc: Consts,
}

impl HpContext {
    pub fn new(digits: u32) -> Result<Self, Error> {
        if digits == 0 {
            return Err(Error::Precision("precision must be positive".into()));
        }
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
        let cc = Consts::new().map_err(|e| Error::Numeric(format!("{e:?}")))?;
        Ok(HpContext { bits, digits, cc })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn wrap(&self, value: BigFloat, error_bound: BigFloat) -> HPValue {
        HPValue {
            value,
            error_bound,
            digits: self.digits,
        }
    }

    fn rad_zero() -> BigFloat {
        BigFloat::from_word(0, RAD_BITS)
    }

    /// `2^k` exactly.
    fn pow2(k: i64) -> BigFloat {
        let mut one = BigFloat::from_word(1, RAD_BITS);
        one.set_exponent((k + 1) as i32);
        one
    }

    fn radd(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, RAD_BITS, RoundingMode::Up)
    }

    fn rmul(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, RAD_BITS, RoundingMode::Up)
    }

    fn rdiv(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, RAD_BITS, RoundingMode::Up)
    }

    fn rsub_down(a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, RAD_BITS, RoundingMode::Down)
    }

    /// Rounding error allowance `ulps * |v| * 2^(1 - bits)`.
    fn ulp(&self, v: &BigFloat, ulps: u64) -> BigFloat {
        if v.is_zero() {
            return Self::rad_zero();
        }
        let mag = v.abs().mul(
            &BigFloat::from_word(ulps, RAD_BITS),
            RAD_BITS,
            RoundingMode::Up,
        );
        Self::rmul(&mag, &Self::pow2(1 - self.bits as i64))
    }

    pub fn exact_int(&mut self, v: i64) -> HPValue {
        let value = BigFloat::from_i64(v, self.bits);
        self.wrap(value, Self::rad_zero())
    }

    pub fn from_bigint(&mut self, v: &BigInt) -> HPValue {
        let value = BigFloat::parse(
            &v.to_string(),
            Radix::Dec,
            self.bits,
            RoundingMode::ToEven,
            &mut self.cc,
        );
        let err = self.ulp(&value, 1);
        self.wrap(value, err)
    }

    pub fn from_rational(&mut self, r: &Rational) -> HPValue {
        if r.is_zero() {
            return self.exact_int(0);
        }
        let n = self.from_bigint(r.numer());
        let d = self.from_bigint(r.denom());
        let value = n.value.div(&d.value, self.bits, RoundingMode::ToEven);
        let err = self.ulp(&value, 4);
        self.wrap(value, err)
    }

    pub fn from_f64(&mut self, x: f64) -> HPValue {
        let value = BigFloat::from_f64(x, self.bits);
        self.wrap(value, Self::rad_zero())
    }

    pub fn pi(&mut self) -> HPValue {
        let value = self.cc.pi(self.bits, RoundingMode::ToEven);
        let err = self.ulp(&value, 1);
        self.wrap(value, err)
    }

    pub fn neg(&mut self, a: &HPValue) -> HPValue {
        self.wrap(a.value.neg(), a.error_bound.clone())
    }

    pub fn add(&mut self, a: &HPValue, b: &HPValue) -> HPValue {
        let value = a.value.add(&b.value, self.bits, RoundingMode::ToEven);
        let rad = Self::radd(&Self::radd(&a.error_bound, &b.error_bound), &self.ulp(&value, 1));
        self.wrap(value, rad)
    }

    pub fn sub(&mut self, a: &HPValue, b: &HPValue) -> HPValue {
        let nb = self.neg(b);
        self.add(a, &nb)
    }

    pub fn mul(&mut self, a: &HPValue, b: &HPValue) -> HPValue {
        let value = a.value.mul(&b.value, self.bits, RoundingMode::ToEven);
        let t1 = Self::rmul(&a.value.abs(), &b.error_bound);
        let t2 = Self::rmul(&b.value.abs(), &a.error_bound);
        let t3 = Self::rmul(&a.error_bound, &b.error_bound);
        let rad = Self::radd(&Self::radd(&Self::radd(&t1, &t2), &t3), &self.ulp(&value, 1));
        self.wrap(value, rad)
    }

    pub fn div(&mut self, a: &HPValue, b: &HPValue) -> Result<HPValue, Error> {
        let bmag = b.value.abs();
        let gap = Self::rsub_down(&bmag, &b.error_bound);
        if !gap.is_positive() {
            return Err(Error::Numeric("division by a ball containing zero".into()));
        }
        let value = a.value.div(&b.value, self.bits, RoundingMode::ToEven);
        let num = Self::radd(
            &Self::rmul(&a.error_bound, &bmag),
            &Self::rmul(&a.value.abs(), &b.error_bound),
        );
        let den = bmag.mul(&gap, RAD_BITS, RoundingMode::Down);
        let rad = Self::radd(&Self::rdiv(&num, &den), &self.ulp(&value, 1));
        Ok(self.wrap(value, rad))
    }

    pub fn powi(&mut self, a: &HPValue, e: u32) -> HPValue {
        let mut out = self.exact_int(1);
        for _ in 0..e {
            out = self.mul(&out, a);
        }
        out
    }

    pub fn sqrt(&mut self, a: &HPValue) -> Result<HPValue, Error> {
        if a.value.is_zero() && a.error_bound.is_zero() {
            return Ok(self.exact_int(0));
        }
        let lower = Self::rsub_down(&a.value, &a.error_bound);
        if !lower.is_positive() {
            return Err(Error::Numeric("sqrt of a ball reaching below zero".into()));
        }
        let value = a.value.sqrt(self.bits, RoundingMode::ToEven);
        // |sqrt(a') - sqrt(a)| <= r / sqrt(a)
        let root_lo = lower.sqrt(RAD_BITS, RoundingMode::Down);
        let rad = Self::radd(&Self::rdiv(&a.error_bound, &root_lo), &self.ulp(&value, 1));
        Ok(self.wrap(value, rad))
    }

    pub fn ln(&mut self, a: &HPValue) -> Result<HPValue, Error> {
        let lower = Self::rsub_down(&a.value, &a.error_bound);
        if !lower.is_positive() {
            return Err(Error::Numeric("log of a ball reaching below zero".into()));
        }
        let value = a.value.ln(self.bits, RoundingMode::ToEven, &mut self.cc);
        // |ln a' - ln a| <= r / (a - r); the absolute rounding allowance covers
        // results near zero.
        let rad = Self::radd(
            &Self::radd(&Self::rdiv(&a.error_bound, &lower), &self.ulp(&value, 2)),
            &Self::pow2(2 - self.bits as i64),
        );
        Ok(self.wrap(value, rad))
    }

    pub fn exp(&mut self, a: &HPValue) -> Result<HPValue, Error> {
        let half = Self::pow2(-1);
        if a.error_bound.cmp(&half) != Some(-1) {
            return Err(Error::Numeric("exp of a wide ball".into()));
        }
        let value = a.value.exp(self.bits, RoundingMode::ToEven, &mut self.cc);
        // e^(a+d) - e^a <= e^a * 2|d| for |d| < 1/2
        let two = BigFloat::from_word(2, RAD_BITS);
        let rad = Self::radd(
            &Self::rmul(&Self::rmul(&value.abs(), &a.error_bound), &two),
            &self.ulp(&value, 2),
        );
        Ok(self.wrap(value, rad))
    }

    /// `a^r` for a positive ball `a` and rational exponent `r`.
    pub fn pow_rational(&mut self, a: &HPValue, r: &Rational) -> Result<HPValue, Error> {
        if r.is_zero() {
            return Ok(self.exact_int(1));
        }
        let l = self.ln(a)?;
        let rr = self.from_rational(r);
        let prod = self.mul(&l, &rr);
        self.exp(&prod)
    }

    /// Raw midpoint helpers for quadrature nodes, where the error is controlled
    /// by the convergence estimate instead of ball propagation.
    pub(crate) fn raw(&mut self) -> RawOps<'_> {
        RawOps { ctx: self }
    }

    pub(crate) fn ball_from_raw(&self, value: BigFloat, error_bound_abs: BigFloat) -> HPValue {
        self.wrap(value, error_bound_abs)
    }

}

/// Unchecked midpoint arithmetic at the context precision.
pub(crate) struct RawOps<'a> {
    ctx: &'a mut HpContext,
}

impl RawOps<'_> {
    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.ctx.bits)
    }
    pub fn rational(&mut self, r: &Rational) -> BigFloat {
        self.ctx.from_rational(r).value
    }
    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.ctx.bits, RoundingMode::ToEven)
    }
    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.ctx.bits, RoundingMode::ToEven)
    }
    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.ctx.bits, RoundingMode::ToEven)
    }
    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.ctx.bits, RoundingMode::ToEven)
    }
    pub fn pi(&mut self) -> BigFloat {
        self.ctx.cc.pi(self.ctx.bits, RoundingMode::ToEven)
    }
    pub fn powi(&self, a: &BigFloat, e: usize) -> BigFloat {
        a.powi(e, self.ctx.bits, RoundingMode::ToEven)
    }
    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.ctx.bits, RoundingMode::ToEven, &mut self.ctx.cc)
    }
    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.ctx.bits, RoundingMode::ToEven, &mut self.ctx.cc)
    }
    pub fn atan(&mut self, a: &BigFloat) -> BigFloat {
        a.atan(self.ctx.bits, RoundingMode::ToEven, &mut self.ctx.cc)
    }
    pub fn sinh(&mut self, a: &BigFloat) -> BigFloat {
        a.sinh(self.ctx.bits, RoundingMode::ToEven, &mut self.ctx.cc)
    }
    pub fn cosh(&mut self, a: &BigFloat) -> BigFloat {
        a.cosh(self.ctx.bits, RoundingMode::ToEven, &mut self.ctx.cc)
    }
    pub fn tanh(&mut self, a: &BigFloat) -> BigFloat {
        a.tanh(self.ctx.bits, RoundingMode::ToEven, &mut self.ctx.cc)
    }
    /// `2^k`.
    pub fn pow2(&self, k: i64) -> BigFloat {
        HpContext::pow2(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rational_conversion_is_enclosed() {
        let mut ctx = HpContext::new(60).unwrap();
        let v = ctx.from_rational(&rat(17548, 91));
        assert!((v.to_f64() - 192.835_164_835_164_8).abs() < 1e-12);
        assert!(v.error_bound_f64() < 1e-55);
        assert_eq!(v.sign(), Some(1));
    }

    #[test]
    fn pi_and_sqrt() {
        let mut ctx = HpContext::new(60).unwrap();
        let pi = ctx.pi();
        let s = ctx.sqrt(&pi).unwrap();
        let sq = ctx.mul(&s, &s);
        let d = ctx.sub(&sq, &pi);
        assert!(d.contains_zero());
        assert!(d.error_bound_f64() < 1e-55);
    }

    #[test]
    fn pow_rational_round_trip() {
        let mut ctx = HpContext::new(50).unwrap();
        let x = ctx.from_rational(&rat(27, 8));
        let y = ctx.pow_rational(&x, &rat(2, 3)).unwrap();
        let expect = ctx.from_rational(&rat(9, 4));
        let d = ctx.sub(&y, &expect);
        assert!(d.contains_zero());
        assert!(d.error_bound_f64() < 1e-40);
    }

    #[test]
    fn division_by_zero_ball_fails() {
        let mut ctx = HpContext::new(30).unwrap();
        let one = ctx.exact_int(1);
        let zero = ctx.exact_int(0);
        assert!(ctx.div(&one, &zero).is_err());
    }
}
