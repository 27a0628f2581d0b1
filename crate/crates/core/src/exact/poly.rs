//! Dense univariate polynomials over the rationals in the formal symbol `n`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{int, parse_rational, sign_of, Rational};
use crate::error::Error;

/// Coefficients are stored lowest degree first; the zero polynomial is the
/// empty vector and the leading coefficient is otherwise nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// `slope * n + offset`.
    pub fn linear(slope: Rational, offset: Rational) -> Self {
        Self::from_coeffs(vec![offset, slope])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_int(&self, n: &BigInt) -> Rational {
        self.eval(&Rational::from_integer(n.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    /// `p(n0 + t)` as a polynomial in `t`.
    pub fn shift(&self, n0: &BigInt) -> Self {
        self.shift_by(&Rational::from_integer(n0.clone()))
    }

    pub fn shift_by(&self, n0: &Rational) -> Self {
        // Horner in the ring: acc <- acc * (t + n0) + c
        let mut acc: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            let mut next = vec![Rational::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] += a * n0;
            }
            next[0] += c;
            acc = next;
        }
        Self::from_coeffs(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// `self(inner(n))`.
    pub fn compose(&self, inner: &UniPoly) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly), Error> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] * &lc_inv;
            if !q.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * dc;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Exact quotient; errors when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &UniPoly) -> Result<UniPoly, Error> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    /// Number of sign changes in the coefficient sequence (zeros skipped).
    pub fn sign_variations(&self) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for c in &self.coeffs {
            let s = sign_of(c);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign of `p(n)` as `n -> +infinity`.
    pub fn sign_at_infinity(&self) -> i8 {
        self.leading_coeff().map_or(0, sign_of)
    }

    /// Clears denominators and common content. The result is a positive
    /// rational multiple of `self` with coprime integer coefficients.
    pub fn primitive_part(&self) -> UniPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = num_integer::gcd(g, v.clone());
        }
        let g = g.abs();
        Self::from_coeffs(
            ints.into_iter()
                .map(|v| Rational::from_integer(v / &g))
                .collect(),
        )
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() || i == 0 {
                    out.push_str(&mag.to_string());
                } else {
                    out.push_str(&format!("({mag})"));
                }
            }
            match i {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{i}")),
            }
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("n"))
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        super::rational::serde_str::vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UniPoly::from_coeffs(coeffs))
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<UniPoly> for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a UniPoly> for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: &UniPoly) -> UniPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<UniPoly> for &'a UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

/// Formal derivative. Kept as a free function to mirror the other
/// polynomial entry points used by the spectral code.
pub fn poly_derivative(p: &UniPoly) -> UniPoly {
    p.derivative()
}

/// `p(n0 + t)` in the variable `t`.
pub fn poly_shift(p: &UniPoly, n0: i64) -> UniPoly {
    p.shift(&BigInt::from(n0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn derivative_power_rule() {
        let x2 = UniPoly::from_ints(&[0, 0, 1]);
        assert_eq!(poly_derivative(&x2), UniPoly::from_ints(&[0, 2]));
        let p = UniPoly::from_ints(&[56, 18, 23, 2]);
        assert_eq!(poly_derivative(&p), UniPoly::from_ints(&[18, 46, 6]));
        assert!(poly_derivative(&UniPoly::constant(int(7))).is_zero());
    }

    #[test]
    fn shift_examples() {
        let n2 = UniPoly::from_ints(&[0, 0, 1]);
        assert_eq!(poly_shift(&n2, 0), n2);
        let p = UniPoly::from_ints(&[-2, 5, -3]);
        let s = poly_shift(&p, 3);
        assert_eq!(s, UniPoly::from_ints(&[-14, -13, -3]));
        for t in 0..3 {
            assert_eq!(s.eval(&int(t)), p.eval(&int(3 + t)));
        }
        assert_eq!(poly_shift(&UniPoly::from_ints(&[-2, 1]), 2), UniPoly::var());
    }

    #[test]
    fn division_and_gcd() {
        let a = UniPoly::from_ints(&[-4, 0, 1]); // n^2 - 4
        let b = UniPoly::from_ints(&[-2, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, UniPoly::from_ints(&[2, 1]));
        assert!(r.is_zero());
        let g = UniPoly::gcd(&a.scale(&int(3)), &b.scale(&int(5)));
        assert_eq!(g, b);
        assert!(matches!(a.div_rem(&UniPoly::zero()), Err(Error::DivisionByZero)));
        assert!(matches!(a.div_exact(&UniPoly::from_ints(&[1, 1])), Err(Error::NotDivisible)));
    }

    #[test]
    fn display_and_variations() {
        let p = UniPoly::from_ints(&[56, 18, 23, 2]);
        assert_eq!(p.to_string(), "2n^3 + 23n^2 + 18n + 56");
        let q = UniPoly::from_coeffs(vec![rat(-1, 2), int(0), int(-1)]);
        assert_eq!(q.to_string(), "-n^2 - 1/2");
        assert_eq!(UniPoly::from_ints(&[1, -1, 0, 1]).sign_variations(), 2);
    }

    #[test]
    fn primitive_part_clears_denominators() {
        let p = UniPoly::from_coeffs(vec![rat(1, 2), rat(-3, 4)]);
        assert_eq!(p.primitive_part(), UniPoly::from_ints(&[2, -3]));
    }

    #[test]
    fn compose_matches_evaluation() {
        let p = UniPoly::from_ints(&[1, 2, 3]);
        let inner = UniPoly::from_ints(&[-1, 2]);
        let c = p.compose(&inner);
        for x in -3..4 {
            assert_eq!(c.eval(&int(x)), p.eval(&inner.eval(&int(x))));
        }
    }
}
