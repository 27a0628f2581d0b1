//! Canonical quotients of polynomials and their partial-fraction form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::UniPoly;
use super::rational::Rational;
use crate::error::Error;

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatFunc", into = "RawRatFunc")]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

#[derive(Serialize, Deserialize)]
struct RawRatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl TryFrom<RawRatFunc> for RatFunc {
    type Error = Error;
    fn try_from(raw: RawRatFunc) -> Result<Self, Error> {
        RatFunc::new(raw.num, raw.den)
    }
}

impl From<RatFunc> for RawRatFunc {
    fn from(f: RatFunc) -> Self {
        RawRatFunc {
            num: f.num,
            den: f.den,
        }
    }
}

impl RatFunc {
    /// Reduces `num / den` to canonical form.
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(UniPoly::zero()));
        }
        let g = UniPoly::gcd(&num, &den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lc_inv = den.leading_coeff().expect("nonzero").recip();
        Ok(RatFunc {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RatFunc {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, Error> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(x.to_string()));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_int(&self, n: i64) -> Result<Rational, Error> {
        self.eval(&Rational::from_integer(n.into()))
    }

    pub fn recip(&self) -> Result<Self, Error> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<Self, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
        .expect("product of nonzero denominators")
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl From<UniPoly> for RatFunc {
    fn from(p: UniPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

/// Canonical form of `num / den`.
pub fn ratfunc_normalize(num: UniPoly, den: UniPoly) -> Result<RatFunc, Error> {
    RatFunc::new(num, den)
}

/// One term `coeff / factor^power` of a partial-fraction expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionTerm {
    pub factor: UniPoly,
    pub power: u32,
    #[serde(with = "super::rational::serde_str")]
    pub coeff: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialFractions {
    pub polynomial_part: UniPoly,
    pub terms: Vec<FractionTerm>,
}

impl PartialFractions {
    pub fn recombine(&self) -> RatFunc {
        let mut acc = RatFunc::from_poly(self.polynomial_part.clone());
        for t in &self.terms {
            if t.coeff.is_zero() {
                continue;
            }
            let term = RatFunc::new(UniPoly::constant(t.coeff.clone()), t.factor.pow(t.power))
                .expect("linear factor is nonzero");
            acc = &acc + &term;
        }
        acc
    }

    /// Coefficient attached to `factor^power`, if that term was requested.
    pub fn coefficient(&self, factor: &UniPoly, power: u32) -> Option<&Rational> {
        self.terms
            .iter()
            .find(|t| &t.factor == factor && t.power == power)
            .map(|t| &t.coeff)
    }
}

/// Expands `f` over the supplied linear factors.
///
/// A factor listed `m` times contributes terms for powers `1..=m`. The
/// product of the listed factors must be a multiple of `den(f)`.
pub fn partial_fractions(f: &RatFunc, factors: &[UniPoly]) -> Result<PartialFractions, Error> {
    // Group by root, keeping the first representative of each factor.
    let mut groups: Vec<(Rational, UniPoly, u32)> = Vec::new();
    for factor in factors {
        if factor.degree() != Some(1) {
            return Err(Error::NonlinearFactor(factor.to_string()));
        }
        let root = -factor.coeff(0) / factor.coeff(1);
        match groups.iter_mut().find(|(r, _, _)| r == &root) {
            Some(g) => g.2 += 1,
            None => groups.push((root, factor.clone(), 1)),
        }
    }

    let mut product = UniPoly::one();
    for (root, _, mult) in &groups {
        let monic = UniPoly::linear(Rational::one(), -root.clone());
        product = &product * &monic.pow(*mult);
    }
    let (_, rem) = product.div_rem(f.den())?;
    if !rem.is_zero() {
        return Err(Error::FactorsDoNotDivide);
    }

    let (polynomial_part, remainder) = f.num().div_rem(f.den())?;
    let mut terms = Vec::new();
    for (root, factor, requested) in &groups {
        let monic = UniPoly::linear(Rational::one(), -root.clone());
        // Actual multiplicity of the root in the denominator.
        let mut cofactor = f.den().clone();
        let mut mult = 0u32;
        while let Ok(q) = cofactor.div_exact(&monic) {
            cofactor = q;
            mult += 1;
        }
        // Laurent coefficients of remainder / den at the root:
        // remainder / (t^mult * cofactor) with t = n - root.
        let series = if mult == 0 {
            Vec::new()
        } else {
            series_quotient(
                &remainder.shift_by(root),
                &cofactor.shift_by(root),
                mult as usize,
            )
        };
        let lead = factor.coeff(1);
        for power in 1..=*requested {
            // coefficient of (n - root)^(-power) is series[mult - power]
            let monic_coeff = if power <= mult {
                series[(mult - power) as usize].clone()
            } else {
                Rational::zero()
            };
            // c / (n - r)^p = c * lead^p / (lead * n + b)^p
            let mut scaled = monic_coeff;
            for _ in 0..power {
                scaled *= &lead;
            }
            terms.push(FractionTerm {
                factor: factor.clone(),
                power,
                coeff: scaled,
            });
        }
    }
    Ok(PartialFractions {
        polynomial_part,
        terms,
    })
}

/// First `len` power-series coefficients of `a / b` at 0 (`b(0) != 0`).
fn series_quotient(a: &UniPoly, b: &UniPoly, len: usize) -> Vec<Rational> {
    let b0_inv = b.coeff(0).recip();
    let mut out: Vec<Rational> = Vec::with_capacity(len);
    for i in 0..len {
        let mut acc = a.coeff(i);
        for (j, o) in out.iter().enumerate() {
            acc -= o * b.coeff(i - j);
        }
        out.push(acc * &b0_inv);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn normalize_cancels_common_factor() {
        let f = ratfunc_normalize(p(&[-4, 0, 1]), p(&[-2, 1])).unwrap();
        assert_eq!(f.num(), &p(&[2, 1]));
        assert_eq!(f.den(), &UniPoly::one());
        let g = ratfunc_normalize(p(&[4, 2]), p(&[2])).unwrap();
        assert_eq!(g.num(), &p(&[2, 1]));
        assert!(g.is_polynomial());
        assert!(matches!(
            ratfunc_normalize(p(&[1]), UniPoly::zero()),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn normalize_makes_denominator_monic() {
        let f = ratfunc_normalize(p(&[1]), p(&[4, 2])).unwrap();
        assert_eq!(f.den(), &p(&[2, 1]));
        assert_eq!(f.num(), &UniPoly::constant(rat(1, 2)));
    }

    #[test]
    fn eval_reports_poles() {
        let f = ratfunc_normalize(p(&[1]), p(&[-2, 1])).unwrap();
        assert_eq!(f.eval_int(3).unwrap(), int(1));
        assert!(matches!(f.eval_int(2), Err(Error::Pole(_))));
    }

    #[test]
    fn synthetic_division_example() {
        let f = ratfunc_normalize(p(&[1, 0, 0, 1]), p(&[-2, 1])).unwrap();
        let pf = partial_fractions(&f, &[p(&[-2, 1])]).unwrap();
        assert_eq!(pf.polynomial_part, p(&[4, 2, 1]));
        assert_eq!(pf.coefficient(&p(&[-2, 1]), 1), Some(&int(9)));
        assert_eq!(pf.recombine(), f);
    }

    #[test]
    fn two_simple_poles() {
        let f = ratfunc_normalize(p(&[1]), &p(&[-2, 1]) * &p(&[-3, 1])).unwrap();
        let pf = partial_fractions(&f, &[p(&[-2, 1]), p(&[-3, 1])]).unwrap();
        assert!(pf.polynomial_part.is_zero());
        assert_eq!(pf.coefficient(&p(&[-3, 1]), 1), Some(&int(1)));
        assert_eq!(pf.coefficient(&p(&[-2, 1]), 1), Some(&int(-1)));
        assert_eq!(pf.recombine(), f);
    }

    #[test]
    fn repeated_and_scaled_factors() {
        // (n + 5) / ((2n + 2)^2 (n - 1))
        let den = &p(&[2, 2]).pow(2) * &p(&[-1, 1]);
        let f = ratfunc_normalize(p(&[5, 1]), den).unwrap();
        let pf = partial_fractions(&f, &[p(&[2, 2]), p(&[2, 2]), p(&[-1, 1])]).unwrap();
        assert_eq!(pf.recombine(), f);
        // an unused requested power carries a zero coefficient
        let pf2 =
            partial_fractions(&f, &[p(&[2, 2]), p(&[2, 2]), p(&[-1, 1]), p(&[-1, 1])]).unwrap();
        assert_eq!(pf2.coefficient(&p(&[-1, 1]), 2), Some(&int(0)));
        assert_eq!(pf2.recombine(), f);
    }

    #[test]
    fn rejects_bad_factor_lists() {
        let f = ratfunc_normalize(p(&[1]), &p(&[-2, 1]) * &p(&[-3, 1])).unwrap();
        assert!(matches!(
            partial_fractions(&f, &[p(&[-2, 1])]),
            Err(Error::FactorsDoNotDivide)
        ));
        assert!(matches!(
            partial_fractions(&f, &[p(&[1, 0, 1])]),
            Err(Error::NonlinearFactor(_))
        ));
    }
}
