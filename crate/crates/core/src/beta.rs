//! The radial integrals `I_a^b = ∫_0^∞ t^b (1 + t²)^(-a) dt`, their
//! recurrences, and unit-sphere volumes.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::exact::{int, rat, PiScaled, Rational};
use crate::oracle::{eval_pi_scaled, HPValue, HpContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntegralIndex {
    pub a: u32,
    pub b: u32,
}

impl IntegralIndex {
    pub fn new(a: u32, b: u32) -> Self {
        IntegralIndex { a, b }
    }

    /// `2a - b - 1`; positive exactly when the integral converges.
    pub fn excess(&self) -> i64 {
        2 * self.a as i64 - self.b as i64 - 1
    }

    pub fn is_convergent(&self) -> bool {
        self.a >= 1 && self.excess() > 0
    }

    pub fn is_logarithmic(&self) -> bool {
        self.a >= 1 && self.excess() == 0
    }

    fn check(&self) -> Result<(), Error> {
        match self.excess() {
            e if e > 0 && self.a >= 1 => Ok(()),
            0 => Err(Error::LogarithmicIntegral { a: self.a, b: self.b }),
            _ => Err(Error::DivergentIntegral { a: self.a, b: self.b }),
        }
    }
}

fn factorial(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * i)
}

/// `Γ(h / 2)` for a positive integer `h`, as `(q, has_sqrt_pi)`.
fn gamma_half(h: u32) -> (Rational, bool) {
    if h.is_multiple_of(2) {
        (Rational::from_integer(factorial(h / 2 - 1)), false)
    } else {
        // Γ(j + 1/2) = (2j)! / (4^j j!) · √π
        let j = (h - 1) / 2;
        let den = BigInt::from(4u32).pow(j) * factorial(j);
        (Rational::new(factorial(2 * j), den), true)
    }
}

/// Exact `I_a^b = ½ Γ((b+1)/2) Γ((2a-b-1)/2) / Γ(a)`.
pub fn integral_exact(idx: IntegralIndex) -> Result<PiScaled, Error> {
    idx.check()?;
    let (g1, r1) = gamma_half(idx.b + 1);
    let (g2, r2) = gamma_half(idx.excess() as u32);
    let (g3, _) = gamma_half(2 * idx.a);
    let q = g1 * g2 / g3 / int(2);
    // Both half-integer Gammas contribute √π, or neither does.
    debug_assert_eq!(r1, r2);
    Ok(PiScaled::new(q, u32::from(r1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceFailure {
    pub relation: u8,
    pub a: u32,
    pub b: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceReport {
    pub a_max: u32,
    pub checked: usize,
    pub skipped: Vec<(u8, u32, u32)>,
    pub first_failure: Option<RecurrenceFailure>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Multiplier `m` with `I_a^b = m · I_target` for relation `rel`, together
/// with the target index. `None` when the relation does not apply.
fn relation(rel: u8, a: u32, b: u32) -> Option<(Rational, IntegralIndex)> {
    if b < 2 || a < 2 {
        return None;
    }
    let (a_i, b_i) = (a as i64, b as i64);
    match rel {
        1 => Some((rat(b_i - 1, 2 * a_i - b_i - 1), IntegralIndex::new(a, b - 2))),
        2 => Some((rat(b_i - 1, 2 * a_i - 2), IntegralIndex::new(a - 1, b - 2))),
        3 => Some((rat(2 * a_i - b_i - 3, 2 * a_i - 2), IntegralIndex::new(a - 1, b))),
        _ => None,
    }
}

pub fn verify_recurrences(a_max: u32) -> Result<RecurrenceReport, Error> {
    if a_max < 3 {
        return Err(Error::InvalidParams(format!("a_max must be at least 3, got {a_max}")));
    }
    let mut report = RecurrenceReport {
        a_max,
        checked: 0,
        skipped: Vec::new(),
        first_failure: None,
    };
    for a in 2..=a_max {
        for b in 2..=(2 * a - 2) {
            let lhs = integral_exact(IntegralIndex::new(a, b))?;
            for rel in 1..=3u8 {
                let Some((m, target)) = relation(rel, a, b) else {
                    continue;
                };
                if !target.is_convergent() {
                    report.skipped.push((rel, a, b));
                    continue;
                }
                let rhs = integral_exact(target)?.scale(&m);
                report.checked += 1;
                if rhs != lhs && report.first_failure.is_none() {
                    report.first_failure = Some(RecurrenceFailure { relation: rel, a, b });
                }
            }
        }
    }
    Ok(report)
}

/// Rational `r` with `I_idx = r · I_base`, found by breadth-first search over
/// the three recurrences (used in both directions).
pub fn reduce_to_base(idx: IntegralIndex, base: IntegralIndex) -> Result<Rational, Error> {
    idx.check()?;
    base.check()?;
    if idx.b % 2 != base.b % 2 {
        return Err(Error::NoRationalRatio {
            from_a: idx.a,
            from_b: idx.b,
            to_a: base.a,
            to_b: base.b,
        });
    }
    let a_cap = idx.a.max(base.a) + 1;
    let b_cap = 2 * a_cap;
    // ratio[x] = I_x / I_base
    let mut ratio: HashMap<IntegralIndex, Rational> = HashMap::new();
    ratio.insert(base, Rational::one());
    let mut queue = VecDeque::from([base]);
    while let Some(cur) = queue.pop_front() {
        if cur == idx {
            break;
        }
        let r = ratio[&cur].clone();
        let mut next: Vec<(IntegralIndex, Rational)> = Vec::new();
        // Downward: I_cur = m · I_t, so I_t / I_base = r / m.
        for rel in 1..=3u8 {
            if let Some((m, t)) = relation(rel, cur.a, cur.b) {
                if t.is_convergent() && !m.is_zero() {
                    next.push((t, &r / &m));
                }
            }
        }
        // Upward: I_s = m · I_cur for each s whose relation lands on cur.
        let ups = [
            (1u8, cur.a, cur.b + 2),
            (2u8, cur.a + 1, cur.b + 2),
            (3u8, cur.a + 1, cur.b),
        ];
        for (rel, a, b) in ups {
            if a > a_cap || b > b_cap {
                continue;
            }
            let s = IntegralIndex::new(a, b);
            if !s.is_convergent() {
                continue;
            }
            if let Some((m, t)) = relation(rel, a, b) {
                debug_assert_eq!(t, cur);
                if !m.is_zero() {
                    next.push((s, &r * &m));
                }
            }
        }
        for (t, v) in next {
            if let std::collections::hash_map::Entry::Vacant(e) = ratio.entry(t) {
                e.insert(v);
                queue.push_back(t);
            }
        }
    }
    ratio.remove(&idx).ok_or(Error::Unreachable {
        from_a: idx.a,
        from_b: idx.b,
        to_a: base.a,
        to_b: base.b,
    })
}

/// Volume of the unit sphere `S^m ⊂ R^(m+1)`.
pub fn sphere_volume(m: i64) -> Result<PiScaled, Error> {
    if m <= 0 {
        return Err(Error::InvalidParams(format!("sphere dimension must be positive, got {m}")));
    }
    let m = m as u32;
    if m % 2 == 1 {
        let j = m.div_ceil(2);
        Ok(PiScaled::new(
            Rational::new(BigInt::from(2), factorial(j - 1)),
            j,
        ))
    } else {
        let j = m / 2;
        let num = BigInt::from(2) * BigInt::from(4u32).pow(j) * factorial(j);
        Ok(PiScaled::new(Rational::new(num, factorial(2 * j)), j))
    }
}

#[derive(Clone, Debug)]
pub struct IdentityEval {
    pub lhs: HPValue,
    pub rhs: HPValue,
    /// `lhs / rhs - 1`
    pub residual: HPValue,
}

#[derive(Clone, Debug)]
pub struct LeadingConstantReport {
    pub n: u32,
    pub digits: u32,
    /// `4(n-2) I_n^{n+1} / (I_n^{n-2})^{(n-2)/n}` against `n`.
    pub printed: IdentityEval,
    /// `4(n-2) I_n^{n+1} ω_{n-1}^{2/n}` against `n (I_n^{n-1})^{(n-2)/n} ω_n^{2/n}`.
    pub sphere: IdentityEval,
}

fn identity(ctx: &mut HpContext, lhs: HPValue, rhs: HPValue) -> Result<IdentityEval, Error> {
    let q = ctx.div(&lhs, &rhs)?;
    let one = ctx.exact_int(1);
    let residual = ctx.sub(&q, &one);
    Ok(IdentityEval { lhs, rhs, residual })
}

pub fn leading_constant_check(n: u32, digits: u32) -> Result<LeadingConstantReport, Error> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("n must be at least 3, got {n}")));
    }
    if digits < 10 {
        return Err(Error::Precision(format!("need at least 10 digits, got {digits}")));
    }
    let mut ctx = HpContext::new(digits)?;
    let expo = rat(n as i64 - 2, n as i64);
    let two_over_n = rat(2, n as i64);
    let i_top = integral_exact(IntegralIndex::new(n, n + 1))?;
    let c = int(4 * (n as i64 - 2));

    let top = eval_pi_scaled(&mut ctx, &i_top.scale(&c));
    let i_low = eval_pi_scaled(&mut ctx, &integral_exact(IntegralIndex::new(n, n - 2))?);
    let low_pow = ctx.pow_rational(&i_low, &expo)?;
    let lhs1 = ctx.div(&top, &low_pow)?;
    let rhs1 = ctx.exact_int(n as i64);
    let printed = identity(&mut ctx, lhs1, rhs1)?;

    let w_prev = eval_pi_scaled(&mut ctx, &sphere_volume(n as i64 - 1)?);
    let w_n = eval_pi_scaled(&mut ctx, &sphere_volume(n as i64)?);
    let w_prev_pow = ctx.pow_rational(&w_prev, &two_over_n)?;
    let w_n_pow = ctx.pow_rational(&w_n, &two_over_n)?;
    let lhs2 = ctx.mul(&top, &w_prev_pow);
    let i_mid = eval_pi_scaled(&mut ctx, &integral_exact(IntegralIndex::new(n, n - 1))?);
    let mid_pow = ctx.pow_rational(&i_mid, &expo)?;
    let nn = ctx.exact_int(n as i64);
    let rhs2 = ctx.mul(&nn, &mid_pow);
    let rhs2 = ctx.mul(&rhs2, &w_n_pow);
    let sphere = identity(&mut ctx, lhs2, rhs2)?;

    Ok(LeadingConstantReport {
        n,
        digits,
        printed,
        sphere,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(integral_exact(IntegralIndex::new(4, 5)).unwrap(), PiScaled::rational(rat(1, 6)));
        assert_eq!(integral_exact(IntegralIndex::new(4, 3)).unwrap(), PiScaled::rational(rat(1, 12)));
        assert_eq!(integral_exact(IntegralIndex::new(4, 2)).unwrap(), PiScaled::new(rat(1, 32), 1));
        assert_eq!(integral_exact(IntegralIndex::new(1, 0)).unwrap(), PiScaled::new(rat(1, 2), 1));
    }

    #[test]
    fn divergent_and_log_cases_are_distinct() {
        assert!(matches!(
            integral_exact(IntegralIndex::new(4, 7)),
            Err(Error::LogarithmicIntegral { a: 4, b: 7 })
        ));
        assert!(matches!(
            integral_exact(IntegralIndex::new(4, 9)),
            Err(Error::DivergentIntegral { a: 4, b: 9 })
        ));
    }

    #[test]
    fn recurrences_small_lattice() {
        let r = verify_recurrences(8).unwrap();
        assert!(r.passed());
        assert!(r.skipped.contains(&(3, 4, 5)));
        assert!(verify_recurrences(2).is_err());
    }

    #[test]
    fn reductions() {
        let n = 4;
        assert_eq!(
            reduce_to_base(IntegralIndex::new(n, n + 1), IntegralIndex::new(n, n - 1)).unwrap(),
            int(2)
        );
        let x = IntegralIndex::new(7, 4);
        assert_eq!(reduce_to_base(x, x).unwrap(), int(1));
        assert_eq!(
            reduce_to_base(IntegralIndex::new(10, 7), IntegralIndex::new(9, 5)).unwrap(),
            rat(1, 3)
        );
        assert!(matches!(
            reduce_to_base(IntegralIndex::new(5, 2), IntegralIndex::new(5, 3)),
            Err(Error::NoRationalRatio { .. })
        ));
    }

    #[test]
    fn sphere_volumes() {
        assert_eq!(sphere_volume(1).unwrap(), PiScaled::new(int(2), 1));
        assert_eq!(sphere_volume(2).unwrap(), PiScaled::new(int(4), 1));
        assert_eq!(sphere_volume(3).unwrap(), PiScaled::new(int(2), 2));
        assert_eq!(sphere_volume(4).unwrap(), PiScaled::new(rat(8, 3), 2));
        assert!(sphere_volume(0).is_err());
    }

    #[test]
    fn leading_constant_sphere_variant_holds() {
        let r = leading_constant_check(4, 40).unwrap();
        assert!(r.sphere.residual.to_f64().abs() < 1e-30);
        assert!(r.sphere.residual.error_bound_f64() < 1e-30);
        assert!((r.printed.residual.to_f64() - 0.063_846).abs() < 1e-4);
        assert!(leading_constant_check(4, 5).is_err());
    }
}
