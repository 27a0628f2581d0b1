//! Exact sign of `A + B√u + C√v` for rationals, by sign-tracked squaring.

use std::time::Instant;

use num_traits::Zero;

use super::cert::{Claim, ClaimKind, Domain, Expr, Method, NRange, Sign, SignCert, TraceStep, Witness};
use crate::error::Error;
use crate::exact::Rational;

struct Trace {
    steps: Vec<TraceStep>,
}

impl Trace {
    /// Compares `lhs` with `rhs` and records the outcome `sign(lhs - rhs)`.
    fn compare(&mut self, label: &str, lhs: Rational, rhs: Rational) -> Sign {
        let outcome = Sign::of(&(&lhs - &rhs));
        self.steps.push(TraceStep {
            label: label.to_string(),
            lhs,
            rhs,
            outcome,
        });
        outcome
    }

    /// Sign of `p + q√w`.
    fn two_term(&mut self, label: &str, p: &Rational, q: &Rational, w: &Rational) -> Sign {
        let sp = Sign::of(p);
        let sq = if w.is_zero() { Sign::Zero } else { Sign::of(q) };
        if sq == Sign::Zero {
            return sp;
        }
        if sp == Sign::Zero {
            return sq;
        }
        if sp == sq {
            return sp;
        }
        // Opposite signs: compare p² with q²w.
        sp * self.compare(label, p * p, q * q * w)
    }
}

fn run(a: &Rational, b: &Rational, c: &Rational, u: &Rational, v: &Rational) -> (Sign, Vec<TraceStep>) {
    let mut t = Trace { steps: Vec::new() };
    let sb = if u.is_zero() { Sign::Zero } else { Sign::of(b) };
    let sc = if v.is_zero() { Sign::Zero } else { Sign::of(c) };
    // Sign of X = B√u + C√v.
    let sx = match (sb, sc) {
        (Sign::Zero, s) | (s, Sign::Zero) => s,
        (s1, s2) if s1 == s2 => s1,
        (s1, _) => s1 * t.compare("B^2 u vs C^2 v", b * b * u, c * c * v),
    };
    let sa = Sign::of(a);
    let result = if sx == Sign::Zero {
        sa
    } else if sa == Sign::Zero {
        sx
    } else if sa == sx {
        sa
    } else {
        // sign(A + X) = sign(A) · sign(A² - X²), and
        // A² - X² = (A² - B²u - C²v) - 2BC√(uv).
        let dd = a * a - b * b * u - c * c * v;
        let ee = -(b * c) * Rational::from_integer(2.into());
        let w = u * v;
        sa * t.two_term("D^2 vs E^2 uv", &dd, &ee, &w)
    };
    (result, t.steps)
}

/// Exact sign of `a + b√u + c√v` with its squaring trace. Exact zeros are
/// detected as rational identities.
pub fn sqrtsum_sign_at(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    u: &Rational,
    v: &Rational,
) -> Result<(Sign, SignCert), Error> {
    let started = Instant::now();
    if u < &Rational::zero() || v < &Rational::zero() {
        return Err(Error::NegativeRadicand);
    }
    let (sign, steps) = run(a, b, c, u, v);
    let cert = SignCert {
        claim: Claim {
            kind: ClaimKind::Expression,
            statement: format!("sign({a} + ({b})·√({u}) + ({c})·√({v})) = {sign}"),
            expression: Expr::SqrtSum {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                u: u.clone(),
                v: v.clone(),
            },
            sign,
        },
        domain: Domain {
            omega: None,
            k: None,
            pair: None,
            n_range: NRange::point(0),
        },
        method: Method::SquaringTrace,
        witness: Witness::SquaringTrace { steps },
        verified: true,
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    Ok((sign, cert))
}

/// Sign only, without building a certificate.
pub fn sqrtsum_sign(a: &Rational, b: &Rational, c: &Rational, u: &Rational, v: &Rational) -> Sign {
    run(a, b, c, u, v).0
}

/// Replays a squaring trace: the steps must be exactly the ones the
/// procedure takes on this input, each with the recorded outcome.
pub fn replay_sqrtsum(expr: &Expr, steps: &[TraceStep]) -> Result<Sign, Error> {
    let Expr::SqrtSum { a, b, c, u, v } = expr else {
        return Err(Error::Replay("expected a square-root sum".into()));
    };
    if u < &Rational::zero() || v < &Rational::zero() {
        return Err(Error::NegativeRadicand);
    }
    let (sign, expect) = run(a, b, c, u, v);
    if expect.len() != steps.len() {
        return Err(Error::Replay("squaring trace has the wrong number of steps".into()));
    }
    for (want, got) in expect.iter().zip(steps) {
        if want != got {
            return Err(Error::Replay(format!("squaring step '{}' does not check", got.label)));
        }
    }
    Ok(sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn s(a: i64, b: i64, c: i64, u: i64, v: i64) -> Sign {
        sqrtsum_sign_at(&int(a), &int(b), &int(c), &int(u), &int(v)).unwrap().0
    }

    #[test]
    fn examples() {
        assert_eq!(s(0, 1, 0, 4, 7), Sign::Positive);
        assert_eq!(s(3, -1, -1, 2, 3), Sign::Negative);
        assert_eq!(s(0, 0, 0, 2, 3), Sign::Zero);
    }

    #[test]
    fn exact_zeros() {
        // √8 - 2√2 = 0
        assert_eq!(s(0, 1, -2, 8, 2), Sign::Zero);
        assert_eq!(s(2, -1, -1, 1, 1), Sign::Zero);
        assert_eq!(s(-5, 1, 1, 4, 9), Sign::Zero);
        assert_eq!(
            sqrtsum_sign_at(&rat(1, 2), &int(-1), &int(0), &rat(1, 4), &int(0)).unwrap().0,
            Sign::Zero
        );
    }

    #[test]
    fn negative_radicand_is_an_error() {
        assert!(sqrtsum_sign_at(&int(0), &int(1), &int(1), &int(-1), &int(1)).is_err());
    }

    #[test]
    fn replay_rejects_tampering() {
        let (_, cert) = sqrtsum_sign_at(&int(3), &int(-1), &int(-1), &int(2), &int(3)).unwrap();
        let Witness::SquaringTrace { mut steps } = cert.witness.clone() else { panic!() };
        assert_eq!(replay_sqrtsum(&cert.claim.expression, &steps).unwrap(), Sign::Negative);
        steps[0].outcome = Sign::Positive;
        assert!(replay_sqrtsum(&cert.claim.expression, &steps).is_err());
    }
}
