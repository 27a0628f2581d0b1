//! Tanh-sinh quadrature for the radial moments behind the beta integrals.
//!
//! With `t = r/ε` and then `t = tan θ`, `∫ t^b (1+t²)^{-a} dt` becomes
//! `∫ sin^b θ cos^{2a-b-2} θ dθ`, a smooth integrand on a finite interval.

use astro_float::BigFloat;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::eval::eval_pi_scaled;
use super::hp::{HPValue, HpContext};
use crate::beta::{integral_exact, IntegralIndex};
use crate::error::Error;
use crate::exact::{PiScaled, Rational};

const MIN_LEVEL: u32 = 3;
const MAX_LEVEL: u32 = 12;

/// One quadrature run: the estimate at each level, finest last.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub levels: Vec<BigFloat>,
    pub nodes: usize,
}

/// `∫₀^Θ sin^b θ cos^m θ dθ` by tanh-sinh with step halving until two
/// consecutive levels agree to the working precision.
pub(crate) fn sin_cos_moment(ctx: &mut HpContext, theta: &BigFloat, b: u32, m: u32, extra_levels: u32) -> Quadrature {
    let bits = ctx.bits();
    let t_max = ((2.0 * (bits as f64 * std::f64::consts::LN_2 + 20.0)) / std::f64::consts::PI).ln() + 0.5;
    let mut ops = ctx.raw();
    let half_theta = ops.div(theta, &ops.int(2));
    let pi = ops.pi();
    let half_pi = ops.div(&pi, &ops.int(2));
    let node = |ops: &mut super::hp::RawOps<'_>, t: &BigFloat| -> BigFloat {
        let sh = ops.sinh(t);
        let s = ops.mul(&half_pi, &sh);
        let ch = ops.cosh(&s);
        let cht = ops.cosh(t);
        let w = ops.div(&ops.mul(&half_pi, &cht), &ops.mul(&ch, &ch));
        let th = ops.tanh(&s);
        let x = ops.mul(&half_theta, &ops.add(&ops.int(1), &th));
        let (sx, cx) = (ops.sin(&x), ops.cos(&x));
        let f = ops.mul(&ops.powi(&sx, b as usize), &ops.powi(&cx, m as usize));
        ops.mul(&ops.mul(&half_theta, &w), &f)
    };
    let mut levels = Vec::new();
    let mut total = ops.int(0);
    let mut nodes = 0usize;
    let mut level = 0u32;
    let mut stop_at: Option<u32> = None;
    loop {
        let h = ops.pow2(-(level as i64));
        let steps = (t_max * (1u64 << level) as f64).ceil() as i64;
        // Level 0 takes every integer; finer levels add only the odd multiples.
        let stride = if level == 0 { 1 } else { 2 };
        let first = if level == 0 { -steps } else { -steps | 1 };
        let mut i = first;
        while i <= steps {
            let t = ops.mul(&ops.int(i), &h);
            let v = node(&mut ops, &t);
            total = ops.add(&total, &v);
            nodes += 1;
            i += stride;
        }
        let q = ops.mul(&total, &h);
        levels.push(q);
        let converged = level >= MIN_LEVEL && {
            let n = levels.len();
            let diff = ops.sub(&levels[n - 1], &levels[n - 2]).abs();
            let scale = ops.mul(&levels[n - 1].abs(), &ops.pow2(40 - bits as i64));
            diff.cmp(&scale).is_some_and(|c| c <= 0)
        };
        if stop_at.is_none() && (converged || level >= MAX_LEVEL) {
            stop_at = Some(level + extra_levels);
        }
        if stop_at == Some(level) {
            break;
        }
        level += 1;
    }
    Quadrature { levels, nodes }
}

impl Quadrature {
    pub fn value(&self) -> &BigFloat {
        self.levels.last().expect("at least one level")
    }

    /// `|Q_L - Q_{L-1}|` plus a rounding allowance for the summation.
    pub fn error_estimate(&self, ctx: &mut HpContext) -> BigFloat {
        let bits = ctx.bits() as i64;
        let nodes = self.nodes as i64;
        let ops = ctx.raw();
        let n = self.levels.len();
        let diff = if n >= 2 {
            ops.sub(&self.levels[n - 1], &self.levels[n - 2]).abs()
        } else {
            self.levels[0].abs()
        };
        let round = ops.mul(&ops.mul(&self.value().abs(), &ops.int(4 * nodes)), &ops.pow2(-bits));
        ops.add(&diff, &round)
    }

    fn into_ball(self, ctx: &mut HpContext) -> HPValue {
        let err = self.error_estimate(ctx);
        ctx.ball_from_raw(self.value().clone(), err)
    }
}

/// `I_a^b` by quadrature over `θ ∈ [0, π/2]`.
pub fn integral_numeric(idx: IntegralIndex, digits: u32) -> Result<HPValue, Error> {
    if !idx.is_convergent() {
        return Err(Error::DivergentIntegral { a: idx.a, b: idx.b });
    }
    let mut ctx = HpContext::new(digits)?;
    let half_pi = {
        let mut ops = ctx.raw();
        let pi = ops.pi();
        ops.div(&pi, &ops.int(2))
    };
    let q = sin_cos_moment(&mut ctx, &half_pi, idx.b, idx.excess() as u32 - 1, 0);
    Ok(q.into_ball(&mut ctx))
}

/// The radial moment `∫₀^δ r^{α+n-1} (ε/(r²+ε²))^{β(n-2)/2} dr` next to its
/// leading term `ε^{α+n-a} I_a^{α+n-1}`, `a = β(n-2)/2`.
#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub alpha: u32,
    pub beta: u32,
    pub n: u32,
    pub index: IntegralIndex,
    #[serde(serialize_with = "ser_hp")]
    pub value: HPValue,
    #[serde(serialize_with = "ser_hp")]
    pub leading: HPValue,
    /// `leading - value`, the part of the integral beyond `r = δ`.
    #[serde(serialize_with = "ser_hp")]
    pub discrepancy: HPValue,
    /// First-order size of that part: `ε^{α+n-a} (δ/ε)^{-(2a-b-1)} / (2a-b-1)`.
    pub tail_estimate: f64,
    /// Whether `α < (n-2)(β-1) - n`, the range in which the remainder is
    /// `O(ε^{n-2})` relative to the leading power.
    pub remainder_condition: bool,
}

fn ser_hp<S: serde::Serializer>(v: &HPValue, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn quad_moment(
    alpha: u32,
    beta: u32,
    n: u32,
    eps: &Rational,
    delta: &Rational,
    digits: u32,
) -> Result<MomentReport, Error> {
    if n < 3 || beta == 0 {
        return Err(Error::InvalidParams("need n >= 3 and beta >= 1".into()));
    }
    if !eps.is_positive() || delta <= eps {
        return Err(Error::InvalidParams("need 0 < eps < delta".into()));
    }
    let two_a = beta as i64 * (n as i64 - 2);
    if two_a % 2 != 0 {
        return Err(Error::InvalidParams("beta (n - 2) must be even".into()));
    }
    let a = (two_a / 2) as u32;
    let b = alpha + n - 1;
    let idx = IntegralIndex::new(a, b);
    if !idx.is_convergent() {
        return Err(Error::DivergentIntegral { a, b });
    }
    let power = alpha as i64 + n as i64 - a as i64;
    let scale = pow_rational_int(eps, power);
    let mut ctx = HpContext::new(digits)?;
    let theta = {
        let mut ops = ctx.raw();
        let r = ops.rational(&(delta / eps));
        ops.atan(&r)
    };
    let q = sin_cos_moment(&mut ctx, &theta, b, idx.excess() as u32 - 1, 0);
    let raw = q.into_ball(&mut ctx);
    let s = ctx.from_rational(&scale);
    let value = ctx.mul(&raw, &s);
    let lead_exact: PiScaled = integral_exact(idx)?.scale(&scale);
    let leading = eval_pi_scaled(&mut ctx, &lead_exact);
    let discrepancy = ctx.sub(&leading, &value);
    let excess = idx.excess();
    let ratio = pow_rational_int(&(eps / delta), excess);
    let tail_exact = &scale * &ratio / Rational::from_integer(excess.into());
    let tail_estimate = ctx.from_rational(&tail_exact).to_f64();
    let remainder_condition = (alpha as i64) < (n as i64 - 2) * (beta as i64 - 1) - n as i64;
    Ok(MomentReport {
        alpha,
        beta,
        n,
        index: idx,
        value,
        leading,
        discrepancy,
        tail_estimate,
        remainder_condition,
    })
}

fn pow_rational_int(x: &Rational, e: i64) -> Rational {
    let mut out = Rational::one();
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    if out.is_zero() {
        return Rational::zero();
    }
    out
}
