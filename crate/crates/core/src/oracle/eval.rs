use crate::error::Error;
use crate::exact::{PiScaled, RatFunc, Rational};

use super::hp::{HPValue, HpContext};

/// Exact objects that can be enclosed by a high-precision ball, possibly
/// after substituting an integer for `n`.
pub trait HpEval {
    fn eval_in(&self, ctx: &mut HpContext, n: i64) -> Result<HPValue, Error>;
}

impl HpEval for Rational {
    fn eval_in(&self, ctx: &mut HpContext, _n: i64) -> Result<HPValue, Error> {
        Ok(ctx.from_rational(self))
    }
}

impl HpEval for PiScaled {
    fn eval_in(&self, ctx: &mut HpContext, _n: i64) -> Result<HPValue, Error> {
        Ok(eval_pi_scaled(ctx, self))
    }
}

impl HpEval for RatFunc {
    fn eval_in(&self, ctx: &mut HpContext, n: i64) -> Result<HPValue, Error> {
        let v = self.eval_int(n)?;
        Ok(ctx.from_rational(&v))
    }
}

pub fn eval_pi_scaled(ctx: &mut HpContext, x: &PiScaled) -> HPValue {
    let q = ctx.from_rational(x.coefficient());
    if x.pi_power() == 0 {
        return q;
    }
    let pi = ctx.pi();
    let pe = ctx.powi(&pi, x.pi_power());
    ctx.mul(&q, &pe)
}

/// Encloses `expr` at `n` with `digits` significant decimal digits.
pub fn eval_hp<E: HpEval + ?Sized>(expr: &E, n: i64, digits: u32) -> Result<HPValue, Error> {
    let mut ctx = HpContext::new(digits)?;
    expr.eval_in(&mut ctx, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn rational_and_pi_values() {
        let v = eval_hp(&rat(17548, 91), 0, 60).unwrap();
        assert!((v.to_f64() - 192.835_164_835).abs() < 1e-9);
        assert!(v.error_bound_f64() < 1e-25);
        let p = eval_hp(&PiScaled::new(rat(1, 32), 1), 0, 60).unwrap();
        assert!((p.to_f64() - 0.098_174_770_424_681).abs() < 1e-14);
        assert!(p.error_bound_f64() < 1e-25);
    }
}
