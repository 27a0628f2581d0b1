use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::Rational;
use crate::error::Error;

/// An exact real of the form `q * pi^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiScaled {
    #[serde(with = "super::rational::serde_str")]
    q: Rational,
    e: u32,
}

impl PiScaled {
    pub fn new(q: Rational, e: u32) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        PiScaled { q, e }
    }

    pub fn zero() -> Self {
        PiScaled {
            q: Rational::zero(),
            e: 0,
        }
    }

    pub fn rational(q: Rational) -> Self {
        Self::new(q, 0)
    }

    pub fn pi() -> Self {
        Self::new(Rational::one(), 1)
    }

    pub fn coefficient(&self) -> &Rational {
        &self.q
    }

    pub fn pi_power(&self) -> u32 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    /// Sum of two values with the same power of pi.
    pub fn checked_add(&self, rhs: &PiScaled) -> Result<PiScaled, Error> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.e != rhs.e {
            return Err(Error::MixedPiPowers {
                left: self.e,
                right: rhs.e,
            });
        }
        Ok(Self::new(&self.q + &rhs.q, self.e))
    }

    pub fn checked_sub(&self, rhs: &PiScaled) -> Result<PiScaled, Error> {
        self.checked_add(&rhs.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> PiScaled {
        Self::new(&self.q * c, self.e)
    }

    /// `self / rhs` when both carry the same power of pi.
    pub fn ratio(&self, rhs: &PiScaled) -> Result<Rational, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        if self.e != rhs.e {
            return Err(Error::MixedPiPowers {
                left: self.e,
                right: rhs.e,
            });
        }
        Ok(&self.q / &rhs.q)
    }
}

impl Mul for &PiScaled {
    type Output = PiScaled;
    fn mul(self, rhs: &PiScaled) -> PiScaled {
        PiScaled::new(&self.q * &rhs.q, self.e + rhs.e)
    }
}

impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.e {
            0 => write!(f, "{}", self.q),
            1 => write!(f, "{}·π", self.q),
            e => write!(f, "{}·π^{e}", self.q),
        }
    }
}
